"""Ray / sphere / interval primitives and the sphere-cloud spatial index.

Single-object types (:class:`Ray`, :class:`Interval`, :class:`IntervalSet`)
form the reference API; batched entry points (:func:`cloud_intervals_batch`,
:func:`points_in_cloud`) run on the active kernel backend (compiled or
numpy) and are what the renderer uses. All geometry is double precision
and pure: given an immutable cloud snapshot and index, every function here
is safe for concurrent read-only use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backend import kernels
from .errors import StaleIndexError

#: Intervals closer than this (scene units) are merged into one segment.
MERGE_EPS = 1e-6


@dataclass(frozen=True)
class Ray:
    """Parametric ray ``origin + t * direction`` for t in [t_near, t_far]."""

    origin: np.ndarray
    direction: np.ndarray
    t_near: float = 0.0
    t_far: float = np.inf

    def __post_init__(self):
        object.__setattr__(
            self, "origin", np.asarray(self.origin, dtype=np.float64)
        )
        object.__setattr__(
            self, "direction", np.asarray(self.direction, dtype=np.float64)
        )
        norm = float(np.linalg.norm(self.direction))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"ray direction must be unit length, |v| = {norm}")
        if not 0.0 <= self.t_near < self.t_far:
            raise ValueError(
                f"require 0 <= t_near < t_far, got [{self.t_near}, {self.t_far}]"
            )

    def at(self, t):
        """Point(s) on the ray at parameter(s) ``t``."""
        t = np.asarray(t, dtype=np.float64)
        return self.origin + t[..., None] * self.direction


@dataclass(frozen=True)
class Interval:
    """Half-open ray-parameter segment with s < t."""

    s: float
    t: float

    def __post_init__(self):
        if not self.s < self.t:
            raise ValueError(f"interval requires s < t, got [{self.s}, {self.t}]")

    @property
    def length(self) -> float:
        return self.t - self.s


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, strictly disjoint intervals (gap > 0 between neighbours)."""

    segments: tuple = ()

    def __post_init__(self):
        segs = tuple(self.segments)
        for a, b in zip(segs, segs[1:]):
            if b.s <= a.t:
                raise ValueError("IntervalSet segments must be disjoint and sorted")
        object.__setattr__(self, "segments", segs)

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @property
    def total_length(self) -> float:
        return sum(seg.length for seg in self.segments)

    def contains(self, t, tol: float = 0.0):
        """Membership of parameter(s) ``t``, widened by ``tol`` at borders."""
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros(t.shape, dtype=bool)
        for seg in self.segments:
            out |= (t >= seg.s - tol) & (t <= seg.t + tol)
        return out

    def as_arrays(self):
        s = np.array([seg.s for seg in self.segments], dtype=np.float64)
        t = np.array([seg.t for seg in self.segments], dtype=np.float64)
        return s, t

    @staticmethod
    def from_arrays(s, t) -> "IntervalSet":
        return IntervalSet(tuple(Interval(float(a), float(b)) for a, b in zip(s, t)))


def ray_sphere_intersect(ray: Ray, center, radius: float) -> Interval | None:
    """Parameter interval where ``|p(t) - center| < radius``.

    Clipped to the ray's [t_near, t_far]; ``None`` on a miss, a tangency
    or an empty clipped interval.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    center = np.asarray(center, dtype=np.float64)
    # Same expression as the kernels, kept inline so this reference path
    # has no backend dependency.
    oc = ray.origin - center
    b = oc[0] * ray.direction[0] + oc[1] * ray.direction[1] + oc[2] * ray.direction[2]
    cc = oc[0] * oc[0] + oc[1] * oc[1] + oc[2] * oc[2] - radius * radius
    disc = b * b - cc
    if disc <= 0.0:
        return None
    sq = np.sqrt(disc)
    lo = max(-b - sq, ray.t_near)
    hi = min(-b + sq, ray.t_far)
    if lo >= hi:
        return None
    return Interval(float(lo), float(hi))


def interval_union(raw, merge_eps: float = MERGE_EPS) -> IntervalSet:
    """Minimal disjoint cover of a list of intervals.

    Overlapping or touching intervals (gap <= merge_eps) are merged.
    """
    items = [(iv.s, iv.t) for iv in raw]
    if not items:
        return IntervalSet()
    items.sort()
    out = []
    cur_s, cur_t = items[0]
    for s, t in items[1:]:
        if s <= cur_t + merge_eps:
            cur_t = max(cur_t, t)
        else:
            out.append(Interval(cur_s, cur_t))
            cur_s, cur_t = s, t
    out.append(Interval(cur_s, cur_t))
    return IntervalSet(tuple(out))


@dataclass
class SphereIndex:
    """Uniform-grid acceleration index over a sphere cloud snapshot.

    Cell size equals the cloud's current radius; rebuild whenever the
    radius changes or centers move (the trainer rebuilds after every
    cloud update). Queries return a superset of the true candidates.
    """

    radius: float
    cloud_version: int
    grid: tuple = field(repr=False, default=None)
    n_spheres: int = 0

    @staticmethod
    def build(cloud) -> "SphereIndex":
        grid = kernels.build_grid(cloud.centers, cloud.radius, cloud.radius)
        return SphereIndex(
            radius=cloud.radius,
            cloud_version=cloud.version,
            grid=grid,
            n_spheres=len(cloud.centers),
        )

    def check(self, cloud):
        if self.radius != cloud.radius or self.cloud_version != cloud.version:
            raise StaleIndexError(
                f"index built for radius={self.radius}, version="
                f"{self.cloud_version}; cloud has radius={cloud.radius}, "
                f"version={cloud.version}"
            )


def cloud_intervals(ray: Ray, cloud, index: SphereIndex | None = None) -> IntervalSet:
    """Interval cover of one ray against the whole cloud.

    Equals :func:`interval_union` over every sphere's intersection; the
    index only accelerates the candidate search.
    """
    if index is not None:
        index.check(cloud)
    seg_s, seg_t, _ = kernels.ray_cloud_intervals(
        ray.origin[None, :],
        ray.direction[None, :],
        np.array([ray.t_near]),
        np.array([min(ray.t_far, 1e300)]),
        cloud.centers,
        cloud.radius,
        MERGE_EPS,
        index.grid if index is not None else None,
    )
    return IntervalSet.from_arrays(seg_s, seg_t)


def cloud_intervals_batch(origins, dirs, t_near, t_far, cloud, index=None):
    """CSR interval cover (seg_s, seg_t, ray_ptr) for a ray batch."""
    if index is not None:
        index.check(cloud)
    return kernels.ray_cloud_intervals(
        origins,
        dirs,
        t_near,
        t_far,
        cloud.centers,
        cloud.radius,
        MERGE_EPS,
        index.grid if index is not None else None,
    )


def point_in_cloud(x, cloud, index: SphereIndex | None = None) -> bool:
    """True iff ``x`` lies strictly inside at least one sphere."""
    if index is not None:
        index.check(cloud)
    res = kernels.point_in_cloud(
        np.asarray(x, dtype=np.float64)[None, :],
        cloud.centers,
        cloud.radius,
        index.grid if index is not None else None,
    )
    return bool(res[0])


def points_in_cloud(points, cloud, index: SphereIndex | None = None):
    """Vectorized :func:`point_in_cloud` over an (N, 3) array."""
    if index is not None:
        index.check(cloud)
    return kernels.point_in_cloud(
        np.asarray(points, dtype=np.float64),
        cloud.centers,
        cloud.radius,
        index.grid if index is not None else None,
    )
