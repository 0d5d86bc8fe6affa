"""Analytic signed distance fields.

Exact distance primitives (sphere, box, torus, capsule, thin rod), rigid
transforms and union / intersection / smooth-union composition, all
vectorized over point arrays of shape ``(..., 3)`` in double precision.
These fields serve as ground truth for dataset generation and as oracles
for the trainable field: ``value`` returns the exact signed distance for
primitives, ``gradient`` the closed-form spatial gradient (selected by
branch at composition kinks), and ``value_and_albedo`` additionally tracks
the per-primitive Lambertian albedo for shading.

Scenes are built either programmatically or from a plain-dict description
(see :func:`scene_from_dict`); a small registry of named desk-scale scenes
is provided via :func:`named_scene`.
"""

from __future__ import annotations

import numpy as np

from .errors import UnknownSceneError

__all__ = [
    "AnalyticSdf",
    "Sphere",
    "Box",
    "Torus",
    "Capsule",
    "Rod",
    "Transformed",
    "Union",
    "Intersection",
    "SmoothUnion",
    "scene_from_dict",
    "scene_to_dict",
    "named_scene",
    "NAMED_SCENES",
]

_DEFAULT_ALBEDO = (0.75, 0.75, 0.75)


def _norm(v, axis=-1, keepdims=False):
    return np.sqrt(np.sum(v * v, axis=axis, keepdims=keepdims))


class AnalyticSdf:
    """Base class: an exact signed distance field with closed-form gradient."""

    #: SDF level of the surface (always 0 for analytic fields).
    level = 0.0

    def value(self, p):
        """Signed distance at points ``p`` of shape (..., 3)."""
        raise NotImplementedError

    def gradient(self, p):
        """Spatial gradient at ``p``; unit length a.e. away from the medial axis."""
        raise NotImplementedError

    def value_and_albedo(self, p):
        """Distance plus the albedo of the closest primitive, shape (..., 3)."""
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    # Convenience aliases used by code that treats analytic and neural
    # fields uniformly.
    def __call__(self, p):
        return self.value(p)


class Sphere(AnalyticSdf):
    """Sphere of radius ``r`` centred at the origin."""

    def __init__(self, r=1.0, albedo=_DEFAULT_ALBEDO):
        self.r = float(r)
        self.albedo = np.asarray(albedo, dtype=np.float64)

    def value(self, p):
        return _norm(p) - self.r

    def gradient(self, p):
        n = _norm(p, keepdims=True)
        return p / np.maximum(n, 1e-300)

    def value_and_albedo(self, p):
        d = self.value(p)
        return d, np.broadcast_to(self.albedo, d.shape + (3,))

    def to_dict(self):
        return {"kind": "sphere", "r": self.r, "albedo": self.albedo.tolist()}


class Box(AnalyticSdf):
    """Axis-aligned box with half-extents ``b = (bx, by, bz)``."""

    def __init__(self, b=(0.5, 0.5, 0.5), albedo=_DEFAULT_ALBEDO):
        self.b = np.asarray(b, dtype=np.float64)
        self.albedo = np.asarray(albedo, dtype=np.float64)

    def value(self, p):
        q = np.abs(p) - self.b
        outside = _norm(np.maximum(q, 0.0))
        inside = np.minimum(np.max(q, axis=-1), 0.0)
        return outside + inside

    def gradient(self, p):
        q = np.abs(p) - self.b
        qpos = np.maximum(q, 0.0)
        out_len = _norm(qpos, keepdims=True)
        outside = out_len[..., 0] > 0.0
        g_out = np.sign(p) * qpos / np.maximum(out_len, 1e-300)
        # Inside: the face of the largest (least negative) coordinate wins.
        amax = np.argmax(q, axis=-1)
        g_in = np.zeros_like(p)
        np.put_along_axis(g_in, amax[..., None], 1.0, axis=-1)
        g_in = g_in * np.sign(p)
        return np.where(outside[..., None], g_out, g_in)

    def value_and_albedo(self, p):
        d = self.value(p)
        return d, np.broadcast_to(self.albedo, d.shape + (3,))

    def to_dict(self):
        return {"kind": "box", "b": self.b.tolist(), "albedo": self.albedo.tolist()}


class Torus(AnalyticSdf):
    """Torus around the z axis; ``R`` is the major and ``r`` the minor radius."""

    def __init__(self, R=0.5, r=0.2, albedo=_DEFAULT_ALBEDO):
        self.R = float(R)
        self.r = float(r)
        self.albedo = np.asarray(albedo, dtype=np.float64)

    def value(self, p):
        rho = _norm(p[..., :2])
        return np.sqrt((rho - self.R) ** 2 + p[..., 2] ** 2) - self.r

    def gradient(self, p):
        rho = np.maximum(_norm(p[..., :2]), 1e-300)
        a = rho - self.R
        L = np.maximum(np.sqrt(a * a + p[..., 2] ** 2), 1e-300)
        g = np.empty_like(p)
        g[..., 0] = (a / L) * (p[..., 0] / rho)
        g[..., 1] = (a / L) * (p[..., 1] / rho)
        g[..., 2] = p[..., 2] / L
        return g

    def value_and_albedo(self, p):
        d = self.value(p)
        return d, np.broadcast_to(self.albedo, d.shape + (3,))

    def to_dict(self):
        return {
            "kind": "torus",
            "R": self.R,
            "r": self.r,
            "albedo": self.albedo.tolist(),
        }


class Capsule(AnalyticSdf):
    """Capsule (line-swept sphere) from ``a`` to ``b`` with radius ``r``."""

    def __init__(self, a, b, r, albedo=_DEFAULT_ALBEDO):
        self.a = np.asarray(a, dtype=np.float64)
        self.b = np.asarray(b, dtype=np.float64)
        self.r = float(r)
        self.albedo = np.asarray(albedo, dtype=np.float64)

    def _closest_offset(self, p):
        pa = p - self.a
        ba = self.b - self.a
        h = np.clip(np.sum(pa * ba, axis=-1) / np.dot(ba, ba), 0.0, 1.0)
        return pa - ba * h[..., None]

    def value(self, p):
        return _norm(self._closest_offset(p)) - self.r

    def gradient(self, p):
        w = self._closest_offset(p)
        return w / np.maximum(_norm(w, keepdims=True), 1e-300)

    def value_and_albedo(self, p):
        d = self.value(p)
        return d, np.broadcast_to(self.albedo, d.shape + (3,))

    def to_dict(self):
        return {
            "kind": "capsule",
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "r": self.r,
            "albedo": self.albedo.tolist(),
        }


class Rod(Capsule):
    """Thin vertical capsule through the origin; the thin-detail stressor."""

    def __init__(self, half_length=0.65, r=0.03, albedo=_DEFAULT_ALBEDO):
        super().__init__(
            (0.0, 0.0, -half_length), (0.0, 0.0, half_length), r, albedo
        )
        self.half_length = float(half_length)

    def to_dict(self):
        return {
            "kind": "rod",
            "half_length": self.half_length,
            "r": self.r,
            "albedo": self.albedo.tolist(),
        }


class Transformed(AnalyticSdf):
    """Rigidly transformed child field: ``f(x) = child(R^T (x - t))``."""

    def __init__(self, child, rotation=None, translation=(0.0, 0.0, 0.0)):
        self.child = child
        self.rotation = (
            np.eye(3) if rotation is None else np.asarray(rotation, dtype=np.float64)
        )
        self.translation = np.asarray(translation, dtype=np.float64)

    def _local(self, p):
        return (p - self.translation) @ self.rotation

    def value(self, p):
        return self.child.value(self._local(p))

    def gradient(self, p):
        return self.child.gradient(self._local(p)) @ self.rotation.T

    def value_and_albedo(self, p):
        return self.child.value_and_albedo(self._local(p))

    def to_dict(self):
        return {
            "kind": "transformed",
            "child": self.child.to_dict(),
            "rotation": self.rotation.tolist(),
            "translation": self.translation.tolist(),
        }


class Union(AnalyticSdf):
    """Hard union: min over children; gradient follows the winning branch."""

    def __init__(self, children):
        self.children = list(children)

    def _stack(self, p):
        return np.stack([c.value(p) for c in self.children], axis=0)

    def value(self, p):
        return np.min(self._stack(p), axis=0)

    def gradient(self, p):
        vals = self._stack(p)
        winner = np.argmin(vals, axis=0)
        grads = np.stack([c.gradient(p) for c in self.children], axis=0)
        return np.take_along_axis(grads, winner[None, ..., None], axis=0)[0]

    def value_and_albedo(self, p):
        pairs = [c.value_and_albedo(p) for c in self.children]
        vals = np.stack([v for v, _ in pairs], axis=0)
        albs = np.stack([a for _, a in pairs], axis=0)
        winner = np.argmin(vals, axis=0)
        d = np.take_along_axis(vals, winner[None], axis=0)[0]
        alb = np.take_along_axis(albs, winner[None, ..., None], axis=0)[0]
        return d, alb

    def to_dict(self):
        return {"kind": "union", "children": [c.to_dict() for c in self.children]}


class Intersection(AnalyticSdf):
    """Hard intersection: max over children (a bound, not an exact distance)."""

    def __init__(self, children):
        self.children = list(children)

    def value(self, p):
        return np.max(np.stack([c.value(p) for c in self.children], axis=0), axis=0)

    def gradient(self, p):
        vals = np.stack([c.value(p) for c in self.children], axis=0)
        winner = np.argmax(vals, axis=0)
        grads = np.stack([c.gradient(p) for c in self.children], axis=0)
        return np.take_along_axis(grads, winner[None, ..., None], axis=0)[0]

    def value_and_albedo(self, p):
        pairs = [c.value_and_albedo(p) for c in self.children]
        vals = np.stack([v for v, _ in pairs], axis=0)
        albs = np.stack([a for _, a in pairs], axis=0)
        winner = np.argmax(vals, axis=0)
        d = np.take_along_axis(vals, winner[None], axis=0)[0]
        alb = np.take_along_axis(albs, winner[None, ..., None], axis=0)[0]
        return d, alb

    def to_dict(self):
        return {
            "kind": "intersection",
            "children": [c.to_dict() for c in self.children],
        }


class SmoothUnion(AnalyticSdf):
    """Polynomial smooth union of two fields with blend width ``k``.

    Inside the blend band the mix weight ``h`` satisfies d(smin)/d(d1) = h
    and d(smin)/d(d2) = 1 - h exactly, so the gradient is the h-blend of
    the child gradients.
    """

    def __init__(self, left, right, k=0.05):
        self.left = left
        self.right = right
        self.k = float(k)

    def _h(self, d1, d2):
        return np.clip(0.5 + 0.5 * (d2 - d1) / self.k, 0.0, 1.0)

    def _blend(self, d1, d2):
        h = self._h(d1, d2)
        return d2 + (d1 - d2) * h - self.k * h * (1.0 - h), h

    def value(self, p):
        return self._blend(self.left.value(p), self.right.value(p))[0]

    def gradient(self, p):
        h = self._h(self.left.value(p), self.right.value(p))[..., None]
        return h * self.left.gradient(p) + (1.0 - h) * self.right.gradient(p)

    def value_and_albedo(self, p):
        d1, a1 = self.left.value_and_albedo(p)
        d2, a2 = self.right.value_and_albedo(p)
        d, h = self._blend(d1, d2)
        return d, h[..., None] * a1 + (1.0 - h[..., None]) * a2

    def to_dict(self):
        return {
            "kind": "smooth_union",
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "k": self.k,
        }


_KINDS = {
    "sphere": lambda d: Sphere(d.get("r", 1.0), d.get("albedo", _DEFAULT_ALBEDO)),
    "box": lambda d: Box(d.get("b", (0.5, 0.5, 0.5)), d.get("albedo", _DEFAULT_ALBEDO)),
    "torus": lambda d: Torus(
        d.get("R", 0.5), d.get("r", 0.2), d.get("albedo", _DEFAULT_ALBEDO)
    ),
    "capsule": lambda d: Capsule(
        d["a"], d["b"], d["r"], d.get("albedo", _DEFAULT_ALBEDO)
    ),
    "rod": lambda d: Rod(
        d.get("half_length", 0.65), d.get("r", 0.03), d.get("albedo", _DEFAULT_ALBEDO)
    ),
    "transformed": lambda d: Transformed(
        scene_from_dict(d["child"]), d.get("rotation"), d.get("translation", (0, 0, 0))
    ),
    "union": lambda d: Union([scene_from_dict(c) for c in d["children"]]),
    "intersection": lambda d: Intersection(
        [scene_from_dict(c) for c in d["children"]]
    ),
    "smooth_union": lambda d: SmoothUnion(
        scene_from_dict(d["left"]), scene_from_dict(d["right"]), d.get("k", 0.05)
    ),
}


def scene_from_dict(desc: dict) -> AnalyticSdf:
    """Build a composition tree from its plain-dict description."""
    kind = desc.get("kind")
    if kind not in _KINDS:
        raise UnknownSceneError(f"unknown analytic field kind {kind!r}")
    return _KINDS[kind](desc)


def scene_to_dict(scene: AnalyticSdf) -> dict:
    return scene.to_dict()


def _torus_rod() -> AnalyticSdf:
    torus = Torus(R=0.5, r=0.18, albedo=(0.80, 0.30, 0.22))
    rod = Rod(half_length=0.62, r=0.05, albedo=(0.22, 0.38, 0.80))
    return SmoothUnion(torus, rod, k=0.05)


def _two_spheres() -> AnalyticSdf:
    left = Transformed(Sphere(0.45, albedo=(0.8, 0.7, 0.2)), translation=(-0.4, 0, 0))
    right = Transformed(Sphere(0.35, albedo=(0.2, 0.6, 0.8)), translation=(0.45, 0, 0))
    return Union([left, right])


def _blobby() -> AnalyticSdf:
    base = SmoothUnion(
        Transformed(Sphere(0.4, albedo=(0.7, 0.5, 0.3)), translation=(0.25, 0, -0.1)),
        Transformed(
            Box((0.3, 0.25, 0.2), albedo=(0.3, 0.6, 0.5)), translation=(-0.3, 0, 0.1)
        ),
        k=0.05,
    )
    return SmoothUnion(base, Torus(0.55, 0.1, albedo=(0.5, 0.4, 0.8)), k=0.05)


NAMED_SCENES = {
    "sphere": lambda: Sphere(0.7, albedo=(0.75, 0.45, 0.3)),
    "torus": lambda: Torus(R=0.5, r=0.2, albedo=(0.8, 0.3, 0.25)),
    "torus-rod": _torus_rod,
    "two-spheres": _two_spheres,
    "blobby": _blobby,
}


def named_scene(name: str) -> AnalyticSdf:
    """Look up a registered desk-scale scene by name."""
    try:
        factory = NAMED_SCENES[name]
    except KeyError:
        raise UnknownSceneError(
            f"unknown scene {name!r}; available: {sorted(NAMED_SCENES)}"
        ) from None
    return factory()
