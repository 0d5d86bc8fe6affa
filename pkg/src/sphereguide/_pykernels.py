"""Pure-numpy fallback for the compiled geometry kernels.

Mirrors the API of ``sphereguide._kernels`` exactly; selected at import
time by :mod:`sphereguide.backend` when the extension is unavailable or
``SPHEREGUIDE_FORCE_PYTHON`` is set. Hit intervals are computed with the
same floating-point expressions and merged in the same (s, t) order as
the compiled path, so both backends produce bit-identical output.

A grid is the 5-tuple (cell_size, origin, dims, cell_start, entries):
a dense voxel CSR table over the cloud's bounding box where sphere i is
registered in every cell its bounding box overlaps.
"""

import numpy as np

IS_COMPILED = False


def sphere_hit_intervals(ox, oy, oz, vx, vy, vz, cx, cy, cz, radius, t0, t1):
    """Open hit interval of each ray/center pair, clipped to [t0, t1].

    All inputs broadcast; returns (s, t, hit) where hit is False for
    misses, tangencies and empty clipped intervals.
    """
    ocx = ox - cx
    ocy = oy - cy
    ocz = oz - cz
    b = ocx * vx + ocy * vy + ocz * vz
    cc = ocx * ocx + ocy * ocy + ocz * ocz - radius * radius
    disc = b * b - cc
    sq = np.sqrt(np.maximum(disc, 0.0))
    s = np.maximum(-b - sq, t0)
    t = np.minimum(-b + sq, t1)
    hit = (disc > 0.0) & (s < t)
    return s, t, hit


def _merge_sorted(seg_s, seg_t, merge_eps):
    """Sweep-merge intervals already sorted by (s, t)."""
    out_s = []
    out_t = []
    cur_s = seg_s[0]
    cur_t = seg_t[0]
    for k in range(1, len(seg_s)):
        if seg_s[k] <= cur_t + merge_eps:
            if seg_t[k] > cur_t:
                cur_t = seg_t[k]
        else:
            out_s.append(cur_s)
            out_t.append(cur_t)
            cur_s = seg_s[k]
            cur_t = seg_t[k]
    out_s.append(cur_s)
    out_t.append(cur_t)
    return out_s, out_t


def ray_cloud_intervals(origins, dirs, t0, t1, centers, radius, merge_eps, grid=None):
    """Minimal disjoint interval cover of every ray's cloud intersection.

    Returns CSR arrays (seg_s, seg_t, ray_ptr): ray i owns segments
    ``seg_s[ray_ptr[i]:ray_ptr[i+1]]``. The fallback tests every sphere;
    ``grid`` is accepted for API parity and ignored.
    """
    origins = np.asarray(origins, dtype=np.float64)
    dirs = np.asarray(dirs, dtype=np.float64)
    B = origins.shape[0]
    s, t, hit = sphere_hit_intervals(
        origins[:, 0:1], origins[:, 1:2], origins[:, 2:3],
        dirs[:, 0:1], dirs[:, 1:2], dirs[:, 2:3],
        centers[None, :, 0], centers[None, :, 1], centers[None, :, 2],
        radius, np.asarray(t0, dtype=np.float64)[:, None],
        np.asarray(t1, dtype=np.float64)[:, None],
    )
    out_s = []
    out_t = []
    ray_ptr = np.zeros(B + 1, dtype=np.int64)
    for i in range(B):
        m = hit[i]
        if not m.any():
            ray_ptr[i + 1] = ray_ptr[i]
            continue
        si = s[i, m]
        ti = t[i, m]
        order = np.lexsort((ti, si))
        ms, mt = _merge_sorted(si[order], ti[order], merge_eps)
        out_s.extend(ms)
        out_t.extend(mt)
        ray_ptr[i + 1] = ray_ptr[i] + len(ms)
    return (
        np.asarray(out_s, dtype=np.float64),
        np.asarray(out_t, dtype=np.float64),
        ray_ptr,
    )


def build_grid(centers, radius, cell_size):
    """Dense CSR voxel grid over the cloud's bounding box."""
    centers = np.asarray(centers, dtype=np.float64)
    cell_size = float(cell_size)
    origin = centers.min(axis=0) - radius
    hi = centers.max(axis=0) + radius
    dims = np.maximum(np.ceil((hi - origin) / cell_size).astype(np.int64), 1)
    lo_cell = np.clip(
        np.floor((centers - radius - origin) / cell_size).astype(np.int64), 0, dims - 1
    )
    hi_cell = np.clip(
        np.floor((centers + radius - origin) / cell_size).astype(np.int64), 0, dims - 1
    )
    spans = hi_cell - lo_cell + 1
    # Spheres span at most a few cells per axis (cell_size ~ radius);
    # enumerate offsets vectorized over spheres instead of per sphere.
    key_chunks = []
    id_chunks = []
    ids = np.arange(len(centers), dtype=np.int64)
    for dx in range(int(spans[:, 0].max())):
        for dy in range(int(spans[:, 1].max())):
            for dz in range(int(spans[:, 2].max())):
                m = (dx < spans[:, 0]) & (dy < spans[:, 1]) & (dz < spans[:, 2])
                if not m.any():
                    continue
                cx = lo_cell[m, 0] + dx
                cy = lo_cell[m, 1] + dy
                cz = lo_cell[m, 2] + dz
                key_chunks.append((cx * dims[1] + cy) * dims[2] + cz)
                id_chunks.append(ids[m])
    keys = np.concatenate(key_chunks)
    sphere_ids = np.concatenate(id_chunks)
    order = np.argsort(keys, kind="stable")
    entries = sphere_ids[order]
    ncells = int(dims.prod())
    cell_start = np.zeros(ncells + 1, dtype=np.int64)
    np.add.at(cell_start, keys + 1, 1)
    np.cumsum(cell_start, out=cell_start)
    return cell_size, origin, dims, cell_start, entries


def grid_query_cells(points, grid):
    """Candidate sphere ids per point as CSR (rows, candidates).

    ``rows`` maps each candidate back to its query point index.
    """
    cell_size, origin, dims, cell_start, entries = grid
    points = np.asarray(points, dtype=np.float64)
    cell = np.floor((points - origin) / cell_size).astype(np.int64)
    inside = ((cell >= 0) & (cell < dims)).all(axis=1)
    idx = np.nonzero(inside)[0]
    if idx.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    key = (cell[idx, 0] * dims[1] + cell[idx, 1]) * dims[2] + cell[idx, 2]
    starts = cell_start[key]
    counts = cell_start[key + 1] - starts
    has = counts > 0
    idx, starts, counts = idx[has], starts[has], counts[has]
    if idx.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    rows = np.repeat(idx, counts)
    offs = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    return rows, entries[np.repeat(starts, counts) + offs]


def point_in_cloud(points, centers, radius, grid=None):
    """True where a point lies strictly inside at least one sphere."""
    points = np.asarray(points, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    n = points.shape[0]
    out = np.zeros(n, dtype=bool)
    if n == 0 or len(centers) == 0:
        return out
    r2 = radius * radius
    if grid is None:
        chunk = max(1, int(4e6) // len(centers))
        for lo in range(0, n, chunk):
            d = points[lo : lo + chunk, None, :] - centers[None, :, :]
            out[lo : lo + chunk] = ((d * d).sum(axis=2) < r2).any(axis=1)
        return out
    rows, cand = grid_query_cells(points, grid)
    if rows.size:
        d = points[rows] - centers[cand]
        np.logical_or.at(out, rows, (d * d).sum(axis=1) < r2)
    return out
