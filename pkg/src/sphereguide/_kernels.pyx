# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels: voxel-grid construction, grid-accelerated
ray/sphere-cloud interval covers (3D-DDA traversal) and point-in-cloud
queries. API and floating-point behaviour match
:mod:`sphereguide._pykernels` bit for bit.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor, sqrt

cnp.import_array()

IS_COMPILED = True

DEF GROW = 2


def build_grid(centers_in, double radius, double cell_size):
    """Dense CSR voxel grid; sphere i registered in all bbox-overlap cells."""
    cdef double[:, ::1] centers = np.ascontiguousarray(centers_in, dtype=np.float64)
    cdef Py_ssize_t M = centers.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] origin_arr = np.empty(3)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dims_arr = np.empty(3, dtype=np.int64)
    cdef double[::1] origin = origin_arr
    cdef long long[::1] dims = dims_arr
    cdef double lo, hi, v
    cdef Py_ssize_t ax, i
    for ax in range(3):
        lo = centers[0, ax]
        hi = centers[0, ax]
        for i in range(1, M):
            v = centers[i, ax]
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        origin[ax] = lo - radius
        dims[ax] = <long long> (((hi + radius) - origin[ax]) / cell_size) + 1
        if dims[ax] < 1:
            dims[ax] = 1

    cdef cnp.ndarray[cnp.int64_t, ndim=2] lo_cell = np.empty((M, 3), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] hi_cell = np.empty((M, 3), dtype=np.int64)
    cdef long long[:, ::1] loc = lo_cell
    cdef long long[:, ::1] hic = hi_cell
    cdef long long c0, c1, total = 0
    for i in range(M):
        for ax in range(3):
            c0 = <long long> floor((centers[i, ax] - radius - origin[ax]) / cell_size)
            c1 = <long long> floor((centers[i, ax] + radius - origin[ax]) / cell_size)
            if c0 < 0:
                c0 = 0
            if c0 > dims[ax] - 1:
                c0 = dims[ax] - 1
            if c1 < 0:
                c1 = 0
            if c1 > dims[ax] - 1:
                c1 = dims[ax] - 1
            loc[i, ax] = c0
            hic[i, ax] = c1
        total += (hic[i, 0] - loc[i, 0] + 1) * (hic[i, 1] - loc[i, 1] + 1) \
            * (hic[i, 2] - loc[i, 2] + 1)

    cdef long long ncells = dims[0] * dims[1] * dims[2]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cell_start_arr = np.zeros(
        ncells + 1, dtype=np.int64)
    cdef long long[::1] cell_start = cell_start_arr
    cdef long long x, y, z, key
    for i in range(M):
        for x in range(loc[i, 0], hic[i, 0] + 1):
            for y in range(loc[i, 1], hic[i, 1] + 1):
                for z in range(loc[i, 2], hic[i, 2] + 1):
                    key = (x * dims[1] + y) * dims[2] + z
                    cell_start[key + 1] += 1
    for key in range(ncells):
        cell_start[key + 1] += cell_start[key]

    cdef cnp.ndarray[cnp.int64_t, ndim=1] entries_arr = np.empty(
        total, dtype=np.int64)
    cdef long long[::1] entries = entries_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fill_arr = np.zeros(
        ncells, dtype=np.int64)
    cdef long long[::1] fill = fill_arr
    for i in range(M):
        for x in range(loc[i, 0], hic[i, 0] + 1):
            for y in range(loc[i, 1], hic[i, 1] + 1):
                for z in range(loc[i, 2], hic[i, 2] + 1):
                    key = (x * dims[1] + y) * dims[2] + z
                    entries[cell_start[key] + fill[key]] = i
                    fill[key] += 1
    return cell_size, origin_arr, dims_arr, cell_start_arr, entries_arr


cdef inline bint _hit_interval(double ox, double oy, double oz,
                               double vx, double vy, double vz,
                               double cx, double cy, double cz,
                               double radius, double t0, double t1,
                               double* s_out, double* t_out) nogil:
    cdef double ocx = ox - cx
    cdef double ocy = oy - cy
    cdef double ocz = oz - cz
    cdef double b = ocx * vx + ocy * vy + ocz * vz
    cdef double cc = ocx * ocx + ocy * ocy + ocz * ocz - radius * radius
    cdef double disc = b * b - cc
    if disc <= 0.0:
        return False
    cdef double sq = sqrt(disc)
    cdef double s = -b - sq
    cdef double t = -b + sq
    if s < t0:
        s = t0
    if t > t1:
        t = t1
    if s >= t:
        return False
    s_out[0] = s
    t_out[0] = t
    return True


def ray_cloud_intervals(origins_in, dirs_in, t0_in, t1_in, centers_in,
                        double radius, double merge_eps, grid=None):
    """Minimal disjoint interval cover per ray; CSR (seg_s, seg_t, ray_ptr).

    With a grid, candidates come from a 3D-DDA walk of the ray's cells
    (deduplicated with a per-ray stamp); without one, every sphere is
    tested. Hits are sorted by (s, t) and sweep-merged with merge_eps.
    """
    cdef double[:, ::1] origins = np.ascontiguousarray(origins_in, dtype=np.float64)
    cdef double[:, ::1] dirs = np.ascontiguousarray(dirs_in, dtype=np.float64)
    cdef double[::1] t0 = np.ascontiguousarray(t0_in, dtype=np.float64)
    cdef double[::1] t1 = np.ascontiguousarray(t1_in, dtype=np.float64)
    cdef double[:, ::1] centers = np.ascontiguousarray(centers_in, dtype=np.float64)
    cdef Py_ssize_t B = origins.shape[0]
    cdef Py_ssize_t M = centers.shape[0]

    cdef bint use_grid = grid is not None
    cdef double cell_size = 0.0
    cdef double[::1] gorigin = None
    cdef long long[::1] gdims = None
    cdef long long[::1] cell_start = None
    cdef long long[::1] entries = None
    if use_grid:
        cell_size = grid[0]
        gorigin = np.ascontiguousarray(grid[1], dtype=np.float64)
        gdims = np.ascontiguousarray(grid[2], dtype=np.int64)
        cell_start = np.ascontiguousarray(grid[3], dtype=np.int64)
        entries = np.ascontiguousarray(grid[4], dtype=np.int64)

    cdef cnp.ndarray[cnp.int64_t, ndim=1] stamp_arr = np.full(
        M, -1, dtype=np.int64)
    cdef long long[::1] stamp = stamp_arr

    # Per-ray hit scratch, grown geometrically.
    cdef Py_ssize_t cap = 64
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hs_arr = np.empty(cap)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ht_arr = np.empty(cap)
    cdef double[::1] hs = hs_arr
    cdef double[::1] ht = ht_arr

    # Output, grown geometrically.
    cdef Py_ssize_t ocap = max(4 * B, 64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] os_arr = np.empty(ocap)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ot_arr = np.empty(ocap)
    cdef double[::1] os_v = os_arr
    cdef double[::1] ot_v = ot_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] ptr_arr = np.zeros(B + 1, dtype=np.int64)
    cdef long long[::1] ray_ptr = ptr_arr
    cdef Py_ssize_t nout = 0

    cdef Py_ssize_t i, j, k, nhits
    cdef double ox, oy, oz, vx, vy, vz, ta, tb
    cdef double s, t, key_s, key_t, cur_s, cur_t
    cdef long long ix, iy, iz, step_x, step_y, step_z, key, e0, e1, sph
    cdef double tmax_x, tmax_y, tmax_z, td_x, td_y, td_z, tcur
    cdef double inv, lo_t, hi_t, comp, swap_tmp, HUGE = 1e300

    for i in range(B):
        ox = origins[i, 0]; oy = origins[i, 1]; oz = origins[i, 2]
        vx = dirs[i, 0]; vy = dirs[i, 1]; vz = dirs[i, 2]
        nhits = 0

        if not use_grid:
            for j in range(M):
                if _hit_interval(ox, oy, oz, vx, vy, vz,
                                 centers[j, 0], centers[j, 1], centers[j, 2],
                                 radius, t0[i], t1[i], &s, &t):
                    if nhits == cap:
                        cap *= GROW
                        hs_arr = np.resize(hs_arr, cap)
                        ht_arr = np.resize(ht_arr, cap)
                        hs = hs_arr
                        ht = ht_arr
                    hs[nhits] = s
                    ht[nhits] = t
                    nhits += 1
        else:
            # Clip [t0, t1] against the grid AABB (slab test).
            ta = t0[i]; tb = t1[i]
            for j in range(3):
                comp = dirs[i, j]
                if comp == 0.0:
                    if (origins[i, j] < gorigin[j]
                            or origins[i, j] > gorigin[j] + gdims[j] * cell_size):
                        tb = ta - 1.0
                        break
                else:
                    inv = 1.0 / comp
                    lo_t = (gorigin[j] - origins[i, j]) * inv
                    hi_t = (gorigin[j] + gdims[j] * cell_size - origins[i, j]) * inv
                    if lo_t > hi_t:
                        swap_tmp = lo_t
                        lo_t = hi_t
                        hi_t = swap_tmp
                    if lo_t > ta:
                        ta = lo_t
                    if hi_t < tb:
                        tb = hi_t
            if ta <= tb:
                # DDA from p(ta) to p(tb).
                ix = <long long> floor((ox + ta * vx - gorigin[0]) / cell_size)
                iy = <long long> floor((oy + ta * vy - gorigin[1]) / cell_size)
                iz = <long long> floor((oz + ta * vz - gorigin[2]) / cell_size)
                if ix < 0: ix = 0
                if ix > gdims[0] - 1: ix = gdims[0] - 1
                if iy < 0: iy = 0
                if iy > gdims[1] - 1: iy = gdims[1] - 1
                if iz < 0: iz = 0
                if iz > gdims[2] - 1: iz = gdims[2] - 1
                step_x = 1 if vx > 0 else -1
                step_y = 1 if vy > 0 else -1
                step_z = 1 if vz > 0 else -1
                if vx != 0.0:
                    td_x = cell_size / (vx if vx > 0 else -vx)
                    tmax_x = (gorigin[0] + (ix + (1 if vx > 0 else 0)) * cell_size
                              - ox) / vx
                else:
                    td_x = HUGE; tmax_x = HUGE
                if vy != 0.0:
                    td_y = cell_size / (vy if vy > 0 else -vy)
                    tmax_y = (gorigin[1] + (iy + (1 if vy > 0 else 0)) * cell_size
                              - oy) / vy
                else:
                    td_y = HUGE; tmax_y = HUGE
                if vz != 0.0:
                    td_z = cell_size / (vz if vz > 0 else -vz)
                    tmax_z = (gorigin[2] + (iz + (1 if vz > 0 else 0)) * cell_size
                              - oz) / vz
                else:
                    td_z = HUGE; tmax_z = HUGE

                tcur = ta
                while True:
                    key = (ix * gdims[1] + iy) * gdims[2] + iz
                    e0 = cell_start[key]
                    e1 = cell_start[key + 1]
                    for j in range(e0, e1):
                        sph = entries[j]
                        if stamp[sph] == i:
                            continue
                        stamp[sph] = i
                        if _hit_interval(ox, oy, oz, vx, vy, vz,
                                         centers[sph, 0], centers[sph, 1],
                                         centers[sph, 2], radius,
                                         t0[i], t1[i], &s, &t):
                            if nhits == cap:
                                cap *= GROW
                                hs_arr = np.resize(hs_arr, cap)
                                ht_arr = np.resize(ht_arr, cap)
                                hs = hs_arr
                                ht = ht_arr
                            hs[nhits] = s
                            ht[nhits] = t
                            nhits += 1
                    if tmax_x <= tmax_y and tmax_x <= tmax_z:
                        if tmax_x > tb:
                            break
                        ix += step_x
                        if ix < 0 or ix >= gdims[0]:
                            break
                        tmax_x += td_x
                    elif tmax_y <= tmax_z:
                        if tmax_y > tb:
                            break
                        iy += step_y
                        if iy < 0 or iy >= gdims[1]:
                            break
                        tmax_y += td_y
                    else:
                        if tmax_z > tb:
                            break
                        iz += step_z
                        if iz < 0 or iz >= gdims[2]:
                            break
                        tmax_z += td_z

        if nhits == 0:
            ray_ptr[i + 1] = ray_ptr[i]
            continue

        # Insertion sort by (s, t).
        for j in range(1, nhits):
            key_s = hs[j]
            key_t = ht[j]
            k = j - 1
            while k >= 0 and (hs[k] > key_s or (hs[k] == key_s and ht[k] > key_t)):
                hs[k + 1] = hs[k]
                ht[k + 1] = ht[k]
                k -= 1
            hs[k + 1] = key_s
            ht[k + 1] = key_t

        # Sweep-merge.
        cur_s = hs[0]
        cur_t = ht[0]
        for j in range(1, nhits):
            if hs[j] <= cur_t + merge_eps:
                if ht[j] > cur_t:
                    cur_t = ht[j]
            else:
                if nout == ocap:
                    ocap *= GROW
                    os_arr = np.resize(os_arr, ocap)
                    ot_arr = np.resize(ot_arr, ocap)
                    os_v = os_arr
                    ot_v = ot_arr
                os_v[nout] = cur_s
                ot_v[nout] = cur_t
                nout += 1
                cur_s = hs[j]
                cur_t = ht[j]
        if nout == ocap:
            ocap *= GROW
            os_arr = np.resize(os_arr, ocap)
            ot_arr = np.resize(ot_arr, ocap)
            os_v = os_arr
            ot_v = ot_arr
        os_v[nout] = cur_s
        ot_v[nout] = cur_t
        nout += 1
        ray_ptr[i + 1] = nout

    return os_arr[:nout].copy(), ot_arr[:nout].copy(), ptr_arr


def point_in_cloud(points_in, centers_in, double radius, grid=None):
    """True where a point lies strictly inside at least one sphere."""
    cdef double[:, ::1] points = np.ascontiguousarray(points_in, dtype=np.float64)
    cdef double[:, ::1] centers = np.ascontiguousarray(centers_in, dtype=np.float64)
    cdef Py_ssize_t N = points.shape[0]
    cdef Py_ssize_t M = centers.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, cast=True] out_arr = np.zeros(
        N, dtype=bool)
    cdef cnp.uint8_t[::1] out = out_arr.view(np.uint8)
    if N == 0 or M == 0:
        return out_arr
    cdef double r2 = radius * radius
    cdef Py_ssize_t i, j
    cdef double dx, dy, dz
    cdef long long ix, iy, iz, key, e0, e1
    cdef double cell_size
    cdef double[::1] gorigin
    cdef long long[::1] gdims, cell_start, entries

    if grid is None:
        for i in range(N):
            for j in range(M):
                dx = points[i, 0] - centers[j, 0]
                dy = points[i, 1] - centers[j, 1]
                dz = points[i, 2] - centers[j, 2]
                if dx * dx + dy * dy + dz * dz < r2:
                    out[i] = 1
                    break
        return out_arr

    cell_size = grid[0]
    gorigin = np.ascontiguousarray(grid[1], dtype=np.float64)
    gdims = np.ascontiguousarray(grid[2], dtype=np.int64)
    cell_start = np.ascontiguousarray(grid[3], dtype=np.int64)
    entries = np.ascontiguousarray(grid[4], dtype=np.int64)
    for i in range(N):
        ix = <long long> floor((points[i, 0] - gorigin[0]) / cell_size)
        iy = <long long> floor((points[i, 1] - gorigin[1]) / cell_size)
        iz = <long long> floor((points[i, 2] - gorigin[2]) / cell_size)
        if (ix < 0 or ix >= gdims[0] or iy < 0 or iy >= gdims[1]
                or iz < 0 or iz >= gdims[2]):
            continue
        key = (ix * gdims[1] + iy) * gdims[2] + iz
        e0 = cell_start[key]
        e1 = cell_start[key + 1]
        for j in range(e0, e1):
            dx = points[i, 0] - centers[entries[j], 0]
            dy = points[i, 1] - centers[entries[j], 1]
            dz = points[i, 2] - centers[entries[j], 2]
            if dx * dx + dy * dy + dz * dz < r2:
                out[i] = 1
                break
    return out_arr
