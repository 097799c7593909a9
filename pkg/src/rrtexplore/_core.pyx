# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled grid and tree kernels.

Every function here has a pure-Python twin in :mod:`rrtexplore._pycore`
with identical arithmetic and visiting order, so both produce the same
results bit for bit.

Cell states are ``0`` unknown, ``1`` free, ``2`` occupied.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport floor, sqrt, INFINITY

cnp.import_array()

cdef enum:
    UNKNOWN = 0
    FREE = 1
    OCCUPIED = 2

cdef double SQRT2 = 1.4142135623730951


# --------------------------------------------------------------------------
# beams (map-frame metres; diagonal step on exact corner ties)
# --------------------------------------------------------------------------

cdef inline void _beam_init(double x, double y, double c, double s,
                            double ox, double oy, double res,
                            long *ix, long *iy, long *stx, long *sty,
                            double *tmx, double *tmy, double *tdx, double *tdy) nogil:
    ix[0] = <long>floor((x - ox) / res)
    iy[0] = <long>floor((y - oy) / res)
    if c > 0:
        stx[0] = 1
        tmx[0] = (ox + (ix[0] + 1) * res - x) / c
        tdx[0] = res / c
    elif c < 0:
        stx[0] = -1
        tmx[0] = (ox + ix[0] * res - x) / c
        tdx[0] = -res / c
    else:
        stx[0] = 0
        tmx[0] = INFINITY
        tdx[0] = INFINITY
    if s > 0:
        sty[0] = 1
        tmy[0] = (oy + (iy[0] + 1) * res - y) / s
        tdy[0] = res / s
    elif s < 0:
        sty[0] = -1
        tmy[0] = (oy + iy[0] * res - y) / s
        tdy[0] = -res / s
    else:
        sty[0] = 0
        tmy[0] = INFINITY
        tdy[0] = INFINITY


cdef inline double _beam_step(long *ix, long *iy, long stx, long sty,
                              double *tmx, double *tmy, double tdx, double tdy) nogil:
    cdef double t
    if tmx[0] < tmy[0]:
        t = tmx[0]
        ix[0] += stx
        tmx[0] += tdx
    elif tmy[0] < tmx[0]:
        t = tmy[0]
        iy[0] += sty
        tmy[0] += tdy
    else:
        t = tmx[0]
        ix[0] += stx
        iy[0] += sty
        tmx[0] += tdx
        tmy[0] += tdy
    return t


def cast_scan(const cnp.uint8_t[:, :] cells, double x, double y,
              double ox, double oy, double res,
              const double[:] cos_a, const double[:] sin_a, double max_range):
    """Ray-march every beam; return ``(ranges, hits)``."""
    cdef Py_ssize_t n = cos_a.shape[0], k
    cdef long h = cells.shape[0], w = cells.shape[1]
    cdef long ix, iy, stx, sty
    cdef double tmx, tmy, tdx, tdy, t
    ranges = np.empty(n, dtype=np.float64)
    hits = np.zeros(n, dtype=np.bool_)
    cdef double[:] rv = ranges
    cdef cnp.uint8_t[:] hv = hits.view(np.uint8)
    with nogil:
        for k in range(n):
            _beam_init(x, y, cos_a[k], sin_a[k], ox, oy, res,
                       &ix, &iy, &stx, &sty, &tmx, &tmy, &tdx, &tdy)
            while True:
                if (tmx if tmx < tmy else tmy) >= max_range:
                    rv[k] = max_range
                    break
                t = _beam_step(&ix, &iy, stx, sty, &tmx, &tmy, tdx, tdy)
                if ix < 0 or iy < 0 or ix >= w or iy >= h:
                    rv[k] = t
                    break
                if cells[iy, ix] == OCCUPIED:
                    rv[k] = t
                    hv[k] = 1
                    break
    return ranges, hits


def carve_scan(cnp.uint8_t[:, :] cells, double x, double y,
               double ox, double oy, double res,
               const double[:] cos_a, const double[:] sin_a,
               const double[:] ranges, const cnp.uint8_t[:] hits):
    """Mark cells entered before each range Free and the next one Occupied on hits."""
    cdef Py_ssize_t n = cos_a.shape[0], k
    cdef long h = cells.shape[0], w = cells.shape[1]
    cdef long ix, iy, stx, sty
    cdef double tmx, tmy, tdx, tdy, r
    with nogil:
        for k in range(n):
            _beam_init(x, y, cos_a[k], sin_a[k], ox, oy, res,
                       &ix, &iy, &stx, &sty, &tmx, &tmy, &tdx, &tdy)
            if 0 <= ix < w and 0 <= iy < h:
                cells[iy, ix] = FREE
            r = ranges[k]
            while True:
                if (tmx if tmx < tmy else tmy) < r:
                    _beam_step(&ix, &iy, stx, sty, &tmx, &tmy, tdx, tdy)
                    if ix < 0 or iy < 0 or ix >= w or iy >= h:
                        break
                    cells[iy, ix] = FREE
                else:
                    if hits[k]:
                        _beam_step(&ix, &iy, stx, sty, &tmx, &tmy, tdx, tdy)
                        if 0 <= ix < w and 0 <= iy < h:
                            cells[iy, ix] = OCCUPIED
                    break


# --------------------------------------------------------------------------
# supercover walks (cell units)
# --------------------------------------------------------------------------

cdef inline bint _not_free(const cnp.uint8_t[:, :] cells, long ix, long iy) nogil:
    if ix < 0 or iy < 0 or ix >= cells.shape[1] or iy >= cells.shape[0]:
        return True
    return cells[iy, ix] != FREE


cdef inline bint _occupied(const cnp.uint8_t[:, :] cells, long ix, long iy) nogil:
    if ix < 0 or iy < 0 or ix >= cells.shape[1] or iy >= cells.shape[0]:
        return False
    return cells[iy, ix] == OCCUPIED


cdef bint _walk(const cnp.uint8_t[:, :] cells, double x0, double y0,
                double x1, double y1, int mode) nogil:
    # mode 0: every touched cell must be Free.
    # mode 1: no touched cell except the one containing (x1, y1) may be Occupied.
    cdef long ix = <long>floor(x0), iy = <long>floor(y0)
    cdef long ex = <long>floor(x1), ey = <long>floor(y1)
    cdef double dx = x1 - x0, dy = y1 - y0
    cdef long stx = 0, sty = 0
    cdef double tmx = INFINITY, tmy = INFINITY, tdx = INFINITY, tdy = INFINITY
    cdef bint hline = dy == 0 and dx != 0 and y0 == floor(y0)
    cdef bint vline = dx == 0 and dy != 0 and x0 == floor(x0)
    cdef long guard

    if mode == 0:
        if _not_free(cells, ix, iy) or _not_free(cells, ex, ey):
            return False
        if hline and _not_free(cells, ix, iy - 1):
            return False
        if vline and _not_free(cells, ix - 1, iy):
            return False
    if dx == 0 and dy == 0:
        return True
    if dx > 0:
        stx = 1
        tdx = 1.0 / dx
        tmx = (ix + 1 - x0) / dx
    elif dx < 0:
        stx = -1
        tdx = -1.0 / dx
        tmx = (x0 - ix) / (-dx)
    if dy > 0:
        sty = 1
        tdy = 1.0 / dy
        tmy = (iy + 1 - y0) / dy
    elif dy < 0:
        sty = -1
        tdy = -1.0 / dy
        tmy = (y0 - iy) / (-dy)

    guard = 4 * (<long>(abs(ex - ix) + abs(ey - iy)) + 4)
    while guard > 0:
        guard -= 1
        if tmx < tmy:
            if tmx > 1.0:
                break
            ix += stx
            tmx += tdx
        elif tmy < tmx:
            if tmy > 1.0:
                break
            iy += sty
            tmy += tdy
        else:
            if tmx > 1.0:
                break
            if mode == 0:
                if _not_free(cells, ix + stx, iy) or _not_free(cells, ix, iy + sty):
                    return False
            else:
                if ((not (ix + stx == ex and iy == ey) and _occupied(cells, ix + stx, iy))
                        or (not (ix == ex and iy + sty == ey) and _occupied(cells, ix, iy + sty))):
                    return False
            ix += stx
            iy += sty
            tmx += tdx
            tmy += tdy
        if mode == 0:
            if _not_free(cells, ix, iy):
                return False
            if hline and _not_free(cells, ix, iy - 1):
                return False
            if vline and _not_free(cells, ix - 1, iy):
                return False
        else:
            if ix == ex and iy == ey:
                break
            if _occupied(cells, ix, iy):
                return False
    return True


def segment_free(const cnp.uint8_t[:, :] cells, double x0, double y0, double x1, double y1):
    """True iff every cell the segment touches is Free (cell-unit coordinates)."""
    return _walk(cells, x0, y0, x1, y1, 0)


def line_of_sight(const cnp.uint8_t[:, :] cells, double x0, double y0, double x1, double y1):
    """True iff no touched cell other than the target's is Occupied."""
    return _walk(cells, x0, y0, x1, y1, 1)


cdef long _gain_count(const cnp.uint8_t[:, :] cells, double gx, double gy, double radius) nogil:
    cdef long h = cells.shape[0], w = cells.shape[1]
    cdef long i0 = <long>floor(gx - radius), i1 = <long>floor(gx + radius)
    cdef long j0 = <long>floor(gy - radius), j1 = <long>floor(gy + radius)
    cdef long i, j, count = 0
    cdef double cx, cy, r2 = radius * radius
    if i0 < 0:
        i0 = 0
    if j0 < 0:
        j0 = 0
    if i1 > w - 1:
        i1 = w - 1
    if j1 > h - 1:
        j1 = h - 1
    for j in range(j0, j1 + 1):
        cy = j + 0.5
        for i in range(i0, i1 + 1):
            if cells[j, i] != UNKNOWN:
                continue
            cx = i + 0.5
            if (cx - gx) * (cx - gx) + (cy - gy) * (cy - gy) > r2:
                continue
            if _walk(cells, gx, gy, cx, cy, 1):
                count += 1
    return count


def gain_count(const cnp.uint8_t[:, :] cells, double gx, double gy, double radius):
    """Count Unknown cells with centre within ``radius`` of (gx, gy) and in line of sight."""
    cdef long count
    with nogil:
        count = _gain_count(cells, gx, gy, radius)
    return count


def nearest_frontier_cell(const cnp.uint8_t[:, :] cells, long sx, long sy, double radius, double min_count):
    """Breadth-first search over Free cells from (sx, sy) for a frontier cell.

    A frontier cell is Free with an Unknown 4-neighbour. The first one popped
    whose gain count exceeds ``min_count`` is returned as ``(col, row)``;
    ``None`` when none is reachable. Moves follow :func:`astar`.
    """
    cdef long h = cells.shape[0], w = cells.shape[1]
    if sx < 0 or sy < 0 or sx >= w or sy >= h or cells[sy, sx] != FREE:
        return None
    seen_arr = np.zeros(h * w, dtype=np.uint8)
    queue_arr = np.empty(h * w, dtype=np.int64)
    cdef cnp.uint8_t[:] seen = seen_arr
    cdef cnp.int64_t[:] queue = queue_arr
    cdef long head = 0, tail = 0, cur, cx, cy, nx, ny, nidx
    cdef int d
    cdef bint edge
    cdef long dxs[8]
    cdef long dys[8]
    dxs[:] = [1, -1, 0, 0, 1, 1, -1, -1]
    dys[:] = [0, 0, 1, -1, 1, -1, 1, -1]
    queue[tail] = sy * w + sx
    tail += 1
    seen[sy * w + sx] = 1
    with nogil:
        while head < tail:
            cur = queue[head]
            head += 1
            cx = cur % w
            cy = cur // w
            edge = False
            for d in range(4):
                nx = cx + dxs[d]
                ny = cy + dys[d]
                if 0 <= nx < w and 0 <= ny < h and cells[ny, nx] == UNKNOWN:
                    edge = True
                    break
            if edge and _gain_count(cells, cx + 0.5, cy + 0.5, radius) > min_count:
                break
            for d in range(8):
                nx = cx + dxs[d]
                ny = cy + dys[d]
                if nx < 0 or ny < 0 or nx >= w or ny >= h:
                    continue
                if cells[ny, nx] != FREE:
                    continue
                if d >= 4 and (cells[cy, nx] != FREE or cells[ny, cx] != FREE):
                    continue
                nidx = ny * w + nx
                if seen[nidx]:
                    continue
                seen[nidx] = 1
                queue[tail] = nidx
                tail += 1
            cur = -1
    if cur < 0:
        return None
    return cx, cy


# --------------------------------------------------------------------------
# kd-tree over points stored in parallel arrays (split axis = depth parity)
# --------------------------------------------------------------------------

def kd_insert(const double[:] xs, const double[:] ys, cnp.int64_t[:] left,
              cnp.int64_t[:] right, long n):
    """Attach point ``n`` to the tree rooted at 0 built from points ``0..n-1``."""
    cdef long node = 0, depth = 0, child
    cdef bint go_left
    left[n] = -1
    right[n] = -1
    if n == 0:
        return
    while True:
        if depth & 1:
            go_left = ys[n] < ys[node]
        else:
            go_left = xs[n] < xs[node]
        if go_left:
            child = left[node]
            if child < 0:
                left[node] = n
                return
        else:
            child = right[node]
            if child < 0:
                right[node] = n
                return
        node = child
        depth += 1


cdef void _kd_nn(const double[:] xs, const double[:] ys, const cnp.int64_t[:] left,
                 const cnp.int64_t[:] right, long node, long depth,
                 double qx, double qy, long *best, double *best_d2) nogil:
    cdef double d2, diff
    cdef long first, second
    if node < 0:
        return
    d2 = (xs[node] - qx) * (xs[node] - qx) + (ys[node] - qy) * (ys[node] - qy)
    if d2 < best_d2[0]:
        best_d2[0] = d2
        best[0] = node
    if depth & 1:
        diff = qy - ys[node]
    else:
        diff = qx - xs[node]
    if diff < 0:
        first = left[node]
        second = right[node]
    else:
        first = right[node]
        second = left[node]
    _kd_nn(xs, ys, left, right, first, depth + 1, qx, qy, best, best_d2)
    if diff * diff < best_d2[0]:
        _kd_nn(xs, ys, left, right, second, depth + 1, qx, qy, best, best_d2)


def kd_nearest(const double[:] xs, const double[:] ys, const cnp.int64_t[:] left,
               const cnp.int64_t[:] right, long n, double qx, double qy):
    """Return ``(index, squared distance)`` of the nearest stored point, or ``(-1, inf)``."""
    cdef long best = -1
    cdef double best_d2 = INFINITY
    if n > 0:
        with nogil:
            _kd_nn(xs, ys, left, right, 0, 0, qx, qy, &best, &best_d2)
    return best, best_d2


# --------------------------------------------------------------------------
# A* on Free cells, 8-connected without corner cutting
# --------------------------------------------------------------------------

cdef inline bint _heap_less(double fa, long sa, double fb, long sb) nogil:
    return fa < fb or (fa == fb and sa < sb)


def astar(const cnp.uint8_t[:, :] cells, long sx, long sy, long gx, long gy):
    """Shortest path as an ``(k, 2)`` array of (col, row), or ``None``."""
    cdef long h = cells.shape[0], w = cells.shape[1]
    cdef long n = h * w
    if cells[sy, sx] != FREE or cells[gy, gx] != FREE:
        return None
    if sx == gx and sy == gy:
        return np.array([[sx, sy]], dtype=np.int64)

    g_arr = np.full(n, np.inf, dtype=np.float64)
    parent_arr = np.full(n, -1, dtype=np.int64)
    closed_arr = np.zeros(n, dtype=np.uint8)
    cap = 1024
    hf_arr = np.empty(cap, dtype=np.float64)
    hs_arr = np.empty(cap, dtype=np.int64)
    hi_arr = np.empty(cap, dtype=np.int64)
    cdef double[:] g = g_arr
    cdef cnp.int64_t[:] parent = parent_arr
    cdef cnp.uint8_t[:] closed = closed_arr
    cdef double[:] hf = hf_arr
    cdef cnp.int64_t[:] hs = hs_arr
    cdef cnp.int64_t[:] hi = hi_arr
    cdef long size = 0, seq = 0, pos, child, par, k
    cdef long cur, cx, cy, nx, ny, nidx, adx, ady, dmin, dmax
    cdef double ng, f, tf
    cdef long ts, ti
    cdef long goal = gy * w + gx
    cdef int d
    cdef long dxs[8]
    cdef long dys[8]
    dxs[:] = [1, -1, 0, 0, 1, 1, -1, -1]
    dys[:] = [0, 0, 1, -1, 1, -1, 1, -1]
    cdef bint found = False

    g[sy * w + sx] = 0.0
    adx = abs(gx - sx)
    ady = abs(gy - sy)
    dmin = adx if adx < ady else ady
    dmax = adx if adx > ady else ady
    hf[0] = (dmax - dmin) + SQRT2 * dmin
    hs[0] = 0
    hi[0] = sy * w + sx
    size = 1
    seq = 1

    while size > 0:
        cur = hi[0]
        # pop
        size -= 1
        if size > 0:
            tf = hf[size]
            ts = hs[size]
            ti = hi[size]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= size:
                    break
                if child + 1 < size and _heap_less(hf[child + 1], hs[child + 1], hf[child], hs[child]):
                    child += 1
                if _heap_less(hf[child], hs[child], tf, ts):
                    hf[pos] = hf[child]
                    hs[pos] = hs[child]
                    hi[pos] = hi[child]
                    pos = child
                else:
                    break
            hf[pos] = tf
            hs[pos] = ts
            hi[pos] = ti
        if closed[cur]:
            continue
        closed[cur] = 1
        if cur == goal:
            found = True
            break
        cx = cur % w
        cy = cur // w
        for d in range(8):
            nx = cx + dxs[d]
            ny = cy + dys[d]
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            if cells[ny, nx] != FREE:
                continue
            if d >= 4 and (cells[cy, nx] != FREE or cells[ny, cx] != FREE):
                continue
            nidx = ny * w + nx
            if closed[nidx]:
                continue
            ng = g[cur] + (SQRT2 if d >= 4 else 1.0)
            if ng < g[nidx]:
                g[nidx] = ng
                parent[nidx] = cur
                adx = abs(gx - nx)
                ady = abs(gy - ny)
                dmin = adx if adx < ady else ady
                dmax = adx if adx > ady else ady
                f = ng + ((dmax - dmin) + SQRT2 * dmin)
                if size == cap:
                    cap *= 2
                    hf_arr = np.resize(hf_arr, cap)
                    hs_arr = np.resize(hs_arr, cap)
                    hi_arr = np.resize(hi_arr, cap)
                    hf = hf_arr
                    hs = hs_arr
                    hi = hi_arr
                # push
                pos = size
                size += 1
                while pos > 0:
                    par = (pos - 1) // 2
                    if _heap_less(f, seq, hf[par], hs[par]):
                        hf[pos] = hf[par]
                        hs[pos] = hs[par]
                        hi[pos] = hi[par]
                        pos = par
                    else:
                        break
                hf[pos] = f
                hs[pos] = seq
                hi[pos] = nidx
                seq += 1

    if not found:
        return None
    path = []
    k = goal
    while k >= 0:
        path.append((k % w, k // w))
        k = parent[k]
    path.reverse()
    return np.array(path, dtype=np.int64)
