"""Pure-Python twin of the compiled kernels in ``_core.pyx``.

Same signatures, same arithmetic, same visiting order. Used when the
extension is not built or when ``RRTEXPLORE_PURE_PYTHON=1`` is set.
"""

import heapq
import math

import numpy as np

UNKNOWN = 0
FREE = 1
OCCUPIED = 2
SQRT2 = 1.4142135623730951
INF = math.inf
_DIRS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))


def _beam_init(x, y, c, s, ox, oy, res):
    ix = math.floor((x - ox) / res)
    iy = math.floor((y - oy) / res)
    if c > 0:
        stx, tmx, tdx = 1, (ox + (ix + 1) * res - x) / c, res / c
    elif c < 0:
        stx, tmx, tdx = -1, (ox + ix * res - x) / c, -res / c
    else:
        stx, tmx, tdx = 0, INF, INF
    if s > 0:
        sty, tmy, tdy = 1, (oy + (iy + 1) * res - y) / s, res / s
    elif s < 0:
        sty, tmy, tdy = -1, (oy + iy * res - y) / s, -res / s
    else:
        sty, tmy, tdy = 0, INF, INF
    return ix, iy, stx, sty, tmx, tmy, tdx, tdy


def cast_scan(cells, x, y, ox, oy, res, cos_a, sin_a, max_range):
    h, w = cells.shape
    n = len(cos_a)
    ranges = np.empty(n, dtype=np.float64)
    hits = np.zeros(n, dtype=np.bool_)
    for k in range(n):
        ix, iy, stx, sty, tmx, tmy, tdx, tdy = _beam_init(
            x, y, float(cos_a[k]), float(sin_a[k]), ox, oy, res)
        while True:
            if (tmx if tmx < tmy else tmy) >= max_range:
                ranges[k] = max_range
                break
            if tmx < tmy:
                t = tmx
                ix += stx
                tmx += tdx
            elif tmy < tmx:
                t = tmy
                iy += sty
                tmy += tdy
            else:
                t = tmx
                ix += stx
                iy += sty
                tmx += tdx
                tmy += tdy
            if ix < 0 or iy < 0 or ix >= w or iy >= h:
                ranges[k] = t
                break
            if cells[iy, ix] == OCCUPIED:
                ranges[k] = t
                hits[k] = True
                break
    return ranges, hits


def carve_scan(cells, x, y, ox, oy, res, cos_a, sin_a, ranges, hits):
    h, w = cells.shape
    for k in range(len(cos_a)):
        ix, iy, stx, sty, tmx, tmy, tdx, tdy = _beam_init(
            x, y, float(cos_a[k]), float(sin_a[k]), ox, oy, res)
        if 0 <= ix < w and 0 <= iy < h:
            cells[iy, ix] = FREE
        r = float(ranges[k])
        hit = bool(hits[k])
        while True:
            entering = (tmx if tmx < tmy else tmy) < r
            if not entering and not hit:
                break
            if tmx < tmy:
                ix += stx
                tmx += tdx
            elif tmy < tmx:
                iy += sty
                tmy += tdy
            else:
                ix += stx
                iy += sty
                tmx += tdx
                tmy += tdy
            inside = 0 <= ix < w and 0 <= iy < h
            if entering:
                if not inside:
                    break
                cells[iy, ix] = FREE
            else:
                if inside:
                    cells[iy, ix] = OCCUPIED
                break


def _not_free(cells, ix, iy):
    h, w = cells.shape
    if ix < 0 or iy < 0 or ix >= w or iy >= h:
        return True
    return cells[iy, ix] != FREE


def _occupied(cells, ix, iy):
    h, w = cells.shape
    if ix < 0 or iy < 0 or ix >= w or iy >= h:
        return False
    return cells[iy, ix] == OCCUPIED


def _walk(cells, x0, y0, x1, y1, mode):
    ix, iy = math.floor(x0), math.floor(y0)
    ex, ey = math.floor(x1), math.floor(y1)
    dx, dy = x1 - x0, y1 - y0
    stx = sty = 0
    tmx = tmy = tdx = tdy = INF
    hline = dy == 0 and dx != 0 and y0 == math.floor(y0)
    vline = dx == 0 and dy != 0 and x0 == math.floor(x0)

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
        stx, tdx, tmx = 1, 1.0 / dx, (ix + 1 - x0) / dx
    elif dx < 0:
        stx, tdx, tmx = -1, -1.0 / dx, (x0 - ix) / (-dx)
    if dy > 0:
        sty, tdy, tmy = 1, 1.0 / dy, (iy + 1 - y0) / dy
    elif dy < 0:
        sty, tdy, tmy = -1, -1.0 / dy, (y0 - iy) / (-dy)

    guard = 4 * (abs(ex - ix) + abs(ey - iy) + 4)
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


def segment_free(cells, x0, y0, x1, y1):
    return _walk(cells, x0, y0, x1, y1, 0)


def line_of_sight(cells, x0, y0, x1, y1):
    return _walk(cells, x0, y0, x1, y1, 1)


def gain_count(cells, gx, gy, radius):
    h, w = cells.shape
    i0 = max(math.floor(gx - radius), 0)
    i1 = min(math.floor(gx + radius), w - 1)
    j0 = max(math.floor(gy - radius), 0)
    j1 = min(math.floor(gy + radius), h - 1)
    r2 = radius * radius
    count = 0
    for j in range(j0, j1 + 1):
        cy = j + 0.5
        row = cells[j]
        for i in range(i0, i1 + 1):
            if row[i] != UNKNOWN:
                continue
            cx = i + 0.5
            if (cx - gx) * (cx - gx) + (cy - gy) * (cy - gy) > r2:
                continue
            if _walk(cells, gx, gy, cx, cy, 1):
                count += 1
    return count


def nearest_frontier_cell(cells, sx, sy, radius, min_count):
    h, w = cells.shape
    if sx < 0 or sy < 0 or sx >= w or sy >= h or cells[sy, sx] != FREE:
        return None
    grid = np.asarray(cells).tolist()
    seen = bytearray(h * w)
    queue = [sy * w + sx]
    seen[sy * w + sx] = 1
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        cx, cy = cur % w, cur // w
        edge = False
        for ddx, ddy in _DIRS[:4]:
            nx, ny = cx + ddx, cy + ddy
            if 0 <= nx < w and 0 <= ny < h and grid[ny][nx] == UNKNOWN:
                edge = True
                break
        if edge and gain_count(cells, cx + 0.5, cy + 0.5, radius) > min_count:
            return cx, cy
        for d, (ddx, ddy) in enumerate(_DIRS):
            nx, ny = cx + ddx, cy + ddy
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            if grid[ny][nx] != FREE:
                continue
            if d >= 4 and (grid[cy][nx] != FREE or grid[ny][cx] != FREE):
                continue
            nidx = ny * w + nx
            if seen[nidx]:
                continue
            seen[nidx] = 1
            queue.append(nidx)
    return None


def kd_insert(xs, ys, left, right, n):
    left[n] = -1
    right[n] = -1
    if n == 0:
        return
    node, depth = 0, 0
    px, py = xs[n], ys[n]
    while True:
        go_left = (py < ys[node]) if depth & 1 else (px < xs[node])
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


def kd_nearest(xs, ys, left, right, n, qx, qy):
    best, best_d2 = -1, INF
    if n == 0:
        return best, best_d2
    # explicit stack; the bound is checked at pop time, which is exactly when
    # the recursive version tests the far subtree
    stack = [(0, 0, 0.0)]
    while stack:
        node, depth, bound = stack.pop()
        if node < 0 or not bound < best_d2:
            continue
        nx, ny = float(xs[node]), float(ys[node])
        d2 = (nx - qx) * (nx - qx) + (ny - qy) * (ny - qy)
        if d2 < best_d2:
            best_d2 = d2
            best = node
        diff = (qy - ny) if depth & 1 else (qx - nx)
        if diff < 0:
            first, second = int(left[node]), int(right[node])
        else:
            first, second = int(right[node]), int(left[node])
        stack.append((second, depth + 1, diff * diff))
        stack.append((first, depth + 1, -1.0))
    return best, best_d2



def astar(cells, sx, sy, gx, gy):
    h, w = cells.shape
    if cells[sy, sx] != FREE or cells[gy, gx] != FREE:
        return None
    if sx == gx and sy == gy:
        return np.array([[sx, sy]], dtype=np.int64)
    free = (np.asarray(cells) == FREE).tolist()
    g = {}
    parent = {}
    closed = set()
    goal = gy * w + gx
    start = sy * w + sx
    g[start] = 0.0
    adx, ady = abs(gx - sx), abs(gy - sy)
    dmin, dmax = min(adx, ady), max(adx, ady)
    heap = [((dmax - dmin) + SQRT2 * dmin, 0, start)]
    seq = 1
    found = False
    while heap:
        _, _, cur = heapq.heappop(heap)
        if cur in closed:
            continue
        closed.add(cur)
        if cur == goal:
            found = True
            break
        cx, cy = cur % w, cur // w
        gcur = g[cur]
        for d, (ddx, ddy) in enumerate(_DIRS):
            nx, ny = cx + ddx, cy + ddy
            if nx < 0 or ny < 0 or nx >= w or ny >= h:
                continue
            if not free[ny][nx]:
                continue
            if d >= 4 and (not free[cy][nx] or not free[ny][cx]):
                continue
            nidx = ny * w + nx
            if nidx in closed:
                continue
            ng = gcur + (SQRT2 if d >= 4 else 1.0)
            if ng < g.get(nidx, INF):
                g[nidx] = ng
                parent[nidx] = cur
                adx, ady = abs(gx - nx), abs(gy - ny)
                dmin, dmax = min(adx, ady), max(adx, ady)
                heapq.heappush(heap, (ng + ((dmax - dmin) + SQRT2 * dmin), seq, nidx))
                seq += 1
    if not found:
        return None
    path = []
    k = goal
    while True:
        path.append((k % w, k // w))
        if k == start:
            break
        k = parent[k]
    path.reverse()
    return np.array(path, dtype=np.int64)
