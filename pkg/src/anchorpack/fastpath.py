"""Integer-coordinate performance lane.

For instances whose container side and anchors are all integers, the maximal
square sides and the reach area are computed with int64 numba kernels. int64
arithmetic is exact here (guarded: W < 2^31 keeps W^2 and all sweep sums in
range), so results agree bit-for-bit with the Fraction path; tests cross-check
the two. A numpy-chunked O(n^2) oracle is provided for benchmark comparisons.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .reach import ROLES, _ROLE_DIR, Instance

INT_LANE_LIMIT = 2 ** 31


@njit(cache=True)
def _sweep_pass(order, xs, ys, keys_rank, nkeys, strict, out_sides):
    """One lower-left pass: for each point (in y-desc groups), the minimum x
    among already-inserted points with key rank lower than (or equal to, when
    strict is False) its own; updates out_sides with x_r - x_i."""
    n = order.shape[0]
    INF = np.int64(2 ** 62)
    fen = np.full(nkeys + 1, INF, dtype=np.int64)

    k = 0
    while k < n:
        j = k
        yv = ys[order[k]]
        while j < n and ys[order[j]] == yv:
            j += 1
        # query the group
        for t in range(k, j):
            i = order[t]
            r = keys_rank[i] if strict == 0 else keys_rank[i] - 1
            # prefix minimum over ranks [1..r+1] in fenwick (1-based)
            best = INF
            pos = r + 1
            while pos > 0:
                if fen[pos] < best:
                    best = fen[pos]
                pos -= pos & (-pos)
            if best < INF:
                d = best - xs[i]
                if d < out_sides[i]:
                    out_sides[i] = d
        # insert the group
        for t in range(k, j):
            i = order[t]
            pos = keys_rank[i] + 1
            v = xs[i]
            while pos <= nkeys:
                if v < fen[pos]:
                    fen[pos] = v
                pos += pos & (-pos)
        k = j


def _ll_sides_int(xs: np.ndarray, ys: np.ndarray, w: int) -> np.ndarray:
    n = xs.shape[0]
    sides = np.minimum(w - xs, w - ys).astype(np.int64)

    # pass 1: open wedge 0 < dy < dx; key u = y - x, strictly smaller rank.
    u = ys - xs
    ranks = np.unique(u)
    key_rank = np.searchsorted(ranks, u).astype(np.int64)
    order = np.lexsort((xs, -ys)).astype(np.int64)
    _sweep_pass(order, xs, ys, key_rank, len(ranks), 1, sides)

    # pass 2: closed wedge 0 < dx <= dy in swapped coordinates.
    u2 = xs - ys
    ranks2 = np.unique(u2)
    key_rank2 = np.searchsorted(ranks2, u2).astype(np.int64)
    order2 = np.lexsort((ys, -xs)).astype(np.int64)
    _sweep_pass(order2, ys, xs, key_rank2, len(ranks2), 0, sides)
    return sides


def all_sides_int(inst_xs: np.ndarray, inst_ys: np.ndarray, w: int) -> dict[str, np.ndarray]:
    """Maximal square sides for every role, integer coordinates."""
    if w >= INT_LANE_LIMIT:
        raise OverflowError("container too large for the int64 lane")
    out = {}
    for role in ROLES:
        dx, dy = _ROLE_DIR[role]
        xs = inst_xs if dx > 0 else w - inst_xs
        ys = inst_ys if dy > 0 else w - inst_ys
        out[role] = _ll_sides_int(xs.astype(np.int64), ys.astype(np.int64), w)
    return out


@njit(cache=True)
def _union_area_events(ev_x, ev_delta, ev_lo, ev_hi, ys):
    """Bentley sweep: total area of the union given sorted x-events."""
    m = ys.shape[0] - 1
    if m <= 0:
        return np.int64(0)
    size = 1
    while size < m:
        size *= 2
    count = np.zeros(2 * size, dtype=np.int64)
    covered = np.zeros(2 * size, dtype=np.int64)
    seg_lo = np.zeros(2 * size, dtype=np.int64)
    seg_hi = np.zeros(2 * size, dtype=np.int64)
    # build leaf extents
    for i in range(size):
        node = size + i
        if i < m:
            seg_lo[node] = ys[i]
            seg_hi[node] = ys[i + 1]
        else:
            seg_lo[node] = ys[m]
            seg_hi[node] = ys[m]
    for node in range(size - 1, 0, -1):
        seg_lo[node] = seg_lo[2 * node]
        seg_hi[node] = seg_hi[2 * node + 1]

    def_area = np.int64(0)
    total = np.int64(0)
    prev_x = ev_x[0]

    # iterative range update on the implicit tree via recursion stack
    stack_node = np.zeros(64, dtype=np.int64)
    stack_state = np.zeros(64, dtype=np.int64)

    for e in range(ev_x.shape[0]):
        x = ev_x[e]
        if x != prev_x:
            total += covered[1] * (x - prev_x)
            prev_x = x
        lo = ev_lo[e]
        hi = ev_hi[e]
        delta = ev_delta[e]
        # recursive update(node=1) emulated with an explicit stack
        sp = 0
        stack_node[0] = 1
        stack_state[0] = 0
        while sp >= 0:
            node = stack_node[sp]
            state = stack_state[sp]
            if state == 0:
                nlo = seg_lo[node]
                nhi = seg_hi[node]
                if hi <= nlo or nhi <= lo or nlo == nhi:
                    sp -= 1
                    continue
                if lo <= nlo and nhi <= hi:
                    count[node] += delta
                    if count[node] > 0:
                        covered[node] = nhi - nlo
                    elif node >= size:
                        covered[node] = 0
                    else:
                        covered[node] = covered[2 * node] + covered[2 * node + 1]
                    sp -= 1
                    continue
                stack_state[sp] = 1
                sp += 1
                stack_node[sp] = 2 * node
                stack_state[sp] = 0
            elif state == 1:
                stack_state[sp] = 2
                sp += 1
                stack_node[sp] = 2 * node + 1
                stack_state[sp] = 0
            else:
                if count[node] > 0:
                    covered[node] = seg_hi[node] - seg_lo[node]
                else:
                    covered[node] = covered[2 * node] + covered[2 * node + 1]
                sp -= 1
    return total + def_area


def union_area_int(x0: np.ndarray, y0: np.ndarray, x1: np.ndarray, y1: np.ndarray) -> int:
    """Exact union area of integer rectangles (degenerates dropped)."""
    keep = (x1 > x0) & (y1 > y0)
    x0, y0, x1, y1 = x0[keep], y0[keep], x1[keep], y1[keep]
    if x0.shape[0] == 0:
        return 0
    ys = np.unique(np.concatenate([y0, y1]))
    ev_x = np.concatenate([x0, x1])
    ev_delta = np.concatenate([np.ones_like(x0), -np.ones_like(x1)])
    ev_lo = np.concatenate([y0, y0])
    ev_hi = np.concatenate([y1, y1])
    order = np.lexsort((-ev_delta, ev_x))
    return int(_union_area_events(ev_x[order].astype(np.int64),
                                  ev_delta[order].astype(np.int64),
                                  ev_lo[order].astype(np.int64),
                                  ev_hi[order].astype(np.int64),
                                  ys.astype(np.int64)))


def instance_arrays(inst: Instance) -> tuple[np.ndarray, np.ndarray, int]:
    xs = np.array([int(p.x) for p in inst.anchors], dtype=np.int64)
    ys = np.array([int(p.y) for p in inst.anchors], dtype=np.int64)
    return xs, ys, int(inst.side)


def square_rect_arrays(xs, ys, w, sides_by_role):
    """Stack the 4n squares as integer rect arrays (zero sides kept, dropped later)."""
    outs = []
    for role in ROLES:
        dx, dy = _ROLE_DIR[role]
        s = sides_by_role[role]
        rx0 = np.where(dx > 0, xs, xs - s)
        rx1 = np.where(dx > 0, xs + s, xs)
        ry0 = np.where(dy > 0, ys, ys - s)
        ry1 = np.where(dy > 0, ys + s, ys)
        outs.append((rx0, ry0, rx1, ry1))
    x0 = np.concatenate([o[0] for o in outs])
    y0 = np.concatenate([o[1] for o in outs])
    x1 = np.concatenate([o[2] for o in outs])
    y1 = np.concatenate([o[3] for o in outs])
    return x0, y0, x1, y1


def reach_area_int(inst: Instance) -> int:
    xs, ys, w = instance_arrays(inst)
    sides = all_sides_int(xs, ys, w)
    return union_area_int(*square_rect_arrays(xs, ys, w, sides))


def all_sides_oracle_int(xs: np.ndarray, ys: np.ndarray, w: int, chunk: int = 256) -> dict[str, np.ndarray]:
    """O(n^2) per-role oracle, numpy-chunked; used for benchmark comparisons."""
    n = xs.shape[0]
    out = {}
    for role in ROLES:
        dx, dy = _ROLE_DIR[role]
        fx = xs if dx > 0 else w - xs
        fy = ys if dy > 0 else w - ys
        sides = np.minimum(w - fx, w - fy).astype(np.int64)
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            ddx = fx[None, :] - fx[lo:hi, None]
            ddy = fy[None, :] - fy[lo:hi, None]
            entry = np.maximum(ddx, ddy)
            entry[(ddx <= 0) | (ddy <= 0)] = np.iinfo(np.int64).max
            sides[lo:hi] = np.minimum(sides[lo:hi], entry.min(axis=1))
        out[role] = sides
    return out
