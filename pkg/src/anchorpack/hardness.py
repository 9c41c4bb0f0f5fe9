"""Forced-pair propagation and exhaustive full-cover search (integer instances).

An anchored square is forced when every area-W^2 packing contains it. Two
local criteria (properties 1 and 2, applied in all eight orientations of the
container) let a propagation engine grow a set of forced pairs; the residual
orthogonal polygon is tracked as a cell grid. Instances the engine cannot
finish are settled by a cell-driven branch search that is exhaustive over
integer-sided squares, which also powers full-cover enumeration for gadget
validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .geometry import Point, Rect, Region, pt
from .reach import ROLES, _ROLE_DIR, AnchoredSquare, Instance
from .packing import Packing, SearchBudgetExceeded, packing_area, validate_packing


def _as_int_instance(inst: Instance) -> tuple[int, list[tuple[int, int]]]:
    if inst.side.denominator != 1:
        raise ValueError("integer container required")
    w = int(inst.side)
    anchors = []
    for p in inst.anchors:
        if p.x.denominator != 1 or p.y.denominator != 1:
            raise ValueError("integer anchors required")
        anchors.append((int(p.x), int(p.y)))
    return w, anchors


class _State:
    """Mutable propagation/search state over the unit-cell grid."""

    __slots__ = ("w", "anchors", "cap", "residual", "decided", "order")

    def __init__(self, w: int, anchors: list[tuple[int, int]]):
        self.w = w
        self.anchors = anchors
        self.residual = np.ones((w, w), dtype=bool)
        self.decided: list[tuple[str, int] | None] = [None] * len(anchors)
        self.cap = {}
        for i, (x, y) in enumerate(anchors):
            for role in ROLES:
                gx, gy = _ROLE_DIR[role]
                cap = min(x if gx < 0 else w - x, y if gy < 0 else w - y)
                for j, (px, py) in enumerate(anchors):
                    if j == i:
                        continue
                    dx = (px - x) * gx
                    dy = (py - y) * gy
                    if dx > 0 and dy > 0:
                        cap = min(cap, max(dx, dy))
                self.cap[(i, role)] = cap

    def copy(self) -> "_State":
        out = _State.__new__(_State)
        out.w = self.w
        out.anchors = self.anchors
        out.cap = self.cap
        out.residual = self.residual.copy()
        out.decided = list(self.decided)
        return out

    def square_cells(self, i: int, role: str, t: int) -> tuple[int, int, int, int]:
        x, y = self.anchors[i]
        gx, gy = _ROLE_DIR[role]
        x0 = x if gx > 0 else x - t
        y0 = y if gy > 0 else y - t
        return x0, y0, x0 + t, y0 + t

    def max_growth(self, i: int, role: str) -> int:
        """Largest t <= cap with all square cells residual (0 if none)."""
        cap = self.cap[(i, role)]
        x, y = self.anchors[i]
        gx, gy = _ROLE_DIR[role]
        t = 0
        while t < cap:
            t2 = t + 1
            x0 = x if gx > 0 else x - t2
            y0 = y if gy > 0 else y - t2
            # check the new L-ring
            if gx > 0:
                col = x0 + t2 - 1
            else:
                col = x0
            if gy > 0:
                row = y0 + t2 - 1
            else:
                row = y0
            if not (self.residual[col, y0:y0 + t2].all()
                    and self.residual[x0:x0 + t2, row].all()):
                break
            t = t2
        return t

    def cells_free(self, x0, y0, x1, y1) -> bool:
        return bool(self.residual[x0:x1, y0:y1].all())

    def place(self, i: int, role: str, t: int):
        x0, y0, x1, y1 = self.square_cells(i, role, t)
        self.residual[x0:x1, y0:y1] = False
        self.decided[i] = (role, t)

    def unplace(self, i: int, role: str, t: int):
        x0, y0, x1, y1 = self.square_cells(i, role, t)
        self.residual[x0:x1, y0:y1] = True
        self.decided[i] = None

    def in_p(self, cx: int, cy: int) -> bool:
        if cx < 0 or cy < 0 or cx >= self.w or cy >= self.w:
            return False
        return bool(self.residual[cx, cy])


def _on_segment_int(p, a, b) -> bool:
    (px, py), (ax, ay), (bx, by) = p, a, b
    if ax == bx:
        return px == ax and min(ay, by) <= py <= max(ay, by)
    return py == ay and min(ax, bx) <= px <= max(ax, bx)


def check_property1(state: _State, i: int, role: str, t: int) -> bool:
    """Opposite corner convex in P; no undecided anchor on its two edges."""
    x, y = state.anchors[i]
    gx, gy = _ROLE_DIR[role]
    ox, oy = x + gx * t, y + gy * t
    inx = ox - (1 if gx > 0 else 0)
    iny = oy - (1 if gy > 0 else 0)
    outx = ox - (1 if gx < 0 else 0)
    outy = oy - (1 if gy < 0 else 0)
    if not state.in_p(inx, iny):
        return False
    if state.in_p(outx, iny) or state.in_p(inx, outy) or state.in_p(outx, outy):
        return False
    e1 = ((ox, oy), (x, oy))
    e2 = ((ox, oy), (ox, y))
    for j, p in enumerate(state.anchors):
        if j == i or state.decided[j] is not None:
            continue
        if _on_segment_int(p, *e1) or _on_segment_int(p, *e2):
            return False
    return True


def check_property2(state: _State, i: int, role: str, t: int) -> bool:
    """Side > 1; one edge at the opposite corner on dP; a unique undecided
    anchor one unit along the other edge; no undecided anchor one unit past
    the anchor-side ends of the dP edge. Both chiralities are tried."""
    if t <= 1:
        return False
    x, y = state.anchors[i]
    gx, gy = _ROLE_DIR[role]
    ox, oy = x + gx * t, y + gy * t
    inx = ox - (1 if gx > 0 else 0)
    iny = oy - (1 if gy > 0 else 0)
    outx = ox - (1 if gx < 0 else 0)
    outy = oy - (1 if gy < 0 else 0)
    if not state.in_p(inx, iny):
        return False
    if state.in_p(outx, iny) or state.in_p(inx, outy) or state.in_p(outx, outy):
        return False

    undecided = [p for j, p in enumerate(state.anchors)
                 if j != i and state.decided[j] is None]
    on_a = [p for p in undecided if _square_boundary(p, x, y, ox, oy)]

    for axis in ("x", "y"):
        if axis == "x":
            # the edge through opp along x lies on dP; s' one unit up the other edge
            edge_ok = all(not state.in_p(cx, outy)
                          for cx in range(min(ox, x), max(ox, x)))
            sprime = (ox, oy - gy)
            far1 = (x - gx, y)    # one unit beyond the anchor, along the edge
            far2 = (x - gx, oy)   # one unit beyond the edge's anchor-side end
        else:
            edge_ok = all(not state.in_p(outx, cy)
                          for cy in range(min(oy, y), max(oy, y)))
            sprime = (ox - gx, oy)
            far1 = (x, y - gy)
            far2 = (ox, y - gy)
        if not edge_ok:
            continue
        if on_a != [sprime]:
            continue
        if any(p == far1 or p == far2 for p in undecided):
            continue
        return True
    return False


def _square_boundary(p, x, y, ox, oy) -> bool:
    x0, x1 = min(x, ox), max(x, ox)
    y0, y1 = min(y, oy), max(y, oy)
    on_x = p[0] in (x0, x1) and y0 <= p[1] <= y1
    on_y = p[1] in (y0, y1) and x0 <= p[0] <= x1
    return on_x or on_y


@dataclass
class ForcedState:
    instance: Instance
    forced: list[tuple[AnchoredSquare, int]]
    undecided: list[int]
    status: str  # "fully-tiled" | "stuck" | "infeasible"
    residual_rects: list[Rect]

    def residual_region(self) -> Region:
        return Region(self.residual_rects)


def _residual_rects(state: _State) -> list[Rect]:
    rects = []
    w = state.w
    res = state.residual
    for cx in range(w):
        cy = 0
        while cy < w:
            if res[cx, cy]:
                y0 = cy
                while cy < w and res[cx, cy]:
                    cy += 1
                rects.append(Rect(pt(cx, y0), pt(cx + 1, cy)))
            else:
                cy += 1
    return rects


def _closure(state: _State, order: list[int] | None = None) -> list[tuple[int, str, int]]:
    """Run properties 1/2 to a fixed point; returns the placements made."""
    n = len(state.anchors)
    if order is None:
        order = list(range(n))
    placed = []
    progress = True
    while progress:
        progress = False
        for i in order:
            if state.decided[i] is not None:
                continue
            for role in ROLES:
                t = state.max_growth(i, role)
                if t < 1:
                    continue
                if check_property1(state, i, role, t) or check_property2(state, i, role, t):
                    state.place(i, role, t)
                    placed.append((i, role, t))
                    progress = True
                    break
    return placed


def _coverable(state: _State, cx: int, cy: int) -> bool:
    for i in range(len(state.anchors)):
        if state.decided[i] is not None:
            continue
        x, y = state.anchors[i]
        for role in ROLES:
            gx, gy = _ROLE_DIR[role]
            dx = (cx + (1 if gx > 0 else 0) - x) * gx
            dy = (cy + (1 if gy > 0 else 0) - y) * gy
            if dx < 1 or dy < 1:
                continue
            need = max(dx, dy)
            if need <= state.max_growth(i, role):
                return True
    return False


def propagate_forced(inst: Instance, order: list[int] | None = None) -> ForcedState:
    w, anchors = _as_int_instance(inst)
    state = _State(w, anchors)
    placed = _closure(state, order)
    forced = [(AnchoredSquare(i, role, Fraction(t)), i) for i, role, t in placed]
    undecided = [i for i in range(len(anchors)) if state.decided[i] is None]
    if not state.residual.any():
        status = "fully-tiled"
    else:
        status = "stuck"
        for cx, cy in zip(*np.nonzero(state.residual)):
            if not _coverable(state, int(cx), int(cy)):
                status = "infeasible"
                break
    return ForcedState(inst, forced, undecided, status, _residual_rects(state))


# ---------------------------------------------------------------------------
# Exhaustive search over integer-sided squares.
# ---------------------------------------------------------------------------

def _cell_candidates(state: _State, cx: int, cy: int) -> list[tuple[int, str, int]]:
    out = []
    for i in range(len(state.anchors)):
        if state.decided[i] is not None:
            continue
        x, y = state.anchors[i]
        for role in ROLES:
            gx, gy = _ROLE_DIR[role]
            dx = (cx + (1 if gx > 0 else 0) - x) * gx
            dy = (cy + (1 if gy > 0 else 0) - y) * gy
            if dx < 1 or dy < 1:
                continue
            need = max(dx, dy)
            if need > state.cap[(i, role)]:
                continue
            tmax = state.max_growth(i, role)
            for t in range(tmax, need - 1, -1):
                out.append((i, role, t))
    return out


def _first_uncovered(state: _State) -> tuple[int, int] | None:
    idx = np.argmax(state.residual)
    if not state.residual.flat[idx]:
        return None
    return int(idx // state.w), int(idx % state.w)


def _packing_from_state(state: _State, inst: Instance) -> Packing:
    squares = []
    for i, dec in enumerate(state.decided):
        if dec is None:
            squares.append(AnchoredSquare(i, "LL", Fraction(0)))
        else:
            role, t = dec
            squares.append(AnchoredSquare(i, role, Fraction(t)))
    return Packing(tuple(squares))


def search_full_cover(inst: Instance, budget: int = 10_000_000,
                      use_propagation: bool = True) -> tuple[bool, Packing | None]:
    """Decide whether an integer-sided area-W^2 packing exists."""
    w, anchors = _as_int_instance(inst)
    state = _State(w, anchors)
    nodes = [0]

    def rec(st: _State) -> Packing | None:
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchBudgetExceeded(f"exceeded {budget} nodes")
        work = st.copy()
        if use_propagation:
            _closure(work)
        cell = _first_uncovered(work)
        if cell is None:
            return _packing_from_state(work, inst)
        for i, role, t in _cell_candidates(work, *cell):
            x0, y0, x1, y1 = work.square_cells(i, role, t)
            if not work.cells_free(x0, y0, x1, y1):
                continue
            work.place(i, role, t)
            got = rec(work)
            if got is not None:
                return got
            work.unplace(i, role, t)
        return None

    got = rec(state)
    return (got is not None), got


def enumerate_full_covers(inst: Instance, budget: int = 10_000_000,
                          limit: int = 100_000) -> list[Packing]:
    """All integer-sided area-W^2 packings (cell-driven exhaustive DFS)."""
    w, anchors = _as_int_instance(inst)
    state = _State(w, anchors)
    found: list[Packing] = []
    nodes = [0]

    def rec(st: _State):
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchBudgetExceeded(f"exceeded {budget} nodes")
        cell = _first_uncovered(st)
        if cell is None:
            found.append(_packing_from_state(st, inst))
            if len(found) > limit:
                raise SearchBudgetExceeded("too many covers")
            return
        for i, role, t in _cell_candidates(st, *cell):
            x0, y0, x1, y1 = st.square_cells(i, role, t)
            if not st.cells_free(x0, y0, x1, y1):
                continue
            st.place(i, role, t)
            rec(st)
            st.unplace(i, role, t)

    rec(state)
    return found


def verify_certificate(inst: Instance, packing: Packing) -> bool:
    """NP-membership check: valid packing of total area exactly W^2."""
    if validate_packing(inst, packing):
        return False
    return packing_area(packing) == inst.side * inst.side
