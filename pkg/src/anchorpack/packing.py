"""Anchored square packings: validation, greedy, and exact grid-restricted search.

A packing assigns one empty anchored square per anchor (side 0 marks an
unused anchor). The exact solver maximizes total area over packings whose
sides are differences of given grid coordinates; it is optimal within that
class only, which suffices for integer decision instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Point, Rect, rect_union_area
from .reach import ROLES, AnchoredSquare, EmptyInstanceError, Instance, reach_area


class OffGridError(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, slots=True)
class Packing:
    squares: tuple[AnchoredSquare, ...]

    def __post_init__(self):
        idx = sorted(sq.anchor_index for sq in self.squares)
        if idx != list(range(len(idx))):
            raise ValueError("need exactly one square per anchor index")

    def rects(self, inst: Instance) -> list[Rect]:
        return [sq.rect_for(inst) for sq in self.squares if sq.side > 0]


def packing_area(packing: Packing) -> Fraction:
    return sum((sq.side * sq.side for sq in packing.squares), Fraction(0))


def validate_packing(inst: Instance, packing: Packing) -> list[str]:
    """Empty list when valid, else human-readable violations."""
    issues: list[str] = []
    if len(packing.squares) != inst.n:
        issues.append(f"expected {inst.n} squares, got {len(packing.squares)}")
        return issues
    u = inst.container()
    squares = sorted(packing.squares, key=lambda sq: sq.anchor_index)
    boxes: list[tuple[int, Rect]] = []
    for sq in squares:
        if sq.side < 0:
            issues.append(f"square {sq.anchor_index} has negative side")
            continue
        if sq.side == 0:
            continue
        r = sq.rect_for(inst)
        if not u.contains_rect(r):
            issues.append(f"square {sq.anchor_index} leaves the container: {r}")
        for j, p in enumerate(inst.anchors):
            if r.contains_point(p, closed=False):
                issues.append(f"square {sq.anchor_index} covers anchor {j} in its interior")
        boxes.append((sq.anchor_index, r))
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i][1].interiors_intersect(boxes[j][1]):
                issues.append(f"squares {boxes[i][0]} and {boxes[j][0]} overlap")
    return issues


def _max_side_with_obstacles(inst: Instance, i: int, role: str,
                             obstacles: Sequence[Rect]) -> Fraction:
    """Largest empty anchored square side also avoiding the obstacle interiors."""
    from .reach import _ROLE_DIR, _role_frame
    s, pts_ = _role_frame(inst, i, role)
    w = inst.side
    side = min(w - s.x, w - s.y)
    for j, p in enumerate(pts_):
        if j == i:
            continue
        dx, dy = p.x - s.x, p.y - s.y
        if dx > 0 and dy > 0:
            side = min(side, max(dx, dy))
    dxs, dys = _ROLE_DIR[role]
    a = inst.anchors[i]
    for r in obstacles:
        # transform the obstacle into the growth frame of this role
        x0 = a.x - r.hi.x if dxs < 0 else r.lo.x - a.x
        x1 = a.x - r.lo.x if dxs < 0 else r.hi.x - a.x
        y0 = a.y - r.hi.y if dys < 0 else r.lo.y - a.y
        y1 = a.y - r.lo.y if dys < 0 else r.hi.y - a.y
        if x1 <= 0 or y1 <= 0:
            continue
        entry = max(x0, y0)
        side = min(side, max(entry, Fraction(0)))
    return max(side, Fraction(0))


def greedy_pack(inst: Instance) -> Packing:
    """Largest-square-first greedy; ties by anchor index, then role order."""
    if inst.n == 0:
        raise EmptyInstanceError("cannot pack an empty anchor set")
    chosen: dict[int, AnchoredSquare] = {}
    obstacles: list[Rect] = []
    while len(chosen) < inst.n:
        best: AnchoredSquare | None = None
        for i in range(inst.n):
            if i in chosen:
                continue
            for role in ROLES:
                side = _max_side_with_obstacles(inst, i, role, obstacles)
                cand = AnchoredSquare(i, role, side)
                if best is None or side > best.side:
                    best = cand
        chosen[best.anchor_index] = best
        if best.side > 0:
            obstacles.append(best.rect_for(inst))
    return Packing(tuple(chosen[i] for i in range(inst.n)))


# ---------------------------------------------------------------------------
# Exact grid-restricted branch and bound.
# ---------------------------------------------------------------------------

@dataclass
class _Candidate:
    square: AnchoredSquare
    rect: Rect | None


def _grid_candidates(inst: Instance, grid: Sequence[Fraction], i: int) -> list[_Candidate]:
    sides = sorted({b - a for a in grid for b in grid if b > a}, reverse=True)
    out = [_Candidate(AnchoredSquare(i, "LL", Fraction(0)), None)]
    u = inst.container()
    for side in sides:
        for role in ROLES:
            sq = AnchoredSquare(i, role, side)
            r = sq.rect_for(inst)
            if not u.contains_rect(r):
                continue
            if any(r.contains_point(p, closed=False) for p in inst.anchors):
                continue
            out.append(_Candidate(sq, r))
    return out


@dataclass
class SearchStats:
    nodes: int = 0
    budget: int = 10_000_000


def exact_pack_grid(inst: Instance, grid: Iterable, budget: int = 10_000_000,
                    ) -> tuple[Packing, dict]:
    """Maximum-area packing with sides restricted to grid differences.

    Returns the packing and a certificate-scope note. Optimal within the
    grid-restricted class; not claimed optimal over continuous sides.
    """
    if inst.n == 0:
        raise EmptyInstanceError("cannot pack an empty anchor set")
    from .geometry import scalar
    grid = sorted({scalar(g) for g in grid})
    for p in inst.anchors:
        if p.x not in grid or p.y not in grid:
            raise OffGridError(f"anchor {p} not on the supplied grid")
    cands = [_grid_candidates(inst, grid, i) for i in range(inst.n)]
    order = sorted(range(inst.n), key=lambda i: -max(c.square.side for c in cands[i]))
    suffix_best = [Fraction(0)] * (inst.n + 1)
    for k in range(inst.n - 1, -1, -1):
        m = max(c.square.side for c in cands[order[k]])
        suffix_best[k] = suffix_best[k + 1] + m * m
    stats = SearchStats(budget=budget)
    best_value = Fraction(-1)
    best_sel: list[AnchoredSquare] | None = None
    sel: list[AnchoredSquare] = []
    used: list[Rect] = []

    def key(selection: list[AnchoredSquare]) -> tuple:
        return tuple((sq.anchor_index, ROLES.index(sq.role), sq.side) for sq in
                     sorted(selection, key=lambda s: s.anchor_index))

    def rec(k: int, value: Fraction):
        nonlocal best_value, best_sel
        stats.nodes += 1
        if stats.nodes > stats.budget:
            raise SearchBudgetExceeded(f"exceeded {stats.budget} nodes")
        if k == inst.n:
            if value > best_value or (value == best_value and best_sel is not None
                                      and key(sel) < key(best_sel)):
                best_value = value
                best_sel = list(sel)
            return
        if value + suffix_best[k] < best_value:
            return
        if value + suffix_best[k] == best_value and best_sel is not None:
            # can at best tie; continue only to canonicalize certificates
            pass
        i = order[k]
        for cand in cands[i]:
            r = cand.rect
            if r is not None and any(r.interiors_intersect(q) for q in used):
                continue
            sel.append(cand.square)
            if r is not None:
                used.append(r)
            rec(k + 1, value + cand.square.side ** 2)
            if r is not None:
                used.pop()
            sel.pop()

    rec(0, Fraction(0))
    packing = Packing(tuple(sorted(best_sel, key=lambda s: s.anchor_index)))
    note = {"scope": "grid-restricted", "grid_size": len(grid), "nodes": stats.nodes}
    return packing, note


def integer_grid(inst: Instance) -> list[Fraction]:
    if inst.side.denominator != 1:
        raise OffGridError("container side is not an integer")
    return [Fraction(k) for k in range(int(inst.side) + 1)]


def decide_full_cover(inst: Instance, budget: int = 10_000_000,
                      ) -> tuple[bool, Packing | None]:
    """Decide whether an area-W^2 packing exists (integer instance).

    Runs forced-pair propagation first, then an exhaustive cell-driven search
    over integer-sided squares. A negative answer means no packing exists
    within the integer-coordinate search class.
    """
    from . import hardness
    if inst.n == 0:
        raise EmptyInstanceError("cannot decide an empty anchor set")
    if inst.side.denominator != 1 or any(
            p.x.denominator != 1 or p.y.denominator != 1 for p in inst.anchors):
        raise OffGridError("decision problem requires integer coordinates")
    return hardness.search_full_cover(inst, budget=budget)
