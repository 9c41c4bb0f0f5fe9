"""Maximal anchored empty squares and the reach of an anchor set.

The container is U = [0, W]^2. Anchors form a multiset (duplicates allowed);
a square is empty when no anchor lies in its open interior. For each anchor
and corner role there is a unique maximal empty anchored square; the reach is
the union of all 4n of them.

Two computation paths are provided and cross-checked by tests: a brute O(n)
per-square oracle, and a sweep over a dynamic min-below-diagonal structure
that computes all squares in O(n log n).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Point, Rect, Region, pt, rect_union_area, region_union, scalar

ROLES = ("LL", "UL", "UR", "LR")

# growth direction of the square, per role (anchor sits at that corner)
_ROLE_DIR = {"LL": (1, 1), "UL": (1, -1), "UR": (-1, -1), "LR": (-1, 1)}


class EmptyInstanceError(ValueError):
    """Raised for operations that need at least one anchor."""


@dataclass(frozen=True, slots=True)
class Instance:
    side: Fraction
    anchors: tuple[Point, ...]

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError("container side must be positive")
        for p in self.anchors:
            if not (0 <= p.x <= self.side and 0 <= p.y <= self.side):
                raise ValueError(f"anchor {p} outside the container")

    @property
    def n(self) -> int:
        return len(self.anchors)

    def container(self) -> Rect:
        return Rect(pt(0, 0), Point(self.side, self.side))


def instance(side, anchors: Iterable[tuple]) -> Instance:
    return Instance(scalar(side), tuple(pt(x, y) for x, y in anchors))


@dataclass(frozen=True, slots=True)
class AnchoredSquare:
    anchor_index: int
    role: str
    side: Fraction

    def rect_for(self, inst: Instance) -> Rect:
        a = inst.anchors[self.anchor_index]
        dx, dy = _ROLE_DIR[self.role]
        x2 = a.x + dx * self.side
        y2 = a.y + dy * self.side
        return Rect(Point(min(a.x, x2), min(a.y, y2)), Point(max(a.x, x2), max(a.y, y2)))

    def opposite_corner(self, inst: Instance) -> Point:
        a = inst.anchors[self.anchor_index]
        dx, dy = _ROLE_DIR[self.role]
        return Point(a.x + dx * self.side, a.y + dy * self.side)


@dataclass(frozen=True, slots=True)
class BlockerResult:
    blocker: Point
    distance: Fraction
    source: str  # "anchor" | "container-boundary"


def _role_frame(inst: Instance, i: int, role: str) -> tuple[Point, list[Point]]:
    """Map anchor i and all others into the frame where the role becomes LL."""
    dx, dy = _ROLE_DIR[role]
    w = inst.side

    def f(p: Point) -> Point:
        return Point(p.x if dx > 0 else w - p.x, p.y if dy > 0 else w - p.y)

    return f(inst.anchors[i]), [f(p) for p in inst.anchors]


def blocker_info(inst: Instance, i: int, role: str) -> BlockerResult:
    """The growth-limiting obstruction of the maximal square (i, role)."""
    s, pts_ = _role_frame(inst, i, role)
    w = inst.side
    best = min(w - s.x, w - s.y)
    best_point = Point(w, s.y) if w - s.x <= w - s.y else Point(s.x, w)
    src = "container-boundary"
    for j, p in enumerate(pts_):
        if j == i:
            continue
        dx, dy = p.x - s.x, p.y - s.y
        if dx > 0 and dy > 0:
            d = max(dx, dy)
            if d < best:
                best, best_point, src = d, p, "anchor"
    if src == "anchor":
        # report the blocker in original coordinates
        g = inst.anchors[i]
        ddx, ddy = _ROLE_DIR[role]
        bx = g.x + ddx * (best_point.x - s.x)
        by = g.y + ddy * (best_point.y - s.y)
        return BlockerResult(Point(bx, by), best, src)
    ddx, ddy = _ROLE_DIR[role]
    g = inst.anchors[i]
    bx = g.x + ddx * (best_point.x - s.x)
    by = g.y + ddy * (best_point.y - s.y)
    return BlockerResult(Point(bx, by), best, src)


def maximal_anchored_square_oracle(inst: Instance, i: int, role: str) -> AnchoredSquare:
    """O(n) scan: side = min over boundary distance and quadrant entry times."""
    s, pts_ = _role_frame(inst, i, role)
    w = inst.side
    side = min(w - s.x, w - s.y)
    for j, p in enumerate(pts_):
        if j == i:
            continue
        dx, dy = p.x - s.x, p.y - s.y
        if dx > 0 and dy > 0:
            side = min(side, max(dx, dy))
    return AnchoredSquare(i, role, side)


def all_maximal_squares_oracle(inst: Instance) -> list[AnchoredSquare]:
    return [maximal_anchored_square_oracle(inst, i, role)
            for i in range(inst.n) for role in ROLES]


# ---------------------------------------------------------------------------
# MinBelow structure: scapegoat-balanced BST keyed on u = y - x, augmented
# with the subtree minimum of x. Supports insert, delete and the query
# "minimum-x point strictly (or weakly) below the slope-1 line through q".
# ---------------------------------------------------------------------------

class _Node:
    __slots__ = ("key", "x", "point", "token", "left", "right", "size",
                 "alive_count", "min_x", "min_point", "deleted")

    def __init__(self, key, x, point, token):
        self.key = key
        self.x = x
        self.point = point
        self.token = token
        self.left = None
        self.right = None
        self.size = 1
        self.alive_count = 1
        self.min_x = x
        self.min_point = point
        self.deleted = False


_INF = None  # sentinel for "no minimum"


def _refresh(node: _Node):
    size = 1
    alive = 0 if node.deleted else 1
    min_x, min_point = (None, None) if node.deleted else (node.x, node.point)
    for child in (node.left, node.right):
        if child is None:
            continue
        size += child.size
        alive += child.alive_count
        if child.min_x is not None and (min_x is None or child.min_x < min_x):
            min_x, min_point = child.min_x, child.min_point
    node.size = size
    node.alive_count = alive
    node.min_x = min_x
    node.min_point = min_point


class MinBelowStructure:
    """Dynamic point set supporting MinBelow queries along a slope-1 line.

    min_below_query(q) returns the minimum-x point p with
    y(p) - y(q) < x(p) - x(q), i.e. strictly below the line of slope 1
    through q. Amortized O(log n) per operation (scapegoat rebuilds).
    """

    ALPHA = 0.70

    def __init__(self, points: Iterable[Point] = ()):  # noqa: B008
        self.root: _Node | None = None
        self._tokens = 0
        self._deleted = 0
        for p in points:
            self.insert(p)

    @staticmethod
    def _key(p: Point) -> Fraction:
        return p.y - p.x

    def __len__(self):
        return 0 if self.root is None else self.root.alive_count

    def insert(self, p: Point):
        self._tokens += 1
        node = _Node(self._key(p), p.x, p, self._tokens)
        if self.root is None:
            self.root = node
            return
        path = []
        cur = self.root
        while True:
            path.append(cur)
            if (node.key, node.x, node.token) < (cur.key, cur.x, cur.token):
                if cur.left is None:
                    cur.left = node
                    break
                cur = cur.left
            else:
                if cur.right is None:
                    cur.right = node
                    break
                cur = cur.right
        for anc in reversed(path):
            _refresh(anc)
        # scapegoat rebalance on depth overflow
        depth = len(path) + 1
        import math
        limit = math.log(max(2, self.root.size), 1 / self.ALPHA) + 1
        if depth > limit:
            self._rebuild_at_scapegoat(path, node)

    def _rebuild_at_scapegoat(self, path, node):
        child = node
        for anc in reversed(path):
            csize = child.size
            if csize > self.ALPHA * anc.size:
                child = anc
                continue
            self._rebuild_subtree(anc)
            return
        self._rebuild_subtree(self.root)

    def _collect(self, node, out):
        if node is None:
            return
        self._collect(node.left, out)
        if not node.deleted:
            out.append(node)
        self._collect(node.right, out)

    def _rebuild_subtree(self, target: _Node):
        parent, cur = None, self.root
        while cur is not target:
            parent = cur
            cur = cur.left if (target.key, target.x, target.token) < (cur.key, cur.x, cur.token) else cur.right
        nodes: list[_Node] = []
        self._collect(target, nodes)

        def build(lo, hi):
            if lo > hi:
                return None
            mid = (lo + hi) // 2
            n = nodes[mid]
            n.left = build(lo, mid - 1)
            n.right = build(mid + 1, hi)
            n.deleted = False
            _refresh(n)
            return n

        fresh = build(0, len(nodes) - 1)
        if parent is None:
            self.root = fresh
        elif parent.left is target:
            parent.left = fresh
        else:
            parent.right = fresh
        # parent chain refresh
        if parent is not None:
            self._refresh_path_to(parent)

    def _refresh_path_to(self, target: _Node):
        cur = self.root
        path = []
        while cur is not None and cur is not target:
            path.append(cur)
            cur = cur.left if (target.key, target.x, target.token) < (cur.key, cur.x, cur.token) else cur.right
        if cur is target:
            _refresh(target)
            for anc in reversed(path):
                _refresh(anc)

    def delete(self, p: Point):
        """Lazy-delete one occurrence of p; rebuilds when half are dead."""
        found = self._find_alive(self.root, self._key(p), p)
        if found is None:
            raise KeyError(f"{p} not in structure")
        found.deleted = True
        self._deleted += 1
        self._refresh_path_to(found)
        if self.root is not None and self._deleted > self.root.size / 2:
            self._rebuild_subtree(self.root)
            self._deleted = 0

    def _find_alive(self, node, key, p):
        """Locate an alive node holding point p; ties on (key, x) branch both ways."""
        if node is None:
            return None
        if (key, p.x) < (node.key, node.x):
            return self._find_alive(node.left, key, p)
        if (key, p.x) > (node.key, node.x):
            return self._find_alive(node.right, key, p)
        if not node.deleted and node.point == p:
            return node
        return (self._find_alive(node.left, key, p)
                or self._find_alive(node.right, key, p))

    def min_below_query(self, q: Point, strict: bool = True) -> Point | None:
        """Minimum-x point below the slope-1 line through q.

        strict=True uses y(p)-y(q) < x(p)-x(q) (the paper's wedge);
        strict=False allows points exactly on the line.
        """
        bound = self._key(q)
        best_x, best_p = None, None
        cur = self.root
        while cur is not None:
            if cur.key < bound or (not strict and cur.key == bound):
                # node + entire left subtree qualify
                if not cur.deleted and (best_x is None or cur.x < best_x):
                    best_x, best_p = cur.x, cur.point
                if cur.left is not None and cur.left.min_x is not None:
                    if best_x is None or cur.left.min_x < best_x:
                        best_x, best_p = cur.left.min_x, cur.left.min_point
                if strict and cur.key == bound:
                    cur = cur.left
                else:
                    cur = cur.right
            else:
                cur = cur.left
        return best_p


def min_below_query(ds: MinBelowStructure, q: Point) -> Point | None:
    return ds.min_below_query(q)


# ---------------------------------------------------------------------------
# Fast path: all 4n maximal squares in O(n log n).
# ---------------------------------------------------------------------------

def _ll_sides_sweep(points: list[Point], w: Fraction) -> list[Fraction]:
    """Sides of the maximal lower-left-anchored empty squares, one sweep pair.

    Right-edge blockers come from the open wedge 0 < dy < dx (minimum dx);
    top-edge and diagonal blockers from the closed wedge 0 < dx <= dy
    (minimum dy). Anchors are processed in groups of equal sweep coordinate,
    querying the whole group before inserting it, so that duplicates and
    shared coordinates never block their own group.
    """
    n = len(points)
    sides = [min(w - p.x, w - p.y) for p in points]

    # pass 1: wedge {0 < dy < dx}; process by y descending; key u = y - x.
    ds = MinBelowStructure()
    order = sorted(range(n), key=lambda i: (-points[i].y, points[i].x))
    k = 0
    while k < n:
        j = k
        y = points[order[k]].y
        while j < n and points[order[j]].y == y:
            j += 1
        for t in range(k, j):
            i = order[t]
            r = ds.min_below_query(points[i], strict=True)
            if r is not None:
                sides[i] = min(sides[i], r.x - points[i].x)
        for t in range(k, j):
            ds.insert(points[order[t]])
        k = j

    # pass 2: wedge {0 < dx <= dy} in swapped coordinates, weak inequality.
    ds = MinBelowStructure()
    swapped = [Point(p.y, p.x) for p in points]
    order = sorted(range(n), key=lambda i: (-swapped[i].y, swapped[i].x))
    k = 0
    while k < n:
        j = k
        y = swapped[order[k]].y
        while j < n and swapped[order[j]].y == y:
            j += 1
        for t in range(k, j):
            i = order[t]
            r = ds.min_below_query(swapped[i], strict=False)
            if r is not None:
                sides[i] = min(sides[i], r.x - swapped[i].x)
        for t in range(k, j):
            ds.insert(swapped[order[t]])
        k = j
    return sides


def all_maximal_squares_fast(inst: Instance) -> list[AnchoredSquare]:
    """All 4n maximal squares via four reflected lower-left sweeps."""
    w = inst.side
    out: list[AnchoredSquare] = []
    by_role: dict[str, list[Fraction]] = {}
    for role in ROLES:
        dx, dy = _ROLE_DIR[role]
        pts_ = [Point(p.x if dx > 0 else w - p.x, p.y if dy > 0 else w - p.y)
                for p in inst.anchors]
        by_role[role] = _ll_sides_sweep(pts_, w)
    for i in range(inst.n):
        for role in ROLES:
            out.append(AnchoredSquare(i, role, by_role[role][i]))
    return out


def _integer_instance(inst: Instance) -> bool:
    return (inst.side.denominator == 1
            and all(p.x.denominator == 1 and p.y.denominator == 1 for p in inst.anchors))


def maximal_square_rects(inst: Instance, squares: Sequence[AnchoredSquare] | None = None) -> list[Rect]:
    if squares is None:
        squares = all_maximal_squares_fast(inst)
    return [sq.rect_for(inst) for sq in squares if sq.side > 0]


def compute_reach(inst: Instance) -> Region:
    if inst.n == 0:
        raise EmptyInstanceError("reach of an empty anchor set is undefined")
    return region_union(maximal_square_rects(inst))


def reach_area(inst: Instance) -> Fraction:
    """Exact area of the reach (sweep over the 4n squares, no region built)."""
    if inst.n == 0:
        raise EmptyInstanceError("reach of an empty anchor set is undefined")
    if _integer_instance(inst):
        try:
            from . import fastpath
            return Fraction(fastpath.reach_area_int(inst))
        except ImportError:
            pass
    return rect_union_area(maximal_square_rects(inst))


SIDES = ("bottom", "right", "top", "left")


def touched_sides_of_rects(rects: Sequence[Rect], w: Fraction) -> set[str]:
    touched = set()
    for r in rects:
        if r.lo.y == 0:
            touched.add("bottom")
        if r.hi.y == w:
            touched.add("top")
        if r.lo.x == 0:
            touched.add("left")
        if r.hi.x == w:
            touched.add("right")
    return touched


def is_trivial(inst: Instance) -> tuple[bool, str | None]:
    """True iff the reach misses a full container side; also names the side."""
    if inst.n == 0:
        raise EmptyInstanceError("triviality of an empty anchor set is undefined")
    touched = touched_sides_of_rects(maximal_square_rects(inst), inst.side)
    for side in SIDES:
        if side not in touched:
            return True, side
    return False, None
