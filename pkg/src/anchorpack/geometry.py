"""Exact rational planar geometry: points, rectangles, rectilinear regions.

All coordinates are `fractions.Fraction`. Every operation here is exact;
floating point never enters this module. Regions are unions of axis-aligned
rectangles kept in a canonical vertical-slab decomposition, with boundary
loops derivable on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction


def scalar(value) -> Fraction:
    """Coerce ints, Fractions and strings ("p", "p/q", "0.25") to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("refusing float -> Fraction coercion; pass a string or Fraction")
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


def format_scalar(value: Fraction) -> str:
    """Canonical string form: "p" when the denominator is 1, else "p/q"."""
    return str(Fraction(value))


@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    def __iter__(self):
        yield self.x
        yield self.y

    def translated(self, dx, dy) -> "Point":
        return Point(self.x + dx, self.y + dy)


def pt(x, y) -> Point:
    return Point(scalar(x), scalar(y))


@dataclass(frozen=True, slots=True)
class Rect:
    """Closed axis-aligned rectangle [lo.x, hi.x] x [lo.y, hi.y]."""

    lo: Point
    hi: Point

    def __post_init__(self):
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise ValueError(f"malformed rect {self}")

    @property
    def width(self) -> Fraction:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> Fraction:
        return self.hi.y - self.lo.y

    @property
    def area(self) -> Fraction:
        return self.width * self.height

    def is_degenerate(self) -> bool:
        return self.width == 0 or self.height == 0

    def contains_point(self, p: Point, closed: bool = True) -> bool:
        if closed:
            return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y
        return self.lo.x < p.x < self.hi.x and self.lo.y < p.y < self.hi.y

    def contains_rect(self, other: "Rect") -> bool:
        return (self.lo.x <= other.lo.x and other.hi.x <= self.hi.x
                and self.lo.y <= other.lo.y and other.hi.y <= self.hi.y)

    def intersection(self, other: "Rect") -> "Rect | None":
        lx = max(self.lo.x, other.lo.x)
        hx = min(self.hi.x, other.hi.x)
        ly = max(self.lo.y, other.lo.y)
        hy = min(self.hi.y, other.hi.y)
        if lx > hx or ly > hy:
            return None
        return Rect(Point(lx, ly), Point(hx, hy))

    def interiors_intersect(self, other: "Rect") -> bool:
        return (max(self.lo.x, other.lo.x) < min(self.hi.x, other.hi.x)
                and max(self.lo.y, other.lo.y) < min(self.hi.y, other.hi.y))

    def touches(self, other: "Rect") -> bool:
        """Closed-set contact: shares at least one point."""
        return (self.lo.x <= other.hi.x and other.lo.x <= self.hi.x
                and self.lo.y <= other.hi.y and other.lo.y <= self.hi.y)

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (self.lo, Point(self.hi.x, self.lo.y), self.hi, Point(self.lo.x, self.hi.y))


def rect(x0, y0, x1, y1) -> Rect:
    return Rect(pt(x0, y0), pt(x1, y1))


# ---------------------------------------------------------------------------
# Interval-measure tree: total covered length of a dynamic interval multiset
# over a fixed compressed coordinate axis.  Exact and O(log n) per update.
# ---------------------------------------------------------------------------

class _MeasureTree:
    def __init__(self, coords: Sequence[Fraction]):
        self.coords = list(coords)
        self.n = max(1, len(self.coords) - 1)
        self.count = [0] * (4 * self.n)
        self.covered = [Fraction(0)] * (4 * self.n)

    def _seg_len(self, lo: int, hi: int) -> Fraction:
        return self.coords[hi + 1] - self.coords[lo]

    def update(self, i: int, j: int, delta: int, node: int = 1, lo: int = 0, hi: int | None = None):
        """Add delta over elementary cells [i, j] inclusive."""
        if hi is None:
            hi = self.n - 1
        if j < lo or hi < i:
            return
        if i <= lo and hi <= j:
            self.count[node] += delta
        else:
            mid = (lo + hi) // 2
            self.update(i, j, delta, 2 * node, lo, mid)
            self.update(i, j, delta, 2 * node + 1, mid + 1, hi)
        if self.count[node] > 0:
            self.covered[node] = self._seg_len(lo, hi)
        elif lo == hi:
            self.covered[node] = Fraction(0)
        else:
            self.covered[node] = self.covered[2 * node] + self.covered[2 * node + 1]

    @property
    def total(self) -> Fraction:
        return self.covered[1]


def rect_union_area(rects: Iterable[Rect]) -> Fraction:
    """Exact area of a union of rectangles via a vertical sweep.

    Degenerate rectangles contribute nothing. O(n log n).
    """
    boxes = [r for r in rects if not r.is_degenerate()]
    if not boxes:
        return Fraction(0)
    ys = sorted({r.lo.y for r in boxes} | {r.hi.y for r in boxes})
    index = {y: i for i, y in enumerate(ys)}
    events = []  # (x, +1/-1, yi_lo, yi_hi-1)
    for r in boxes:
        events.append((r.lo.x, 1, index[r.lo.y], index[r.hi.y] - 1))
        events.append((r.hi.x, -1, index[r.lo.y], index[r.hi.y] - 1))
    events.sort(key=lambda e: (e[0], -e[1]))
    tree = _MeasureTree(ys)
    area = Fraction(0)
    prev_x = events[0][0]
    for x, delta, i, j in events:
        if x != prev_x:
            area += tree.total * (x - prev_x)
            prev_x = x
        tree.update(i, j, delta)
    return area


# ---------------------------------------------------------------------------
# Region: canonical vertical-slab decomposition of a rectilinear set.
# ---------------------------------------------------------------------------

def _merge_intervals(intervals: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    if not intervals:
        return []
    intervals.sort()
    out = [intervals[0]]
    for lo, hi in intervals[1:]:
        if lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


class Region:
    """A rectilinear point set stored as interior-disjoint rectangles.

    The canonical form merges vertically within x-slabs, then joins
    x-adjacent rectangles with identical y-intervals, yielding maximal
    vertical strips.
    """

    def __init__(self, rects: Sequence[Rect]):
        self.rects: list[Rect] = _canonical_slabs(rects)

    @staticmethod
    def empty() -> "Region":
        return Region([])

    def is_empty(self) -> bool:
        return not self.rects

    @property
    def area(self) -> Fraction:
        return sum((r.area for r in self.rects), Fraction(0))

    def bounding_box(self) -> Rect | None:
        if not self.rects:
            return None
        return Rect(
            Point(min(r.lo.x for r in self.rects), min(r.lo.y for r in self.rects)),
            Point(max(r.hi.x for r in self.rects), max(r.hi.y for r in self.rects)),
        )

    def contains_point(self, p: Point, closed: bool = True) -> bool:
        return any(r.contains_point(p, closed) for r in self.rects)

    def contains_rect(self, r: Rect) -> bool:
        """Exact test r subset-of region (as closed sets)."""
        if r.is_degenerate():
            # A segment or point: check it is covered by closed rects.
            return self._covers_degenerate(r)
        inter = [r.intersection(q) for q in self.rects]
        return rect_union_area([q for q in inter if q is not None]) == r.area

    def _covers_degenerate(self, r: Rect) -> bool:
        if r.width == 0 and r.height == 0:
            return self.contains_point(r.lo)
        pieces = [q.intersection(r) for q in self.rects]
        pieces = [q for q in pieces if q is not None]
        if not pieces:
            return False
        if r.width == 0:
            ivs = _merge_intervals([(q.lo.y, q.hi.y) for q in pieces])
            return len(ivs) == 1 and ivs[0] == (r.lo.y, r.hi.y)
        ivs = _merge_intervals([(q.lo.x, q.hi.x) for q in pieces])
        return len(ivs) == 1 and ivs[0] == (r.lo.x, r.hi.x)

    def intersection_area(self, other: "Region | Rect") -> Fraction:
        others = other.rects if isinstance(other, Region) else [other]
        pieces = []
        for a in self.rects:
            for b in others:
                q = a.intersection(b)
                if q is not None and not q.is_degenerate():
                    pieces.append(q)
        return rect_union_area(pieces)

    def equals(self, other: "Region") -> bool:
        a, b = self.area, other.area
        return a == b and self.intersection_area(other) == a

    def components(self) -> list["Region"]:
        """Connected components under closed-set (point-touch) adjacency."""
        n = len(self.rects)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i in range(n):
            for j in range(i + 1, n):
                if self.rects[i].touches(self.rects[j]):
                    parent[find(i)] = find(j)
        groups: dict[int, list[Rect]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(self.rects[i])
        return [Region(g) for g in groups.values()]

    def loops(self) -> list[list[Point]]:
        """Boundary loops; outer loops CCW, hole loops CW."""
        return _extract_loops(self.rects)

    def hole_count(self) -> int:
        return sum(1 for lp in self.loops() if _loop_signed_area(lp) < 0)

    def component_count(self) -> int:
        return len(self.components())

    def __repr__(self):
        return f"Region({self.rects!r})"


def _canonical_slabs(rects: Sequence[Rect]) -> list[Rect]:
    boxes = [r for r in rects if not r.is_degenerate()]
    if not boxes:
        return []
    xs = sorted({r.lo.x for r in boxes} | {r.hi.x for r in boxes})
    slabs: list[tuple[Fraction, Fraction, tuple]] = []  # (x0, x1, y-intervals)
    for x0, x1 in zip(xs, xs[1:]):
        ivs = _merge_intervals([(r.lo.y, r.hi.y) for r in boxes
                                if r.lo.x <= x0 and x1 <= r.hi.x])
        if ivs:
            slabs.append((x0, x1, tuple(ivs)))
    # join x-adjacent slabs with identical y-interval sets
    out: list[Rect] = []
    open_slab: tuple[Fraction, Fraction, tuple] | None = None
    for x0, x1, ivs in slabs:
        if open_slab is not None and open_slab[1] == x0 and open_slab[2] == ivs:
            open_slab = (open_slab[0], x1, ivs)
        else:
            if open_slab is not None:
                out.extend(Rect(Point(open_slab[0], lo), Point(open_slab[1], hi))
                           for lo, hi in open_slab[2])
            open_slab = (x0, x1, ivs)
    if open_slab is not None:
        out.extend(Rect(Point(open_slab[0], lo), Point(open_slab[1], hi))
                   for lo, hi in open_slab[2])
    return out


def region_union(rects: Sequence[Rect]) -> Region:
    return Region(rects)


def region_subtract(universe: Rect, region: Region) -> Region:
    """Closure of universe minus region. Errors if region leaves the universe."""
    for r in region.rects:
        if not universe.contains_rect(r):
            raise ValueError(f"region rect {r} escapes the universe {universe}")
    xs = sorted({universe.lo.x, universe.hi.x}
                | {r.lo.x for r in region.rects} | {r.hi.x for r in region.rects})
    out: list[Rect] = []
    for x0, x1 in zip(xs, xs[1:]):
        covered = _merge_intervals([(r.lo.y, r.hi.y) for r in region.rects
                                    if r.lo.x <= x0 and x1 <= r.hi.x])
        cursor = universe.lo.y
        for lo, hi in covered:
            if lo > cursor:
                out.append(Rect(Point(x0, cursor), Point(x1, lo)))
            cursor = max(cursor, hi)
        if cursor < universe.hi.y:
            out.append(Rect(Point(x0, cursor), Point(x1, universe.hi.y)))
    return Region(out)


# ---------------------------------------------------------------------------
# Boundary loop extraction (exact, grid-complex walk).
# ---------------------------------------------------------------------------

def _extract_loops(rects: Sequence[Rect]) -> list[list[Point]]:
    if not rects:
        return []
    xs = sorted({r.lo.x for r in rects} | {r.hi.x for r in rects})
    ys = sorted({r.lo.y for r in rects} | {r.hi.y for r in rects})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    nx, ny = len(xs) - 1, len(ys) - 1
    covered = [[False] * ny for _ in range(nx)]
    for r in rects:
        for i in range(xi[r.lo.x], xi[r.hi.x]):
            for j in range(yi[r.lo.y], yi[r.hi.y]):
                covered[i][j] = True

    def cell(i, j):
        return covered[i][j] if 0 <= i < nx and 0 <= j < ny else False

    # Directed boundary edges with the covered cell on the left.
    edges: dict[tuple[int, int, str], tuple[int, int]] = {}
    for i in range(nx):
        for j in range(ny):
            if not covered[i][j]:
                continue
            if not cell(i, j - 1):
                edges[(i, j, 'E')] = (i + 1, j)          # bottom edge, eastward
            if not cell(i + 1, j):
                edges[(i + 1, j, 'N')] = (i + 1, j + 1)  # right edge, northward
            if not cell(i, j + 1):
                edges[(i + 1, j + 1, 'W')] = (i, j + 1)  # top edge, westward
            if not cell(i - 1, j):
                edges[(i, j + 1, 'S')] = (i, j)          # left edge, southward

    start_of = {}
    for (i, j, d) in edges:
        start_of.setdefault((i, j), []).append(d)

    # Walk loops keeping covered cells on the left; at saddles prefer the
    # left turn so distinct loops never merge through a pinch vertex.
    turn_pref = {'E': ['N', 'E', 'S'], 'N': ['W', 'N', 'E'],
                 'W': ['S', 'W', 'N'], 'S': ['E', 'S', 'W']}
    unused = set(edges)
    loops: list[list[Point]] = []
    while unused:
        key = min(unused)
        loop_keys = []
        cur = key
        while True:
            loop_keys.append(cur)
            unused.discard(cur)
            end = edges[cur]
            nxt = None
            for d in turn_pref[cur[2]]:
                cand = (end[0], end[1], d)
                if cand in unused or cand == key:
                    nxt = cand
                    break
            if nxt is None or nxt == key:
                break
            cur = nxt
        pts = [Point(xs[i], ys[j]) for (i, j, _d) in loop_keys]
        loops.append(_simplify_collinear(pts))
    return loops


def _simplify_collinear(pts: list[Point]) -> list[Point]:
    out = []
    n = len(pts)
    for k in range(n):
        a, b, c = pts[k - 1], pts[k], pts[(k + 1) % n]
        if (a.x == b.x == c.x) or (a.y == b.y == c.y):
            continue
        out.append(b)
    return out


def _loop_signed_area(loop: Sequence[Point]) -> Fraction:
    s = Fraction(0)
    n = len(loop)
    for k in range(n):
        a, b = loop[k], loop[(k + 1) % n]
        s += a.x * b.y - b.x * a.y
    return s / 2


# ---------------------------------------------------------------------------
# Polygon utilities (simple polygons, exact predicates).
# ---------------------------------------------------------------------------

def orient(a: Point, b: Point, c: Point) -> int:
    """Sign of the cross product (b-a) x (c-a): 1 ccw, -1 cw, 0 collinear."""
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (v > 0) - (v < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    if orient(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True if closed segments ab and cd share any point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    return (on_segment(c, a, b) or on_segment(d, a, b)
            or on_segment(a, c, d) or on_segment(b, c, d))


def polygon_is_simple(vertices: Sequence[Point]) -> bool:
    n = len(vertices)
    if n < 3:
        return False
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, d = vertices[j], vertices[(j + 1) % n]
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # adjacent edges may only share the common endpoint
                shared = b if j == i + 1 else a
                other1 = a if j == i + 1 else b
                other2 = d if j == i + 1 else c
                if on_segment(other2, a, b) and other2 != shared:
                    return False
                if on_segment(other1, c, d) and other1 != shared:
                    return False
            elif segments_intersect(a, b, c, d):
                return False
    return True


def polygon_area_shoelace(vertices: Sequence[Point]) -> Fraction:
    """Exact signed area (positive for CCW). Raises on self-intersection."""
    if not polygon_is_simple(vertices):
        raise ValueError("polygon is not simple")
    return _loop_signed_area(list(vertices))


def point_in_polygon(p: Point, vertices: Sequence[Point]) -> str:
    """'interior', 'boundary' or 'exterior', decided exactly (crossing test)."""
    n = len(vertices)
    for i in range(n):
        if on_segment(p, vertices[i], vertices[(i + 1) % n]):
            return 'boundary'
    crossings = 0
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            # exact x of the edge at height p.y compared to p.x
            t = (p.y - a.y) / (b.y - a.y)
            x = a.x + t * (b.x - a.x)
            if x > p.x:
                crossings += 1
    return 'interior' if crossings % 2 == 1 else 'exterior'


def convex_clip_halfplane(poly: list[Point], a: Point, b: Point) -> list[Point]:
    """Clip a convex polygon to the half-plane left of directed line ab."""
    if not poly:
        return []
    out: list[Point] = []
    n = len(poly)
    for i in range(n):
        cur, nxt = poly[i], poly[(i + 1) % n]
        cur_in = orient(a, b, cur) >= 0
        nxt_in = orient(a, b, nxt) >= 0
        if cur_in:
            out.append(cur)
        if cur_in != nxt_in:
            # exact intersection of cur-nxt with line ab
            dx1, dy1 = nxt.x - cur.x, nxt.y - cur.y
            dx2, dy2 = b.x - a.x, b.y - a.y
            denom = dx1 * dy2 - dy1 * dx2
            t = ((a.x - cur.x) * dy2 - (a.y - cur.y) * dx2) / denom
            out.append(Point(cur.x + t * dx1, cur.y + t * dy1))
    # drop exact duplicates
    dedup: list[Point] = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if dedup and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def convex_clip_rect(poly: list[Point], r: Rect) -> list[Point]:
    """Convex polygon intersect rectangle (CCW polygon in, CCW out)."""
    out = poly
    c = r.corners()
    for i in range(4):
        out = convex_clip_halfplane(out, c[i], c[(i + 1) % 4])
        if not out:
            return []
    return out


def convex_area(poly: Sequence[Point]) -> Fraction:
    if len(poly) < 3:
        return Fraction(0)
    return abs(_loop_signed_area(list(poly)))


def convex_minus_rect(poly: list[Point], r: Rect) -> list[list[Point]]:
    """Split a convex CCW polygon into convex pieces covering poly \\ int(r)."""
    pieces: list[list[Point]] = []
    c = r.corners()
    rest = poly
    for i in range(4):
        a, b = c[i], c[(i + 1) % 4]
        # piece strictly right of edge ab (outside the rect on this side)
        outside = convex_clip_halfplane(rest, b, a)
        if len(outside) >= 3 and convex_area(outside) > 0:
            pieces.append(outside)
        rest = convex_clip_halfplane(rest, a, b)
        if not rest:
            break
    return pieces


def convex_pair_overlap_area(p: list[Point], q: list[Point]) -> Fraction:
    """Exact area of the intersection of two convex CCW polygons."""
    out = p
    n = len(q)
    for i in range(n):
        out = convex_clip_halfplane(out, q[i], q[(i + 1) % n])
        if not out:
            return Fraction(0)
    return convex_area(out)


# ---------------------------------------------------------------------------
# Symmetry group of the square [0, W]^2 (dihedral, 8 elements).
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class D4:
    """(x, y) -> reflect/swap inside [0, W]^2: optionally swap axes first,
    then mirror each axis."""
    swap: bool
    neg_x: bool
    neg_y: bool

    def apply_point(self, p: Point, w: Fraction) -> Point:
        x, y = (p.y, p.x) if self.swap else (p.x, p.y)
        if self.neg_x:
            x = w - x
        if self.neg_y:
            y = w - y
        return Point(x, y)

    def apply_rect(self, r: Rect, w: Fraction) -> Rect:
        a = self.apply_point(r.lo, w)
        b = self.apply_point(r.hi, w)
        return Rect(Point(min(a.x, b.x), min(a.y, b.y)), Point(max(a.x, b.x), max(a.y, b.y)))

    def apply_region(self, reg: Region, w: Fraction) -> Region:
        return Region([self.apply_rect(r, w) for r in reg.rects])

    def inverse(self) -> "D4":
        if not self.swap:
            return self
        # (swap then mirror) inverted = mirror (swapped flags) then swap
        return D4(True, self.neg_y, self.neg_x)

    @property
    def name(self) -> str:
        return f"{'s' if self.swap else 'i'}{'x' if self.neg_x else '-'}{'y' if self.neg_y else '-'}"


ALL_D4 = [D4(s, nx, ny) for s in (False, True) for nx in (False, True) for ny in (False, True)]
IDENTITY = D4(False, False, False)
