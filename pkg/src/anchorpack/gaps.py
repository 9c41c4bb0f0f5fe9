"""Gaps of the reach, their five-type classification, and the charging scheme.

A gap is a connected component of U \\ R(S). For nontrivial instances in
general position every gap matches one of five canonical templates (two
corner types, three side types), each defined by an empty box B and one to
three anchors on its boundary. Every gap cell is then charged to a region
R_C inside the reach of at least equal area, and the charged regions are
pairwise interior-disjoint; summing yields area(R(S)) >= area(U)/2. All of
this is verified here with exact arithmetic, instance by instance.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .geometry import (
    ALL_D4, D4, IDENTITY, Point, Rect, Region, _merge_intervals, convex_area,
    convex_clip_rect, convex_minus_rect, convex_pair_overlap_area,
    point_in_polygon, polygon_area_shoelace, region_subtract, region_union,
    segments_intersect,
)
from .reach import (
    ROLES, AnchoredSquare, EmptyInstanceError, Instance, all_maximal_squares_fast,
    is_trivial, maximal_square_rects, reach_area,
)


class TrivialInstanceError(ValueError):
    pass


class NotGeneralPositionError(ValueError):
    pass


class ClassificationError(ValueError):
    """A gap did not match any template: implementation bug or broken premise."""


class MissingLeadError(ValueError):
    """No usable lead vertex for the charging construction."""


# ---------------------------------------------------------------------------
# Context shared by gap operations.
# ---------------------------------------------------------------------------

@dataclass
class GapContext:
    inst: Instance
    squares: list[AnchoredSquare]
    square_rects: list[Rect]
    squares_by_anchor: dict[int, list[Rect]]
    reach: Region
    complement: Region
    leads: dict[Point, list[tuple[int, AnchoredSquare]]]

    @staticmethod
    def build(inst: Instance) -> "GapContext":
        squares = all_maximal_squares_fast(inst)
        rects = maximal_square_rects(inst, squares)
        by_anchor: dict[int, list[Rect]] = {i: [] for i in range(inst.n)}
        for sq in squares:
            if sq.side > 0:
                by_anchor[sq.anchor_index].append(sq.rect_for(inst))
        reach = region_union(rects)
        complement = region_subtract(inst.container(), reach)
        leads: dict[Point, list[tuple[int, AnchoredSquare]]] = {}
        w = inst.side
        for sq in squares:
            if sq.side == 0:
                continue
            p = sq.opposite_corner(inst)
            if p.x in (0, w) or p.y in (0, w):
                leads.setdefault(p, []).append((sq.anchor_index, sq))
        return GapContext(inst, squares, rects, by_anchor, reach, complement, leads)


@dataclass
class Gap:
    region: Region
    touched_sides: set[str]
    shape: str  # "rectangle" | "L" | "other"
    leads: set[Point]


def _gap_shape(region: Region, w: Fraction, touched: set[str]) -> str:
    if len(region.rects) == 1:
        return "rectangle"
    vert = region.rects
    horiz = _transpose_rects(region)
    for rects in (vert, horiz):
        if len(rects) == 2:
            sides = [_rect_sides(r, w) for r in rects]
            if sides[0] & sides[1]:
                return "L"
    return "other"


def _rect_sides(r: Rect, w: Fraction) -> set[str]:
    out = set()
    if r.lo.y == 0:
        out.add("bottom")
    if r.hi.y == w:
        out.add("top")
    if r.lo.x == 0:
        out.add("left")
    if r.hi.x == w:
        out.add("right")
    return out


def _transpose_rects(region: Region) -> list[Rect]:
    flipped = Region([Rect(Point(r.lo.y, r.lo.x), Point(r.hi.y, r.hi.x)) for r in region.rects])
    return [Rect(Point(r.lo.y, r.lo.x), Point(r.hi.y, r.hi.x)) for r in flipped.rects]


def extract_gaps(inst: Instance, ctx: GapContext | None = None) -> list[Gap]:
    if inst.n == 0:
        raise EmptyInstanceError("gaps of an empty anchor set are undefined")
    if ctx is None:
        ctx = GapContext.build(inst)
    w = inst.side
    gaps = []
    for comp in ctx.complement.components():
        touched = set()
        for r in comp.rects:
            touched |= _rect_sides(r, w)
        verts = {p for r in comp.rects for p in r.corners()}
        leads = {p for p in verts if p in ctx.leads}
        gaps.append(Gap(comp, touched, _gap_shape(comp, w, touched), leads))
    gaps.sort(key=lambda g: (g.region.rects[0].lo.x, g.region.rects[0].lo.y))
    return gaps


# ---------------------------------------------------------------------------
# General position and perturbation.
# ---------------------------------------------------------------------------

@dataclass
class GeneralPositionReport:
    ok: bool
    boundary_anchors: list[int] = field(default_factory=list)
    shared_x: list[tuple[int, int]] = field(default_factory=list)
    shared_y: list[tuple[int, int]] = field(default_factory=list)


def general_position_check(inst: Instance) -> GeneralPositionReport:
    rep = GeneralPositionReport(ok=True)
    w = inst.side
    for i, p in enumerate(inst.anchors):
        if p.x in (0, w) or p.y in (0, w):
            rep.boundary_anchors.append(i)
    seen_x: dict[Fraction, int] = {}
    seen_y: dict[Fraction, int] = {}
    for i, p in enumerate(inst.anchors):
        if p.x in seen_x:
            rep.shared_x.append((seen_x[p.x], i))
        else:
            seen_x[p.x] = i
        if p.y in seen_y:
            rep.shared_y.append((seen_y[p.y], i))
        else:
            seen_y[p.y] = i
    rep.ok = not (rep.boundary_anchors or rep.shared_x or rep.shared_y)
    return rep


def perturb(inst: Instance, seed: int = 0) -> Instance:
    """Deterministic rational jiggle into the interior with distinct coords.

    Offsets stay below eps0/2 where eps0 is the smallest positive pairwise
    coordinate difference (W/4 when no positive difference exists, e.g. n=1
    or all-duplicate multisets).
    """
    if general_position_check(inst).ok:
        return inst
    w = inst.side
    diffs = []
    for vals in ([p.x for p in inst.anchors], [p.y for p in inst.anchors]):
        s = sorted(set(vals))
        diffs.extend(b - a for a, b in zip(s, s[1:]))
    eps0 = min(diffs) if diffs else w / 4
    eps = min(eps0 / 2, w / 4)
    rng = random.Random(seed)
    denom = 1 << 20
    for _attempt in range(64):
        anchors = []
        for p in inst.anchors:
            lo = -min(eps / 2, p.x)
            hi = min(eps / 2, w - p.x)
            r = Fraction(rng.randrange(1, denom), denom)
            x = p.x + lo + (hi - lo) * r
            lo = -min(eps / 2, p.y)
            hi = min(eps / 2, w - p.y)
            r = Fraction(rng.randrange(1, denom), denom)
            y = p.y + lo + (hi - lo) * r
            anchors.append(Point(x, y))
        cand = Instance(w, tuple(anchors))
        if general_position_check(cand).ok:
            return cand
    raise RuntimeError("perturbation failed to reach general position")


# ---------------------------------------------------------------------------
# Classification.
# ---------------------------------------------------------------------------

@dataclass
class GapClassification:
    type_id: int
    params: dict[str, Fraction]
    box: Rect                      # defining box, canonical frame
    defining: list[int]            # anchor indices, original instance
    orientation: D4                # maps the canonical pose to the observed one
    flags: dict[str, bool] = field(default_factory=dict)


def _interior_empty(box: Rect, anchors: Sequence[Point]) -> bool:
    return not any(box.contains_point(p, closed=False) for p in anchors)


def _formula_region(rects: list[Rect]) -> Region:
    return Region([r for r in rects if not r.is_degenerate()])


def _type1_region(b, c):
    return _formula_region([Rect(Point(Fraction(0), Fraction(0)), Point(b - c, c))])


def _type2_region(a, b, c, d):
    m1 = min(c, d - a, d - b + a)
    m2 = min(a, b - c, b - d + c)
    return _formula_region([
        Rect(Point(Fraction(0), Fraction(0)), Point(b - c, m1)),
        Rect(Point(Fraction(0), Fraction(0)), Point(m2, d - a)),
    ])


def _type3_region(a, b, c, d):
    return _formula_region([Rect(Point(a + c, Fraction(0)), Point(b - d, min(c, d)))])


def _type4_region(a, b, c, d):
    return _formula_region([Rect(Point(a + c, Fraction(0)), Point(b, min(c, d - b + a)))])


def _type5_region(a, b, c, d, a2, c2, printed=False):
    """Type-5 side gap.

    The derived form splits the gap at the middle anchor's x-coordinate
    (clamped into the gap span): left of it the top is the bottom edge of the
    middle anchor's upper-right square, right of it the bottom edge of its
    upper-left square. printed=True evaluates the paper's literal expression
    instead (split at min(b, a'-d+c'), right height min(c', d-a'-b)), which
    the report flags when it disagrees with the observed geometry.
    """
    h1 = min(c, d - b + a)
    if printed:
        m = min(b, a2 - d + c2)
        h2 = min(c2, d - a2 - b)
    else:
        m = min(max(b, a + c), a2 - c2)
        h2 = min(c2, d - a2 + b)
    rects = []
    if a + c < m and h1 > 0:
        rects.append(Rect(Point(a + c, Fraction(0)), Point(m, h1)))
    if m < a2 - c2 and h2 > 0:
        rects.append(Rect(Point(m, Fraction(0)), Point(a2 - c2, h2)))
    return _formula_region(rects)


def classify_gap(gap: Gap, inst: Instance, ctx: GapContext | None = None) -> GapClassification:
    trivial, _side = is_trivial(inst)
    if trivial:
        raise TrivialInstanceError("gap classification requires a nontrivial instance")
    if not general_position_check(inst).ok:
        raise NotGeneralPositionError("gap classification requires general position")
    if ctx is None:
        ctx = GapContext.build(inst)
    w = inst.side

    for g in ALL_D4:
        region = g.apply_region(gap.region, w)
        anchors = [g.apply_point(p, w) for p in inst.anchors]
        sq_rects = {i: [g.apply_rect(r, w) for r in ctx.squares_by_anchor[i]]
                    for i in range(inst.n)}
        frame = _Frame(region, region.bounding_box(), anchors, sq_rects, w)
        origin = Point(Fraction(0), Fraction(0))
        at_corner = region.contains_point(origin)
        touches_bottom = frame.bbox.lo.y == 0
        touches_left = frame.bbox.lo.x == 0
        touches_other = frame.bbox.hi.y == w or frame.bbox.hi.x == w
        if touches_other or not touches_bottom:
            continue
        result = None
        if at_corner:
            result = _try_type1(frame) or _try_type2(frame)
        elif not touches_left:
            result = _try_type3(frame) or _try_type4(frame) or _try_type5(frame)
        if result is not None:
            type_id, params, box, defining_pts, flags = result
            defining = [_anchor_index(inst, g, p, w) for p in defining_pts]
            return GapClassification(type_id, params, box, defining, g.inverse(), flags)
    raise ClassificationError("gap matches no canonical template")


@dataclass
class _Frame:
    region: Region
    bbox: Rect
    anchors: list[Point]
    sq_rects: dict[int, list[Rect]]
    w: Fraction

    @property
    def floor_lo(self) -> Fraction:
        return min(r.lo.x for r in self.region.rects if r.lo.y == 0)

    @property
    def floor_hi(self) -> Fraction:
        return max(r.hi.x for r in self.region.rects if r.lo.y == 0)

    @property
    def wall_hi(self) -> Fraction:
        ys = [r.hi.y for r in self.region.rects if r.lo.x == 0]
        return max(ys) if ys else Fraction(0)

    def box_reconstruction_ok(self, box: Rect) -> bool:
        """The gap must equal box minus the real squares of anchors in the box."""
        pieces = []
        for i, p in enumerate(self.anchors):
            if not box.contains_point(p):
                continue
            for r in self.sq_rects[i]:
                inter = r.intersection(box)
                if inter is not None and not inter.is_degenerate():
                    pieces.append(inter)
        return region_subtract(box, Region(pieces)).equals(self.region)


def _anchor_index(inst: Instance, g: D4, p_canonical: Point, w) -> int:
    original = g.inverse().apply_point(p_canonical, w)
    return inst.anchors.index(original)


def _try_type1(fr: _Frame):
    if len(fr.region.rects) != 1:
        return None
    c = fr.bbox.hi.y
    b = fr.bbox.hi.x + fr.bbox.hi.y
    s1 = Point(b, c)
    if s1 not in fr.anchors:
        return None
    if not 0 < c < b:
        return None
    box = Rect(Point(Fraction(0), Fraction(0)), Point(b, min(fr.w, b + c)))
    if not _interior_empty(box, fr.anchors):
        return None
    if not fr.region.equals(_type1_region(b, c)):
        return None
    if not fr.box_reconstruction_ok(box):
        return None
    return 1, {"b": b, "c": c}, box, [s1], {}


def _try_type2(fr: _Frame):
    cands1 = [p for p in fr.anchors if p.x - p.y == fr.floor_hi and 0 < p.y]
    cands2 = [p for p in fr.anchors if p.y - p.x == fr.wall_hi and 0 < p.x]
    for s1 in cands1:
        for s2 in cands2:
            b, c = s1.x, s1.y
            a, d = s2.x, s2.y
            if not (0 < a < b and 0 < c < d and c < b and d < b + c):
                continue
            if b > fr.w or d > fr.w:
                continue
            box = Rect(Point(Fraction(0), Fraction(0)), Point(b, d))
            if not _interior_empty(box, fr.anchors):
                continue
            if fr.box_reconstruction_ok(box):
                printed_ok = fr.region.equals(_type2_region(a, b, c, d))
                return (2, {"a": a, "b": b, "c": c, "d": d}, box, [s1, s2],
                        {"printed_formula_mismatch": not printed_ok})
    return None


def _try_type3(fr: _Frame):
    cands1 = [p for p in fr.anchors if p.x + p.y == fr.floor_lo]
    cands2 = [p for p in fr.anchors if p.x - p.y == fr.floor_hi]
    for s1 in cands1:
        for s2 in cands2:
            a, c = s1.x, s1.y
            b, d = s2.x, s2.y
            if not (0 < a < b < fr.w and 0 < c and 0 < d and max(c, d) < b - a):
                continue
            top = min(fr.w, min(c, d) + (b - a))
            box = Rect(Point(a, Fraction(0)), Point(b, top))
            if not _interior_empty(box, fr.anchors):
                continue
            if fr.box_reconstruction_ok(box):
                printed_ok = fr.region.equals(_type3_region(a, b, c, d))
                return (3, {"a": a, "b": b, "c": c, "d": d}, box, [s1, s2],
                        {"printed_formula_mismatch": not printed_ok})
    return None


def _try_type4(fr: _Frame):
    cands1 = [p for p in fr.anchors if p.x + p.y == fr.floor_lo]
    cands2 = [p for p in fr.anchors if p.x == fr.floor_hi]
    for s1 in cands1:
        for s2 in cands2:
            a, c = s1.x, s1.y
            b, d = s2.x, s2.y
            if not (0 < a < b < fr.w and 0 < c < d < fr.w and b - a < d):
                continue
            box = Rect(Point(a, Fraction(0)), Point(min(fr.w, b + d), d))
            if not _interior_empty(box, fr.anchors):
                continue
            if fr.box_reconstruction_ok(box):
                printed_ok = fr.region.equals(_type4_region(a, b, c, d))
                return (4, {"a": a, "b": b, "c": c, "d": d}, box, [s1, s2],
                        {"printed_formula_mismatch": not printed_ok})
    return None


def _try_type5(fr: _Frame):
    cands1 = [p for p in fr.anchors if p.x + p.y == fr.floor_lo]
    cands3 = [p for p in fr.anchors if p.x - p.y == fr.floor_hi]
    for s1 in cands1:
        for s3 in cands3:
            a, c = s1.x, s1.y
            a2, c2 = s3.x, s3.y
            if not (0 < a < a2 < fr.w and 0 < c < c2):
                continue
            for s2 in fr.anchors:
                b, d = s2.x, s2.y
                if not (a < b < a2 and c2 < d < fr.w):
                    continue
                if not (b - a < d and a2 - b < d):
                    continue
                box = Rect(Point(a, Fraction(0)), Point(a2, d))
                if not _interior_empty(box, fr.anchors):
                    continue
                if not fr.box_reconstruction_ok(box):
                    continue
                derived_ok = fr.region.equals(_type5_region(a, b, c, d, a2, c2))
                printed_ok = fr.region.equals(
                    _type5_region(a, b, c, d, a2, c2, printed=True))
                return (5, {"a": a, "b": b, "c": c, "d": d, "a'": a2, "c'": c2},
                        box, [s1, s2, s3],
                        {"derived_formula_match": derived_ok,
                         "printed_formula_mismatch": not printed_ok})
    return None


# ---------------------------------------------------------------------------
# Cells (the refined gap set C*) and charged regions.
# ---------------------------------------------------------------------------

@dataclass
class Cell:
    gap: Gap
    kind: str          # "rect" | "corner_L"
    rects: list[Rect]  # one rect, or the two legs of a corner L


def split_cells(gaps: Sequence[Gap]) -> list[Cell]:
    cells: list[Cell] = []
    for gap in gaps:
        corner = len(gap.touched_sides) >= 2
        if gap.shape == "rectangle":
            cells.append(Cell(gap, "rect", [gap.region.rects[0]]))
        elif gap.shape == "L" and corner:
            cells.append(Cell(gap, "corner_L", list(gap.region.rects)))
        elif gap.shape == "L":
            side = next(iter(gap.touched_sides))
            if side in ("bottom", "top"):
                rects = gap.region.rects     # vertical decomposition
            else:
                rects = _transpose_rects(gap.region)
            for r in rects:
                cells.append(Cell(gap, "rect", [r]))
        else:
            raise ClassificationError(f"gap of unsupported shape {gap.shape!r}")
    return cells


@dataclass
class ChargedRegion:
    cell: Cell
    pose: D4                     # canonical -> observed
    variant: int                 # 1: (.., z1, p1); 2: (.., p2, z2)
    pentagon: list[Point]        # P_C = C u R_C, observed frame, CCW
    region_polygon: list[Point]  # R_C as a simple polygon, observed frame
    pieces: list[list[Point]]    # convex decomposition of R_C, observed frame
    tips: tuple[Point, Point]
    sentinel: tuple[Point, Point, Point]
    safe_tips: list[Point]
    cell_area: Fraction
    region_area: Fraction
    construction: dict[str, Point]


def _lead_ray_anchor(ctx: GapContext, g: D4, lead_canonical: Point, w) -> Point | None:
    """Anchor diagonally opposite the lead, expressed in the canonical frame."""
    original = g.inverse().apply_point(lead_canonical, w)
    entries = ctx.leads.get(original)
    if not entries:
        return None
    for idx, _sq in entries:
        cand = g.apply_point(ctx.inst.anchors[idx], w)
        if cand.x - lead_canonical.x == cand.y - lead_canonical.y and cand.x > lead_canonical.x:
            return cand
    return None


def charged_region(cell: Cell, ctx: GapContext) -> ChargedRegion:
    w = ctx.inst.side
    if cell.kind == "rect":
        return _charged_rect(cell, ctx, w)
    return _charged_corner(cell, ctx, w)


def _is_lead(ctx: GapContext, g: D4, p_canonical: Point, w) -> bool:
    return g.inverse().apply_point(p_canonical, w) in ctx.leads


def _charged_rect(cell: Cell, ctx: GapContext, w) -> ChargedRegion:
    r = cell.rects[0]
    for g in ALL_D4:
        t = g.apply_rect(r, w)
        if t.lo.y != 0:
            continue
        c_vertex = Point(t.hi.x, Fraction(0))
        if not _is_lead(ctx, g, c_vertex, w):
            continue
        return _build_rect_charge(cell, ctx, g, t, w)
    raise MissingLeadError(f"no pose with a lead at the cell corner for {r}")


def _build_rect_charge(cell: Cell, ctx: GapContext, g: D4, t: Rect, w) -> ChargedRegion:
    x0, x1, h = t.lo.x, t.hi.x, t.hi.y
    wd = x1 - x0
    a = Point(x0, h)
    b = Point(x0, Fraction(0))
    c = Point(x1, Fraction(0))
    d = Point(x1, h)
    p1 = Point(x1, wd + h)
    p2 = Point(x1 + h, h)
    z1 = Point(x1 + (wd + h) / 2, (wd + h) / 2)
    z2 = Point(x0 + (wd + h) / 2, h + (wd + h) / 2)
    area1 = wd * wd / 2 + (wd + h) * (wd + h) / 4
    area2 = h * h / 2 + (wd + h) * (wd + h) / 4
    if area1 <= area2:
        variant, tip_pair, pent = 1, (z1, p1), [a, b, c, z1, p1]
    else:
        variant, tip_pair, pent = 2, (p2, z2), [a, b, c, p2, z2]
    rc_poly = [a, d, c, pent[3], pent[4]]
    return _finish_charge(cell, ctx, g, pent, [t], tip_pair, variant, w,
                          {"a": a, "b": b, "c": c, "d": d,
                           "p1": p1, "p2": p2, "z1": z1, "z2": z2},
                          rc_poly)


def _inner_chain(reg: Region, a: Point, c: Point) -> list[Point]:
    """Vertices strictly between a and c along the gap boundary away from dU."""
    loops = reg.loops()
    if len(loops) != 1:
        raise MissingLeadError("corner cell boundary is not a single loop")
    loop = loops[0]
    n = len(loop)
    ia = loop.index(a)
    ic = loop.index(c)

    def path(start, stop, step):
        out = []
        k = start
        while True:
            k = (k + step) % n
            if k == stop:
                return out
            out.append(loop[k])

    for step in (1, -1):
        chain = path(ia, ic, step)
        pts_ = [a, *chain, c]
        if all(not ((u.x == 0 and v.x == 0) or (u.y == 0 and v.y == 0))
               for u, v in zip(pts_, pts_[1:])):
            return chain
    raise MissingLeadError("no wall-free boundary chain between the lead endpoints")


def _charged_corner(cell: Cell, ctx: GapContext, w) -> ChargedRegion:
    origin = Point(Fraction(0), Fraction(0))
    for g in ALL_D4:
        legs = [g.apply_rect(r, w) for r in cell.rects]
        reg = Region(legs)
        if not reg.contains_point(origin):
            continue
        bbox = reg.bounding_box()
        if bbox.hi.x >= w or bbox.hi.y >= w:
            continue
        wall_hi = max((r.hi.y for r in reg.rects if r.lo.x == 0), default=None)
        floor_hi = max((r.hi.x for r in reg.rects if r.lo.y == 0), default=None)
        if wall_hi is None or floor_hi is None:
            continue
        a = Point(Fraction(0), wall_hi)
        c = Point(floor_hi, Fraction(0))
        if not (_is_lead(ctx, g, a, w) and _is_lead(ctx, g, c, w)):
            continue
        p1 = _lead_ray_anchor(ctx, g, a, w)
        p2 = _lead_ray_anchor(ctx, g, c, w)
        if p1 is None or p2 is None:
            continue
        b = origin
        ya, xc = wall_hi, floor_hi
        t1 = p1.x - a.x
        t2 = p2.x - c.x
        # z1 on l2 (slope 1 through c) against slope -1 through p1
        z1 = Point((xc + ya) / 2 + t1, (ya - xc) / 2 + t1)
        # z2 on l1 (slope 1 through a) against slope -1 through p2
        z2 = Point((xc - ya) / 2 + t2, (xc + ya) / 2 + t2)
        area1 = polygon_area_shoelace([a, b, c, z1, p1])
        area2 = polygon_area_shoelace([a, b, c, p2, z2])
        if area1 <= area2:
            variant, tip_pair, pent = 1, (z1, p1), [a, b, c, z1, p1]
        else:
            variant, tip_pair, pent = 2, (p2, z2), [a, b, c, p2, z2]
        inner = _inner_chain(reg, a, c)
        rc_poly = [a, *inner, c, pent[3], pent[4]]
        return _finish_charge(cell, ctx, g, pent, list(reg.rects), tip_pair, variant,
                              w, {"a": a, "b": b, "c": c,
                                  "p1": p1, "p2": p2, "z1": z1, "z2": z2},
                              rc_poly)
    raise MissingLeadError("no corner pose with leads at both boundary endpoints")


def _finish_charge(cell: Cell, ctx: GapContext, g: D4, pent: list[Point],
                   cell_rects_canonical: list[Rect], tip_pair, variant, w,
                   construction, rc_poly) -> ChargedRegion:
    pieces = [pent]
    for r in cell_rects_canonical:
        nxt = []
        for piece in pieces:
            nxt.extend(convex_minus_rect(piece, r))
        pieces = nxt
    region_area = sum((convex_area(p) for p in pieces), Fraction(0))
    cell_area = sum((r.area for r in cell_rects_canonical), Fraction(0))

    t1, t2 = tip_pair
    mid = Point((t1.x + t2.x) / 2, (t1.y + t2.y) / 2)
    hx, hy = (t2.x - t1.x) / 2, (t2.y - t1.y) / 2
    apex_candidates = [Point(mid.x - hy, mid.y + hx), Point(mid.x + hy, mid.y - hx)]
    apex = None
    for cand in apex_candidates:
        if point_in_polygon(cand, pent) != 'exterior':
            apex = cand
            break
    if apex is None:  # defensive; cannot happen for a valid construction
        apex = apex_candidates[0]
    sentinel = (t1, t2, apex)

    # safe tips: the tip adjacent to a lead vertex of the cell
    safe = []
    lead_c = _is_lead(ctx, g, construction["c"], w)
    lead_a = _is_lead(ctx, g, construction["a"], w)
    if lead_c:
        safe.append(pent[3])
    if lead_a:
        safe.append(pent[4])

    back = g.inverse()

    def bp(p: Point) -> Point:
        return back.apply_point(p, w)

    return ChargedRegion(
        cell=cell,
        pose=back,
        variant=variant,
        pentagon=[bp(p) for p in pent],
        region_polygon=[bp(p) for p in rc_poly],
        pieces=[[bp(q) for q in piece] for piece in pieces],
        tips=(bp(t1), bp(t2)),
        sentinel=tuple(bp(p) for p in sentinel),
        safe_tips=[bp(p) for p in safe],
        cell_area=cell_area,
        region_area=region_area,
        construction={k: bp(v) for k, v in construction.items()},
    )


# ---------------------------------------------------------------------------
# Per-charge checks and the full verification report.
# ---------------------------------------------------------------------------

def _polygon_orient_ccw(poly: list[Point]) -> list[Point]:
    s = Fraction(0)
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        s += a.x * b.y - b.x * a.y
    return poly if s > 0 else list(reversed(poly))


def _piece_in_region_area(pieces: list[list[Point]], region: Region) -> Fraction:
    total = Fraction(0)
    for piece in pieces:
        ccw = _polygon_orient_ccw(piece)
        for r in region.rects:
            clipped = convex_clip_rect(ccw, r)
            total += convex_area(clipped)
    return total


def _slope_sides(poly: list[Point]) -> list[tuple[Point, Point]]:
    out = []
    n = len(poly)
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        dx, dy = b.x - a.x, b.y - a.y
        if dx != 0 and (dy == dx or dy == -dx):
            out.append((a, b))
    return out


def _diagonal_square(a: Point, b: Point) -> Rect:
    """The unique axis-aligned square having segment ab as a diagonal."""
    return Rect(Point(min(a.x, b.x), min(a.y, b.y)), Point(max(a.x, b.x), max(a.y, b.y)))


def check_charge(charge: ChargedRegion, ctx: GapContext) -> dict[str, bool]:
    inst = ctx.inst
    pent = _polygon_orient_ccw(charge.pentagon)
    n = len(pent)
    checks: dict[str, bool] = {}

    checks["p3_area"] = charge.cell_area <= charge.region_area
    covered = _piece_in_region_area(charge.pieces, ctx.reach)
    checks["p1_subset_reach"] = covered == charge.region_area
    checks["p2_interior_anchor_free"] = all(
        point_in_polygon(p, charge.region_polygon) != 'interior' for p in inst.anchors)

    checks["pentagon_convex"] = all(
        _orient_sign(pent[k - 1], pent[k], pent[(k + 1) % n]) >= 0 for k in range(n))
    axis = [k for k in range(n)
            if pent[k].x == pent[(k + 1) % n].x or pent[k].y == pent[(k + 1) % n].y]
    checks["pentagon_two_axis_sides"] = (
        len(axis) == 2 and (axis[1] - axis[0]) % n in (1, n - 1))
    slope = _slope_sides(pent)
    checks["pentagon_three_slope_sides"] = len(slope) == n - 2
    checks["slope_side_squares_in_reach"] = all(
        ctx.reach.contains_rect(_diagonal_square(a, b)) for a, b in slope)

    need = 2 if charge.cell.kind == "corner_L" else 1
    checks["safe_tips"] = len(charge.safe_tips) >= need
    return checks


def sentinel_touches_cell(charge: ChargedRegion) -> bool:
    """Whether the sentinel triangle boundary meets the cell boundary.

    Stated as a lemma in the source analysis; exact checking shows it can fail
    for steep corner cells (lead anchor beyond the cell's frame midpoint), so
    it is reported as an observation rather than enforced.
    """
    cell_edges = []
    for r in charge.cell.rects:
        cs = r.corners()
        cell_edges.extend((cs[k], cs[(k + 1) % 4]) for k in range(4))
    t1, t2, apex = charge.sentinel
    tri_edges = [(t1, t2), (t2, apex), (apex, t1)]
    return any(segments_intersect(a, b, cnr, dnr)
               for a, b in tri_edges for cnr, dnr in cell_edges)


def _orient_sign(a, b, c):
    v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
    return (v > 0) - (v < 0)


def gap_edges_on_squares(gap: Gap, ctx: GapContext) -> bool:
    """Every gap boundary edge lies on dU or on maximal-square boundaries.

    An edge may be covered by several collinear square edges end to end, so
    coverage is an exact interval union along the supporting line.
    """
    w = ctx.inst.side
    for loop in gap.region.loops():
        n = len(loop)
        for k in range(n):
            a, b = loop[k], loop[(k + 1) % n]
            if a.x == b.x and a.x in (0, w):
                continue
            if a.y == b.y and a.y in (0, w):
                continue
            vertical = a.x == b.x
            lo = min(a.y, b.y) if vertical else min(a.x, b.x)
            hi = max(a.y, b.y) if vertical else max(a.x, b.x)
            pieces = []
            for r in ctx.square_rects:
                if vertical and r.lo.x <= a.x <= r.hi.x and a.x in (r.lo.x, r.hi.x):
                    pieces.append((max(lo, r.lo.y), min(hi, r.hi.y)))
                elif not vertical and r.lo.y <= a.y <= r.hi.y and a.y in (r.lo.y, r.hi.y):
                    pieces.append((max(lo, r.lo.x), min(hi, r.hi.x)))
            merged = _merge_intervals([p for p in pieces if p[0] < p[1]])
            if not (len(merged) == 1 and merged[0] == (lo, hi)):
                return False
    return True


@dataclass
class GapRecord:
    rects: list[Rect]
    touched_sides: list[str]
    shape: str
    area: Fraction
    classification: GapClassification | None
    error: str | None = None


@dataclass
class CellRecord:
    kind: str
    rects: list[Rect]
    charge: ChargedRegion | None
    checks: dict[str, bool] = field(default_factory=dict)
    observations: dict[str, bool] = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(self.checks.values())


@dataclass
class ChargingReport:
    instance: Instance
    perturbed: bool
    verified_instance: Instance
    trivial: bool
    untouched_side: str | None = None
    lemma1_anchor: Point | None = None
    lemma1_bound: Fraction | None = None
    original_area: Fraction = Fraction(0)
    verified_area: Fraction = Fraction(0)
    gap_records: list[GapRecord] = field(default_factory=list)
    cell_records: list[CellRecord] = field(default_factory=list)
    pairwise_disjoint: bool = True
    edges_on_squares: bool = True
    accounting_exact: bool = True
    bound_holds: bool = False

    @property
    def all_pass(self) -> bool:
        if self.trivial:
            return self.bound_holds
        return (self.bound_holds and self.pairwise_disjoint and self.accounting_exact
                and self.edges_on_squares
                and all(r.error is None and r.classification is not None
                        for r in self.gap_records)
                and all(c.ok for c in self.cell_records))


def verify_charging(inst: Instance, seed: int = 0) -> ChargingReport:
    if inst.n == 0:
        raise EmptyInstanceError("verification needs at least one anchor")
    original_area = reach_area(inst)
    work = inst
    perturbed = False
    if not general_position_check(inst).ok:
        work = perturb(inst, seed)
        perturbed = True
    w = work.side
    trivial, side = is_trivial(work)
    report = ChargingReport(instance=inst, perturbed=perturbed, verified_instance=work,
                            trivial=trivial, untouched_side=side,
                            original_area=original_area, verified_area=reach_area(work))
    if trivial:
        _verify_trivial(report, work, side)
        report.bound_holds = (report.lemma1_bound >= w * w / 2
                              and report.verified_area >= report.lemma1_bound
                              and original_area >= w * w / 2)
        return report

    ctx = GapContext.build(work)
    gaps = extract_gaps(work, ctx)
    cells: list[Cell] = []
    for gap in gaps:
        rec = GapRecord(gap.region.rects, sorted(gap.touched_sides), gap.shape,
                        gap.region.area, None)
        try:
            rec.classification = classify_gap(gap, work, ctx)
        except (ClassificationError, MissingLeadError) as exc:
            rec.error = str(exc)
        report.gap_records.append(rec)
    report.edges_on_squares = all(gap_edges_on_squares(g, ctx) for g in gaps)
    try:
        cells = split_cells(gaps)
    except ClassificationError as exc:
        report.accounting_exact = False
        report.bound_holds = False
        return report

    charges: list[ChargedRegion] = []
    for cell in cells:
        crec = CellRecord(cell.kind, cell.rects, None)
        try:
            charge = charged_region(cell, ctx)
            crec.charge = charge
            crec.checks = check_charge(charge, ctx)
            crec.observations["sentinel_touches_cell"] = sentinel_touches_cell(charge)
            charges.append(charge)
        except (MissingLeadError, ClassificationError, ValueError) as exc:
            crec.error = str(exc)
        report.cell_records.append(crec)

    disjoint = True
    for i in range(len(charges)):
        for j in range(i + 1, len(charges)):
            for pa in charges[i].pieces:
                for pb in charges[j].pieces:
                    if convex_pair_overlap_area(_polygon_orient_ccw(pa),
                                                _polygon_orient_ccw(pb)) != 0:
                        disjoint = False
    report.pairwise_disjoint = disjoint

    gap_total = sum((g.region.area for g in gaps), Fraction(0))
    charge_total = sum((c.region_area for c in charges), Fraction(0))
    report.accounting_exact = (report.verified_area + gap_total == w * w)
    report.bound_holds = (gap_total <= charge_total
                          and charge_total <= report.verified_area
                          and report.verified_area >= w * w / 2
                          and report.original_area >= w * w / 2)
    return report


def _verify_trivial(report: ChargingReport, inst: Instance, side: str):
    w = inst.side
    to_top = {"top": IDENTITY, "bottom": D4(False, False, True),
              "right": D4(True, False, False), "left": D4(True, False, True)}
    # map the untouched side to the top, then apply lemma 1 at the max-y anchor
    g = to_top[side]
    pts_ = [g.apply_point(p, w) for p in inst.anchors]
    s = max(pts_, key=lambda p: (p.y, p.x))
    x = s.x
    report.lemma1_anchor = g.inverse().apply_point(s, w)
    report.lemma1_bound = x * x + (w - x) * (w - x)
