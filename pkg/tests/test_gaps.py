import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from anchorpack.gaps import (
    Cell, GapContext, MissingLeadError, charged_region, check_charge, classify_gap,
    extract_gaps, general_position_check, perturb, split_cells, verify_charging,
    ClassificationError, TrivialInstanceError,
)
from anchorpack.geometry import Point, Region, pt, rect, region_union
from anchorpack.reach import instance, is_trivial, reach_area


# Nontrivial general-position fixture whose corner gap is [0,1/4]^2 with
# defining box [0,1/2]x[0,3/4] and anchor (1/2,1/4) on its right edge.
TYPE1_FIXTURE = instance(1, [("1/2", "1/4"), ("15/16", "7/8"), ("1/8", "13/16")])


def random_instance(rng, n, denom=64):
    anchors = [(Fraction(rng.randrange(0, denom + 1), denom),
                Fraction(rng.randrange(0, denom + 1), denom)) for _ in range(n)]
    return instance(1, anchors)


def random_gp_nontrivial(rng, n_range=(3, 10), denom=512, want=1):
    found = []
    while len(found) < want:
        n = rng.randrange(*n_range)
        anchors = []
        xs = rng.sample(range(1, denom), n)
        ys = rng.sample(range(1, denom), n)
        anchors = [(Fraction(x, denom), Fraction(y, denom)) for x, y in zip(xs, ys)]
        inst = instance(1, anchors)
        if not is_trivial(inst)[0]:
            found.append(inst)
    return found


def test_extract_gaps_cover_everything():
    inst = instance(1, [(0, 0)])
    assert extract_gaps(inst) == []


def test_extract_gaps_cross():
    inst = instance(1, [("1/2", "1/4")])
    gaps = extract_gaps(inst)
    assert len(gaps) == 3
    areas = sorted(g.region.area for g in gaps)
    assert areas == [Fraction(1, 16), Fraction(1, 16), Fraction(1, 4)]
    union = region_union([r for g in gaps for r in g.region.rects])
    expected = region_union([rect(0, 0, "1/4", "1/4"), rect("3/4", 0, 1, "1/4"),
                             rect(0, "3/4", 1, 1)])
    assert union.equals(expected)


def test_extract_gaps_half():
    inst = instance(1, [("1/2", 0)])
    gaps = extract_gaps(inst)
    assert len(gaps) == 1
    assert gaps[0].region.equals(region_union([rect(0, "1/2", 1, 1)]))


def test_gap_escape_any_instance():
    rng = random.Random(10101)
    for _ in range(25):
        inst = random_instance(rng, rng.randrange(1, 10), denom=16)
        ctx = GapContext.build(inst)
        for gap in extract_gaps(inst, ctx):
            assert gap.touched_sides, "every gap must reach the container boundary"


def test_gap_edges_on_squares_gp():
    rng = random.Random(10102)
    from anchorpack.gaps import gap_edges_on_squares
    for inst in random_gp_nontrivial(rng, want=15):
        ctx = GapContext.build(inst)
        for gap in extract_gaps(inst, ctx):
            assert gap_edges_on_squares(gap, ctx)


def test_general_position_check():
    assert general_position_check(instance(1, [("1/5", "1/5"), ("1/2", "2/5")])).ok
    rep = general_position_check(instance(1, [("1/2", 0)]))
    assert not rep.ok and rep.boundary_anchors == [0]
    rep = general_position_check(instance(1, [("1/4", "1/3"), ("1/4", "2/3")]))
    assert not rep.ok and rep.shared_x == [(0, 1)]


def test_perturb():
    inst = instance(1, [("1/2", 0)])
    out = perturb(inst, seed=3)
    assert general_position_check(out).ok
    p = out.anchors[0]
    assert 0 < p.x < 1 and 0 < p.y < 1
    assert abs(p.x - Fraction(1, 2)) < Fraction(1, 4) and p.y < Fraction(1, 4)

    inst2 = instance(1, [("1/4", "1/3"), ("1/4", "2/3")])
    out2 = perturb(inst2, seed=5)
    assert general_position_check(out2).ok
    eps0 = Fraction(1, 3)
    for old, new in zip(inst2.anchors, out2.anchors):
        assert abs(new.x - old.x) < eps0 / 2 and abs(new.y - old.y) < eps0 / 2

    gp = instance(1, [("1/5", "1/5"), ("1/2", "2/5")])
    assert perturb(gp, seed=1) is gp

    assert perturb(inst, seed=3).anchors == out.anchors  # deterministic


def test_classify_type1_fixture():
    inst = TYPE1_FIXTURE
    assert not is_trivial(inst)[0]
    ctx = GapContext.build(inst)
    gaps = extract_gaps(inst, ctx)
    corner = [g for g in gaps if g.region.contains_point(pt(0, 0))]
    assert len(corner) == 1
    assert corner[0].region.equals(region_union([rect(0, 0, "1/4", "1/4")]))
    cls = classify_gap(corner[0], inst, ctx)
    assert cls.type_id == 1
    assert cls.params == {"b": Fraction(1, 2), "c": Fraction(1, 4)}
    assert cls.defining == [0]
    assert cls.box == rect(0, 0, "1/2", "3/4")


def test_classify_type3_instantiation():
    # canonical type-3 template a=1/4, b=3/4, c=1/5, d slightly above 1/5
    a, b, c = Fraction(1, 4), Fraction(3, 4), Fraction(1, 5)
    d = Fraction(1, 5) + Fraction(1, 1024)
    inst = instance(1, [(a, c), (b, d), ("1/16", "15/16")])
    assert not is_trivial(inst)[0]
    assert general_position_check(inst).ok
    ctx = GapContext.build(inst)
    gaps = extract_gaps(inst, ctx)
    side = [g for g in gaps if g.touched_sides == {"bottom"}]
    assert len(side) == 1
    assert side[0].region.equals(region_union([Rect0(a + c, 0, b - d, c)]))
    cls = classify_gap(side[0], inst, ctx)
    assert cls.type_id == 3
    assert cls.params == {"a": a, "b": b, "c": c, "d": d}


def Rect0(x0, y0, x1, y1):
    from anchorpack.geometry import Rect, Point

    def f(v):
        return v if isinstance(v, Fraction) else Fraction(v)

    return Rect(Point(f(x0), f(y0)), Point(f(x1), f(y1)))


def test_classify_requires_nontrivial():
    inst = instance(1, [("1/2", "1/4")])
    gaps = extract_gaps(inst)
    with pytest.raises(TrivialInstanceError):
        classify_gap(gaps[0], inst)


def test_classification_property_run():
    rng = random.Random(424242)
    instances = random_gp_nontrivial(rng, want=40)
    for inst in instances:
        ctx = GapContext.build(inst)
        for gap in extract_gaps(inst, ctx):
            cls = classify_gap(gap, inst, ctx)
            assert cls.type_id in (1, 2, 3, 4, 5)


def test_split_cells():
    rect_gap = _mk_gap([Rect0("1/4", 0, "1/2", "1/8")], {"bottom"}, "rectangle")
    assert [c.kind for c in split_cells([rect_gap])] == ["rect"]

    l_side = _mk_gap([Rect0("1/4", 0, "3/8", "1/4"), Rect0("3/8", 0, "1/2", "1/8")],
                     {"bottom"}, "L")
    cells = split_cells([l_side])
    assert [c.kind for c in cells] == ["rect", "rect"]
    union = region_union([r for c in cells for r in c.rects])
    assert union.equals(l_side.region)
    for c in cells:
        assert c.rects[0].lo.y == 0

    l_corner = _mk_gap([Rect0(0, 0, "1/8", "1/4"), Rect0("1/8", 0, "3/8", "1/16")],
                       {"bottom", "left"}, "L")
    cells = split_cells([l_corner])
    assert [c.kind for c in cells] == ["corner_L"]


def _mk_gap(rects, touched, shape):
    from anchorpack.gaps import Gap
    return Gap(Region(rects), touched, shape, set())


def test_charged_region_worked_fixture():
    """Acceptance criterion 5: the (b,c) = (1/2,1/4) corner cell."""
    inst = TYPE1_FIXTURE
    ctx = GapContext.build(inst)
    gaps = extract_gaps(inst, ctx)
    corner = next(g for g in gaps if g.region.contains_point(pt(0, 0)))
    cells = split_cells([corner])
    assert len(cells) == 1
    charge = charged_region(cells[0], ctx)
    cons = charge.construction
    assert cons["p1"] == pt("1/4", "1/2")
    assert cons["p2"] == pt("1/2", "1/4")
    assert cons["z1"] == pt("1/2", "1/4")
    assert cons["z2"] == pt("1/4", "1/2")
    assert charge.variant == 1
    assert charge.cell_area == Fraction(1, 16)
    assert charge.region_area == Fraction(3, 32)
    assert charge.pentagon == [pt(0, "1/4"), pt(0, 0), pt("1/4", 0),
                               pt("1/2", "1/4"), pt("1/4", "1/2")]
    assert set(charge.tips) == {pt("1/2", "1/4"), pt("1/4", "1/2")}
    assert charge.sentinel[2] == pt("1/4", "1/4")
    checks = check_charge(charge, ctx)
    assert all(checks.values()), checks
    from anchorpack.gaps import sentinel_touches_cell
    assert sentinel_touches_cell(charge)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 200), st.integers(1, 200))
def test_square_cell_charge_is_three_halves(num, den):
    """For an x-by-x cell both charge variants have area 3x^2/2."""
    x = Fraction(num, 200) * Fraction(1, den)
    w = x + x  # any frame big enough; areas depend only on the cell
    area1 = x * x / 2 + (x + x) * (x + x) / 4
    assert area1 == 3 * x * x / 2


def test_charged_region_missing_lead():
    inst = TYPE1_FIXTURE
    ctx = GapContext.build(inst)
    bogus = Cell(_mk_gap([Rect0("3/8", 0, "7/16", "1/16")], {"bottom"}, "rectangle"),
                 "rect", [Rect0("3/8", 0, "7/16", "1/16")])
    with pytest.raises(MissingLeadError):
        charged_region(bogus, ctx)


def test_verify_charging_trivial_path():
    report = verify_charging(instance(1, [("1/2", "1/4")]))
    assert report.trivial and report.untouched_side == "top"
    assert report.lemma1_bound == Fraction(1, 2)
    assert report.original_area == Fraction(5, 8)
    assert report.all_pass


def test_verify_charging_no_gaps():
    report = verify_charging(instance(1, [(0, 0)]))
    # boundary anchor: perturbed, and the perturbed instance still verifies
    assert report.original_area == 1
    assert report.all_pass


def test_verify_charging_fixture():
    report = verify_charging(TYPE1_FIXTURE)
    assert not report.trivial
    assert not report.perturbed
    assert report.accounting_exact
    assert report.pairwise_disjoint
    assert report.all_pass


def test_sentinel_adjacency_counterexample_documented():
    """Exact checking refutes the sentinel-adjacency claim for one corner cell
    of this instance (tips sit past the cell frame midpoint); the charging
    chain itself (P1-P3, disjointness, accounting) still verifies."""
    inst = instance(1, [("331/512", "73/256"), ("167/512", "437/512"),
                        ("255/512", "27/512"), ("207/512", "79/256"),
                        ("5/8", "27/256"), ("13/64", "353/512")])
    report = verify_charging(inst)
    assert report.all_pass
    flags = [c.observations.get("sentinel_touches_cell") for c in report.cell_records]
    assert False in flags


def test_verify_charging_property_run():
    rng = random.Random(20252026)
    for inst in random_gp_nontrivial(rng, want=25):
        report = verify_charging(inst)
        assert report.all_pass, (inst, _failures(report))


def _failures(report):
    out = []
    for g in report.gap_records:
        if g.error or g.classification is None:
            out.append(("gap", g.rects, g.error))
    for c in report.cell_records:
        if not c.ok:
            out.append(("cell", c.rects, c.error, {k: v for k, v in c.checks.items() if not v}))
    if not report.pairwise_disjoint:
        out.append("overlap")
    if not report.accounting_exact:
        out.append("accounting")
    return out
