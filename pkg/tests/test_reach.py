import random
from fractions import Fraction

import pytest

from anchorpack.geometry import Point, Region, pt, rect, region_union
from anchorpack.reach import (
    EmptyInstanceError, Instance, MinBelowStructure, all_maximal_squares_fast,
    all_maximal_squares_oracle, blocker_info, compute_reach, instance, is_trivial,
    maximal_anchored_square_oracle, min_below_query, reach_area,
)


def random_instance(rng, n, denom=64):
    anchors = [(Fraction(rng.randrange(0, denom + 1), denom),
                Fraction(rng.randrange(0, denom + 1), denom)) for _ in range(n)]
    return instance(1, anchors)


# --- oracle -----------------------------------------------------------------

def test_oracle_boundary_only():
    inst = instance(1, [("1/2", 0)])
    sq = maximal_anchored_square_oracle(inst, 0, "LL")
    assert sq.side == Fraction(1, 2)
    assert sq.rect_for(inst) == rect("1/2", 0, 1, "1/2")


def test_oracle_blocked_by_anchor():
    inst = instance(1, [("1/5", "1/5"), ("1/2", "2/5")])
    sq = maximal_anchored_square_oracle(inst, 0, "LL")
    assert sq.side == Fraction(3, 10)
    info = blocker_info(inst, 0, "LL")
    assert info.source == "anchor"
    assert info.blocker == pt("1/2", "2/5")
    # blocker sits on the right edge of the square
    r = sq.rect_for(inst)
    assert info.blocker.x == r.hi.x and r.lo.y <= info.blocker.y <= r.hi.y

    sq2 = maximal_anchored_square_oracle(inst, 1, "UR")
    assert sq2.side == Fraction(3, 10)
    info2 = blocker_info(inst, 1, "UR")
    assert info2.blocker == pt("1/5", "1/5")


def test_oracle_duplicates_do_not_block():
    inst = instance(2, [(1, 1)] * 4)
    for i in range(4):
        for role in ("LL", "UL", "UR", "LR"):
            assert maximal_anchored_square_oracle(inst, i, role).side == 1


def test_diagonal_anchor_blocks_at_corner():
    inst = instance(1, [(0, 0), ("1/2", "1/2")])
    assert maximal_anchored_square_oracle(inst, 0, "LL").side == Fraction(1, 2)


# --- fast path --------------------------------------------------------------

def test_fast_boundary_anchor_roles():
    inst = instance(1, [("1/2", 0)])
    sides = {sq.role: sq.side for sq in all_maximal_squares_fast(inst)}
    assert sides == {"LL": Fraction(1, 2), "UL": 0, "UR": 0, "LR": Fraction(1, 2)}


def test_fast_equals_oracle_fixture():
    inst = instance(1, [("1/5", "1/5"), ("1/2", "2/5")])
    assert all_maximal_squares_fast(inst) == all_maximal_squares_oracle(inst)


def test_fast_equals_oracle_random_100():
    rng = random.Random(123)
    inst = random_instance(rng, 100)
    assert all_maximal_squares_fast(inst) == all_maximal_squares_oracle(inst)


def test_fast_equals_oracle_shared_coords_and_duplicates():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randrange(1, 12)
        anchors = []
        vals = [Fraction(k, 4) for k in range(5)]
        for _ in range(n):
            anchors.append((rng.choice(vals), rng.choice(vals)))
        inst = instance(1, anchors)
        assert all_maximal_squares_fast(inst) == all_maximal_squares_oracle(inst)


# --- MinBelowStructure -------------------------------------------------------

def test_min_below_examples():
    ds = MinBelowStructure([pt(1, 3)])
    assert min_below_query(ds, pt(1, 3)) is None

    ds = MinBelowStructure([pt(1, 3), pt(2, 1), pt(4, 2)])
    assert min_below_query(ds, pt(2, 1)) == pt(4, 2)

    ds = MinBelowStructure([pt(1, 3), pt(2, 1), pt(3, 1), pt(4, 2)])
    assert min_below_query(ds, pt(2, 1)) == pt(3, 1)


def test_min_below_insert_delete_vs_brute():
    rng = random.Random(42)
    ds = MinBelowStructure()
    alive: list[Point] = []
    for step in range(400):
        op = rng.random()
        if op < 0.55 or not alive:
            p = pt(Fraction(rng.randrange(0, 64), 8), Fraction(rng.randrange(0, 64), 8))
            ds.insert(p)
            alive.append(p)
        elif op < 0.75:
            p = alive.pop(rng.randrange(len(alive)))
            ds.delete(p)
        else:
            q = pt(Fraction(rng.randrange(0, 64), 8), Fraction(rng.randrange(0, 64), 8))
            expect = None
            for p in alive:
                if p.y - q.y < p.x - q.x:
                    if expect is None or p.x < expect.x:
                        expect = p
            got = ds.min_below_query(q)
            if expect is None:
                assert got is None
            else:
                assert got is not None and got.x == expect.x
    assert len(ds) == len(alive)


# --- reach -------------------------------------------------------------------

def test_reach_half_area_fixture():
    inst = instance(1, [("1/2", 0)])
    reg = compute_reach(inst)
    assert reg.equals(region_union([rect(0, 0, 1, "1/2")]))
    assert reach_area(inst) == Fraction(1, 2)


def test_reach_corner_anchor_covers_everything():
    inst = instance(1, [(0, 0)])
    assert reach_area(inst) == 1


def test_reach_cross_fixture():
    inst = instance(1, [("1/2", "1/4")])
    reg = compute_reach(inst)
    expected = region_union([rect(0, "1/4", 1, "3/4"), rect("1/4", 0, "3/4", "1/4")])
    assert reg.equals(expected)
    assert reach_area(inst) == Fraction(5, 8)


def test_reach_quarter_boundary_anchor():
    # Lemma-1 shape: x^2 + (1-x)^2 at x = 1/4
    inst = instance(1, [("1/4", 0)])
    assert reach_area(inst) == Fraction(5, 8)


def test_reach_area_equals_region_area():
    rng = random.Random(17)
    for _ in range(25):
        inst = random_instance(rng, rng.randrange(1, 12), denom=16)
        assert reach_area(inst) == compute_reach(inst).area


def test_empty_instance_errors():
    inst = Instance(Fraction(1), ())
    with pytest.raises(EmptyInstanceError):
        compute_reach(inst)
    with pytest.raises(EmptyInstanceError):
        reach_area(inst)
    with pytest.raises(EmptyInstanceError):
        is_trivial(inst)


def test_is_trivial():
    assert is_trivial(instance(1, [("1/2", 0)])) == (True, "top")
    assert is_trivial(instance(1, [(0, 0)])) == (False, None)
    assert is_trivial(instance(1, [("1/2", "1/4")])) == (True, "top")


def test_maximality_witness():
    """Any enlargement of a maximal square hits a blocker or leaves U."""
    rng = random.Random(31)
    for _ in range(20):
        inst = random_instance(rng, rng.randrange(1, 16), denom=16)
        for sq in all_maximal_squares_fast(inst):
            info = blocker_info(inst, sq.anchor_index, sq.role)
            assert info.distance == sq.side
            if info.source == "anchor":
                r = sq.rect_for(inst)
                b = info.blocker
                on_edge = (b.x in (r.lo.x, r.hi.x) and r.lo.y <= b.y <= r.hi.y) or \
                          (b.y in (r.lo.y, r.hi.y) and r.lo.x <= b.x <= r.hi.x)
                assert on_edge
            else:
                grown = sq.side + Fraction(1, 1000)
                a = inst.anchors[sq.anchor_index]
                assert (a.x + grown > inst.side or a.y + grown > inst.side
                        or a.x - grown < 0 or a.y - grown < 0)


def test_reach_lower_bound_random():
    rng = random.Random(77)
    for _ in range(60):
        inst = random_instance(rng, rng.randrange(1, 16), denom=32)
        assert reach_area(inst) >= Fraction(1, 2)


def test_reach_connected_simply_connected_random():
    rng = random.Random(78)
    for _ in range(40):
        inst = random_instance(rng, rng.randrange(1, 10), denom=16)
        reg = compute_reach(inst)
        assert reg.component_count() == 1
        assert reg.hole_count() == 0
