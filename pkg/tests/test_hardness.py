import itertools
import random
from fractions import Fraction

from anchorpack.hardness import (
    _State, check_property1, check_property2, enumerate_full_covers,
    propagate_forced, search_full_cover, verify_certificate,
)
from anchorpack.packing import Packing, packing_area, validate_packing
from anchorpack.reach import AnchoredSquare, instance


def sq(i, role, side):
    from anchorpack.geometry import scalar
    return AnchoredSquare(i, role, scalar(side))


def mk_state(w, anchors):
    return _State(w, [tuple(a) for a in anchors])


# --- property 1 ---------------------------------------------------------------

def test_property1_unit_container():
    st = mk_state(1, [(1, 1)])
    assert check_property1(st, 0, "UR", 1)


def test_property1_side_two():
    st = mk_state(2, [(2, 2)])
    assert check_property1(st, 0, "UR", 2)


def test_property1_blocked_by_undecided_on_edge():
    st = mk_state(2, [(1, 1), (1, 0)])
    assert not check_property1(st, 0, "UR", 1)


# --- property 2 ---------------------------------------------------------------

def test_property2_canonical():
    # side-2 square [0,2]^2 anchored UR at (2,2); undecided anchor at (0,1);
    # bottom edge on dP (container boundary); nothing one unit right.
    st = mk_state(3, [(2, 2), (0, 1), (0, 3)])
    assert check_property2(st, 0, "UR", 2)


def test_property2_rejects_second_boundary_anchor():
    st = mk_state(3, [(2, 2), (0, 1), (1, 2)])
    assert not check_property2(st, 0, "UR", 2)


def test_property2_needs_side_above_one():
    st = mk_state(2, [(1, 1), (0, 1) if False else (0, 1)])
    assert not check_property2(st, 0, "UR", 1)


def test_property2_rejects_far_anchor():
    # an undecided anchor one unit right of the anchor corner breaks it
    st = mk_state(4, [(2, 2), (0, 1), (3, 2)])
    assert not check_property2(st, 0, "UR", 2)


# --- propagation ---------------------------------------------------------------

def test_propagate_unit():
    fs = propagate_forced(instance(1, [(1, 1)]))
    assert fs.status == "fully-tiled"
    assert len(fs.forced) == 1
    square, idx = fs.forced[0]
    assert idx == 0 and square.side == 1


def test_propagate_w2_single_anchor_infeasible():
    fs = propagate_forced(instance(2, [(1, 1)]))
    assert fs.status == "infeasible"
    assert len(fs.forced) == 1
    assert fs.forced[0][0].side == 1


def test_propagate_w2_corner_anchor():
    fs = propagate_forced(instance(2, [(2, 2)]))
    assert fs.status == "fully-tiled"
    assert fs.forced[0][0].side == 2


def test_propagate_quad():
    fs = propagate_forced(instance(2, [(1, 1)] * 4))
    assert fs.status in ("fully-tiled", "stuck")
    # four duplicate anchors admit several tilings, so pairs are not all forced
    yes, packing = search_full_cover(instance(2, [(1, 1)] * 4))
    assert yes


def random_full_cover_instance(rng, w):
    """Random integer instance that admits at least one full cover."""
    while True:
        n = rng.randrange(1, 6)
        inst = instance(w, [(rng.randrange(0, w + 1), rng.randrange(0, w + 1))
                            for _ in range(n)])
        yes, _ = search_full_cover(inst)
        if yes:
            return inst


def test_propagation_soundness_small():
    """Every forced pair appears in every full-area packing, where anchors at
    identical positions are interchangeable (duplicate exchange)."""
    rng = random.Random(1234)
    checked = 0
    for _ in range(12):
        w = rng.randrange(2, 5)
        inst = random_full_cover_instance(rng, w)
        covers = enumerate_full_covers(inst)
        assert covers
        fs = propagate_forced(inst)
        for square, idx in fs.forced:
            pos = inst.anchors[idx]
            want = square.rect_for(inst)
            for cover in covers:
                hit = any(inst.anchors[other.anchor_index] == pos
                          and other.side > 0
                          and other.rect_for(inst) == want
                          for other in cover.squares)
                assert hit, (inst, square, idx, cover)
                checked += 1
    assert checked > 0


def test_propagation_confluence_randomized_order():
    rng = random.Random(77)

    def signature(fs, inst):
        return sorted((tuple(inst.anchors[i]), s.rect_for(inst).lo, s.side)
                      for s, i in fs.forced)

    for _ in range(10):
        w = rng.randrange(2, 5)
        inst = random_full_cover_instance(rng, w)
        base = propagate_forced(inst)
        for trial in range(4):
            order = list(range(inst.n))
            rng.shuffle(order)
            other = propagate_forced(inst, order)
            assert signature(other, inst) == signature(base, inst)
            assert other.status == base.status


def test_search_matches_enumeration():
    rng = random.Random(55)
    for _ in range(15):
        w = rng.randrange(2, 5)
        n = rng.randrange(1, 6)
        inst = instance(w, [(rng.randrange(0, w + 1), rng.randrange(0, w + 1))
                            for _ in range(n)])
        yes, packing = search_full_cover(inst)
        covers = enumerate_full_covers(inst)
        assert yes == bool(covers)
        if yes:
            assert verify_certificate(inst, packing)


def test_verify_certificate():
    inst = instance(2, [(1, 1)] * 4)
    good = Packing((sq(0, "LL", 1), sq(1, "UL", 1), sq(2, "UR", 1), sq(3, "LR", 1)))
    assert verify_certificate(inst, good)
    small = Packing((sq(0, "LL", 1), sq(1, "UL", 1), sq(2, "UR", 1), sq(3, "LR", 0)))
    assert not verify_certificate(inst, small)
    overlap = Packing((sq(0, "LL", 1), sq(1, "LL", 1), sq(2, "UR", 1), sq(3, "LR", 1)))
    assert not verify_certificate(inst, overlap)
