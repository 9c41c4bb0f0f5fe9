import random
from fractions import Fraction

import numpy as np
import pytest

from anchorpack import fastpath
from anchorpack.reach import (
    ROLES, all_maximal_squares_oracle, instance, reach_area,
)
from anchorpack.geometry import rect_union_area, rect


def random_int_instance(rng, n, w):
    anchors = [(rng.randrange(0, w + 1), rng.randrange(0, w + 1)) for _ in range(n)]
    return instance(w, anchors)


def test_int_sides_match_exact_oracle():
    rng = random.Random(2024)
    for _ in range(25):
        w = rng.randrange(2, 40)
        inst = random_int_instance(rng, rng.randrange(1, 30), w)
        xs, ys, wi = fastpath.instance_arrays(inst)
        got = fastpath.all_sides_int(xs, ys, wi)
        expect = all_maximal_squares_oracle(inst)
        for sq in expect:
            assert got[sq.role][sq.anchor_index] == sq.side


def test_int_union_area_matches_exact():
    rng = random.Random(3)
    for _ in range(25):
        n = rng.randrange(1, 40)
        x0 = np.array([rng.randrange(0, 50) for _ in range(n)], dtype=np.int64)
        y0 = np.array([rng.randrange(0, 50) for _ in range(n)], dtype=np.int64)
        wd = np.array([rng.randrange(0, 20) for _ in range(n)], dtype=np.int64)
        ht = np.array([rng.randrange(0, 20) for _ in range(n)], dtype=np.int64)
        got = fastpath.union_area_int(x0, y0, x0 + wd, y0 + ht)
        rects = [rect(int(a), int(b), int(c), int(d))
                 for a, b, c, d in zip(x0, y0, x0 + wd, y0 + ht) if c > a and d > b]
        assert got == rect_union_area(rects)


def test_reach_area_int_lane_matches_fraction_lane():
    rng = random.Random(9)
    for _ in range(15):
        w = rng.randrange(2, 30)
        inst = random_int_instance(rng, rng.randrange(1, 20), w)
        assert reach_area(inst) == Fraction(fastpath.reach_area_int(inst))


def test_numpy_oracle_matches_kernel():
    rng = random.Random(11)
    w = 1000
    xs = np.array([rng.randrange(0, w + 1) for _ in range(300)], dtype=np.int64)
    ys = np.array([rng.randrange(0, w + 1) for _ in range(300)], dtype=np.int64)
    fast = fastpath.all_sides_int(xs, ys, w)
    slow = fastpath.all_sides_oracle_int(xs, ys, w)
    for role in ROLES:
        assert np.array_equal(fast[role], slow[role])


def test_int_lane_overflow_guard():
    xs = np.array([0], dtype=np.int64)
    ys = np.array([0], dtype=np.int64)
    with pytest.raises(OverflowError):
        fastpath.all_sides_int(xs, ys, 2 ** 31)
