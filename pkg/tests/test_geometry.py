import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_decoupling.geometry import (
    CellRegion,
    Interval,
    RelationKind,
    Tube,
    arc_absorb_ball,
    arc_center_ball,
    arc_parallelogram,
    arc_region,
    ball_region,
    dual_tube,
    full_box,
    interval_distance,
    interval_relation,
    partition_unit_interval,
    qpow,
    tile_box_by_tubes,
    tube_intersection_bound,
    tube_intersection_measure,
    tube_shift_set,
    unit_interval,
    verify_tube_partition,
)


class TestPartition:
    def test_three_intervals_distance_one(self):
        parts = partition_unit_interval(3, 1)
        assert len(parts) == 3
        for a, b in itertools.combinations(parts, 2):
            assert interval_distance(a, b) == 1

    def test_k_zero_is_unit_interval(self):
        assert partition_unit_interval(3, 0) == [unit_interval(3)]

    def test_nine_intervals(self):
        parts = partition_unit_interval(3, 2)
        assert len(parts) == 9
        assert interval_distance(Interval(3, 2, 1), Interval(3, 2, 4)) == Fraction(1, 3)

    def test_total_measure_one(self):
        parts = partition_unit_interval(5, 2)
        assert sum(p.length for p in parts) == 1

    def test_separation_lower_bound(self):
        for q, k in ((3, 2), (5, 1)):
            parts = partition_unit_interval(q, k)
            for a, b in itertools.combinations(parts, 2):
                assert interval_distance(a, b) >= qpow(q, -k + 1)


class TestIntervalRelation:
    def test_nested_same_residue(self):
        rel = interval_relation(Interval(3, 2, 1), Interval(3, 1, 1))
        assert rel.kind is RelationKind.NESTED
        assert rel.inner == Interval(3, 2, 1)

    def test_disjoint_with_distance(self):
        rel = interval_relation(Interval(3, 1, 0), Interval(3, 1, 1))
        assert rel.kind is RelationKind.DISJOINT
        assert rel.distance == 1

    def test_nested_residue_reduction(self):
        rel = interval_relation(Interval(3, 2, 4), Interval(3, 1, 1))
        assert rel.kind is RelationKind.NESTED  # 4 = 1 mod 3

    def test_equal(self):
        assert interval_relation(Interval(5, 2, 7), Interval(5, 2, 7)).kind is RelationKind.EQUAL


@settings(max_examples=100)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 124), st.integers(0, 124))
def test_relation_trichotomy(k1, k2, a1, a2):
    q = 5
    i1 = Interval(q, k1, a1 % q**k1)
    i2 = Interval(q, k2, a2 % q**k2)
    rel = interval_relation(i1, i2)
    if rel.kind is RelationKind.DISJOINT:
        assert rel.distance >= qpow(q, -min(k1, k2) + 1)
    elif rel.kind is RelationKind.EQUAL:
        assert i1 == i2
    else:
        inner = rel.inner
        outer = i1 if inner == i2 else i2
        assert inner.length < outer.length
        assert outer.contains_residue(inner.residue)


class TestArcRegion:
    def test_base_arc_cells(self):
        cells = arc_region(Interval(3, 1, 0), (2, 2)).cells
        assert cells == {(0, 0), (3, 0), (6, 0)}

    def test_parallelogram_matches_definition(self):
        for q, k in ((3, 1), (3, 2), (5, 1)):
            for a0 in range(q**k):
                j = Interval(q, k, a0)
                theta = arc_region(j, (2 * k, 2 * k))
                for anchor in (a0, a0 + q**k, a0 + 3 * q**k):
                    assert arc_parallelogram(j, anchor, (2 * k, 2 * k)).same_set(theta)

    def test_unit_arc_is_unit_square(self):
        theta = arc_region(unit_interval(3), (1, 1))
        assert theta.same_set(full_box(3, (0, 0), (1, 1)))

    def test_arc_measure(self):
        # measure of theta_J is |J| * |J|^2
        j = Interval(3, 1, 2)
        assert arc_region(j, (2, 2)).measure() == Fraction(1, 27)


class TestAbsorption:
    def test_absorbs_own_square_ball(self):
        assert arc_absorb_ball(Interval(3, 1, 1))
        assert arc_absorb_ball(unit_interval(3))
        assert arc_absorb_ball(Interval(5, 1, 2))

    def test_all_arcs_q3_scale2(self):
        for a in range(9):
            assert arc_absorb_ball(Interval(3, 2, a))

    def test_larger_ball_not_absorbed(self):
        j = Interval(3, 2, 1)
        theta = arc_region(j, (4, 4))
        fat = ball_region(3, (0, 0), (4, 4), radius_exp=(-2 * 2, -2))
        assert not theta.minkowski_sum(fat).same_set(theta)


class TestBallsAndShears:
    def test_ball_sum(self):
        res = (2, 2)
        b1 = ball_region(3, (0, 0), res, center=(1, 2), radius_exp=(-1, -1))
        b2 = ball_region(3, (0, 0), res, center=(2, 2), radius_exp=(-1, -1))
        expect = ball_region(3, (0, 0), res, center=(3, 4), radius_exp=(-1, -1))
        assert b1.minkowski_sum(b2).same_set(expect)

    def test_shear_preserves_unit_ball(self):
        unit = full_box(3, (0, 0), (2, 2))
        for a in (0, 1, 2, 4, Fraction(1, 2)):  # |a| <= 1
            assert unit.shear_x(a).same_set(unit)

    def test_shear_is_measure_preserving(self):
        j = Interval(3, 1, 1)
        theta = arc_region(j, (2, 2))
        assert theta.shear_x(1).measure() == theta.measure()

    def test_refine_preserves_measure_and_membership(self):
        j = Interval(3, 1, 2)
        theta = arc_region(j, (2, 2))
        fine = theta.refine((3, 4))
        assert fine.measure() == theta.measure()
        assert fine.contains_point((2, 4)) == theta.contains_point((2, 4))


def test_tau_contains_arc():
    for q, k in ((3, 1), (3, 2), (5, 1)):
        for a0 in range(q**k):
            j = Interval(q, k, a0)
            theta = arc_region(j, (2 * k, 2 * k))
            for anchor in (a0, a0 + q**k):
                tau = arc_center_ball(j, anchor, (2 * k, 2 * k))
                assert theta.cells <= tau.cells


class TestDualTube:
    def test_axis_tube(self):
        region = dual_tube(Interval(3, 1, 0), 0).region((0, 0))
        expect = {(i, j) for i in range(9) for j in range(9) if i % 3 == 0}
        assert region.cells == expect

    def test_sheared_tube_residue_two(self):
        region = dual_tube(Interval(3, 1, 2), 2).region((0, 0))
        expect = {(i, j) for i in range(9) for j in range(9) if (i + 4 * j) % 3 == 0}
        assert region.cells == expect

    def test_sheared_tube_residue_one(self):
        region = dual_tube(Interval(3, 1, 1), 1).region((0, 0))
        expect = {(i, j) for i in range(9) for j in range(9) if (i + 2 * j) % 3 == 0}
        assert region.cells == expect

    def test_anchor_independence(self):
        k = Interval(3, 1, 2)
        assert dual_tube(k, 2).region((0, 0)).same_set(dual_tube(k, 5).region((0, 0)))
        k5 = Interval(5, 2, 7)
        assert dual_tube(k5, 7).region().same_set(dual_tube(k5, 32).region())

    def test_tube_is_union_of_side_squares(self):
        # q^N squares of side q^N, measure q^3N total
        for q, n in ((3, 1), (3, 2), (5, 1)):
            t = dual_tube(Interval(q, n, 1), 1)
            region = t.region()
            assert len(region.cells) == q**n
            assert region.measure() == qpow(q, 3 * n)


class TestTiling:
    def test_shift_set_q3(self):
        assert tube_shift_set(3, 1) == [0, Fraction(1, 9), Fraction(2, 9)]

    def test_partition_q3_figures(self):
        for a in range(3):
            assert verify_tube_partition(Interval(3, 1, a))

    def test_partition_measure(self):
        tubes = tile_box_by_tubes(Interval(3, 1, 2))
        assert sum(t.region().measure() for t in tubes) == 81

    def test_partition_exactness_many_scales(self):
        for q in (3, 5):
            for n in (1, 2):
                for a in (0, 1, q**n - 1):
                    assert verify_tube_partition(Interval(q, n, a))

    def test_translated_tiles_at_unit_resolution(self):
        # the three translates of the residue-2 tube cover the 81-cell box
        tubes = tile_box_by_tubes(Interval(3, 1, 2))
        cells = [t.region((0, 0)).cells for t in tubes]
        assert sum(len(c) for c in cells) == 81
        assert frozenset().union(*cells) == full_box(3, (2, 2), (0, 0)).cells


class TestTubeIntersection:
    def test_centered_tubes_q3(self):
        t0 = dual_tube(Interval(3, 1, 0), 0)
        t1 = dual_tube(Interval(3, 1, 1), 1)
        m = tube_intersection_measure(t0, t1)
        assert m == 9
        assert tube_intersection_bound(t0, t1) == 9

    def test_disjoint_translates(self):
        # arcs at distance 1/3 < 1: a large horizontal shift separates the tubes
        t1 = Tube(Interval(3, 2, 1), 1)
        t2_far = Tube(Interval(3, 2, 4), 4, (Fraction(1, 81), Fraction(0)))
        assert tube_intersection_measure(t1, t2_far) == 0
        # while the centered pair meets
        t2 = Tube(Interval(3, 2, 4), 4)
        assert tube_intersection_measure(t1, t2) > 0

    def test_bound_never_violated(self):
        for q, n in ((3, 1), (3, 2)):
            arcs = [Interval(q, n, a) for a in range(q**n)]
            shifts = [Fraction(m, q ** (2 * n)) for m in range(q**n)]
            for k1, k2 in itertools.combinations(arcs, 2):
                for s in shifts[:3]:
                    t1 = Tube(k1, k1.residue)
                    t2 = Tube(k2, k2.residue, (s, Fraction(0)))
                    m = tube_intersection_measure(t1, t2)
                    assert m <= tube_intersection_bound(t1, t2)

    def test_finer_scale_bound_value(self):
        # at q = 3, scale 1/9, arcs at distance 1/3 the bound is 81/(1/3) = 243
        t1 = dual_tube(Interval(3, 2, 1), 1)
        t2 = dual_tube(Interval(3, 2, 4), 4)
        assert tube_intersection_bound(t1, t2) == 243
        assert tube_intersection_measure(t1, t2) <= 243

    def test_same_arc_rejected(self):
        t = dual_tube(Interval(3, 1, 1), 1)
        with pytest.raises(ValueError):
            tube_intersection_measure(t, Tube(t.arc, 1, (Fraction(1, 9), Fraction(0))))


def test_region_json_is_deterministic():
    j = Interval(3, 1, 0)
    d1 = arc_region(j, (2, 2)).to_json_dict()
    d2 = arc_region(j, (2, 2)).to_json_dict()
    assert d1 == d2
    assert d1["cells"] == sorted(d1["cells"])
