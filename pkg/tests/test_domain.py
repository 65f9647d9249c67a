"""Ground set, subset, and step-function behavior."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from choquet import (
    INF,
    GroundSet,
    StepFunction,
    SubsetMask,
    UniverseMismatchError,
    abs_,
    add,
    floor_scale,
    indicator,
    sub,
    superlevel,
    truncate,
)

U3 = GroundSet(3)
U2 = GroundSet(2)


def fn(universe, *values):
    return StepFunction.from_values(universe, values)


class TestGroundSet:
    def test_size_bounds(self):
        with pytest.raises(ValueError):
            GroundSet(0)
        with pytest.raises(ValueError):
            GroundSet(25)
        assert GroundSet(24).size == 24

    def test_masks_cover_powerset(self):
        assert list(U2.masks()) == [0, 1, 2, 3]


class TestSubsetMask:
    def test_indices_round_trip(self):
        s = SubsetMask.from_indices(U3, [2, 0])
        assert s.indices() == (0, 2)
        assert len(s) == 2
        assert 1 not in s

    def test_set_algebra(self):
        a = SubsetMask.from_indices(U3, [0, 1])
        b = SubsetMask.from_indices(U3, [1, 2])
        assert (a & b).indices() == (1,)
        assert (a | b).indices() == (0, 1, 2)
        assert (a - b).indices() == (0,)
        assert a.complement().indices() == (2,)

    def test_universe_mismatch(self):
        with pytest.raises(UniverseMismatchError):
            SubsetMask.full(U2) & SubsetMask.full(U3)

    def test_out_of_range_bits(self):
        with pytest.raises(ValueError):
            SubsetMask(U2, 0b100)


class TestSuperlevel:
    def test_strict_above_one(self):
        f = fn(U3, 3, 1, 0)
        assert superlevel(f, 1, strict=True).indices() == (0,)

    def test_strict_at_zero_excludes_zero(self):
        f = fn(U3, 3, 1, 0)
        assert superlevel(f, 0, strict=True).indices() == (0, 1)

    def test_non_strict_includes_threshold(self):
        f = fn(U3, 3, 1, 0)
        assert superlevel(f, 1, strict=False).indices() == (0, 1)

    def test_infinite_entries_always_included(self):
        f = fn(U2, "inf", 0)
        assert superlevel(f, 1000, strict=True).indices() == (0,)

    @given(
        st.lists(st.fractions(0, 4), min_size=3, max_size=3),
        st.fractions(0, 2),
        st.fractions(0, 2),
    )
    @settings(max_examples=60, derandomize=True)
    def test_levels_nest(self, vals, t1, t2):
        f = StepFunction(U3, tuple(vals))
        lo, hi = min(t1, t2), max(t1, t2)
        for strict in (True, False):
            assert superlevel(f, hi, strict).issubset(superlevel(f, lo, strict))


class TestTruncate:
    def test_clamps_infinite(self):
        f = fn(U3, 5, 2, "inf")
        assert truncate(f, 3).values == (Fraction(3), Fraction(2), Fraction(3))

    def test_signed_clamp(self):
        f = fn(U2, -4, 1)
        assert truncate(f, 2).values == (Fraction(-2), Fraction(1))

    def test_identity_below_height(self):
        f = fn(U2, 1, 1)
        assert truncate(f, 10) == f

    @given(
        st.lists(st.fractions(0, 4), min_size=2, max_size=2),
        st.fractions(Fraction(1, 8), 3),
        st.fractions(0, 3),
    )
    @settings(max_examples=60, derandomize=True)
    def test_superlevels_agree_below_height(self, vals, k, t):
        f = StepFunction(U2, tuple(vals))
        g = truncate(f, k)
        for strict in (True, False):
            if t < k:
                assert superlevel(g, t, strict) == superlevel(f, t, strict)
        assert superlevel(g, k, strict=True).is_empty


class TestFloorScale:
    def test_halves(self):
        f = fn(U2, Fraction(7, 10), Fraction(63, 50))
        assert floor_scale(f, 2).values == (Fraction(1, 2), Fraction(1))

    def test_integers_fixed(self):
        f = fn(U2, 2, 3)
        assert floor_scale(f, 5) == f

    def test_exact_decimal_boundary(self):
        # 0.999 * 1000 is exactly 999; binary floats would land below it
        f = StepFunction.from_values(GroundSet(1), ["0.999"])
        assert floor_scale(f, 1000).values == (Fraction(999, 1000),)

    def test_rejects_infinite(self):
        with pytest.raises(ValueError):
            floor_scale(fn(U2, 1, "inf"), 2)

    @given(
        st.lists(st.fractions(0, 5), min_size=3, max_size=3),
        st.integers(1, 12),
    )
    @settings(max_examples=80, derandomize=True)
    def test_bounds(self, vals, k):
        f = StepFunction(U3, tuple(vals))
        g = floor_scale(f, k)
        for a, b in zip(g.values, f.values):
            assert a <= b
            assert b - a < Fraction(1, k)
            assert (a * k).denominator == 1


class TestPointwise:
    def test_indicator(self):
        s = SubsetMask.from_indices(U3, [0, 2])
        assert indicator(s).values == (Fraction(1), Fraction(0), Fraction(1))

    def test_add(self):
        assert add(fn(U2, 1, 2), fn(U2, 3, 4)).values == (Fraction(4), Fraction(6))

    def test_abs(self):
        assert abs_(fn(U2, -1, 2)).values == (Fraction(1), Fraction(2))

    def test_universe_mismatch(self):
        with pytest.raises(UniverseMismatchError):
            add(fn(U2, 1, 1), fn(U3, 1, 1, 1))

    def test_indicator_sum_doubles_on_intersection(self):
        a = SubsetMask.from_indices(U3, [0, 1])
        b = SubsetMask.from_indices(U3, [1, 2])
        total = add(indicator(a), indicator(b))
        assert superlevel(total, 2, strict=False) == (a & b)

    def test_sub_requires_finite(self):
        with pytest.raises(ValueError):
            sub(fn(U2, "inf", 0), fn(U2, 1, 1))

    def test_signed_infinite_mix_rejected(self):
        with pytest.raises(ValueError):
            StepFunction.from_values(U2, [-1, "inf"])
