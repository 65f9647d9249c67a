"""Layer-cake integration and the sublinearity calculus."""

from fractions import Fraction

import pytest

from choquet import (
    INDETERMINATE,
    INF,
    Axiom,
    Capacity,
    GeneratorKind,
    GroundSet,
    HypothesisError,
    StepFunction,
    SubsetMask,
    add,
    check_strict_vs_weak,
    choquet,
    choquet_value,
    floor_scale,
    generate_capacity,
    indicator,
    quasi_sublinearity_check,
    scalar,
    sublinearity_gap,
    superlevel,
    truncation_tail,
    verify_sublinearity_equivalence,
)
from choquet.domain import offset, pos_part

U2 = GroundSet(2)
U3 = GroundSet(3)

VIOLATION = Capacity(U2, [0, 1, 1, 3])
# mask order: {}, {0}, {1}, {0,1}
STAIR = Capacity(U2, [0, 1, 2, "2.5"])


def fn(universe, *values):
    return StepFunction.from_values(universe, values)


def riemann_midpoint(f, H, step: Fraction) -> Fraction:
    """Independent oracle: midpoint Riemann sum of t -> H({f > t}).

    Only for finite f and finite H; exact rational accumulation.
    """
    top = max(f.values)
    total = Fraction(0)
    t = step / 2
    while t < top:
        total += H[superlevel(f, t, strict=True)] * step
        t += step
    return total


class TestChoquet:
    def test_indicator_recovers_capacity(self):
        for mask in U2.masks():
            s = SubsetMask(U2, mask)
            assert choquet_value(indicator(s), STAIR) == STAIR[s]

    def test_stair_example_value(self):
        assert choquet_value(fn(U2, 3, 1), STAIR) == Fraction(9, 2)

    def test_stair_example_against_riemann_oracle(self):
        f = fn(U2, 3, 1)
        step = Fraction(1, 1024)
        approx = riemann_midpoint(f, STAIR, step)
        bound = max(f.values) * step * STAIR[SubsetMask.full(U2)]
        assert abs(approx - Fraction(9, 2)) <= bound

    def test_constant_scales_full_capacity(self):
        c = Fraction(7, 3)
        f = StepFunction.constant(U2, c)
        assert choquet_value(f, STAIR) == c * STAIR[SubsetMask.full(U2)]

    def test_breakdown_dot_product(self):
        result = choquet(fn(U2, 3, 1), STAIR)
        total = Fraction(0)
        for term in result.breakdown:
            total += term.gap * term.capacity
        assert total == result.value
        assert [t.level for t in result.breakdown] == [Fraction(3), Fraction(1)]

    def test_infinite_value_on_null_set_contributes_nothing(self):
        H = Capacity(U2, [0, 0, 1, 1])
        f = fn(U2, "inf", 2)
        assert choquet_value(f, H) == Fraction(2)

    def test_infinite_value_on_charged_set(self):
        H = Capacity(U2, [0, 1, 1, 3])
        assert choquet_value(fn(U2, "inf", 0), H) is INF

    def test_infinite_capacity_layer(self):
        H = Capacity(U2, [0, "inf", 1, "inf"])
        assert choquet_value(fn(U2, 1, 0), H) is INF

    def test_zero_function(self):
        assert choquet_value(StepFunction.zero(U2), VIOLATION) == 0

    def test_rejects_signed(self):
        with pytest.raises(ValueError):
            choquet(fn(U2, -1, 1), STAIR)

    def test_monotone_in_f(self):
        H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=3)
        f = fn(U3, 1, "1/2", 0)
        g = fn(U3, 1, 1, "1/4")
        assert choquet_value(f, H) <= choquet_value(g, H)

    def test_positive_homogeneity(self):
        H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=4)
        f = fn(U3, "3/2", "1/2", 2)
        for c in (Fraction(0), Fraction(2, 3), Fraction(5)):
            assert choquet_value(scalar(c, f), H) == c * choquet_value(f, H)


class TestStrictVsWeak:
    def test_stair_example(self):
        assert check_strict_vs_weak(fn(U2, 3, 1), STAIR)

    def test_zero(self):
        assert check_strict_vs_weak(StepFunction.zero(U2), STAIR)

    def test_random_sweep_including_ties(self):
        for seed in range(30):
            H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=seed)
            f = fn(U3, Fraction(seed % 4, 2), Fraction((seed + 1) % 3, 2), Fraction(1, 2))
            assert check_strict_vs_weak(f, H)

    def test_infinite_entries(self):
        H = Capacity(U2, [0, 0, 1, 1])
        assert check_strict_vs_weak(fn(U2, "inf", 2), H)


class TestSublinearityGap:
    def test_violation_pair_has_positive_gap(self):
        gap = sublinearity_gap(
            indicator(SubsetMask.from_indices(U2, [0])),
            indicator(SubsetMask.from_indices(U2, [1])),
            VIOLATION,
        )
        assert gap == Fraction(1)

    def test_zero_second_argument(self):
        f = fn(U2, 2, 1)
        assert sublinearity_gap(f, StepFunction.zero(U2), VIOLATION) == 0

    def test_strongly_subadditive_never_positive(self):
        for seed in range(15):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            f = fn(U3, 1, "1/2", 0)
            g = fn(U3, "1/2", "3/2", 1)
            assert sublinearity_gap(f, g, H) <= 0

    def test_indeterminate_reported(self):
        H = Capacity(U2, [0, "inf", 0, "inf"])
        f = indicator(SubsetMask.from_indices(U2, [0]))
        assert sublinearity_gap(f, f, H) is INDETERMINATE

    def test_infinite_gap(self):
        # combined integral hits an infinite layer the parts avoid
        H = Capacity(U2, [0, 1, 1, "inf"])
        f = indicator(SubsetMask.from_indices(U2, [0]))
        g = indicator(SubsetMask.from_indices(U2, [1]))
        assert sublinearity_gap(f, g, H) is INF


class TestEquivalence:
    def test_violation_capacity_grid(self):
        report = verify_sublinearity_equivalence(VIOLATION, 1, 1)
        assert report.max_gap == Fraction(1)
        assert not report.strongly_subadditive
        assert report.equivalence_holds
        f, g = report.argmax
        assert f.values == (Fraction(1), Fraction(0))
        assert g.values == (Fraction(0), Fraction(1))

    def test_additive_max_gap_zero(self):
        H = Capacity.additive(U2, [1, 2])
        report = verify_sublinearity_equivalence(H, 2, 2)
        assert report.max_gap == 0
        assert report.strongly_subadditive
        assert report.equivalence_holds

    def test_submodular_grid_nonpositive(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=11)
        report = verify_sublinearity_equivalence(H, 3, 2)
        assert report.max_gap <= 0
        assert report.equivalence_holds

    def test_refuses_non_monotone(self):
        H = Capacity(U2, [0, 5, 1, 2])
        with pytest.raises(HypothesisError):
            verify_sublinearity_equivalence(H, 1, 1)

    def test_budget_guard(self):
        from choquet import BudgetError

        with pytest.raises(BudgetError):
            verify_sublinearity_equivalence(VIOLATION, 3, 2, budget=100)

    def test_extended_path_matches_fast_path_on_finite_tables(self):
        H = VIOLATION
        fast = verify_sublinearity_equivalence(H, 1, 1)
        from choquet.integral import _equivalence_extended

        max_gap, pair, checked, indeterminate = _equivalence_extended(H, 2, 1)
        assert max_gap == fast.max_gap
        assert indeterminate == 0

    def test_infinite_table_equivalence(self):
        H = Capacity(U2, [0, 1, 1, "inf"])  # monotone, and strongly subadditive fails
        report = verify_sublinearity_equivalence(H, 1, 1)
        assert report.max_gap is INF
        assert not report.strongly_subadditive
        assert report.equivalence_holds


class TestTruncationTail:
    def test_bounded_function_has_zero_tail(self):
        f = fn(U2, 1, 2)
        assert truncation_tail(f, STAIR, 2) == 0

    def test_additive_tail_closed_form(self):
        H = Capacity.additive(U2, [1, 1])
        assert truncation_tail(fn(U2, 5, 1), H, 2) == Fraction(3)

    def test_null_infinite_part(self):
        H = Capacity(U2, [0, 0, 1, 1])
        for k in (1, 2, 10):
            assert truncation_tail(fn(U2, "inf", 0), H, k) == 0

    def test_random_sweep(self):
        for seed in range(20):
            H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=seed)
            f = fn(U3, Fraction(seed, 3), Fraction(seed % 5, 2), 1)
            for k in (Fraction(1, 2), Fraction(3, 2)):
                truncation_tail(f, H, k)  # raises InvariantViolation on mismatch


class TestQuasiSublinearity:
    def test_zero_summand(self):
        H = Capacity.additive(U2, [1, 1])
        assert quasi_sublinearity_check(fn(U2, 1, -1), StepFunction.zero(U2), H)

    def test_doubled_indicator(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U2, seed=2)
        e = indicator(SubsetMask.from_indices(U2, [0]))
        assert quasi_sublinearity_check(e, e, H)

    def test_refusal_names_dependency(self):
        with pytest.raises(HypothesisError) as err:
            quasi_sublinearity_check(fn(U2, 1, 0), fn(U2, 0, 1), VIOLATION)
        assert "finite-subadd" in str(err.value)

    def test_random_sweep(self):
        for seed in range(25):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            g = fn(U3, Fraction(seed % 5, 2) - 1, Fraction(seed % 3), Fraction(-1, 2))
            h = fn(U3, Fraction(seed % 7, 3) - 1, Fraction(-seed % 4, 2), Fraction(2))
            assert quasi_sublinearity_check(g, h, H)


class TestFloorScalingChain:
    def test_discrete_bound_and_shifted_positive_part(self):
        for seed in range(12):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            f = fn(U3, "4/3", "1/2", "5/6")
            g = fn(U3, "2/3", 1, "1/6")
            base = choquet_value(f, H) + choquet_value(g, H)
            for k in (1, 2, 3, 5):
                rounded = add(floor_scale(f, k), floor_scale(g, k))
                assert choquet_value(rounded, H) <= base
                shifted = pos_part(offset(add(f, g), Fraction(-2, k)))
                assert choquet_value(shifted, H) <= choquet_value(rounded, H)

    def test_grid_valued_sublinearity(self):
        # functions with values in N/k stay sublinear under strong subadditivity
        for seed in range(12):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            k = 2
            f = fn(U3, Fraction(3, k), Fraction(1, k), 0)
            g = fn(U3, Fraction(2, k), Fraction(2, k), Fraction(5, k))
            assert sublinearity_gap(f, g, H) <= 0
