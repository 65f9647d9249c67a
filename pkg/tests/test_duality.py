"""Greedy measures, the exact LP, and the contraction ladder."""

import random
from fractions import Fraction

import pytest

from choquet import (
    INF,
    AdditiveMeasure,
    Capacity,
    DualMethod,
    GeneratorKind,
    GroundSet,
    HypothesisError,
    StepFunction,
    SubsetMask,
    choquet_value,
    domination_inequality_audit,
    dual_value,
    generate_capacity,
    greedy_measure,
    is_dominated,
    semifinite_unboundedness_demo,
    threshold_capacity,
)
from choquet.corpus import random_dominated_measure
from choquet.simplex import maximize

U2 = GroundSet(2)
U3 = GroundSet(3)

STAIR = Capacity(U2, [0, 1, 2, "2.5"])
VIOLATION = Capacity(U2, [0, 1, 1, 3])


def fn(universe, *values):
    return StepFunction.from_values(universe, values)


class TestSimplex:
    def test_tiny_lp(self):
        # max x + y st x <= 1, y <= 1, x + y <= 3/2
        value, x = maximize(
            [1, 1], [[1, 0], [0, 1], [1, 1]], [1, 1, Fraction(3, 2)]
        )
        assert value == Fraction(3, 2)
        assert sum(x) == Fraction(3, 2)

    def test_degenerate_is_fine(self):
        value, x = maximize([1], [[1], [1]], [0, 0])
        assert value == 0 and x == [0]

    def test_exactness(self):
        value, _ = maximize(
            [Fraction(1, 3)], [[Fraction(1, 7)]], [Fraction(1, 11)]
        )
        assert value == Fraction(1, 3) * Fraction(7, 11)


class TestDomination:
    def test_zero_measure(self):
        assert is_dominated(AdditiveMeasure.zero(U2), VIOLATION)

    def test_additive_self_domination(self):
        H = Capacity.additive(U2, [1, 2])
        assert is_dominated(AdditiveMeasure.from_values(U2, [1, 2]), H)

    def test_stair_rejects_heavy_pair(self):
        mu = AdditiveMeasure.from_values(U2, [1, 2])
        assert not is_dominated(mu, STAIR)  # mu({0,1}) = 3 > 2.5

    def test_random_samples_are_dominated(self):
        rng = random.Random("dom")
        for seed in range(25):
            H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=seed)
            mu = random_dominated_measure(rng, H)
            assert is_dominated(mu, H)


class TestGreedy:
    def test_stair_masses(self):
        mu = greedy_measure(fn(U2, 3, 1), STAIR)
        assert mu.masses == (Fraction(1), Fraction(3, 2))
        assert mu.integrate(fn(U2, 3, 1)) == Fraction(9, 2)

    def test_additive_recovers_masses(self):
        H = Capacity.additive(U3, [2, 5, 1])
        mu = greedy_measure(fn(U3, 3, 2, 1), H)
        assert mu.masses == (Fraction(2), Fraction(5), Fraction(1))

    def test_constant_function_totals(self):
        c = Fraction(4, 3)
        mu = greedy_measure(StepFunction.constant(U2, c), STAIR)
        assert mu.integrate(StepFunction.constant(U2, c)) == c * STAIR[SubsetMask.full(U2)]

    def test_infinite_chain_refused(self):
        H = Capacity(U2, [0, "inf", 1, "inf"])
        with pytest.raises(HypothesisError):
            greedy_measure(fn(U2, 2, 1), H)

    def test_telescoping_for_arbitrary_monotone(self):
        # the pairing identity needs no subadditivity at all
        for seed in range(20):
            H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=seed)
            rng = random.Random(f"greedy:{seed}")
            f = fn(U3, rng.randrange(5), rng.randrange(5), rng.randrange(5))
            mu = greedy_measure(f, H)
            assert mu.integrate(f) == choquet_value(f, H)


class TestDualValue:
    def test_strong_duality_on_submodular(self):
        for seed in range(10):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            f = fn(U3, 2, "1/2", 1)
            report = dual_value(f, H)
            assert report.gap == 0
            assert report.dual_value == choquet_value(f, H)
            greedy = dual_value(f, H, method=DualMethod.GREEDY)
            assert greedy.dual_value == report.dual_value
            assert greedy.dominated

    def test_violation_capacity_has_gap_one(self):
        report = dual_value(fn(U2, 1, 1), VIOLATION)
        assert report.choquet_value == Fraction(3)
        assert report.dual_value == Fraction(2)
        assert report.gap == Fraction(1)

    def test_zero_function(self):
        report = dual_value(StepFunction.zero(U2), STAIR)
        assert report.dual_value == 0 and report.gap == 0

    def test_optimal_measure_is_feasible_and_achieves_value(self):
        for seed in range(10):
            H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=seed)
            f = fn(U3, 1, 2, "1/2")
            report = dual_value(f, H)
            assert is_dominated(report.optimal_measure, H)
            assert report.optimal_measure.integrate(f) == report.dual_value
            assert report.gap >= 0

    def test_infinite_table_with_finite_superlevels_contracts(self):
        H = Capacity(U2, [0, 1, "inf", "inf"])
        f = fn(U2, 2, 0)  # support {0}; H({0}) = 1 finite
        report = dual_value(f, H)
        assert report.choquet_value == Fraction(2)
        assert report.dual_value == Fraction(2)
        assert any("contract" in note for note in report.notes)

    def test_gap_at_infinity(self):
        # H = 1 on small sets, inf on the full set: the integral is infinite
        # but every dominated measure obeys the pairwise caps, so the
        # supremum stays at 3/2 and the duality gap is genuinely infinite
        H = threshold_capacity(U3, 2, top=INF, low=Fraction(1))
        f = fn(U3, 1, 1, 1)
        report = dual_value(f, H)
        assert report.choquet_value is INF
        assert report.dual_value == Fraction(3, 2)
        assert report.gap is INF
        assert report.ladder and report.ladder[0].target == Fraction(1)

    def test_unbounded_direction(self):
        # a charged point inside no finite-capacity set makes the dual diverge
        H = Capacity(U2, [0, "inf", 1, "inf"])
        report = dual_value(fn(U2, 1, 0), H)
        assert report.choquet_value is INF and report.dual_value is INF
        assert report.gap == 0


class TestDominationAudit:
    def test_zero_measure_always_passes(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=1)
        assert domination_inequality_audit(fn(U3, 1, 2, 3), AdditiveMeasure.zero(U3), H)

    def test_greedy_measure_attains_equality(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=5)
        f = fn(U3, 2, 1, "3/2")
        mu = greedy_measure(f, H)
        assert is_dominated(mu, H)
        assert mu.integrate(f) == choquet_value(f, H)

    def test_random_triples(self):
        rng = random.Random("audit")
        for seed in range(30):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            mu = random_dominated_measure(rng, H)
            f = fn(U3, rng.randrange(4), rng.randrange(4), rng.randrange(4))
            assert domination_inequality_audit(f, mu, H)


class TestSemifiniteDemo:
    def test_canonical_gap_refusal(self):
        H = threshold_capacity(U3, 1, top=INF, low=Fraction(1))
        with pytest.raises(HypothesisError) as err:
            semifinite_unboundedness_demo(fn(U3, 1, 1, 1), H)
        assert "semifinite" in str(err.value)

    def test_explicit_targets_build_the_ladder(self):
        # capacity with finite values 1..3 inside the infinite superlevel
        table = [0] * 8
        for mask in range(1, 8):
            table[mask] = mask.bit_count()
        table[7] = "inf"
        H = Capacity(U3, table)
        f = fn(U3, 1, 1, 1)
        demo = semifinite_unboundedness_demo(f, H, targets=[1, 2])
        assert demo.applicable
        assert [r.target for r in demo.rungs] == [Fraction(1), Fraction(2)]
        for rung in demo.rungs:
            assert rung.dual_value >= rung.lower_bound

    def test_finite_superlevels_delegate(self):
        H = Capacity(U2, [0, 1, "inf", "inf"])
        demo = semifinite_unboundedness_demo(fn(U2, 1, 0), H)
        assert not demo.applicable
        assert demo.delegated is not None
        assert demo.delegated.gap == 0
