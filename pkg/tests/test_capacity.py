"""Axiom checks, witnesses, derived capacities, and generators."""

from fractions import Fraction

import pytest

from choquet import (
    INF,
    Axiom,
    Capacity,
    GeneratorKind,
    GroundSet,
    SubsetMask,
    check_axiom,
    contract,
    find_strong_subadditivity_violation,
    generate_capacity,
    regularize,
    threshold_capacity,
)
from choquet.capacity import reevaluate_witness

U1 = GroundSet(1)
U2 = GroundSet(2)
U3 = GroundSet(3)

# mask order on n=2: {}, {0}, {1}, {0,1}
VIOLATION = Capacity(U2, [0, 1, 1, 3])


class TestConstruction:
    def test_table_length_enforced(self):
        with pytest.raises(ValueError):
            Capacity(U2, [0, 1, 2])

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            Capacity(U1, [0, -1])

    def test_additive_table(self):
        H = Capacity.additive(U2, [1, 2])
        assert H.table == (Fraction(0), Fraction(1), Fraction(2), Fraction(3))


class TestAxioms:
    def test_strong_subadditivity_violation_found(self):
        report = check_axiom(VIOLATION, Axiom.STRONGLY_SUBADDITIVE)
        assert not report.holds
        e, f = report.witness.sets
        assert (e.indices(), f.indices()) == ((0,), (1,))

    def test_two_level_capacity_is_monotone(self):
        H = Capacity(U3, [0] + [1] * 7)
        assert check_axiom(H, Axiom.MONOTONE).holds

    def test_semifinite_fails_on_infinite_atom(self):
        H = Capacity(U1, [0, "inf"])
        report = check_axiom(H, Axiom.SEMIFINITE)
        assert not report.holds
        assert report.witness.target == Fraction(1)

    def test_semifinite_vacuous_on_finite_tables(self):
        assert check_axiom(VIOLATION, Axiom.SEMIFINITE).holds

    def test_countable_reduces_to_finite_plus_empty(self):
        report = check_axiom(VIOLATION, Axiom.COUNTABLE_SUBADDITIVE)
        assert "finite union" in report.note
        # H({0,1}) = 3 > 1 + 1, so finite subadditivity fails and the
        # countable form must agree
        finite = check_axiom(VIOLATION, Axiom.FINITE_SUBADDITIVE)
        assert not finite.holds
        assert report.holds == finite.holds

    def test_empty_set_witness(self):
        H = Capacity(U1, [2, 3])
        report = check_axiom(H, Axiom.EMPTY_SET)
        assert not report.holds and report.witness.values == (Fraction(2),)

    def test_locally_finite_reads_all_finite(self):
        assert check_axiom(VIOLATION, Axiom.LOCALLY_FINITE).holds
        H = Capacity(U1, [0, "inf"])
        assert not check_axiom(H, Axiom.LOCALLY_FINITE).holds

    def test_zero_capacity_regular_vacuous(self):
        report = check_axiom(VIOLATION, Axiom.ZERO_CAPACITY_REGULAR)
        assert report.holds and "discrete" in report.note

    def test_monotone_witness(self):
        H = Capacity(U2, [0, 5, 1, 2])
        report = check_axiom(H, Axiom.MONOTONE)
        assert not report.holds
        e, f = report.witness.sets
        assert e.issubset(f) and H[e] > H[f]

    def test_reports_are_cached(self):
        H = Capacity(U2, [0, 1, 1, 2])
        assert H.check(Axiom.MONOTONE) is H.check(Axiom.MONOTONE)


class TestWitnessSoundness:
    def test_every_failing_report_reevaluates(self):
        capacities = [
            VIOLATION,
            Capacity(U1, [2, 3]),
            Capacity(U2, [0, 5, 1, 2]),
            Capacity(U1, [0, "inf"]),
            Capacity(U2, [0, "inf", 1, "inf"]),
            Capacity(U3, [0, 3, 3, 3, 3, 3, 3, 1]),
        ]
        for H in capacities:
            for axiom in Axiom:
                report = check_axiom(H, axiom)
                if not report.holds:
                    assert reevaluate_witness(H, report), (H.table, axiom)


class TestViolationScan:
    def test_lexicographically_first_pair(self):
        pair = find_strong_subadditivity_violation(VIOLATION)
        assert pair is not None
        assert (pair[0].indices(), pair[1].indices()) == ((0,), (1,))

    def test_additive_has_none(self):
        assert find_strong_subadditivity_violation(Capacity.additive(U3, [1, 2, 3])) is None


class TestContract:
    def test_full_set_is_identity(self):
        assert contract(VIOLATION, SubsetMask.full(U2)) == VIOLATION

    def test_empty_set_gives_zero_capacity(self):
        zeroed = contract(VIOLATION, SubsetMask.empty(U2))
        assert zeroed.table == (Fraction(0),) * 4

    def test_empty_contract_flags_nonzero_base(self):
        H = Capacity(U1, [1, 2])
        with pytest.warns(UserWarning):
            contract(H, SubsetMask.empty(U1))

    def test_point_contraction_table(self):
        localized = contract(VIOLATION, SubsetMask.from_indices(U2, [0]))
        assert localized.table == (Fraction(0), Fraction(1), Fraction(0), Fraction(1))


class TestRegularize:
    def test_infinite_atom_drops_to_zero(self):
        H = Capacity(U1, [0, "inf"])
        assert regularize(H)[1] == Fraction(0)

    def test_finite_monotone_fixed_point(self):
        H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=5)
        assert regularize(H) == H

    def test_mixed_table(self):
        H = Capacity(U2, [0, 2, "inf", "inf"])
        assert regularize(H).table == (Fraction(0), Fraction(2), Fraction(0), Fraction(2))

    def test_always_monotone_even_for_wild_input(self):
        H = Capacity(U2, [3, 1, "inf", 0])
        assert regularize(H).check(Axiom.MONOTONE).holds

    def test_brute_force_agreement(self):
        for seed in range(10):
            H = generate_capacity(
                GeneratorKind.RANDOM_MONOTONE, U3, seed=seed, infinity_rate=Fraction(1, 3)
            )
            reg = regularize(H)
            for mask in U3.masks():
                best = Fraction(0)
                sub = mask
                while True:
                    v = H.table[sub]
                    if v is not INF and v > best:
                        best = v
                    if sub == 0:
                        break
                    sub = (sub - 1) & mask
                assert reg.table[mask] == best


class TestGenerators:
    def test_threshold_zero(self):
        H = threshold_capacity(U3, 0)
        assert H[0] == 0
        assert all(H.table[m] == 1 for m in range(1, 8))

    def test_threshold_infinite_top(self):
        H = threshold_capacity(U3, 1, top=INF, low=Fraction(1))
        assert H[0] == 0
        assert H.table[1] == Fraction(1)
        assert H.table[7] is INF

    def test_random_monotone_is_monotone(self):
        for seed in range(20):
            H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=seed)
            assert H.check(Axiom.MONOTONE).holds
            assert H[0] == 0

    def test_random_monotone_with_infinities_is_monotone(self):
        for seed in range(20):
            H = generate_capacity(
                GeneratorKind.RANDOM_MONOTONE, U3, seed=seed, infinity_rate=Fraction(1, 4)
            )
            assert H.check(Axiom.MONOTONE).holds

    def test_coverage_functions_are_strongly_subadditive(self):
        for seed in range(25):
            H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=seed)
            assert H.check(Axiom.MONOTONE).holds
            assert H.check(Axiom.STRONGLY_SUBADDITIVE).holds
            assert H[0] == 0

    def test_determinism(self):
        a = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed="x")
        b = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed="x")
        assert a == b
