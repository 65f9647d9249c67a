"""Prefix convergence audits: quasi-uniform bookkeeping and the harnesses."""

import random
from fractions import Fraction

import pytest

from choquet import (
    Capacity,
    FunctionSequence,
    GeneratorKind,
    GroundSet,
    HypothesisError,
    PremiseError,
    StepFunction,
    SubsetMask,
    Verdict,
    chebyshev_audit,
    choquet_value,
    converse_dct_audit,
    countable_sublinearity_audit,
    dct_harness,
    fatou_harness,
    generate_capacity,
    indicator,
    qu_audit,
    scalar,
    threshold_capacity,
)
from choquet.convergence import find_countable_sublinearity_violation

U2 = GroundSet(2)
U3 = GroundSet(3)
U6 = GroundSet(6)


def fn(universe, *values):
    return StepFunction.from_values(universe, values)


def seq(terms, limit, schedule=()):
    return FunctionSequence.build(terms, limit, schedule)


class TestQuAudit:
    def test_constant_sequence_verified(self):
        f = fn(U3, 1, 2, 3)
        H = generate_capacity(GeneratorKind.RANDOM_MONOTONE, U3, seed=1)
        audit = qu_audit(seq([f, f, f], f), H, eta=Fraction(1, 100))
        assert audit.qu_verdict is Verdict.VERIFIED
        assert audit.minimal_bad_set.is_empty

    def test_null_exceptional_point_verified(self):
        H = Capacity(U2, [0, 0, 1, 1])  # the point 0 is null
        bump = indicator(SubsetMask.from_indices(U2, [0]))
        zero = StepFunction.zero(U2)
        audit = qu_audit(seq([bump, bump], zero), H, eta=Fraction(1, 2))
        assert audit.qu_verdict is Verdict.VERIFIED
        assert audit.minimal_bad_set.indices() == (0,)

    def test_moving_bump_refuted(self):
        # the finite trace of the moving-atom phenomenon: each term is small
        # individually but every tail accumulates a full-capacity bad set
        H = threshold_capacity(U6, 0)
        zero = StepFunction.zero(U6)
        terms = [indicator(SubsetMask.from_indices(U6, [n])) for n in range(6)]
        audit = qu_audit(seq(terms, zero), H, eta=Fraction(1, 2))
        assert audit.qu_verdict is Verdict.REFUTED
        assert H[audit.minimal_bad_set] == Fraction(1)
        assert audit.refutation is not None

    def test_moving_bump_verified_at_large_eps(self):
        H = threshold_capacity(U6, 0)
        zero = StepFunction.zero(U6)
        terms = [indicator(SubsetMask.from_indices(U6, [n])) for n in range(6)]
        schedule = [(Fraction(1), SubsetMask.full(U6))]
        audit = qu_audit(seq(terms, zero, schedule), H, eta=Fraction(1, 2))
        assert audit.qu_verdict is Verdict.VERIFIED

    def test_transient_noise_is_insufficient_not_refuted(self):
        # a single early bump that later terms drop: discarding the head
        # would verify, so the prefix is inconclusive rather than refuting
        H = Capacity.additive(U2, [1, 1])
        zero = StepFunction.zero(U2)
        bump = indicator(SubsetMask.from_indices(U2, [0]))
        audit = qu_audit(seq([bump, zero, zero], zero), H, eta=Fraction(1, 2))
        assert audit.qu_verdict is Verdict.INSUFFICIENT_PREFIX

    def test_empty_tail_window(self):
        f = fn(U2, 1, 1)
        H = Capacity.additive(U2, [1, 1])
        audit = qu_audit(seq([f], f), H, eta=Fraction(1), tail_start=5)
        assert audit.qu_verdict is Verdict.INSUFFICIENT_PREFIX

    def test_minimal_bad_set_is_minimal(self):
        # dropping any point of B breaks the uniform tail bound
        H = Capacity.additive(U3, [1, 1, 1])
        zero = StepFunction.zero(U3)
        terms = [fn(U3, 1, 0, 0), fn(U3, 0, 1, 0)]
        audit = qu_audit(seq(terms, zero), H, eta=Fraction(1, 2))
        bad = audit.minimal_bad_set
        assert bad.indices() == (0, 1)
        for x in bad.indices():
            without = bad - SubsetMask.from_indices(U3, [x])
            still_deviates = any(
                abs(term.values[x]) > Fraction(1, 2)
                for term in terms
            )
            assert still_deviates and not bad.issubset(without)


class TestChebyshev:
    def test_equal_functions(self):
        f = fn(U2, 1, 2)
        H = Capacity.additive(U2, [1, 1])
        assert chebyshev_audit(f, f, H, 0)

    def test_indicator_deviation_at_n_zero(self):
        # the strict level of an indicator at its own height is empty
        H = Capacity.additive(U2, [1, 1])
        f = StepFunction.zero(U2)
        f_n = indicator(SubsetMask.from_indices(U2, [0]))
        assert chebyshev_audit(f_n, f, H, 0)

    def test_random_sweep(self):
        rng = random.Random("cheb")
        for trial in range(300):
            H = generate_capacity(
                GeneratorKind.RANDOM_MONOTONE, U3, seed=trial % 40
            )
            f = fn(U3, *(Fraction(rng.randrange(-8, 9), 8) for _ in range(3)))
            g = fn(U3, *(Fraction(rng.randrange(-8, 9), 8) for _ in range(3)))
            assert chebyshev_audit(f, g, H, rng.randrange(0, 8))


class TestFatou:
    def test_constant_sequence_equality(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=3)
        f = fn(U3, 1, "1/2", 2)
        audit = fatou_harness(seq([f, f, f], f), H, eta=Fraction(1, 8), window=4)
        assert audit.qu_verdict is Verdict.VERIFIED

    def test_shrinking_exceptional_sets(self):
        H = Capacity.additive(U3, [1, Fraction(1, 2), Fraction(1, 4)])
        f = fn(U3, 2, 2, 2)
        cuts = [
            SubsetMask.from_indices(U3, [0, 1, 2]),
            SubsetMask.from_indices(U3, [1, 2]),
            SubsetMask.from_indices(U3, [2]),
        ]
        terms = []
        for cut in cuts:
            keep = cut.complement()
            terms.append(
                StepFunction(
                    U3,
                    tuple(
                        f.values[x] if x in keep else Fraction(0)
                        for x in U3.points()
                    ),
                )
            )
        schedule = [(H[c], c) for c in cuts]
        audit = fatou_harness(
            seq(terms, f, schedule), H, eta=Fraction(1, 8), window=4
        )
        assert audit.qu_verdict is Verdict.VERIFIED

    def test_refusal_without_finite_subadditivity(self):
        H = Capacity(U2, [0, 1, 1, 3])
        f = fn(U2, 1, 1)
        with pytest.raises(HypothesisError):
            fatou_harness(seq([f, f], f), H, eta=Fraction(1, 8), window=2)

    def test_search_mode_runs_instead_of_refusing(self):
        H = Capacity(U2, [0, 1, 1, 3])
        f = fn(U2, 1, 1)
        audit = fatou_harness(
            seq([f, f], f),
            H,
            eta=Fraction(1, 8),
            window=2,
            search_counterexample=True,
        )
        assert any("counterexample" in note for note in audit.notes)


class TestDct:
    def test_constant_sequence_all_zero(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=7)
        f = fn(U3, 1, 2, "1/2")
        audit = dct_harness(
            seq([f, f, f], f), f, H, eta=Fraction(1, 8), window=8
        )
        assert audit.qu_verdict is Verdict.VERIFIED

    def test_geometric_bumps_decay(self):
        H = Capacity.additive(U2, [1, 2])
        e = SubsetMask.from_indices(U2, [0])
        f = fn(U2, 1, 1)
        terms = [
            StepFunction(
                U2,
                tuple(
                    f.values[x] + (Fraction(1, 2**n) if x in e else 0)
                    for x in U2.points()
                ),
            )
            for n in range(5)
        ]
        dominator = fn(U2, 2, 1)
        audit = dct_harness(
            seq(terms, f), dominator, H, eta=Fraction(1, 16), window=8
        )
        assert audit.qu_verdict is Verdict.VERIFIED
        deviations = [
            choquet_value(
                StepFunction(U2, (Fraction(1, 2**n), Fraction(0))), H
            )
            for n in range(5)
        ]
        assert deviations == [Fraction(1, 2**n) for n in range(5)]

    def test_sign_flips_on_charged_set_report_nonconvergence(self):
        H = Capacity.additive(U2, [1, 1])
        e = SubsetMask.from_indices(U2, [0])
        zero = StepFunction.zero(U2)
        flip = indicator(e)
        terms = [flip, scalar(-1, flip), flip, scalar(-1, flip)]
        schedule = [(Fraction(1), e)]
        audit = dct_harness(
            seq(terms, zero, schedule), flip, H, eta=Fraction(1, 4), window=8
        )
        # every deviation integral equals H(E) = 1: bounded below, and the
        # three-piece bound still caps the settled tail
        assert "1, 1, 1, 1" in audit.notes[0]
        assert audit.qu_verdict is Verdict.VERIFIED

    def test_domination_violation_is_an_error(self):
        H = Capacity.additive(U2, [1, 1])
        f = fn(U2, 1, 1)
        with pytest.raises(PremiseError) as err:
            dct_harness(
                seq([fn(U2, 3, 0)], fn(U2, 0, 0)),
                f,
                H,
                eta=Fraction(1, 4),
                window=4,
            )
        assert "term 0" in str(err.value)

    def test_infinite_dominator_integral_refused(self):
        H = Capacity(U2, [0, "inf", 1, "inf"])
        f = fn(U2, 1, 0)
        with pytest.raises(PremiseError):
            dct_harness(seq([f], f), f, H, eta=Fraction(1, 4), window=4)


class TestConverseDct:
    def test_constant_sequence(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=2)
        f = fn(U3, 1, "1/2", 0)
        audit = converse_dct_audit(seq([f, f, f, f], f), H)
        assert audit.qu_verdict is Verdict.VERIFIED

    def test_quarter_power_bumps(self):
        H = threshold_capacity(U2, 0)  # H(E) = 1 on nonempty sets
        e = SubsetMask.from_indices(U2, [0])
        f = fn(U2, "1/2", "1/2")
        terms = [
            StepFunction(
                U2,
                tuple(
                    f.values[x] + (Fraction(1, 4**n) if x in e else 0)
                    for x in U2.points()
                ),
            )
            for n in range(5)
        ]
        audit = converse_dct_audit(seq(terms, f), H)
        assert audit.qu_verdict is Verdict.VERIFIED
        # deviations 4^-n never exceed 2^-n strictly, so every A_k is empty
        for entry in audit.inequality_results:
            if entry.name.startswith("H(A_"):
                assert entry.lhs == 0

    def test_premise_violation_reported_with_index(self):
        H = Capacity.additive(U2, [1, 1])
        zero = StepFunction.zero(U2)
        loud = fn(U2, 1, 0)
        with pytest.raises(PremiseError) as err:
            converse_dct_audit(seq([zero, loud], zero), H)
        assert "n=1" in str(err.value)

    def test_refuses_without_countable_subadditivity(self):
        H = Capacity(U2, [0, 1, 1, 3])
        f = fn(U2, 0, 0)
        with pytest.raises(HypothesisError):
            converse_dct_audit(seq([f], f), H)


class TestCountableSublinearity:
    def test_single_term(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=4)
        f = fn(U3, 1, 2, 3)
        assert countable_sublinearity_audit(seq([f], f), H)

    def test_indicator_cascade(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U3, seed=6)
        pieces = [
            scalar(Fraction(1, 2**n), indicator(SubsetMask.from_indices(U3, [n])))
            for n in range(3)
        ]
        total = fn(U3, 1, "1/2", "1/4")
        assert countable_sublinearity_audit(seq(pieces, total), H)

    def test_refusal_and_search_on_violation_capacity(self):
        H = Capacity(U2, [0, 1, 1, 3])
        f = fn(U2, 1, 1)
        with pytest.raises(HypothesisError):
            countable_sublinearity_audit(seq([f], f), H)
        found = find_countable_sublinearity_violation(H)
        assert found is not None
        assert found["lhs"] > found["rhs"]
        assert found["lhs"] == Fraction(3) and found["rhs"] == Fraction(2)

    def test_stabilization_enforced(self):
        H = generate_capacity(GeneratorKind.RANDOM_SUBMODULAR_MONOTONE, U2, seed=1)
        f = fn(U2, 1, 1)
        wrong_limit = fn(U2, 2, 2)
        with pytest.raises(PremiseError):
            countable_sublinearity_audit(seq([f], wrong_limit), H)
