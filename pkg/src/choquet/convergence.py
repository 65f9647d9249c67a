"""Finite-prefix convergence audits.

A finite prefix cannot decide a limit, so every verdict here is relative to
the audited prefix, with INSUFFICIENT_PREFIX as a first-class outcome.  The
quantifiers of quasi-uniform convergence (tolerance eta, capacity budget
eps, tail start) are exposed directly rather than collapsed into a boolean;
the harnesses then replace liminf over n by the min over the stabilized
tail, which is exact at this scale.

Inequality entries always carry both sides as exact values.  A harness
never raises on a failed theorem instance: it records the failure, and the
suite treats any such record under valid hypotheses as a bug.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .capacity import Axiom, Capacity
from .domain import (
    StepFunction,
    SubsetMask,
    abs_,
    add,
    offset,
    pos_part,
    require_same_universe,
    sub,
    superlevel,
    truncate,
)
from .errors import HypothesisError, PremiseError
from .integral import choquet
from .values import INF, Value, ext_add, layer_product, parse_value


class Verdict(enum.Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    INSUFFICIENT_PREFIX = "insufficient-prefix"


@dataclass(frozen=True)
class InequalityResult:
    name: str
    lhs: Value
    rhs: Value
    holds: bool


@dataclass(frozen=True)
class Refutation:
    """A surviving deviation: the point, the tolerance, and where it recurs."""

    point: int
    eta: Fraction
    indices: tuple[int, ...]


@dataclass(frozen=True)
class FunctionSequence:
    """A finite prefix f_0, ..., f_N with its declared limit.

    The optional schedule lists claimed exceptional pairs (eps, E): off E
    the tail is supposed to sit within the audited tolerance, and H(E) must
    not exceed eps.  Both claims are audited, never assumed.
    """

    universe: "object"
    terms: tuple[StepFunction, ...]
    declared_limit: StepFunction
    schedule: tuple[tuple[Fraction, SubsetMask], ...] = ()

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a sequence needs at least one term")
        require_same_universe(self, *self.terms, self.declared_limit)
        for term in self.terms + (self.declared_limit,):
            if not term.is_finite:
                raise ValueError("sequence terms and limit must be finite")
        for eps, exceptional in self.schedule:
            if not isinstance(eps, Fraction) or eps < 0:
                raise ValueError("schedule tolerances must be nonnegative rationals")
            require_same_universe(self, exceptional)

    @classmethod
    def build(cls, terms, limit, schedule=()) -> "FunctionSequence":
        terms = tuple(terms)
        sched = tuple(
            (Fraction(parse_value(eps, allow_inf=False)), exceptional)
            for eps, exceptional in schedule
        )
        return cls(terms[0].universe, terms, limit, sched)

    @property
    def last_index(self) -> int:
        return len(self.terms) - 1


@dataclass(frozen=True)
class ConvergenceAudit:
    qu_verdict: Verdict
    minimal_bad_set: SubsetMask
    inequality_results: tuple[InequalityResult, ...]
    refutation: Optional[Refutation] = None
    notes: tuple[str, ...] = ()

    @property
    def all_hold(self) -> bool:
        return all(entry.holds for entry in self.inequality_results)


def _deviation(f: StepFunction, limit: StepFunction) -> StepFunction:
    return abs_(sub(f, limit))


def _bad_set(seq: FunctionSequence, eta, start: int) -> SubsetMask:
    """Points where some tail term deviates beyond eta."""
    bits = 0
    for n in range(start, len(seq.terms)):
        dev = _deviation(seq.terms[n], seq.declared_limit)
        bits |= superlevel(dev, eta, strict=True).bits
    return SubsetMask(seq.universe, bits)


def qu_audit(
    seq: FunctionSequence, H: Capacity, eta, tail_start: int = 0
) -> ConvergenceAudit:
    """Audit quasi-uniform convergence of the prefix at tolerance eta.

    The union B of tail deviation sets is the minimal exceptional set, so
    the prefix converges quasi-uniformly at budget eps iff H(B) <= eps.
    Budgets come from the schedule (default 0: convergence off a null set).
    REFUTED requires the failure to survive every later tail start; when a
    later start would verify, the verdict is INSUFFICIENT_PREFIX instead.
    """
    require_same_universe(seq, H)
    eta = Fraction(parse_value(eta, allow_inf=False))
    if eta <= 0:
        raise ValueError("the tolerance eta must be positive")
    last = seq.last_index
    entries = []
    notes = []
    if tail_start > last:
        return ConvergenceAudit(
            Verdict.INSUFFICIENT_PREFIX,
            SubsetMask.empty(seq.universe),
            (),
            notes=("tail start lies beyond the prefix",),
        )
    bad = _bad_set(seq, eta, tail_start)
    h_bad = H[bad]
    for idx, (eps, claimed) in enumerate(seq.schedule):
        entries.append(
            InequalityResult(
                f"schedule[{idx}]: H(E) <= eps", H[claimed], eps, H[claimed] <= eps
            )
        )
    budgets = [eps for eps, _ in seq.schedule] or [Fraction(0)]
    if not seq.schedule:
        notes.append("no schedule given; auditing against a zero capacity budget")
    failing = []
    for eps in budgets:
        ok = h_bad <= eps
        entries.append(
            InequalityResult(f"H(bad set) <= {eps}", h_bad, eps, ok)
        )
        if not ok:
            failing.append(eps)
    if not failing:
        return ConvergenceAudit(Verdict.VERIFIED, bad, tuple(entries), notes=tuple(notes))

    # would discarding more initial terms rescue every failing budget?
    recoverable = False
    for start in range(tail_start + 1, last + 1):
        h_later = H[_bad_set(seq, eta, start)]
        if all(h_later <= eps for eps in failing):
            recoverable = True
            notes.append(f"a tail start of {start} would verify the failing budgets")
            break
    if recoverable:
        return ConvergenceAudit(
            Verdict.INSUFFICIENT_PREFIX, bad, tuple(entries), notes=tuple(notes)
        )

    refutation = None
    if bad.is_empty:
        notes.append("the bad set is empty; the budget fails on H(empty) alone")
    else:
        scheduled_bits = 0
        for _, claimed in seq.schedule:
            scheduled_bits |= claimed.bits
        outside = bad.bits & ~scheduled_bits
        picked = outside if outside else bad.bits
        witness_point = (picked & -picked).bit_length() - 1
        indices = tuple(
            n
            for n in range(tail_start, last + 1)
            if witness_point
            in superlevel(_deviation(seq.terms[n], seq.declared_limit), eta, strict=True)
        )
        refutation = Refutation(point=witness_point, eta=eta, indices=indices)
    return ConvergenceAudit(
        Verdict.REFUTED, bad, tuple(entries), refutation=refutation, notes=tuple(notes)
    )


def chebyshev_audit(f_n: StepFunction, f: StepFunction, H: Capacity, n: int) -> bool:
    """2^-n * H({|f_n - f| > 2^-n}) <= integral |f_n - f| dH, exactly.

    A one-line consequence of monotonicity of the layer cake; audited, not
    assumed, so it can be thrown at arbitrary capacities.
    """
    require_same_universe(f_n, f, H)
    if n < 0:
        raise ValueError("the index n must be nonnegative")
    threshold = Fraction(1, 2**n)
    dev = _deviation(f_n, f)
    lhs = layer_product(threshold, H[superlevel(dev, threshold, strict=True)])
    rhs = choquet(dev, H).value
    return lhs <= rhs


def _require_axioms(H: Capacity, axioms, purpose: str):
    for axiom in axioms:
        report = H.check(axiom)
        if not report.holds:
            raise HypothesisError(
                f"{purpose} requires the {axiom.value} axiom", witness=report
            )


def _tail_min(values):
    best = None
    for v in values:
        if best is None or v < best:
            best = v
    return best


def _windowed_integral(f: StepFunction, H: Capacity, eta: Fraction, window: Fraction) -> Value:
    """integral over (eta, eta + window] of H({f > s}) ds, via truncations."""
    shifted = pos_part(offset(f, -eta))
    return choquet(truncate(shifted, window), H).value


def fatou_harness(
    seq: FunctionSequence,
    H: Capacity,
    *,
    eta,
    window,
    tail_start: int = 0,
    search_counterexample: bool = False,
) -> ConvergenceAudit:
    """Windowed Fatou audit for a nonnegative sequence.

    Per scheduled pair (eps, E) the harness certifies the chain: off E the
    tail sits within eta, hence every level set of the limit inflates by at
    most E, hence the windowed integral of the limit is bounded by the tail
    minimum plus eps * window.  Without a schedule the minimal bad set at
    eta plays the role of E with eps = H(E).

    Refusal on capacities lacking monotonicity or finite subadditivity; the
    optional counterexample search evaluates the conclusion anyway and
    reports any violation found as evidence the hypothesis is needed.
    """
    require_same_universe(seq, H)
    eta = Fraction(parse_value(eta, allow_inf=False))
    window = Fraction(parse_value(window, allow_inf=False))
    if eta <= 0 or window <= 0:
        raise ValueError("eta and the window must be positive")
    for term in seq.terms + (seq.declared_limit,):
        if not term.is_nonnegative:
            raise ValueError("the windowed Fatou audit expects nonnegative functions")

    hypothesis_failures = [
        H.check(a)
        for a in (Axiom.MONOTONE, Axiom.FINITE_SUBADDITIVE)
        if not H.check(a).holds
    ]
    if hypothesis_failures and not search_counterexample:
        raise HypothesisError(
            "the windowed Fatou audit requires monotone + finitely subadditive "
            "capacities",
            witness=hypothesis_failures[0],
        )

    last = seq.last_index
    if tail_start > last:
        return ConvergenceAudit(
            Verdict.INSUFFICIENT_PREFIX,
            SubsetMask.empty(seq.universe),
            (),
            notes=("tail start lies beyond the prefix",),
        )

    bad = _bad_set(seq, eta, tail_start)
    pairs = list(seq.schedule) or [(H[bad], bad)]
    term_integrals = [choquet(term, H).value for term in seq.terms]
    limit_integral = choquet(seq.declared_limit, H).value
    windowed = _windowed_integral(seq.declared_limit, H, eta, window)
    deviation_masks = [
        superlevel(_deviation(term, seq.declared_limit), eta, strict=True)
        for term in seq.terms
    ]

    entries = []
    notes = []
    if hypothesis_failures:
        notes.append(
            "hypotheses fail; running in counterexample-search mode: any failed "
            "inequality below witnesses that the hypothesis is needed"
        )
    for idx, (eps, exceptional) in enumerate(pairs):
        label = f"pair[{idx}]"
        valid = H[exceptional] <= eps
        entries.append(
            InequalityResult(f"{label}: H(E) <= eps", H[exceptional], eps, valid)
        )
        # earliest index from which the whole remaining tail is quiet off E
        settle = None
        for start in range(tail_start, last + 1):
            if all(
                deviation_masks[n].issubset(exceptional)
                for n in range(start, last + 1)
            ):
                settle = start
                break
        if settle is None:
            entries.append(
                InequalityResult(
                    f"{label}: some tail settles off E", Fraction(0), Fraction(1), False
                )
            )
            continue
        tail_min = _tail_min(term_integrals[settle:])
        slack = layer_product(window, eps)
        mid_rhs = ext_add(tail_min, slack)
        entries.append(
            InequalityResult(
                f"{label}: windowed limit integral <= settled-tail min + eps*window",
                windowed,
                mid_rhs,
                windowed <= mid_rhs,
            )
        )
        if limit_integral is INF:
            remainder: Value = INF
        else:
            remainder = limit_integral - windowed
        final_rhs = ext_add(mid_rhs, remainder)
        entries.append(
            InequalityResult(
                f"{label}: limit integral <= settled-tail min + eps*window + window remainder",
                limit_integral,
                final_rhs,
                limit_integral <= final_rhs,
            )
        )
    all_hold = all(e.holds for e in entries)
    verdict = Verdict.VERIFIED if all_hold else Verdict.REFUTED
    if hypothesis_failures and not all_hold:
        notes.append("violation found: the refused hypothesis is genuinely needed")
    return ConvergenceAudit(verdict, bad, tuple(entries), notes=tuple(notes))


def dct_harness(
    seq: FunctionSequence,
    dominator: StepFunction,
    H: Capacity,
    *,
    eta,
    window,
    tail_start: int = 0,
) -> ConvergenceAudit:
    """Dominated-convergence audit with the three-piece tail bound.

    Reports integral |f_n - limit| dH along the prefix together with its
    running minimum, and for each scheduled pair checks the split

        deviation integral <= (head piece) + eps * window + (tail piece)

    where both pieces integrate the envelope F + |limit| below eta and
    above the window, all evaluated exactly.
    """
    require_same_universe(seq, H, dominator)
    eta = Fraction(parse_value(eta, allow_inf=False))
    window = Fraction(parse_value(window, allow_inf=False))
    if eta <= 0 or window <= eta:
        raise ValueError("need 0 < eta < window")
    if not dominator.is_nonnegative:
        raise ValueError("the dominator must be nonnegative")
    dom_integral = choquet(dominator, H).value
    if dom_integral is INF:
        raise PremiseError("the dominator must have a finite integral")
    for n, term in enumerate(seq.terms):
        for x in seq.universe.points():
            v = term.values[x]
            bound = dominator.values[x]
            if bound is not INF and abs(v) > bound:
                raise PremiseError(
                    f"domination fails at term {n}, point {x}: |{v}| > {bound}"
                )
    _require_axioms(
        H, (Axiom.MONOTONE, Axiom.FINITE_SUBADDITIVE), "the dominated-convergence audit"
    )

    last = seq.last_index
    if tail_start > last:
        return ConvergenceAudit(
            Verdict.INSUFFICIENT_PREFIX,
            SubsetMask.empty(seq.universe),
            (),
            notes=("tail start lies beyond the prefix",),
        )
    deviations = [
        _deviation(term, seq.declared_limit) for term in seq.terms
    ]
    dev_integrals = [choquet(d, H).value for d in deviations]
    running = []
    best = None
    for v in dev_integrals:
        best = v if best is None or v < best else best
        running.append(best)

    envelope = add(dominator, abs_(seq.declared_limit))
    envelope_integral = choquet(envelope, H).value
    head_piece = choquet(truncate(envelope, eta), H).value
    if envelope_integral is INF:
        tail_piece: Value = INF
    else:
        tail_piece = envelope_integral - choquet(truncate(envelope, window), H).value

    bad = _bad_set(seq, eta, tail_start)
    pairs = list(seq.schedule) or [(H[bad], bad)]
    entries = []
    notes = [
        "deviation integrals: " + ", ".join(str(v) for v in dev_integrals),
        "running minimum: " + ", ".join(str(v) for v in running),
    ]
    for idx, (eps, exceptional) in enumerate(pairs):
        label = f"pair[{idx}]"
        entries.append(
            InequalityResult(f"{label}: H(E) <= eps", H[exceptional], eps, H[exceptional] <= eps)
        )
        # first index from which the whole remaining tail is quiet off E
        settle = None
        for start in range(tail_start, last + 1):
            quiet = all(
                superlevel(deviations[n], eta, strict=True).issubset(exceptional)
                for n in range(start, last + 1)
            )
            if quiet:
                settle = start
                break
        if settle is None:
            entries.append(
                InequalityResult(
                    f"{label}: some tail settles off E", Fraction(0), Fraction(1), False
                )
            )
            continue
        bound = ext_add(ext_add(head_piece, layer_product(window, eps)), tail_piece)
        worst = max(dev_integrals[settle:])
        entries.append(
            InequalityResult(
                f"{label}: settled-tail deviation integrals <= three-piece bound",
                worst,
                bound,
                worst <= bound,
            )
        )
    all_hold = all(e.holds for e in entries)
    return ConvergenceAudit(
        Verdict.VERIFIED if all_hold else Verdict.REFUTED,
        bad,
        tuple(entries),
        notes=tuple(notes),
    )


def converse_dct_audit(seq: FunctionSequence, H: Capacity) -> ConvergenceAudit:
    """Bookkeeping for the converse direction.

    Premise: integral |f_n - limit| dH <= 4^-n along the prefix.  Checks,
    all exactly: the scaled level-set bound at every n; H(A_k) <= 2^-(k-1)
    for the tail unions A_k of level sets; every partial deviation sum
    integrating to at most 4; and the dominating envelope
    F = |limit| + sum |f_n - limit| integrating to at most
    2 * integral|limit| + 8.
    """
    require_same_universe(seq, H)
    _require_axioms(
        H,
        (Axiom.MONOTONE, Axiom.COUNTABLE_SUBADDITIVE),
        "the converse dominated-convergence audit",
    )
    limit_abs = abs_(seq.declared_limit)
    limit_integral = choquet(limit_abs, H).value
    if limit_integral is INF:
        raise PremiseError("the limit must have a finite absolute integral")
    deviations = [_deviation(t, seq.declared_limit) for t in seq.terms]
    dev_integrals = [choquet(d, H).value for d in deviations]
    for n, v in enumerate(dev_integrals):
        if not v <= Fraction(1, 4**n):
            raise PremiseError(
                f"premise fails at n={n}: deviation integral {v} exceeds 4^-{n}"
            )

    entries = []
    last = seq.last_index
    for n in range(last + 1):
        threshold = Fraction(1, 2**n)
        lhs = layer_product(
            threshold, H[superlevel(deviations[n], threshold, strict=True)]
        )
        entries.append(
            InequalityResult(
                f"scaled level bound at n={n}", lhs, dev_integrals[n], lhs <= dev_integrals[n]
            )
        )
    union_bits = 0
    masks = [superlevel(deviations[n], Fraction(1, 2**n), strict=True) for n in range(last + 1)]
    a_sets = []
    for k in range(last, -1, -1):
        union_bits |= masks[k].bits
        a_sets.append((k, SubsetMask(seq.universe, union_bits)))
    for k, a_k in reversed(a_sets):
        bound = Fraction(2) / (2**k)
        entries.append(
            InequalityResult(f"H(A_{k}) <= 2^-({k}-1)", H[a_k], bound, H[a_k] <= bound)
        )
    partial = None
    for j in range(last + 1):
        partial = deviations[j] if partial is None else add(partial, deviations[j])
        v = choquet(partial, H).value
        entries.append(
            InequalityResult(f"partial deviation sum through n={j} integrates <= 4",
                             v, Fraction(4), v <= Fraction(4))
        )
    envelope = add(limit_abs, partial)
    env_integral = choquet(envelope, H).value
    env_bound = 2 * limit_integral + 8
    entries.append(
        InequalityResult(
            "envelope integral <= 2*integral|limit| + 8",
            env_integral,
            env_bound,
            env_integral <= env_bound,
        )
    )
    bad = a_sets[-1][1] if a_sets else SubsetMask.empty(seq.universe)
    all_hold = all(e.holds for e in entries)
    return ConvergenceAudit(
        Verdict.VERIFIED if all_hold else Verdict.REFUTED,
        bad,
        tuple(entries),
    )


def countable_sublinearity_audit(seq: FunctionSequence, H: Capacity) -> bool:
    """Check integral F dH <= sum integral f_n dH over the prefix, exactly.

    The terms must be nonnegative and their partial sum must stabilize to
    the declared limit off the scheduled sets (exactly, when no schedule is
    given).  Requires a monotone strongly subadditive capacity.
    """
    require_same_universe(seq, H)
    for term in seq.terms + (seq.declared_limit,):
        if not term.is_nonnegative:
            raise ValueError("the countable sublinearity audit expects nonnegative terms")
    _require_axioms(
        H, (Axiom.MONOTONE, Axiom.STRONGLY_SUBADDITIVE), "countable sublinearity"
    )
    total = seq.terms[0]
    for term in seq.terms[1:]:
        total = add(total, term)
    allowed_bits = 0
    for _, exceptional in seq.schedule:
        allowed_bits |= exceptional.bits
    for x in seq.universe.points():
        if total.values[x] != seq.declared_limit.values[x] and not allowed_bits >> x & 1:
            raise PremiseError(
                f"partial sums do not stabilize to the declared limit at point {x}"
            )
    lhs = choquet(seq.declared_limit, H).value
    rhs = Fraction(0)
    for term in seq.terms:
        rhs = ext_add(rhs, choquet(term, H).value)
    return lhs <= rhs


def find_countable_sublinearity_violation(H: Capacity):
    """A two-term indicator sequence breaking the inequality, if one exists.

    Reuses the strong-subadditivity scan: a violating pair (E, F) makes the
    indicator sum integrate above the sum of the indicator integrals.
    """
    from .capacity import find_strong_subadditivity_violation
    from .domain import indicator

    hit = find_strong_subadditivity_violation(H)
    if hit is None:
        return None
    e, f = hit
    terms = (indicator(e), indicator(f))
    total = add(*terms)
    lhs = choquet(total, H).value
    rhs = ext_add(choquet(terms[0], H).value, choquet(terms[1], H).value)
    return {"terms": terms, "limit": total, "lhs": lhs, "rhs": rhs}
