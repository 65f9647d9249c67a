"""Exact Choquet integration by the layer-cake formula.

With distinct finite values v_1 > ... > v_m of a nonnegative f (and
v_{m+1} = 0), the integral against H is

    sum_i (v_i - v_{i+1}) * H({f >= v_i}),

in exact rational arithmetic.  A function that is infinite on an H-null set
integrates as if truncated (0 * inf = 0); an infinite value on a set of
positive capacity makes the integral infinite.

The equivalence verifier enumerates every pair of grid-valued functions and
cross-checks the sign of the worst sublinearity gap against an exhaustive
strong-subadditivity scan; both directions are exact at this scale because
indicator pairs are always inside the grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .capacity import Axiom, Capacity, find_strong_subadditivity_violation
from .domain import (
    StepFunction,
    SubsetMask,
    abs_,
    add,
    require_same_universe,
    superlevel,
)
from .errors import BudgetError, HypothesisError, InvariantViolation
from .values import (
    INDETERMINATE,
    INF,
    NEG_INF,
    Value,
    ext_add,
    is_inf,
    layer_product,
)

#: Default cap on the ordered pair count of the exhaustive enumerator.
DEFAULT_PAIR_BUDGET = 10_000_000


@dataclass(frozen=True)
class LayerTerm:
    level: Value
    gap: Value
    capacity: Value


@dataclass(frozen=True)
class IntegralValue:
    """The integral together with the layer decomposition that produced it."""

    value: Value
    breakdown: tuple[LayerTerm, ...]


def _nonnegative(f: StepFunction, name="integrand"):
    if not f.is_nonnegative:
        raise ValueError(f"{name} must be nonnegative")


def choquet(f: StepFunction, H: Capacity) -> IntegralValue:
    """Integrate a nonnegative step function against a capacity, exactly."""
    require_same_universe(f, H)
    _nonnegative(f)
    terms = []
    infinite = False
    total = Fraction(0)
    inf_support = f.infinity_support()
    if not inf_support.is_empty:
        cap = H[inf_support]
        terms.append(LayerTerm(INF, INF, cap))
        if layer_product(INF, cap) is INF:
            infinite = True
    levels = f.distinct_finite_levels()
    for i, level in enumerate(levels):
        nxt = levels[i + 1] if i + 1 < len(levels) else Fraction(0)
        gap = level - nxt
        cap = H[superlevel(f, level, strict=False)]
        terms.append(LayerTerm(level, gap, cap))
        if cap is INF:
            infinite = True
        else:
            total += gap * cap
    return IntegralValue(INF if infinite else total, tuple(terms))


def choquet_value(f: StepFunction, H: Capacity) -> Value:
    return choquet(f, H).value


def check_strict_vs_weak(f: StepFunction, H: Capacity) -> bool:
    """Recompute the integral with strict superlevel sets and compare.

    On each half-open level interval, {f > t} is evaluated at the interval's
    lower endpoint; the two closed forms must agree for every capacity.
    """
    require_same_universe(f, H)
    _nonnegative(f)
    infinite = False
    total = Fraction(0)
    inf_support = f.infinity_support()
    if not inf_support.is_empty and layer_product(INF, H[inf_support]) is INF:
        infinite = True
    levels = f.distinct_finite_levels()
    for i, level in enumerate(levels):
        nxt = levels[i + 1] if i + 1 < len(levels) else Fraction(0)
        cap = H[superlevel(f, nxt, strict=True)]
        if cap is INF:
            infinite = True
        else:
            total += (level - nxt) * cap
    strict_value = INF if infinite else total
    return strict_value == choquet(f, H).value


def sublinearity_gap(f: StepFunction, g: StepFunction, H: Capacity):
    """integral(f+g) - integral(f) - integral(g).

    Returns a Fraction, INF, NEG_INF, or the INDETERMINATE token when both
    sides are infinite.  Requires finite nonnegative f and g.
    """
    require_same_universe(f, g, H)
    _nonnegative(f), _nonnegative(g)
    if not (f.is_finite and g.is_finite):
        raise ValueError("sublinearity gaps are defined for finite functions")
    combined = choquet(add(f, g), H).value
    separate = ext_add(choquet(f, H).value, choquet(g, H).value)
    if combined is INF and separate is INF:
        return INDETERMINATE
    if combined is INF:
        return INF
    if separate is INF:
        return NEG_INF
    return combined - separate


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of the exhaustive two-sided sublinearity check."""

    max_gap: Value
    argmax: Optional[tuple[StepFunction, StepFunction]]
    strongly_subadditive: bool
    violation: Optional[tuple[SubsetMask, SubsetMask]]
    equivalence_holds: bool
    pairs_checked: int
    indeterminate_pairs: int
    value_bound: int
    denominator: int

    @property
    def sublinear_on_grid(self) -> bool:
        return self.max_gap is not INF and self.max_gap <= 0


def _grid_functions(universe, steps: int, denominator: int):
    """Digit vectors for all functions with values in {0, 1/k, ..., (steps-1)/k}.

    Index order is little-endian in the point index, so indicator functions
    of low points enumerate first.
    """
    n = universe.size
    digits = list(itertools.product(range(steps), repeat=n))
    # itertools.product varies the LAST coordinate fastest; we want point 0
    # fastest, so reverse each tuple.
    return [tuple(reversed(d)) for d in digits]


def _grid_integrals(digit_list, steps, scaled_table):
    """Integral of each grid function, in units of 1/(k*D)."""
    out = []
    for digits in digit_list:
        level_masks = [0] * steps
        for point, dv in enumerate(digits):
            bit = 1 << point
            for j in range(1, dv + 1):
                level_masks[j] |= bit
        out.append(sum(scaled_table[level_masks[j]] for j in range(1, steps)))
    return out


def verify_sublinearity_equivalence(
    H: Capacity,
    value_bound: int,
    denominator: int,
    *,
    budget: Optional[int] = DEFAULT_PAIR_BUDGET,
) -> EquivalenceReport:
    """Exhaustively test sublinearity on the grid N/k up to value_bound.

    Requires a monotone capacity.  The grid contains every indicator pair,
    so a strong-subadditivity violation always surfaces as a positive gap;
    conversely no positive gap can exist for a strongly subadditive table.
    The report confirms that two-sided agreement.
    """
    if value_bound < 1 or denominator < 1:
        raise ValueError("value bound and denominator must be positive integers")
    mono = H.check(Axiom.MONOTONE)
    if not mono.holds:
        raise HypothesisError(
            "sublinearity equivalence requires a monotone capacity", witness=mono
        )
    n = H.universe.size
    steps = value_bound * denominator + 1
    ordered_pairs = steps ** (2 * n)
    if budget is not None and ordered_pairs > budget:
        raise BudgetError(
            f"enumeration of {ordered_pairs} pairs exceeds the budget of {budget}",
            size=ordered_pairs,
            budget=budget,
        )

    if H.is_finite:
        max_scaled, best_pair, checked = _equivalence_fast(H, steps, denominator)
        denom_scale = denominator * H.scaled_table()[0]
        max_gap: Value = Fraction(max_scaled, denom_scale)
        indeterminate = 0
    else:
        max_gap, best_pair, checked, indeterminate = _equivalence_extended(
            H, steps, denominator
        )

    digit_list = _grid_functions(H.universe, steps, denominator)
    argmax = None
    if best_pair is not None:
        fi, gi = best_pair
        argmax = (
            _function_from_digits(H.universe, digit_list[fi], denominator),
            _function_from_digits(H.universe, digit_list[gi], denominator),
        )
    violation = find_strong_subadditivity_violation(H)
    sublinear = max_gap is not INF and max_gap <= 0
    equivalence_holds = sublinear == (violation is None)
    return EquivalenceReport(
        max_gap=max_gap,
        argmax=argmax,
        strongly_subadditive=violation is None,
        violation=violation,
        equivalence_holds=equivalence_holds,
        pairs_checked=checked,
        indeterminate_pairs=indeterminate,
        value_bound=value_bound,
        denominator=denominator,
    )


def _function_from_digits(universe, digits, denominator) -> StepFunction:
    return StepFunction(
        universe, tuple(Fraction(d, denominator) for d in digits)
    )


def _equivalence_fast(H: Capacity, steps: int, denominator: int):
    """Integer-scaled scan over unordered pairs; returns the scaled max gap.

    The gap is symmetric, so scanning i <= j and keeping the first strict
    maximum yields the lexicographically smallest argmax pair.
    """
    _, scaled = H.scaled_table()
    universe = H.universe
    n = universe.size
    digit_list = _grid_functions(universe, steps, denominator)
    f_int = _grid_integrals(digit_list, steps, scaled)
    sum_steps = 2 * (steps - 1) + 1
    sum_digits = _grid_functions(universe, sum_steps, denominator)
    s_int = _grid_integrals(sum_digits, sum_steps, scaled)
    powers = [sum_steps**p for p in range(n)]

    best = None
    best_pair = None
    checked = 0
    count = len(digit_list)
    for i in range(count):
        di = digit_list[i]
        fi = f_int[i]
        for j in range(i, count):
            dj = digit_list[j]
            s_idx = 0
            for p in range(n):
                s_idx += (di[p] + dj[p]) * powers[p]
            gap = s_int[s_idx] - fi - f_int[j]
            checked += 1
            if best is None or gap > best:
                best = gap
                best_pair = (i, j)
    return best, best_pair, checked


def _equivalence_extended(H: Capacity, steps: int, denominator: int):
    """Slow path for infinite-valued tables, with full extended conventions.

    Indeterminate inf - inf pairs are counted and excluded from the max.
    """
    universe = H.universe
    digit_list = _grid_functions(universe, steps, denominator)
    functions = [
        _function_from_digits(universe, d, denominator) for d in digit_list
    ]
    integrals = [choquet(f, H).value for f in functions]
    best: Optional[Value] = None
    best_pair = None
    checked = 0
    indeterminate = 0
    count = len(functions)
    for i in range(count):
        for j in range(i, count):
            combined = choquet(add(functions[i], functions[j]), H).value
            separate = ext_add(integrals[i], integrals[j])
            checked += 1
            if combined is INF and separate is INF:
                indeterminate += 1
                continue
            gap: Value
            if combined is INF:
                gap = INF
            elif separate is INF:
                # negative-infinite gap never beats any candidate
                continue
            else:
                gap = combined - separate
            if best is None or (best is not INF and (gap is INF or gap > best)):
                best = gap
                best_pair = (i, j)
    if best is None:
        best = Fraction(0)
        best_pair = (0, 0)
    return best, best_pair, checked, indeterminate


def truncation_tail(f: StepFunction, H: Capacity, k) -> Value:
    """integral |T_k(f) - f| dH, checked against the layer-cake tail above k.

    Both closed forms are computed independently and must agree exactly;
    disagreement raises InvariantViolation.
    """
    require_same_universe(f, H)
    _nonnegative(f)
    k = Fraction(k)
    if k <= 0:
        raise ValueError("truncation height must be positive")
    # direct route: |T_k(f) - f| = (f - k)^+, with inf - k = inf
    overshoot = []
    for v in f.values:
        if v is INF:
            overshoot.append(INF)
        else:
            overshoot.append(v - k if v > k else Fraction(0))
    direct = choquet(StepFunction(f.universe, tuple(overshoot)), H).value

    # tail route: layers of f strictly above k
    infinite = False
    total = Fraction(0)
    inf_support = f.infinity_support()
    if not inf_support.is_empty and layer_product(INF, H[inf_support]) is INF:
        infinite = True
    levels = [v for v in f.distinct_finite_levels() if v > k]
    for i, level in enumerate(levels):
        nxt = levels[i + 1] if i + 1 < len(levels) else k
        floor = nxt if nxt > k else k
        cap = H[superlevel(f, level, strict=False)]
        if cap is INF:
            infinite = True
        else:
            total += (level - floor) * cap
    tail = INF if infinite else total

    if direct != tail:
        raise InvariantViolation(
            "truncation tail identity failed",
            payload={"direct": direct, "tail": tail, "height": k},
        )
    return direct


def quasi_sublinearity_check(
    g: StepFunction, h: StepFunction, H: Capacity, *, require_hypotheses: bool = True
) -> bool:
    """Check integral|g+h| <= 2 integral|g| + 2 integral|h| exactly.

    The inequality follows from {|g+h| > t} being inside
    {|g| > t/2} u {|h| > t/2}, so it depends on monotonicity and finite
    subadditivity; by default the check refuses capacities lacking either.
    """
    require_same_universe(g, h, H)
    if not (g.is_finite and h.is_finite):
        raise ValueError("quasi-sublinearity is checked for finite functions")
    if require_hypotheses:
        for axiom in (Axiom.MONOTONE, Axiom.FINITE_SUBADDITIVE):
            report = H.check(axiom)
            if not report.holds:
                raise HypothesisError(
                    f"quasi-sublinearity depends on the {axiom.value} axiom",
                    witness=report,
                )
    total = StepFunction(
        g.universe, tuple(a + b for a, b in zip(g.values, h.values))
    )
    lhs = choquet(abs_(total), H).value
    rhs = ext_add(
        layer_product(Fraction(2), choquet(abs_(g), H).value),
        layer_product(Fraction(2), choquet(abs_(h), H).value),
    )
    return lhs <= rhs
