"""The Choquet integral as a supremum of additive integrals.

An additive measure mu (point masses) is dominated by H when mu(A) <= H(A)
for every subset A.  Weak duality -- sum f.mu <= integral f dH for any
dominated mu -- holds for every capacity here, because domination on the
superlevel sets of f is all the telescoping argument needs.  Strong duality
(the supremum attains the integral) holds for monotone strongly subadditive
capacities, where the greedy marginal measure is an optimal dual witness.

Two independent routes compute the dual value: the greedy construction and
an exact rational LP over all 2^n - 1 domination constraints.  Cross-checks
between them, plus the layer-cake value, are the module's main tests.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from . import simplex
from .capacity import Axiom, Capacity, contract, semifinite_targets
from .domain import (
    GroundSet,
    StepFunction,
    SubsetMask,
    require_same_universe,
    superlevel,
)
from .errors import BudgetError, HypothesisError, InvariantViolation, PremiseError
from .integral import choquet
from .values import INF, Value, is_inf, parse_value

#: The LP has 2^n - 1 constraint rows; beyond this the tableau is hopeless.
MAX_LP_GROUND_SET = 16

_SEMIFINITE_REFUSAL = (
    "capacity is not semifinite: some infinite-capacity set has no subsets of "
    "large finite capacity.  The canonical failure assigns 1 to every small set "
    "and infinity to every large one, leaving a gap no contraction can cross."
)


@dataclass(frozen=True)
class AdditiveMeasure:
    """Nonnegative point masses; mu(A) is the sum of masses over A."""

    universe: GroundSet
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.masses) != self.universe.size:
            raise ValueError("one mass per point required")
        for m in self.masses:
            if not isinstance(m, Fraction) or m < 0:
                raise ValueError("masses must be nonnegative finite rationals")

    @classmethod
    def from_values(cls, universe: GroundSet, raw: Iterable) -> "AdditiveMeasure":
        return cls(
            universe,
            tuple(Fraction(parse_value(v, allow_inf=False)) for v in raw),
        )

    @classmethod
    def zero(cls, universe: GroundSet) -> "AdditiveMeasure":
        return cls(universe, (Fraction(0),) * universe.size)

    def measure_of(self, subset: SubsetMask) -> Fraction:
        require_same_universe(self, subset)
        return sum(
            (self.masses[i] for i in subset.indices()), start=Fraction(0)
        )

    def integrate(self, f: StepFunction) -> Fraction:
        """sum f(x) * mass(x); requires a finite f."""
        require_same_universe(self, f)
        if not f.is_finite:
            raise ValueError("additive integration requires a finite function")
        return sum(
            (v * m for v, m in zip(f.values, self.masses)), start=Fraction(0)
        )

    def total(self) -> Fraction:
        return sum(self.masses, start=Fraction(0))


class DualMethod(enum.Enum):
    GREEDY = "greedy"
    EXACT_LP = "lp"


@dataclass(frozen=True)
class LadderRung:
    """One contraction step of the divergence ladder."""

    target: Fraction
    witness_set: SubsetMask
    witness_capacity: Fraction
    dual_value: Value
    lower_bound: Fraction
    bound_holds: bool


@dataclass(frozen=True)
class DualityReport:
    choquet_value: Value
    dual_value: Value
    optimal_measure: Optional[AdditiveMeasure]
    gap: Value
    method: DualMethod
    dominated: Optional[bool] = None
    notes: tuple[str, ...] = ()
    ladder: Optional[tuple[LadderRung, ...]] = None


def is_dominated(mu: AdditiveMeasure, H: Capacity) -> bool:
    """mu(A) <= H(A) for all 2^n subsets."""
    require_same_universe(mu, H)
    prefix = [Fraction(0)] * (1 << H.universe.size)
    for mask in range(1, 1 << H.universe.size):
        low = mask & -mask
        prefix[mask] = prefix[mask ^ low] + mu.masses[low.bit_length() - 1]
        cap = H.table[mask]
        if cap is not INF and prefix[mask] > cap:
            return False
    return H.table[0] is INF or prefix[0] <= H.table[0]


def greedy_measure(f: StepFunction, H: Capacity) -> AdditiveMeasure:
    """Marginal masses along the decreasing reordering of f.

    Points are sorted by decreasing value (ties by ascending index) and each
    receives the capacity increment of its prefix.  Monotonicity of H keeps
    the masses nonnegative; the telescoped pairing sum f.mu reproduces the
    layer-cake integral exactly, which is asserted.
    """
    require_same_universe(f, H)
    if not (f.is_nonnegative and f.is_finite):
        raise ValueError("greedy measures are built from nonnegative finite functions")
    mono = H.check(Axiom.MONOTONE)
    if not mono.holds:
        raise HypothesisError(
            "greedy masses require a monotone capacity", witness=mono
        )
    order = sorted(H.universe.points(), key=lambda x: (-f.values[x], x))
    masses = [Fraction(0)] * H.universe.size
    prefix_bits = 0
    previous = H.table[0]
    if previous is INF:
        raise HypothesisError("H(empty) is infinite; the greedy chain cannot start")
    for x in order:
        prefix_bits |= 1 << x
        current = H.table[prefix_bits]
        if current is INF:
            raise HypothesisError(
                "infinite capacity along the greedy chain",
                witness=SubsetMask(H.universe, prefix_bits),
            )
        masses[x] = current - previous
        previous = current
    mu = AdditiveMeasure(H.universe, tuple(masses))
    paired = mu.integrate(f)
    expected = choquet(f, H).value
    if paired != expected:
        raise InvariantViolation(
            "greedy pairing disagrees with the layer-cake integral",
            payload={"paired": paired, "integral": expected},
        )
    return mu


def _solve_dominated_lp(f: StepFunction, H: Capacity):
    """Exact LP over the finite domination constraints.

    Rows with infinite bounds constrain nothing and are omitted; that is a
    finite LP, not extended-real pivoting.  Callers are responsible for the
    unbounded-direction check when the table carries infinities.
    """
    n = H.universe.size
    if n > MAX_LP_GROUND_SET:
        raise BudgetError(
            f"the dual LP is guarded at n <= {MAX_LP_GROUND_SET}",
            size=n,
            budget=MAX_LP_GROUND_SET,
        )
    rows = []
    bounds = []
    for mask in range(1, 1 << n):
        cap = H.table[mask]
        if cap is INF:
            continue
        rows.append([Fraction(1) if mask >> x & 1 else Fraction(0) for x in range(n)])
        bounds.append(cap)
    objective = [Fraction(v) for v in f.values]
    value, x = simplex.maximize(objective, rows, bounds)
    return value, AdditiveMeasure(H.universe, tuple(x))


def dual_value(f: StepFunction, H: Capacity, *, method: DualMethod = DualMethod.EXACT_LP) -> DualityReport:
    """Best additive integral under domination, with the gap against the
    layer-cake value.

    Finite tables go straight to the exact LP.  Infinite-valued monotone
    tables are first localized: if every superlevel set of f has finite
    capacity, H is contracted to {f > 0} (which changes neither the integral
    nor the feasible measures that matter); otherwise the integral is
    infinite and the semifinite contraction ladder witnesses divergence.
    """
    require_same_universe(f, H)
    if not (f.is_nonnegative and f.is_finite):
        raise ValueError("the dual is computed for nonnegative finite functions")
    if method is DualMethod.GREEDY:
        mu = greedy_measure(f, H)
        value = mu.integrate(f)
        integral = choquet(f, H).value
        return DualityReport(
            choquet_value=integral,
            dual_value=value,
            optimal_measure=mu,
            gap=Fraction(0) if integral == value else integral - value,
            method=DualMethod.GREEDY,
            dominated=is_dominated(mu, H),
        )

    if H.is_finite:
        integral = choquet(f, H).value
        value, mu = _solve_dominated_lp(f, H)
        return DualityReport(
            choquet_value=integral,
            dual_value=value,
            optimal_measure=mu,
            gap=integral - value,
            method=DualMethod.EXACT_LP,
            dominated=True,
        )

    mono = H.check(Axiom.MONOTONE)
    if not mono.holds:
        raise HypothesisError(
            "infinite-valued tables are handled by contraction, which is only "
            "meaningful for monotone capacities",
            witness=mono,
        )
    integral = choquet(f, H).value
    if integral is not INF:
        support = superlevel(f, 0, strict=True)
        localized = contract(H, support)
        value, mu = _solve_dominated_lp(f, localized)
        return DualityReport(
            choquet_value=integral,
            dual_value=value,
            optimal_measure=mu,
            gap=integral - value,
            method=DualMethod.EXACT_LP,
            dominated=True,
            notes=(
                "capacity contracted to the support of f before the LP; "
                "the integral and the relevant dominated measures are unchanged",
            ),
        )

    # the integral is infinite; attach the contraction ladder as a witness
    base_level = next(
        v
        for v in f.distinct_finite_levels()
        if H[superlevel(f, v, strict=False)] is INF
    )
    base = superlevel(f, base_level, strict=False)
    attainable = sorted(
        {
            H.table[d]
            for d in _ascending_submasks(base.bits)
            if H.table[d] is not INF and H.table[d] > 0
        }
    )
    demo = semifinite_unboundedness_demo(f, H, targets=attainable)
    unbounded = any(
        f.values[x] > 0 and H.table[1 << x] is INF for x in H.universe.points()
    )
    if unbounded:
        return DualityReport(
            choquet_value=INF,
            dual_value=INF,
            optimal_measure=None,
            gap=Fraction(0),
            method=DualMethod.EXACT_LP,
            dominated=None,
            notes=(
                "a charged point sits in no finite-capacity set, so the dual "
                "is unbounded; both sides are infinite",
            ),
            ladder=demo.rungs,
        )
    value, mu = _solve_dominated_lp(f, H)
    return DualityReport(
        choquet_value=INF,
        dual_value=value,
        optimal_measure=mu,
        gap=INF,
        method=DualMethod.EXACT_LP,
        dominated=True,
        notes=(
            "the integral is infinite but every dominated measure is capped "
            "by the finite constraints: a genuine gap at infinity",
        ),
        ladder=demo.rungs,
    )


def domination_inequality_audit(f: StepFunction, mu: AdditiveMeasure, H: Capacity) -> bool:
    """Verify sum f.mu <= integral f dH exactly for a dominated mu."""
    require_same_universe(f, mu, H)
    if not is_dominated(mu, H):
        raise PremiseError("the measure is not dominated by the capacity")
    for axiom in (Axiom.MONOTONE, Axiom.FINITE_SUBADDITIVE):
        report = H.check(axiom)
        if not report.holds:
            raise HypothesisError(
                f"the domination audit assumes the {axiom.value} axiom",
                witness=report,
            )
    return mu.integrate(f) <= choquet(f, H).value


@dataclass(frozen=True)
class SemifiniteDemo:
    """Divergence report: contraction rungs with their dual values."""

    applicable: bool
    level: Optional[Fraction]
    base_set: Optional[SubsetMask]
    rungs: tuple[LadderRung, ...]
    delegated: Optional[DualityReport] = None
    notes: tuple[str, ...] = ()


def semifinite_unboundedness_demo(
    f: StepFunction,
    H: Capacity,
    *,
    targets: Optional[Iterable] = None,
) -> SemifiniteDemo:
    """Witness an infinite integral through finite contractions.

    Picks the highest positive level t whose superlevel set U has infinite
    capacity, then for each target M finds a subset of U with capacity in
    [M, inf), contracts H to it, and solves the dual there.  Each rung's
    dual value is checked against the lower bound t*M, which holds whenever
    H is also strongly subadditive.

    Without explicit targets the capacity must pass the semifinite axiom
    check, which at finite scale an infinite-valued table cannot; passing
    ``targets`` runs the mechanism on whichever rungs are attainable.
    """
    require_same_universe(f, H)
    if not (f.is_nonnegative and f.is_finite):
        raise ValueError("the demo integrand must be nonnegative and finite")
    level = None
    for v in f.distinct_finite_levels():
        if H[superlevel(f, v, strict=False)] is INF:
            level = v
            break
    if level is None:
        return SemifiniteDemo(
            applicable=False,
            level=None,
            base_set=None,
            rungs=(),
            delegated=dual_value(f, H),
            notes=("every superlevel set has finite capacity; delegated to the dual",),
        )
    mono = H.check(Axiom.MONOTONE)
    if not mono.holds:
        raise HypothesisError("the contraction ladder requires monotonicity", witness=mono)
    if targets is None:
        semifinite = H.check(Axiom.SEMIFINITE)
        if not semifinite.holds:
            raise HypothesisError(_SEMIFINITE_REFUSAL, witness=semifinite)
        ladder = [t for t in semifinite_targets(H) if t > 0]
    else:
        ladder = sorted(Fraction(parse_value(t, allow_inf=False)) for t in targets)

    base = superlevel(f, level, strict=False)
    strongly = H.check(Axiom.STRONGLY_SUBADDITIVE).holds
    rungs = []
    notes = []
    for target in ladder:
        witness_bits = None
        for d in _ascending_submasks(base.bits):
            v = H.table[d]
            if v is not INF and v >= target:
                witness_bits = d
                break
        if witness_bits is None:
            notes.append(f"target {target} is not attainable inside the base set")
            continue
        witness = SubsetMask(H.universe, witness_bits)
        localized = contract(H, witness)
        report = dual_value(f, localized)
        bound = level * target
        bound_holds = report.dual_value is INF or report.dual_value >= bound
        if strongly and not bound_holds:
            raise InvariantViolation(
                "a ladder rung fell below its divergence bound despite strong subadditivity",
                payload={"target": target, "dual": report.dual_value, "bound": bound},
            )
        rungs.append(
            LadderRung(
                target=target,
                witness_set=witness,
                witness_capacity=H[witness],
                dual_value=report.dual_value,
                lower_bound=bound,
                bound_holds=bound_holds,
            )
        )
    return SemifiniteDemo(
        applicable=True,
        level=level,
        base_set=base,
        rungs=tuple(rungs),
        notes=tuple(notes),
    )


def _ascending_submasks(bits: int):
    """Submasks of ``bits`` in ascending numeric order."""
    subset = 0
    while True:
        yield subset
        if subset == bits:
            return
        subset = (subset - bits) & bits
