"""Capacities: total set functions H : 2^X -> [0, inf].

Nothing is assumed at construction beyond nonnegativity; even monotonicity
is checked, not presumed.  The discrete topology stands in for a metric
one: every subset is open, so axioms quantifying over open sets quantify
over all sets, and the report notes each such reduction.

Axiom checks are exhaustive scans over the dense table (pairs for the
subadditivity axioms).  Reports are cached on the capacity, which is
immutable, so repeated audits on a shared instance are free.
"""

from __future__ import annotations

import enum
import math
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .domain import GroundSet, SubsetMask, require_same_universe
from .errors import UniverseMismatchError
from .values import INF, Value, ext_add, is_inf, parse_value


class Axiom(enum.Enum):
    EMPTY_SET = "empty-set"
    MONOTONE = "monotone"
    FINITE_SUBADDITIVE = "finite-subadd"
    COUNTABLE_SUBADDITIVE = "countable-subadd"
    STRONGLY_SUBADDITIVE = "strong-subadd"
    SEMIFINITE = "semifinite"
    LOCALLY_FINITE = "locally-finite"
    ZERO_CAPACITY_REGULAR = "zero-capacity-regular"

    @classmethod
    def from_cli(cls, name: str) -> "Axiom":
        for axiom in cls:
            if axiom.value == name:
                return axiom
        raise ValueError(f"unknown axiom {name!r}; expected one of "
                         + ", ".join(a.value for a in cls))


@dataclass(frozen=True)
class AxiomWitness:
    """Violation data: the sets and capacity values that break the axiom."""

    sets: tuple[SubsetMask, ...]
    values: tuple[Value, ...]
    target: Optional[Value] = None
    description: str = ""


@dataclass(frozen=True)
class AxiomReport:
    axiom: Axiom
    holds: bool
    witness: Optional[AxiomWitness] = None
    note: str = ""


class Capacity:
    """A total set function on the powerset of a finite ground set.

    The table is indexed by bitmask; entries are nonnegative Fractions or
    INF.  Instances are immutable.
    """

    __slots__ = ("universe", "table", "_axiom_cache", "_int_cache")

    def __init__(self, universe: GroundSet, table: Iterable):
        entries = tuple(parse_value(v, allow_negative=False) for v in table)
        if len(entries) != 1 << universe.size:
            raise ValueError(
                f"capacity table must have {1 << universe.size} entries, got {len(entries)}"
            )
        object.__setattr__(self, "universe", universe)
        object.__setattr__(self, "table", entries)
        object.__setattr__(self, "_axiom_cache", {})
        object.__setattr__(self, "_int_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("Capacity instances are immutable")

    @classmethod
    def from_function(cls, universe: GroundSet, fn: Callable[[int], Value]) -> "Capacity":
        return cls(universe, (fn(mask) for mask in universe.masks()))

    @classmethod
    def additive(cls, universe: GroundSet, masses: Iterable) -> "Capacity":
        weights = [parse_value(m, allow_inf=False) for m in masses]
        if len(weights) != universe.size:
            raise ValueError("one mass per point required")
        table = [Fraction(0)] * (1 << universe.size)
        for mask in range(1, 1 << universe.size):
            low = mask & -mask
            table[mask] = table[mask ^ low] + weights[low.bit_length() - 1]
        return cls(universe, table)

    def __getitem__(self, key) -> Value:
        if isinstance(key, SubsetMask):
            if key.universe != self.universe:
                raise UniverseMismatchError("mask universe differs from capacity universe")
            return self.table[key.bits]
        return self.table[key]

    def __eq__(self, other):
        return (
            isinstance(other, Capacity)
            and self.universe == other.universe
            and self.table == other.table
        )

    def __hash__(self):
        return hash((self.universe, self.table))

    @property
    def is_finite(self) -> bool:
        return all(v is not INF for v in self.table)

    def finite_values(self) -> list[Fraction]:
        """Distinct finite table values, ascending."""
        return sorted({v for v in self.table if v is not INF})

    def scaled_table(self) -> tuple[int, list]:
        """(denominator D, table of value*D as ints, None for INF).

        Shared integer view for the enumeration-heavy fast paths.
        """
        if self._int_cache is None:
            denom = 1
            for v in self.table:
                if v is not INF:
                    denom = denom * v.denominator // math.gcd(denom, v.denominator)
            ints = [None if v is INF else int(v * denom) for v in self.table]
            object.__setattr__(self, "_int_cache", (denom, ints))
        return self._int_cache

    def check(self, axiom: Axiom) -> AxiomReport:
        cached = self._axiom_cache.get(axiom)
        if cached is None:
            cached = check_axiom(self, axiom)
            self._axiom_cache[axiom] = cached
        return cached

    def __repr__(self):
        return f"Capacity(n={self.universe.size})"


def _mask(universe: GroundSet, bits: int) -> SubsetMask:
    return SubsetMask(universe, bits)


def _check_empty_set(H: Capacity) -> AxiomReport:
    v = H.table[0]
    if v == 0:
        return AxiomReport(Axiom.EMPTY_SET, True)
    witness = AxiomWitness(
        sets=(_mask(H.universe, 0),),
        values=(v,),
        description="the empty set has nonzero capacity",
    )
    return AxiomReport(Axiom.EMPTY_SET, False, witness)


def _check_monotone(H: Capacity) -> AxiomReport:
    table = H.table
    for e in H.universe.masks():
        ve = table[e]
        for f in H.universe.masks():
            if e & ~f == 0 and ve > table[f]:
                witness = AxiomWitness(
                    sets=(_mask(H.universe, e), _mask(H.universe, f)),
                    values=(ve, table[f]),
                    description="a subset has strictly larger capacity than its superset",
                )
                return AxiomReport(Axiom.MONOTONE, False, witness)
    return AxiomReport(Axiom.MONOTONE, True)


def _check_finite_subadditive(H: Capacity) -> AxiomReport:
    table = H.table
    for e in H.universe.masks():
        for f in H.universe.masks():
            lhs = table[e | f]
            rhs = ext_add(table[e], table[f])
            if lhs > rhs:
                witness = AxiomWitness(
                    sets=(_mask(H.universe, e), _mask(H.universe, f)),
                    values=(table[e], table[f], lhs),
                    description="H(E u F) exceeds H(E) + H(F)",
                )
                return AxiomReport(Axiom.FINITE_SUBADDITIVE, False, witness)
    return AxiomReport(Axiom.FINITE_SUBADDITIVE, True)


_COUNTABLE_NOTE = (
    "finite ground set: any countable union of subsets is a finite union, so "
    "the axiom is decided by finite subadditivity together with the empty-set axiom"
)


def _check_countable_subadditive(H: Capacity) -> AxiomReport:
    finite = H.check(Axiom.FINITE_SUBADDITIVE)
    empty = H.check(Axiom.EMPTY_SET)
    holds = finite.holds and empty.holds
    witness = None if holds else (finite.witness or empty.witness)
    return AxiomReport(Axiom.COUNTABLE_SUBADDITIVE, holds, witness, note=_COUNTABLE_NOTE)


def _scan_strong_subadditivity(H: Capacity):
    """First (E, F) in lexicographic mask order with
    H(E n F) + H(E u F) > H(E) + H(F), or None."""
    table = H.table
    for e in H.universe.masks():
        ve = table[e]
        for f in H.universe.masks():
            lhs = ext_add(table[e & f], table[e | f])
            rhs = ext_add(ve, table[f])
            if lhs > rhs:
                return e, f
    return None


def _check_strongly_subadditive(H: Capacity) -> AxiomReport:
    hit = _scan_strong_subadditivity(H)
    if hit is None:
        return AxiomReport(Axiom.STRONGLY_SUBADDITIVE, True)
    e, f = hit
    table = H.table
    witness = AxiomWitness(
        sets=(_mask(H.universe, e), _mask(H.universe, f)),
        values=(table[e], table[f], table[e & f], table[e | f]),
        description="H(E n F) + H(E u F) exceeds H(E) + H(F)",
    )
    return AxiomReport(Axiom.STRONGLY_SUBADDITIVE, False, witness)


def _submasks(bits: int):
    """All submasks of ``bits`` including 0 and itself."""
    sub = bits
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & bits


_SEMIFINITE_NOTE = (
    "targets drawn from the finite table values plus one strictly larger value; "
    "checking all real targets reduces to the supremum of attainable finite values"
)


def semifinite_targets(H: Capacity) -> list[Fraction]:
    finite = H.finite_values()
    if finite:
        return finite + [finite[-1] + 1]
    return [Fraction(1)]


def _check_semifinite(H: Capacity) -> AxiomReport:
    targets = semifinite_targets(H)
    table = H.table
    for a in H.universe.masks():
        if table[a] is not INF:
            continue
        for target in targets:
            found = False
            for d in _submasks(a):
                v = table[d]
                if v is not INF and v >= target:
                    found = True
                    break
            if not found:
                witness = AxiomWitness(
                    sets=(_mask(H.universe, a),),
                    values=(table[a],),
                    target=target,
                    description="no subset of finite capacity reaches the target",
                )
                return AxiomReport(Axiom.SEMIFINITE, False, witness, note=_SEMIFINITE_NOTE)
    return AxiomReport(Axiom.SEMIFINITE, True, note=_SEMIFINITE_NOTE)


def _check_locally_finite(H: Capacity) -> AxiomReport:
    note = "every subset of a finite ground set is bounded, so this reads: H < inf everywhere"
    for a in H.universe.masks():
        if H.table[a] is INF:
            witness = AxiomWitness(
                sets=(_mask(H.universe, a),),
                values=(INF,),
                description="a (bounded) subset has infinite capacity",
            )
            return AxiomReport(Axiom.LOCALLY_FINITE, False, witness, note=note)
    return AxiomReport(Axiom.LOCALLY_FINITE, True, note=note)


def _check_zero_capacity_regular(H: Capacity) -> AxiomReport:
    note = (
        "vacuously true under the discrete topology: a null set is open and "
        "covers itself with zero capacity"
    )
    return AxiomReport(Axiom.ZERO_CAPACITY_REGULAR, True, note=note)


_CHECKS = {
    Axiom.EMPTY_SET: _check_empty_set,
    Axiom.MONOTONE: _check_monotone,
    Axiom.FINITE_SUBADDITIVE: _check_finite_subadditive,
    Axiom.COUNTABLE_SUBADDITIVE: _check_countable_subadditive,
    Axiom.STRONGLY_SUBADDITIVE: _check_strongly_subadditive,
    Axiom.SEMIFINITE: _check_semifinite,
    Axiom.LOCALLY_FINITE: _check_locally_finite,
    Axiom.ZERO_CAPACITY_REGULAR: _check_zero_capacity_regular,
}


def check_axiom(H: Capacity, axiom: Axiom) -> AxiomReport:
    """Exhaustively decide one axiom; a failing report carries a witness."""
    return _CHECKS[axiom](H)


def reevaluate_witness(H: Capacity, report: AxiomReport) -> bool:
    """True iff the report's witness still violates its axiom against H.

    Soundness guard: every witness a check returns must re-evaluate to a
    genuine violation.
    """
    if report.holds or report.witness is None:
        return False
    w = report.witness
    axiom = report.axiom
    if axiom == Axiom.EMPTY_SET:
        return H[w.sets[0]] != 0
    if axiom == Axiom.MONOTONE:
        e, f = w.sets
        return e.issubset(f) and H[e] > H[f]
    if axiom in (Axiom.FINITE_SUBADDITIVE, Axiom.COUNTABLE_SUBADDITIVE):
        if len(w.sets) == 1:
            return H[w.sets[0]] != 0
        e, f = w.sets
        return H[e | f] > ext_add(H[e], H[f])
    if axiom == Axiom.STRONGLY_SUBADDITIVE:
        e, f = w.sets
        return ext_add(H[e & f], H[e | f]) > ext_add(H[e], H[f])
    if axiom == Axiom.SEMIFINITE:
        a = w.sets[0]
        if H[a] is not INF or w.target is None:
            return False
        for d in _submasks(a.bits):
            v = H.table[d]
            if v is not INF and v >= w.target:
                return False
        return True
    if axiom == Axiom.LOCALLY_FINITE:
        return H[w.sets[0]] is INF
    return False


def find_strong_subadditivity_violation(H: Capacity):
    """Lexicographically smallest violating pair (E, F), or None."""
    hit = _scan_strong_subadditivity(H)
    if hit is None:
        return None
    e, f = hit
    return _mask(H.universe, e), _mask(H.universe, f)


def contract(H: Capacity, carrier: SubsetMask) -> Capacity:
    """The localized capacity A -> H(A n S)."""
    require_same_universe(H, carrier)
    if carrier.bits == 0 and H.table[0] != 0:
        warnings.warn(
            "contracting to the empty set yields the constant H(empty) table",
            stacklevel=2,
        )
    s = carrier.bits
    return Capacity(H.universe, (H.table[a & s] for a in H.universe.masks()))


def regularize(H: Capacity) -> Capacity:
    """The semifinite regularization A -> max{H(D) : D subset of A, H(D) < inf}.

    The max over the empty collection is 0.  The result is monotone whatever
    H is, and on a finite ground set it is finite everywhere, since it is a
    max over finitely many finite values.
    """
    n = H.universe.size
    out = [Fraction(0)] * (1 << n)
    for a in H.universe.masks():
        best = Fraction(0)
        va = H.table[a]
        if va is not INF and va > best:
            best = va
        rest = a
        while rest:
            low = rest & -rest
            prev = out[a ^ low]
            if prev > best:
                best = prev
            rest ^= low
        out[a] = best
    return Capacity(H.universe, out)


class GeneratorKind(enum.Enum):
    RANDOM_MONOTONE = "random-monotone"
    RANDOM_SUBMODULAR_MONOTONE = "random-submodular"
    ADDITIVE = "additive"
    THRESHOLD = "threshold"

    @classmethod
    def from_cli(cls, name: str) -> "GeneratorKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown generator {name!r}")


def _rng(kind: GeneratorKind, universe: GroundSet, seed) -> random.Random:
    return random.Random(f"capacity:{kind.value}:{universe.size}:{seed}")


def _grid_value(rng: random.Random, denominator=8, max_numerator=32) -> Fraction:
    return Fraction(rng.randrange(max_numerator + 1), denominator)


def threshold_capacity(universe: GroundSet, m: int, *, top=Fraction(1), low=Fraction(0)) -> Capacity:
    """H(A) = low for nonempty A with |A| <= m, top for larger A, 0 on empty.

    With (low=0, top=1) this is the small-set/large-set dichotomy; with
    (low=1, top=inf) it is the bounded/unbounded dichotomy at finite scale.
    """
    top = parse_value(top)
    low = parse_value(low)
    zero = Fraction(0)

    def value(mask: int) -> Value:
        if mask == 0:
            return zero
        return low if mask.bit_count() <= m else top

    return Capacity.from_function(universe, value)


def generate_capacity(
    kind: GeneratorKind,
    universe: GroundSet,
    seed=0,
    *,
    infinity_rate: Fraction = Fraction(0),
    threshold: int = 0,
    top=Fraction(1),
    low=Fraction(0),
    hidden_items: Optional[int] = None,
) -> Capacity:
    """Seeded test-corpus generators.

    * RANDOM_MONOTONE: sample a table, then take the monotone envelope
      (running max over subsets) and force H(empty) = 0.  ``infinity_rate``
      injects INF entries before the envelope.
    * RANDOM_SUBMODULAR_MONOTONE: a random coverage function over a hidden
      weighted item set; coverage functions are monotone, strongly
      subadditive, and vanish on the empty set by construction.
    * ADDITIVE: random nonnegative point masses.
    * THRESHOLD: the cardinality dichotomy of :func:`threshold_capacity`.
    """
    rng = _rng(kind, universe, seed)
    n = universe.size
    if kind is GeneratorKind.RANDOM_MONOTONE:
        rate = Fraction(infinity_rate)
        raw = []
        for _ in universe.masks():
            if rate > 0 and rng.randrange(rate.denominator) < rate.numerator:
                raw.append(INF)
            else:
                raw.append(_grid_value(rng))
        env: list[Value] = [Fraction(0)] * (1 << n)
        for a in range(1, 1 << n):
            best = raw[a]
            rest = a
            while rest:
                low_bit = rest & -rest
                prev = env[a ^ low_bit]
                if prev is INF or (best is not INF and prev > best):
                    best = prev
                rest ^= low_bit
            env[a] = best
        return Capacity(universe, env)
    if kind is GeneratorKind.RANDOM_SUBMODULAR_MONOTONE:
        items = hidden_items if hidden_items is not None else max(4, 2 * n)
        weights = [_grid_value(rng, denominator=4, max_numerator=8) for _ in range(items)]
        membership = [rng.getrandbits(items) for _ in range(n)]
        covered = [0] * (1 << n)
        table = [Fraction(0)] * (1 << n)
        for a in range(1, 1 << n):
            low_bit = a & -a
            covered[a] = covered[a ^ low_bit] | membership[low_bit.bit_length() - 1]
            total = Fraction(0)
            m = covered[a]
            while m:
                j = (m & -m).bit_length() - 1
                total += weights[j]
                m &= m - 1
            table[a] = total
        return Capacity(universe, table)
    if kind is GeneratorKind.ADDITIVE:
        masses = [_grid_value(rng, denominator=4, max_numerator=12) for _ in range(n)]
        return Capacity.additive(universe, masses)
    if kind is GeneratorKind.THRESHOLD:
        return threshold_capacity(universe, threshold, top=top, low=low)
    raise ValueError(f"unknown generator kind {kind!r}")
