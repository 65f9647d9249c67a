"""Turn an arbitrary finite family of sets into a nested one.

The merge pass repeatedly replaces the running last set L and the next
input C by (L n C, L u C).  This preserves the pointwise indicator sum,
and for strongly subadditive capacities it never increases the capacity
sum.  Iterating the pass on ever-shorter prefixes yields the fully nested
family, whose i-th member is exactly the set of points lying in at least
n - i + 1 of the inputs; that count-based characterization is recomputed
independently as a postcondition on every call.
"""

from __future__ import annotations

from dataclasses import dataclass

from .capacity import Axiom, Capacity
from .domain import SubsetMask, require_same_universe
from .errors import HypothesisError, InvariantViolation
from .values import Value, ext_sum

#: Each merge level costs O(n) mask operations; no deeper need at desk scale.
MAX_FAMILY_SIZE = 64


@dataclass(frozen=True)
class NestedFamily:
    """An increasing chain A_1 <= A_2 <= ... <= A_n."""

    sets: tuple[SubsetMask, ...]

    def __post_init__(self):
        for a, b in zip(self.sets, self.sets[1:]):
            if not a.issubset(b):
                raise ValueError("family is not nested")

    def __len__(self):
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def _validated(sets) -> list[SubsetMask]:
    family = list(sets)
    if not family:
        raise ValueError("the family must contain at least one set")
    if len(family) > MAX_FAMILY_SIZE:
        raise ValueError(f"families are capped at {MAX_FAMILY_SIZE} sets")
    require_same_universe(*family)
    return family


def indicator_counts(sets) -> list[int]:
    """How many family members contain each point."""
    family = list(sets)
    universe = family[0].universe
    return [sum(1 for s in family if x in s) for x in universe.points()]


def lemma_step(sets) -> list[SubsetMask]:
    """One merge pass over the family.

    The output D_1, ..., D_n has the same indicator sum as the input, every
    D_i is contained in D_n, and D_n is the union of the inputs.
    """
    family = _validated(sets)
    chain = [family[0]]
    for current in family[1:]:
        last = chain[-1]
        chain[-1] = last & current
        chain.append(last | current)
    return chain


def nest(sets) -> NestedFamily:
    """The nested family with the same indicator sum as the input.

    Implemented by the merge recursion itself (one pass, then recurse on
    the first n-1 outputs); the count-based superlevel characterization is
    verified bit-for-bit afterwards as an independent oracle.
    """
    family = _validated(sets)
    universe = family[0].universe
    n = len(family)
    collected = []
    work = family
    while work:
        merged = lemma_step(work)
        collected.append(merged[-1])
        work = merged[:-1]
    nested = list(reversed(collected))

    counts = indicator_counts(family)
    for i, result_set in enumerate(nested, start=1):
        expect_bits = 0
        needed = n - i + 1
        for x in universe.points():
            if counts[x] >= needed:
                expect_bits |= 1 << x
        if result_set.bits != expect_bits:
            raise InvariantViolation(
                "nested family disagrees with the membership-count characterization",
                payload={
                    "position": i,
                    "from_recursion": result_set.indices(),
                    "from_counts": SubsetMask(universe, expect_bits).indices(),
                },
            )
    return NestedFamily(tuple(nested))


@dataclass(frozen=True)
class NestingAudit:
    """Capacity sums along the merge: original family, one pass, fully nested."""

    original: tuple[SubsetMask, ...]
    merged: tuple[SubsetMask, ...]
    nested: NestedFamily
    sum_original: Value
    sum_merged: Value
    sum_nested: Value
    holds: bool


def capacity_sum_audit(sets, H: Capacity) -> NestingAudit:
    """Check sum H(A_i) <= sum H(D_i) <= sum H(C_i) for a strongly
    subadditive capacity.

    Refuses other capacities: without strong subadditivity a single merge
    pass can strictly increase the capacity sum.
    """
    family = _validated(sets)
    require_same_universe(family[0], H)
    report = H.check(Axiom.STRONGLY_SUBADDITIVE)
    if not report.holds:
        raise HypothesisError(
            "the capacity-sum audit requires a strongly subadditive capacity; "
            "the merge pass can increase the sum otherwise",
            witness=report,
        )
    merged = lemma_step(family)
    nested = nest(family)
    s_c = ext_sum(H[c] for c in family)
    s_d = ext_sum(H[d] for d in merged)
    s_a = ext_sum(H[a] for a in nested)
    holds = s_a <= s_d <= s_c
    if not holds:
        raise InvariantViolation(
            "capacity sums increased along the merge despite strong subadditivity",
            payload={
                "sum_original": s_c,
                "sum_merged": s_d,
                "sum_nested": s_a,
                "family": [c.indices() for c in family],
            },
        )
    return NestingAudit(
        original=tuple(family),
        merged=tuple(merged),
        nested=nested,
        sum_original=s_c,
        sum_merged=s_d,
        sum_nested=s_a,
        holds=holds,
    )
