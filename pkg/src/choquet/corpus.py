"""Seeded capacity and function corpora shared by the suite and the tests.

Everything here is deterministic in (seed, parameters): generators are
keyed by explicit strings, never by process state, so reports are
reproducible across runs and parallelism degrees.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .capacity import Axiom, Capacity, GeneratorKind, generate_capacity, threshold_capacity
from .domain import GroundSet, StepFunction
from .duality import AdditiveMeasure
from .values import INF


def _rng(*key) -> random.Random:
    return random.Random(":".join(str(k) for k in key))


def mixed_monotone_corpus(seed, sizes=(1, 2, 3), per_size=68) -> list[Capacity]:
    """Finite-valued monotone capacities mixing all generators.

    The default parameters give at least 200 instances over sizes 1..3.
    """
    out = []
    for n in sizes:
        universe = GroundSet(n)
        split = per_size // 4
        for i in range(split):
            out.append(
                generate_capacity(
                    GeneratorKind.RANDOM_MONOTONE, universe, seed=f"{seed}:rm:{n}:{i}"
                )
            )
        for i in range(split):
            out.append(
                generate_capacity(
                    GeneratorKind.RANDOM_SUBMODULAR_MONOTONE,
                    universe,
                    seed=f"{seed}:sm:{n}:{i}",
                )
            )
        for i in range(split):
            out.append(
                generate_capacity(
                    GeneratorKind.ADDITIVE, universe, seed=f"{seed}:add:{n}:{i}"
                )
            )
        for m in range(n + 1):
            out.append(threshold_capacity(universe, m))
        remaining = per_size - 3 * split - (n + 1)
        for i in range(max(remaining, 0)):
            out.append(
                generate_capacity(
                    GeneratorKind.RANDOM_MONOTONE, universe, seed=f"{seed}:rm2:{n}:{i}"
                )
            )
    return out


def strongly_subadditive_corpus(seed, sizes=(2, 3, 4), count=25) -> list[Capacity]:
    """Monotone strongly subadditive finite capacities; verified, not trusted."""
    out = []
    i = 0
    while len(out) < count:
        n = sizes[i % len(sizes)]
        universe = GroundSet(n)
        if i % 5 == 4:
            candidate = generate_capacity(
                GeneratorKind.ADDITIVE, universe, seed=f"{seed}:add:{i}"
            )
        else:
            candidate = generate_capacity(
                GeneratorKind.RANDOM_SUBMODULAR_MONOTONE,
                universe,
                seed=f"{seed}:sm:{i}",
            )
        i += 1
        if candidate.check(Axiom.STRONGLY_SUBADDITIVE).holds and candidate.check(
            Axiom.MONOTONE
        ).holds:
            out.append(candidate)
    return out


def finitely_subadditive_corpus(seed, sizes=(2, 3), count=30) -> list[Capacity]:
    """Monotone finitely subadditive capacities (a superset of the strong ones)."""
    out = []
    i = 0
    while len(out) < count:
        n = sizes[i % len(sizes)]
        universe = GroundSet(n)
        kind = (
            GeneratorKind.RANDOM_MONOTONE
            if i % 3 == 0
            else GeneratorKind.RANDOM_SUBMODULAR_MONOTONE
            if i % 3 == 1
            else GeneratorKind.ADDITIVE
        )
        candidate = generate_capacity(kind, universe, seed=f"{seed}:fs:{i}")
        i += 1
        if candidate.check(Axiom.FINITE_SUBADDITIVE).holds:
            out.append(candidate)
    return out


def infinite_monotone_corpus(seed, sizes=(2, 3), count=100) -> list[Capacity]:
    """Monotone capacities carrying at least one infinite value."""
    out = []
    i = 0
    while len(out) < count:
        n = sizes[i % len(sizes)]
        universe = GroundSet(n)
        if i % 7 == 6:
            candidate = threshold_capacity(
                universe, m=i % n, top=INF, low=Fraction(1)
            )
        else:
            candidate = generate_capacity(
                GeneratorKind.RANDOM_MONOTONE,
                universe,
                seed=f"{seed}:inf:{i}",
                infinity_rate=Fraction(1, 4),
            )
        i += 1
        if not candidate.is_finite:
            out.append(candidate)
    return out


def random_function(
    rng: random.Random,
    universe: GroundSet,
    *,
    denominator=8,
    max_numerator=16,
    signed=False,
) -> StepFunction:
    values = []
    for _ in universe.points():
        numerator = rng.randrange(max_numerator + 1)
        if signed and rng.randrange(2):
            numerator = -numerator
        values.append(Fraction(numerator, denominator))
    return StepFunction(universe, tuple(values))


def function_rng(seed, tag) -> random.Random:
    return _rng("function", seed, tag)


def random_dominated_measure(rng: random.Random, H: Capacity) -> AdditiveMeasure:
    """A random additive measure scaled into the domination region of H.

    Samples masses, finds the worst ratio mu(A)/H(A) over nonempty subsets,
    and rescales below it; sets forcing zero (H(A) = 0 with mu(A) > 0) zero
    out the whole sample.
    """
    n = H.universe.size
    masses = [Fraction(rng.randrange(1, 9), 4) for _ in range(n)]
    limit = None
    prefix = [Fraction(0)] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        prefix[mask] = prefix[mask ^ low] + masses[low.bit_length() - 1]
        cap = H.table[mask]
        if cap is INF or prefix[mask] == 0:
            continue
        ratio = cap / prefix[mask]
        if limit is None or ratio < limit:
            limit = ratio
    if limit is None:
        limit = Fraction(1)
    shrink = Fraction(rng.randrange(0, 5), 4)  # 0 .. 1 in quarters
    factor = limit * shrink
    return AdditiveMeasure(H.universe, tuple(m * factor for m in masses))
