"""Finite ground sets, bitmask subsets, and exact step functions.

These are the three primitives every other module consumes.  A ground set
is just ``{0, ..., n-1}``; subsets are n-bit masks; step functions carry a
tuple of exact values, nonnegative extended reals or finite signed
rationals.  All values are immutable and all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import UniverseMismatchError
from .values import INF, Value, ext_add, is_inf, parse_value

#: Dense 2^n capacity tables must fit in memory and brute-force oracles must
#: stay feasible.
MAX_GROUND_SET_SIZE = 24


@dataclass(frozen=True)
class GroundSet:
    """The finite point set {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"ground set size must be a positive integer, got {self.size!r}")
        if self.size > MAX_GROUND_SET_SIZE:
            raise ValueError(
                f"ground set size {self.size} exceeds the cap of {MAX_GROUND_SET_SIZE}"
            )

    @property
    def full_bits(self) -> int:
        return (1 << self.size) - 1

    def points(self) -> range:
        return range(self.size)

    def masks(self) -> range:
        """All subset bitmasks in ascending order."""
        return range(1 << self.size)


def require_same_universe(*objs) -> GroundSet:
    universe = objs[0].universe
    for other in objs[1:]:
        if other.universe != universe:
            raise UniverseMismatchError(
                f"universe mismatch: {universe} vs {other.universe}"
            )
    return universe


@dataclass(frozen=True)
class SubsetMask:
    """A subset of a ground set, stored as a bitmask."""

    universe: GroundSet
    bits: int

    def __post_init__(self):
        if not 0 <= self.bits <= self.universe.full_bits:
            raise ValueError(
                f"mask {self.bits:#x} has bits outside the {self.universe.size}-point universe"
            )

    @classmethod
    def empty(cls, universe: GroundSet) -> "SubsetMask":
        return cls(universe, 0)

    @classmethod
    def full(cls, universe: GroundSet) -> "SubsetMask":
        return cls(universe, universe.full_bits)

    @classmethod
    def from_indices(cls, universe: GroundSet, indices: Iterable[int]) -> "SubsetMask":
        bits = 0
        for i in indices:
            if not 0 <= i < universe.size:
                raise ValueError(f"point {i} outside the {universe.size}-point universe")
            bits |= 1 << i
        return cls(universe, bits)

    def indices(self) -> tuple[int, ...]:
        return tuple(i for i in self.universe.points() if self.bits >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices())

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, point: int) -> bool:
        return 0 <= point < self.universe.size and bool(self.bits >> point & 1)

    def __and__(self, other: "SubsetMask") -> "SubsetMask":
        require_same_universe(self, other)
        return SubsetMask(self.universe, self.bits & other.bits)

    def __or__(self, other: "SubsetMask") -> "SubsetMask":
        require_same_universe(self, other)
        return SubsetMask(self.universe, self.bits | other.bits)

    def __sub__(self, other: "SubsetMask") -> "SubsetMask":
        require_same_universe(self, other)
        return SubsetMask(self.universe, self.bits & ~other.bits)

    def complement(self) -> "SubsetMask":
        return SubsetMask(self.universe, self.universe.full_bits & ~self.bits)

    def issubset(self, other: "SubsetMask") -> bool:
        require_same_universe(self, other)
        return self.bits & ~other.bits == 0

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    def __repr__(self):
        return "{" + ", ".join(str(i) for i in self.indices()) + "}"


@dataclass(frozen=True)
class StepFunction:
    """An exact-valued function on a ground set.

    Values are Fractions, optionally mixed with INF.  Negative values make
    the function signed; signed functions must be finite (the infinite token
    only pairs with nonnegative integrands).
    """

    universe: GroundSet
    values: tuple

    def __post_init__(self):
        if len(self.values) != self.universe.size:
            raise ValueError(
                f"expected {self.universe.size} values, got {len(self.values)}"
            )
        has_negative = False
        has_infinite = False
        for v in self.values:
            if v is INF:
                has_infinite = True
            elif isinstance(v, Fraction):
                if v < 0:
                    has_negative = True
            else:
                raise ValueError(f"step function values must be exact, got {v!r}")
        if has_negative and has_infinite:
            raise ValueError("signed step functions must be finite")

    @classmethod
    def from_values(cls, universe: GroundSet, raw: Iterable, *, allow_negative=True) -> "StepFunction":
        vals = tuple(
            parse_value(v, allow_inf=True, allow_negative=allow_negative) for v in raw
        )
        return cls(universe, vals)

    @classmethod
    def constant(cls, universe: GroundSet, c) -> "StepFunction":
        v = parse_value(c, allow_negative=True)
        return cls(universe, (v,) * universe.size)

    @classmethod
    def zero(cls, universe: GroundSet) -> "StepFunction":
        return cls.constant(universe, 0)

    @property
    def is_nonnegative(self) -> bool:
        return all(v is INF or v >= 0 for v in self.values)

    @property
    def is_finite(self) -> bool:
        return all(v is not INF for v in self.values)

    def __call__(self, point: int):
        return self.values[point]

    def distinct_finite_levels(self) -> list[Fraction]:
        """Distinct finite positive values, descending."""
        return sorted({v for v in self.values if v is not INF and v > 0}, reverse=True)

    def infinity_support(self) -> SubsetMask:
        bits = 0
        for i, v in enumerate(self.values):
            if v is INF:
                bits |= 1 << i
        return SubsetMask(self.universe, bits)


def superlevel(f: StepFunction, t, strict: bool) -> SubsetMask:
    """{x : f(x) > t} when strict, {x : f(x) >= t} otherwise.  Requires t >= 0."""
    t = parse_value(t, allow_inf=False)
    bits = 0
    for i, v in enumerate(f.values):
        if (v > t) if strict else (v >= t):
            bits |= 1 << i
    return SubsetMask(f.universe, bits)


def truncate(f: StepFunction, k) -> StepFunction:
    """Clamp every value to [-k, k]; for nonnegative f this lands in [0, k]."""
    k = parse_value(k, allow_inf=False)
    if k <= 0:
        raise ValueError("truncation height must be positive")
    out = []
    for v in f.values:
        if v is INF or v > k:
            out.append(k)
        elif v < -k:
            out.append(-k)
        else:
            out.append(v)
    return StepFunction(f.universe, tuple(out))


def floor_scale(f: StepFunction, k: int) -> StepFunction:
    """Componentwise floor(k*f)/k, exact.

    Requires a nonnegative finite f and integer k >= 1.  The result takes
    values in N/k, never exceeds f, and differs from f by less than 1/k.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("scaling denominator must be an integer >= 1")
    out = []
    for v in f.values:
        if v is INF:
            raise ValueError("floor scaling is undefined on infinite values")
        if v < 0:
            raise ValueError("floor scaling requires a nonnegative function")
        out.append(Fraction(math.floor(v * k), k))
    return StepFunction(f.universe, tuple(out))


def add(f: StepFunction, g: StepFunction) -> StepFunction:
    require_same_universe(f, g)
    return StepFunction(f.universe, tuple(ext_add(a, b) for a, b in zip(f.values, g.values)))


def sub(f: StepFunction, g: StepFunction) -> StepFunction:
    """f - g, defined for finite functions (the result may be signed)."""
    require_same_universe(f, g)
    if not (f.is_finite and g.is_finite):
        raise ValueError("subtraction requires finite step functions")
    return StepFunction(f.universe, tuple(a - b for a, b in zip(f.values, g.values)))


def abs_(f: StepFunction) -> StepFunction:
    return StepFunction(f.universe, tuple(v if v is INF else abs(v) for v in f.values))


def scalar(c, f: StepFunction) -> StepFunction:
    """c * f for a finite rational c (c >= 0 when f carries infinities)."""
    c = parse_value(c, allow_inf=False, allow_negative=True)
    out = []
    for v in f.values:
        if v is INF:
            if c < 0:
                raise ValueError("cannot negate an infinite value")
            out.append(INF if c > 0 else Fraction(0))
        else:
            out.append(c * v)
    return StepFunction(f.universe, tuple(out))


def offset(f: StepFunction, c) -> StepFunction:
    """f + c pointwise; infinite entries stay infinite."""
    c = parse_value(c, allow_inf=False, allow_negative=True)
    return StepFunction(
        f.universe, tuple(v if v is INF else v + c for v in f.values)
    )


def pos_part(f: StepFunction) -> StepFunction:
    zero = Fraction(0)
    return StepFunction(
        f.universe,
        tuple(v if v is INF else (v if v > 0 else zero) for v in f.values),
    )


def indicator(subset: SubsetMask) -> StepFunction:
    one, zero = Fraction(1), Fraction(0)
    vals = tuple(one if i in subset else zero for i in subset.universe.points())
    return StepFunction(subset.universe, vals)
