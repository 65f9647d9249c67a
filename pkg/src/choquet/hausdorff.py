"""Dyadic box-counting content on the unit cube, computed exactly.

The content of a cell set E at exponent beta is the cheapest cover of E by
dyadic cubes, where a cube of side 2^-k costs 2^(-k*beta).  Covers are
restricted to the unit cube's own tree: any strictly larger dyadic cube has
side >= 2 and cost above 1, which the unit cube itself beats, so the
restriction changes nothing for subsets of the cube and positive beta.
That restriction makes the infimum a finite dynamic program over the tree.

Costs live in the field Q(2^(1/q)) where q is the denominator of beta in
lowest terms: every cube cost is an integer power of 2^(1/q), so covers
compare exactly.  Equalities are decided on coefficient vectors; strict
orders are resolved by certified high-precision evaluation, which always
terminates because 2^(1/q) has degree exactly q over the rationals (no
nonzero coefficient vector can evaluate to zero).  Genuine ties therefore
surface as ties and are broken by the documented rule: prefer the single
covering cube.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .capacity import Capacity
from .domain import MAX_GROUND_SET_SIZE, GroundSet
from .errors import BudgetError
from .values import parse_value

#: Fixed-grid denominator exponent for exporting irrational contents.
EXPORT_ROUNDING_BITS = 400


@dataclass(frozen=True)
class AlgebraicValue:
    """An exact element of Q(2^(1/q)): sum of coeffs[r] * 2^(r/q)."""

    order: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if self.order < 1 or len(self.coeffs) != self.order:
            raise ValueError("coefficient vector must have length equal to the order")

    @classmethod
    def zero(cls, order: int) -> "AlgebraicValue":
        return cls(order, (Fraction(0),) * order)

    @classmethod
    def from_rational(cls, value, order: int) -> "AlgebraicValue":
        coeffs = [Fraction(0)] * order
        coeffs[0] = Fraction(value)
        return cls(order, tuple(coeffs))

    @classmethod
    def power_of_two(cls, exponent_num: int, order: int) -> "AlgebraicValue":
        """2^(exponent_num / order), exactly."""
        whole, r = divmod(exponent_num, order)
        coeffs = [Fraction(0)] * order
        coeffs[r] = Fraction(2) ** whole
        return cls(order, tuple(coeffs))

    def __add__(self, other: "AlgebraicValue") -> "AlgebraicValue":
        self._same_order(other)
        return AlgebraicValue(
            self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "AlgebraicValue") -> "AlgebraicValue":
        self._same_order(other)
        return AlgebraicValue(
            self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def scaled(self, factor) -> "AlgebraicValue":
        factor = Fraction(factor)
        return AlgebraicValue(self.order, tuple(c * factor for c in self.coeffs))

    def shifted(self, exponent_num: int) -> "AlgebraicValue":
        """Multiply by 2^(exponent_num / order)."""
        out = [Fraction(0)] * self.order
        for r, c in enumerate(self.coeffs):
            if c == 0:
                continue
            whole, new_r = divmod(r + exponent_num, self.order)
            out[new_r] += c * Fraction(2) ** whole
        return AlgebraicValue(self.order, tuple(out))

    def _same_order(self, other: "AlgebraicValue"):
        if self.order != other.order:
            raise ValueError("mixed root orders")

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("value is irrational; use floor_scaled or as_float")
        return self.coeffs[0]

    def sign(self) -> int:
        if all(c == 0 for c in self.coeffs):
            return 0
        if self.is_rational:
            return 1 if self.coeffs[0] > 0 else -1
        from mpmath import mp

        prec = 64
        while True:
            with mp.workprec(prec):
                total = mp.mpf(0)
                magnitude = mp.mpf(0)
                root = mp.root(2, self.order)
                for r, c in enumerate(self.coeffs):
                    if c == 0:
                        continue
                    term = mp.mpf(c.numerator) / mp.mpf(c.denominator) * root**r
                    total += term
                    magnitude += abs(term)
                error = magnitude * mp.mpf(2) ** (8 - prec)
                if abs(total) > error:
                    return 1 if total > 0 else -1
            prec *= 2

    def __eq__(self, other):
        if not isinstance(other, AlgebraicValue):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __le__(self, other: "AlgebraicValue") -> bool:
        return (self - other).sign() <= 0

    def __lt__(self, other: "AlgebraicValue") -> bool:
        return (self - other).sign() < 0

    def floor_scaled(self, bits: int = EXPORT_ROUNDING_BITS) -> int:
        """floor(value * 2^bits); exact for rationals, certified otherwise."""
        if self.is_rational:
            scaled = self.coeffs[0] * (1 << bits)
            return scaled.numerator // scaled.denominator
        from mpmath import mp

        prec = bits + 64
        while True:
            with mp.workprec(prec):
                total = mp.mpf(0)
                magnitude = mp.mpf(0)
                root = mp.root(2, self.order)
                for r, c in enumerate(self.coeffs):
                    if c == 0:
                        continue
                    term = mp.mpf(c.numerator) / mp.mpf(c.denominator) * root**r
                    total += term
                    magnitude += abs(term)
                total = total * mp.mpf(2) ** bits
                error = magnitude * mp.mpf(2) ** bits * mp.mpf(2) ** (8 - prec)
                low = mp.floor(total - error)
                high = mp.floor(total + error)
                if low == high:
                    return int(low)
            prec *= 2

    def to_fraction(self, bits: int = EXPORT_ROUNDING_BITS) -> Fraction:
        """Exact value when rational, else the floor on the 2^-bits grid.

        Directed (downward) rounding on a fixed grid: exactly equal inputs
        round identically, so ties survive the export.
        """
        if self.is_rational:
            return self.coeffs[0]
        return Fraction(self.floor_scaled(bits), 1 << bits)

    def as_float(self) -> float:
        from mpmath import mp

        with mp.workprec(120):
            root = mp.root(2, self.order)
            total = mp.mpf(0)
            for r, c in enumerate(self.coeffs):
                total += mp.mpf(c.numerator) / mp.mpf(c.denominator) * root**r
            return float(total)

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicValue({self.coeffs[0]})"
        return f"AlgebraicValue(order={self.order}, ~{self.as_float():.6g})"


@dataclass(frozen=True)
class DyadicDomain:
    """The unit cube split into 2^(dimension * depth) finest cells."""

    dimension: int
    depth: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if self.dimension * self.depth > 24:
            raise ValueError("cell count 2^(dimension*depth) is capped at 2^24")

    @property
    def side_count(self) -> int:
        return 1 << self.depth

    @property
    def cell_count(self) -> int:
        return 1 << (self.dimension * self.depth)

    def cells(self):
        """All finest-level cell coordinates in lexicographic order."""
        return itertools.product(range(self.side_count), repeat=self.dimension)


@dataclass(frozen=True)
class DyadicCellSet:
    domain: DyadicDomain
    cells: frozenset

    def __post_init__(self):
        for cell in self.cells:
            if len(cell) != self.domain.dimension or not all(
                0 <= c < self.domain.side_count for c in cell
            ):
                raise ValueError(f"cell {cell} outside the domain grid")

    @classmethod
    def build(cls, domain: DyadicDomain, cells: Iterable) -> "DyadicCellSet":
        return cls(domain, frozenset(tuple(c) for c in cells))

    def __len__(self):
        return len(self.cells)


@dataclass(frozen=True)
class DyadicCube:
    """A dyadic cube: side 2^-level, lower corner at coords * 2^-level."""

    level: int
    coords: tuple[int, ...]

    def contains_cell(self, cell, depth: int) -> bool:
        shift = depth - self.level
        if shift < 0:
            return False
        return all(c >> shift == q for c, q in zip(cell, self.coords))


@dataclass(frozen=True)
class CoverSolution:
    """An optimal (or candidate) cover and its exact total cost.

    ``outside_regime`` flags exponents at or above the ambient dimension;
    the value is still exact there, just outside the usual regime.
    """

    value: AlgebraicValue
    cubes: tuple[DyadicCube, ...]
    beta: Fraction
    domain: DyadicDomain
    outside_regime: bool = False

    @property
    def exact(self) -> bool:
        return self.value.is_rational

    def value_fraction(self, bits: int = EXPORT_ROUNDING_BITS) -> Fraction:
        return self.value.to_fraction(bits)

    def value_float(self) -> float:
        return self.value.as_float()


def _cube_cost(level: int, beta: Fraction) -> AlgebraicValue:
    # side 2^-level at exponent beta = p/q: cost is 2^(-level*p / q)
    return AlgebraicValue.power_of_two(-level * beta.numerator, beta.denominator)


def content(cell_set: DyadicCellSet, beta) -> CoverSolution:
    """Cheapest dyadic-cube cover of the cell set, by tree DP.

    cost(Q) is 0 off the set, the cell cost at the finest level, and
    otherwise min(own cube cost, sum of children costs), ties preferring
    the single cube.  The optimal cube list is recovered by backtracking.
    """
    beta = Fraction(parse_value(beta, allow_inf=False))
    if beta <= 0:
        raise ValueError("beta must be positive")
    domain = cell_set.domain
    order = beta.denominator
    depth = domain.depth
    zero = AlgebraicValue.zero(order)

    def solve(level: int, coords: tuple[int, ...], cells: list):
        if not cells:
            return zero, ()
        if level == depth:
            return _cube_cost(depth, beta), (DyadicCube(depth, coords),)
        shift = depth - level - 1
        buckets: dict = {}
        for cell in cells:
            key = tuple(c >> shift & 1 for c in cell)
            buckets.setdefault(key, []).append(cell)
        total = zero
        child_cubes: list[DyadicCube] = []
        for key in sorted(buckets):
            child_coords = tuple(2 * q + b for q, b in zip(coords, key))
            value, cubes = solve(level + 1, child_coords, buckets[key])
            total = total + value
            child_cubes.extend(cubes)
        own = _cube_cost(level, beta)
        if own <= total:
            return own, (DyadicCube(level, coords),)
        return total, tuple(child_cubes)

    value, cubes = solve(0, (0,) * domain.dimension, sorted(cell_set.cells))
    return CoverSolution(
        value=value,
        cubes=cubes,
        beta=beta,
        domain=domain,
        outside_regime=beta >= domain.dimension,
    )


def cover_certificate_check(
    cell_set: DyadicCellSet, beta, solution: CoverSolution
) -> bool:
    """Independently confirm coverage and recompute the claimed value."""
    beta = Fraction(parse_value(beta, allow_inf=False))
    domain = cell_set.domain
    for cube in solution.cubes:
        if not 0 <= cube.level <= domain.depth:
            return False
        if len(cube.coords) != domain.dimension or not all(
            0 <= q < (1 << cube.level) for q in cube.coords
        ):
            return False
    for cell in cell_set.cells:
        if not any(cube.contains_cell(cell, domain.depth) for cube in solution.cubes):
            return False
    recomputed = AlgebraicValue.zero(beta.denominator)
    for cube in solution.cubes:
        recomputed = recomputed + _cube_cost(cube.level, beta)
    return recomputed == solution.value


def export_capacity(domain: DyadicDomain, beta) -> Capacity:
    """The content as a dense capacity over the finest cells.

    Cells are numbered in lexicographic coordinate order.  Integer beta
    exports exactly; fractional beta uses downward rounding on the fixed
    2^-400 grid.  Rounding down preserves ties and single-value orders
    (monotonicity checks stay exact), but a sum of floors can undershoot
    the floor of a sum by one grid unit, so subadditivity comparisons on a
    fractional-beta export should allow a margin a little above 2^-399.
    """
    beta = Fraction(parse_value(beta, allow_inf=False))
    cells = list(domain.cells())
    n = len(cells)
    if n > MAX_GROUND_SET_SIZE:
        raise BudgetError(
            f"{n} cells exceed the exportable ground-set cap of {MAX_GROUND_SET_SIZE}",
            size=n,
            budget=MAX_GROUND_SET_SIZE,
        )
    universe = GroundSet(n)
    table = []
    for mask in universe.masks():
        subset = frozenset(cells[i] for i in range(n) if mask >> i & 1)
        solution = content(DyadicCellSet(domain, subset), beta)
        table.append(solution.value.to_fraction())
    return Capacity(universe, table)
