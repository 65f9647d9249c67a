"""Exact rational primal simplex with Bland's anti-cycling rule.

Solves  max c.x  subject to  A x <= b,  x >= 0  with all data rational and
b >= 0, so the slack basis is feasible and no phase-one is needed.  Bland's
rule (smallest eligible index, ties in the ratio test broken by smallest
basis variable) guarantees termination even on degenerate tableaus.  This
is deliberately dense and small: the duality module feeds it one constraint
per nonempty subset, so exactness matters far more than speed.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ChoquetError


class UnboundedProgramError(ChoquetError):
    """The feasible region is unbounded in the objective direction."""


def maximize(objective, rows, bounds):
    """Return (optimal value, x) for max c.x, A x <= b, x >= 0.

    ``objective`` has length n, ``rows`` is an m x n matrix, ``bounds`` has
    length m with every entry >= 0.  All entries must be Fractions or ints.
    """
    c = [Fraction(v) for v in objective]
    b = [Fraction(v) for v in bounds]
    a = [[Fraction(v) for v in row] for row in rows]
    n = len(c)
    m = len(b)
    if any(len(row) != n for row in a):
        raise ValueError("constraint matrix width disagrees with the objective")
    if any(v < 0 for v in b):
        raise ValueError("bounds must be nonnegative for the slack start")

    # tableau columns: n structural, m slack, then the constant column
    width = n + m
    tableau = []
    for i in range(m):
        row = a[i] + [Fraction(0)] * m + [b[i]]
        row[n + i] = Fraction(1)
        tableau.append(row)
    # reduced-cost row; the last cell accumulates the objective value
    cost = c + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))

    while True:
        entering = -1
        for j in range(width):
            if cost[j] > 0:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = None
        for i in range(m):
            coeff = tableau[i][entering]
            if coeff > 0:
                ratio = tableau[i][width] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            raise UnboundedProgramError("objective is unbounded above")
        _pivot(tableau, cost, basis, leaving, entering, width)

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i][width]
    return -cost[width], x


def _pivot(tableau, cost, basis, row, col, width):
    pivot_row = tableau[row]
    pivot = pivot_row[col]
    inv = Fraction(1) / pivot
    for j in range(width + 1):
        pivot_row[j] *= inv
    for i, other in enumerate(tableau):
        if i == row:
            continue
        factor = other[col]
        if factor:
            for j in range(width + 1):
                other[j] -= factor * pivot_row[j]
    factor = cost[col]
    if factor:
        for j in range(width + 1):
            cost[j] -= factor * pivot_row[j]
    basis[row] = col
