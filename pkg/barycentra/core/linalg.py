"""Exact linear algebra over ℚ and GF(p), and a rational simplex.

Elimination runs on sympy's DomainMatrix over QQ and GF(p). All routines take
lists of rows, never mutate their inputs and hand back Fractions or integer
residues.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from sympy import GF, QQ, Matrix, Rational
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Rows = list[list[Fraction]]


def _to_fraction(value) -> Fraction:
    value = Rational(value)
    return Fraction(int(value.p), int(value.q))


def _rational_matrix(rows: Sequence[Sequence[Fraction]]) -> DomainMatrix:
    entries = [[QQ(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows]
    return DomainMatrix(entries, (len(entries), len(entries[0])), QQ)


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[Rows, list[int]]:
    """Reduced row echelon form over ℚ; zero rows are dropped.

    Returns the nonzero rows and their pivot columns.
    """
    if not rows:
        return [], []
    reduced, pivots = _rational_matrix(rows).rref()
    entries = reduced.to_Matrix().tolist()[: len(pivots)]
    return [[_to_fraction(v) for v in row] for row in entries], list(pivots)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return _rational_matrix(rows).rank()


def nullspace(rows: Sequence[Sequence[Fraction]], n_cols: int) -> Rows:
    """Basis of {x : A x = 0} for an m×n_cols matrix A.

    Each basis vector has a 1 at one free column and 0 at the others.
    """
    if not rows:
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    matrix = Matrix([[Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row] for row in rows])
    return [[_to_fraction(v) for v in column] for column in matrix.nullspace()]


def reduce_against(vector: Sequence[Fraction], basis: Rows, pivots: Sequence[int]) -> list[Fraction]:
    """Subtract the RREF basis components of ``vector``; zero iff it lies in the span."""
    residual = list(vector)
    for row, pivot in zip(basis, pivots):
        coefficient = residual[pivot]
        if coefficient != 0:
            residual = [a - coefficient * b for a, b in zip(residual, row)]
    return residual


def in_span(vector: Sequence[Fraction], basis: Rows, pivots: Sequence[int]) -> bool:
    return all(v == 0 for v in reduce_against(vector, basis, pivots))


def mat_vec(matrix: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum((a * b for a, b in zip(row, vector)), Fraction(0)) for row in matrix)


def mat_mul(left: Sequence[Sequence[Fraction]], right: Sequence[Sequence[Fraction]], inner: int) -> Rows:
    n_cols = len(right[0]) if right else 0
    return [
        [sum((left[i][k] * right[k][j] for k in range(inner)), Fraction(0)) for j in range(n_cols)]
        for i in range(len(left))
    ]


# GF(p) elimination


def rref_mod(rows: Sequence[Sequence[int]], modulus: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over GF(p) on residues in [0, p); zero rows are dropped."""
    if not rows:
        return [], []
    field = GF(modulus)
    entries = [[field(v % modulus) for v in row] for row in rows]
    reduced, pivots = DomainMatrix(entries, (len(entries), len(entries[0])), field).rref()
    # sympy hands GF(p) entries back in symmetric representation
    residues = [[int(v) % modulus for v in row] for row in reduced.to_Matrix().tolist()[: len(pivots)]]
    return residues, list(pivots)


# Exact simplex


@dataclass(frozen=True)
class LPResult:
    """Outcome of :func:`maximize`."""

    status: str  # "optimal", "infeasible" or "unbounded"
    solution: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None


def _pivot(tableau: Rows, basis: list[int], row: int, col: int) -> None:
    lead = tableau[row][col]
    tableau[row] = [v / lead for v in tableau[row]]
    for i in range(len(tableau)):
        if i != row and tableau[i][col] != 0:
            factor = tableau[i][col]
            tableau[i] = [a - factor * b for a, b in zip(tableau[i], tableau[row])]
    basis[row] = col


def _run_simplex(tableau: Rows, basis: list[int], n_cols: int) -> bool:
    """Iterate Bland's rule on a tableau whose last row holds reduced costs.

    Returns False when the objective is unbounded.
    """
    objective = len(tableau) - 1
    while True:
        entering = next((j for j in range(n_cols) if tableau[objective][j] < 0), None)
        if entering is None:
            return True
        best_row = None
        best_ratio: Optional[Fraction] = None
        for i in range(objective):
            coefficient = tableau[i][entering]
            if coefficient > 0:
                ratio = tableau[i][-1] / coefficient
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[best_row])
                ):
                    best_row, best_ratio = i, ratio
        if best_row is None:
            return False
        _pivot(tableau, basis, best_row, entering)


def maximize(
    equalities: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
    objective: Sequence[Fraction],
) -> LPResult:
    """Maximize ``objective·x`` subject to ``A x = b`` and ``x >= 0``, exactly.

    Two-phase tableau simplex with Bland's anti-cycling rule.
    """
    n = len(objective)
    rows = [[Fraction(v) for v in row] for row in equalities]
    b = [Fraction(v) for v in rhs]
    for i in range(len(rows)):
        if b[i] < 0:
            rows[i] = [-v for v in rows[i]]
            b[i] = -b[i]
    m = len(rows)

    # Phase 1: artificial variables n..n+m-1, maximize -sum(artificials).
    tableau: Rows = []
    for i in range(m):
        artificial = [Fraction(1) if j == i else Fraction(0) for j in range(m)]
        tableau.append(rows[i] + artificial + [b[i]])
    costs = [-sum((rows[i][j] for i in range(m)), Fraction(0)) for j in range(n)]
    tableau.append(costs + [Fraction(0)] * m + [-sum(b, Fraction(0))])
    basis = list(range(n, n + m))
    _run_simplex(tableau, basis, n + m)
    if tableau[-1][-1] != 0:
        return LPResult(status="infeasible")

    # Drive artificials out of the basis; rows that cannot pivot are redundant.
    i = 0
    while i < len(tableau) - 1:
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                del tableau[i]
                del basis[i]
                continue
            _pivot(tableau, basis, i, col)
        i += 1
    tableau = [row[:n] + [row[-1]] for row in tableau[:-1]]

    # Phase 2.
    c = [Fraction(v) for v in objective]
    reduced = [
        sum((c[basis[i]] * tableau[i][j] for i in range(len(basis))), Fraction(0)) - c[j]
        for j in range(n)
    ]
    value = sum((c[basis[i]] * tableau[i][-1] for i in range(len(basis))), Fraction(0))
    tableau.append(reduced + [value])
    if not _run_simplex(tableau, basis, n):
        return LPResult(status="unbounded")
    solution = [Fraction(0)] * n
    for i, var in enumerate(basis):
        solution[var] = tableau[i][-1]
    return LPResult(status="optimal", solution=tuple(solution), value=tableau[-1][-1])
