"""Exact linear programming and linear solving over Q[sqrt(2)].

A small dense two-phase tableau simplex with Bland's rule.  Everything is
carried out in exact field arithmetic, so feasibility verdicts, convex
decompositions, and separating inequalities are certificates, not
approximations.  Problem sizes in this package are tiny (tens of rows,
hundreds of columns); clarity wins over sparse cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .errors import InvalidArgumentError
from .scalars import ScalarQ2

_ZERO = ScalarQ2(0)
_ONE = ScalarQ2(1)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[list]
    objective: Optional[ScalarQ2]


def _coerce_matrix(A):
    return [[ScalarQ2.coerce(v) for v in row] for row in A]


def _pivot(T, basis, r, c):
    piv = T[r][c]
    inv = _ONE / piv
    T[r] = [v * inv for v in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != _ZERO:
            f = T[i][c]
            Tr = T[r]
            T[i] = [a - f * b for a, b in zip(T[i], Tr)]
    basis[r] = c


def _run_simplex(T, basis, ncols):
    """Minimize the objective encoded in the last tableau row (reduced costs).

    Returns "optimal" or "unbounded".  Bland's rule throughout.
    """
    m = len(T) - 1
    obj = T[m]
    while True:
        enter = -1
        for j in range(ncols):
            if obj[j].sign() < 0:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(m):
            a = T[i][enter]
            if a.sign() > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, leave, enter)
        obj = T[m]


def solve_lp(A, b, c, maximize=False) -> LPResult:
    """Solve min (or max) c.x subject to A x = b, x >= 0, exactly."""
    A = _coerce_matrix(A)
    b = [ScalarQ2.coerce(v) for v in b]
    c = [ScalarQ2.coerce(v) for v in c]
    m = len(A)
    n = len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise InvalidArgumentError("inconsistent LP dimensions")
    if maximize:
        c = [-v for v in c]

    # rows with negative rhs are flipped so artificials start feasible
    rows = []
    for i in range(m):
        if b[i].sign() < 0:
            rows.append([-v for v in A[i]] + [_ZERO] * m + [-b[i]])
        else:
            rows.append(list(A[i]) + [_ZERO] * m + [b[i]])
    for i in range(m):
        rows[i][n + i] = _ONE
    basis = [n + i for i in range(m)]

    # phase 1: minimize the sum of artificials (reduced against the
    # all-artificial starting basis)
    obj = [_ZERO] * n + [_ONE] * m + [_ZERO]
    for i in range(m):
        for j in range(n + m + 1):
            obj[j] = obj[j] - rows[i][j]
    T = rows + [obj]
    status = _run_simplex(T, basis, n + m)
    if status != "optimal" or T[m][-1].sign() != 0:
        return LPResult("infeasible", None, None)

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            pivoted = False
            for j in range(n):
                if T[i][j] != _ZERO:
                    _pivot(T, basis, i, j)
                    pivoted = True
                    break
            if not pivoted:
                continue  # redundant all-zero row
        keep.append(i)
    rows = [T[i] for i in keep]
    basis = [basis[i] for i in keep]
    m2 = len(rows)

    # phase 2: original objective, artificial columns frozen out
    for row in rows:
        for i in range(m):
            row[n + i] = _ZERO
    obj = list(c) + [_ZERO] * m + [_ZERO]
    for i in range(m2):
        bj = basis[i]
        if obj[bj] != _ZERO:
            f = obj[bj]
            obj = [a - f * bv for a, bv in zip(obj, rows[i])]
    T = rows + [obj]
    status = _run_simplex(T, basis, n)  # artificials excluded from entering
    if status == "unbounded":
        return LPResult("unbounded", None, None)
    x = [_ZERO] * n
    for i in range(m2):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), _ZERO)
    if maximize:
        value = -value
    return LPResult("optimal", x, value)


def gaussian_solve(A, b):
    """Exact Gauss-Jordan for A x = b.

    Returns (status, solution, rank) where status is "unique",
    "underdetermined", or "inconsistent"; solution is None unless unique.
    """
    A = _coerce_matrix(A)
    b = [ScalarQ2.coerce(v) for v in b]
    m = len(A)
    n = len(A[0]) if m else 0
    rank = 0
    pivots = []
    for col in range(n):
        piv = -1
        for r in range(rank, m):
            if A[r][col] != _ZERO:
                piv = r
                break
        if piv < 0:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        b[rank], b[piv] = b[piv], b[rank]
        inv = _ONE / A[rank][col]
        A[rank] = [v * inv for v in A[rank]]
        b[rank] = b[rank] * inv
        for r in range(m):
            if r != rank and A[r][col] != _ZERO:
                f = A[r][col]
                A[r] = [a - f * p for a, p in zip(A[r], A[rank])]
                b[r] = b[r] - f * b[rank]
        pivots.append(col)
        rank += 1
    for r in range(rank, m):
        if b[r] != _ZERO:
            return "inconsistent", None, rank
    if rank < n:
        return "underdetermined", None, rank
    x = [_ZERO] * n
    for r, col in enumerate(pivots):
        x[col] = b[r]
    return "unique", x, rank


def canonical_inequality(a, rhs):
    """Scale a rational inequality to coprime integers (left as-is when any
    coefficient has an irrational part)."""
    vals = [ScalarQ2.coerce(v) for v in a] + [ScalarQ2.coerce(rhs)]
    if any(v.b != 0 for v in vals):
        return tuple(vals[:-1]), vals[-1]
    den = 1
    for v in vals:
        den = den * v.a.denominator // gcd(den, v.a.denominator)
    ints = [int(v.a * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    out = [ScalarQ2(v) for v in ints]
    return tuple(out[:-1]), out[-1]
