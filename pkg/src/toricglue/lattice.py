"""Exact integer and rational linear algebra.

Matrices are tuples of row tuples: ``int`` entries for integer matrices,
``Fraction`` entries for rational ones.  Nothing here touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .quantities import as_fraction

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]
RatVector = tuple[Fraction, ...]


def int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integer entry {x}")
                x = x.numerator
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"non-integer entry {x!r}")
            r.append(x)
        out.append(tuple(r))
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return tuple(out)


def rat_matrix(rows: Sequence[Sequence]) -> RatMatrix:
    out = tuple(tuple(as_fraction(x) for x in row) for row in rows)
    if out and len({len(r) for r in out}) != 1:
        raise ValueError("ragged matrix")
    return out


def shape(A) -> tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(A):
    return tuple(zip(*A)) if A else ()


def matmul(A, B):
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    M = [list(r) for r in int_matrix(A)]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # exact division is guaranteed by Sylvester's identity
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def determinant_rational(A: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix: clear denominators, then Bareiss."""
    R = rat_matrix(A)
    scale = Fraction(1)
    rows = []
    for row in R:
        den = math.lcm(*(x.denominator for x in row)) if row else 1
        scale /= den
        rows.append([int(x * den) for x in row])
    return scale * determinant(rows)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U * A * V == D`` with U, V unimodular and D's diagonal a divisor chain."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def divisors(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(shape(self.D))))


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    D = [list(r) for r in int_matrix(A)]
    m, n = shape(D)
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        for M in (D, U):
            M[dst] = [a + q * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, q):
        for M in (D, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(int_matrix(U), int_matrix(D), int_matrix(V))


def rref(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    R = [list(r) for r in rat_matrix(M)]
    rows, cols = shape(R)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def rank_rational(M: Sequence[Sequence]) -> int:
    return len(rref(M)[1])


def nullspace_rational(M: Sequence[Sequence], ncols: int | None = None) -> list[RatVector]:
    """Basis of the right kernel, one vector per free column."""
    R, pivots = rref(M)
    n = shape(R)[1] if R else (ncols or 0)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def inverse_rational(A: Sequence[Sequence]) -> RatMatrix:
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rat_matrix(A))]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in R)


def solve_rational(A: Sequence[Sequence], b: Sequence) -> RatVector:
    """Unique solution of a square nonsingular system."""
    return matvec(inverse_rational(A), rat_matrix([b])[0])


class _Unbounded(Exception):
    pass


def _simplex(A: list[list[Fraction]], b: list[Fraction], c: list[Fraction]) -> list[Fraction] | None:
    """Minimise c.x subject to A x = b, x >= 0, exactly, with Bland's rule.

    Returns an optimal vertex, or None if the system is infeasible.
    """
    m, n = len(A), len(c)
    A = [list(r) for r in A]
    b = list(b)
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # tableau rows: [A | I_art | b]
    T = [A[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m

    def pivot(r, col):
        inv = 1 / T[r][col]
        T[r] = [x * inv for x in T[r]]
        for i in range(len(T)):
            if i != r and T[i][col] != 0:
                f = T[i][col]
                T[i] = [a - f * p for a, p in zip(T[i], T[r])]
        basis[r] = col

    def run(cost, allowed):
        while True:
            # reduced costs
            red = []
            for j in range(width):
                if j not in allowed:
                    red.append(None)
                    continue
                red.append(cost[j] - sum(cost[basis[i]] * T[i][j] for i in range(len(T))))
            entering = next((j for j in range(width) if red[j] is not None and red[j] < 0), None)
            if entering is None:
                return
            best = None
            for i in range(len(T)):
                if T[i][entering] > 0:
                    ratio = T[i][-1] / T[i][entering]
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise _Unbounded
            pivot(best[1], entering)

    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    run(phase1, set(range(width)))
    if sum(T[i][-1] for i in range(m) if basis[i] >= n) != 0:
        return None
    # drive remaining artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            pivot(i, col)
        i += 1
    cost = list(c) + [Fraction(0)] * m
    run(cost, set(range(n)))
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return x


def positive_nullspace_witness(M: Sequence[Sequence]) -> RatVector | None:
    """A vector b > 0 with M b = 0, or None when no such vector exists.

    Solves ``min sum(b)  s.t.  M b = 0, b >= 1`` by exact simplex; the optimum
    has smallest component 1, which fixes the otherwise free scale.
    """
    R = rat_matrix(M)
    if not R:
        raise ValueError("empty matrix; pass at least one row (a zero row is fine)")
    n = len(R[0])
    if n == 0:
        return None
    # b = 1 + y, y >= 0  =>  M y = -M 1
    rhs = [-sum(row) for row in R]
    try:
        y = _simplex([list(r) for r in R], rhs, [Fraction(1)] * n)
    except _Unbounded:  # pragma: no cover - objective is bounded below by 0
        raise AssertionError("unbounded LP with nonnegative objective")
    if y is None:
        return None
    b = tuple(1 + v for v in y)
    lo = min(b)
    return tuple(v / lo for v in b)


def gcd_of_maximal_minors(rows: Sequence[Sequence[int]]) -> int:
    """gcd of the k x k minors of a k x n integer matrix (k <= n)."""
    from itertools import combinations

    A = int_matrix(rows)
    k, n = shape(A)
    g = 0
    for cols in combinations(range(n), k):
        g = math.gcd(g, determinant([[row[c] for c in cols] for row in A]))
        if g == 1:
            break
    return g
