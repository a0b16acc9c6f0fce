"""Exact integer and rational matrix routines.

Matrices are plain lists of row lists holding ``int`` or ``Fraction``.
Nothing in this module touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional, Sequence

IntMatrix = List[List[int]]
RatMatrix = List[List[Fraction]]


class NotPositiveDefinite(ValueError):
    """Raised when a Cholesky pivot is not strictly positive."""


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*A)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def bilinear(G: Sequence[Sequence], x: Sequence, y: Sequence):
    return sum(xi * gi for xi, gi in zip(x, matvec(G, y)))


def block_diagonal(blocks: Sequence[Sequence[Sequence[int]]]) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[k + i][k + j] = v
        k += len(b)
    return out


def determinant(A: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[Fraction(v) for v in row] for row in A]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def inverse(A: Sequence[Sequence]) -> RatMatrix:
    """Exact inverse over the rationals (Gauss-Jordan)."""
    n = len(A)
    M = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [v / piv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def common_denominator(rows: Sequence[Sequence]) -> int:
    den = 1
    for row in rows:
        for v in row:
            d = Fraction(v).denominator
            den = den * d // gcd(den, d)
    return den


def smith_normal_form(A: Sequence[Sequence[int]]):
    """Return ``(U, D, V)`` with ``U*A*V == D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with nonnegative entries, each dividing the next
    (zeros last).  The pivot strategy is fixed, so the output is a
    deterministic function of ``A``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row dst += f * row src
        D[dst] = [a + f * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):  # col dst += f * col src
        for row in D:
            row[dst] += f * row[src]
        for row in V:
            row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    v = D[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                return U, D, V
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // p))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // p))
                    if D[t][j]:
                        done = False
            if not done:
                continue
            # divisibility: fold any offending entry into the pivot row
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-v for v in D[t]]
            U[t] = [-v for v in U[t]]
    return U, D, V


def invariant_factors(A: Sequence[Sequence[int]]) -> List[int]:
    _, D, _ = smith_normal_form(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def hermite_normal_form(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style HNF: nonzero rows spanning the same lattice as the rows of A.

    Upper triangular with positive pivots, entries above each pivot reduced
    into ``[0, pivot)``; zero rows dropped.  Unique for the row lattice.
    """
    M = [list(map(int, row)) for row in A]
    rows = len(M)
    cols = len(M[0]) if rows else 0
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        # gcd-reduce column c below row r
        while True:
            nz = [i for i in range(r, rows) if M[i][c]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(M[i][c]))
            M[r], M[p] = M[p], M[r]
            for i in range(r + 1, rows):
                if M[i][c]:
                    f = M[i][c] // M[r][c]
                    M[i] = [a - f * b for a, b in zip(M[i], M[r])]
            if all(M[i][c] == 0 for i in range(r + 1, rows)):
                break
        if M[r][c] == 0:
            continue
        if M[r][c] < 0:
            M[r] = [-v for v in M[r]]
        for i in range(r):
            f = M[i][c] // M[r][c]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    return [row for row in M[:r] if any(row)]


def rational_hnf(rows: Sequence[Sequence]) -> RatMatrix:
    """HNF of a row lattice with rational entries (scale, reduce, unscale)."""
    den = common_denominator(rows)
    H = hermite_normal_form([[int(Fraction(v) * den) for v in row] for row in rows])
    return [[Fraction(v, den) for v in row] for row in H]


def integer_kernel(A: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis (as rows) of the lattice ``{x in Z^n : A x = 0}``."""
    _, D, V = smith_normal_form(A)
    n = len(V)
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    return [[V[i][j] for i in range(n)] for j in range(rank, n)]


def hermite_solve(B: Sequence[Sequence], t: Sequence) -> Optional[List[int]]:
    """Integer ``x`` with ``B x = t``, or ``None`` if ``t`` is not in the span.

    ``B`` must have full column rank; ``t`` may be rational.
    """
    m = len(B)
    n = len(B[0])
    M = [[Fraction(v) for v in row] + [Fraction(tv)] for row, tv in zip(B, t)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if M[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is not of full column rank")
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [v / piv for v in M[r]]
        for i in range(m):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(r)
        r += 1
    if any(M[i][n] != 0 for i in range(r, m)):
        return None
    x = [M[i][n] for i in range(n)]
    if any(v.denominator != 1 for v in x):
        return None
    return [int(v) for v in x]


def rational_cholesky(G: Sequence[Sequence[int]]) -> RatMatrix:
    """Exact LDL^T data of a positive definite Gram matrix.

    Returns ``Q`` (upper triangular) in pivot form: ``Q[i][i]`` are the
    pivots and ``Q[i][j]`` (j > i) the multipliers, so that

        x^T G x = sum_i Q[i][i] * (x_i + sum_{j>i} Q[i][j] x_j)^2.
    """
    n = len(G)
    Q = [[Fraction(v) for v in row] for row in G]
    for i in range(n):
        for j in range(i):
            Q[i][j] = Fraction(0)
    for i in range(n):
        if Q[i][i] <= 0:
            raise NotPositiveDefinite(f"non-positive pivot {Q[i][i]} at index {i}")
        for j in range(i + 1, n):
            Q[i][j] = Q[i][j] / Q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                Q[k][l] -= Q[i][k] * Q[i][l] * Q[i][i]
    return Q


def _floor_sqrt(x: Fraction) -> int:
    return isqrt(x.numerator // x.denominator)


def vectors_of_norm(G: Sequence[Sequence[int]], n, shift: Optional[Sequence] = None):
    """All ``v`` in ``shift + Z^r`` with ``v^T G v == n``, lexicographically sorted.

    Exhaustive Fincke-Pohst tree search over exact rational pivots.  ``G``
    must be positive definite.
    """
    r = len(G)
    n = Fraction(n)
    c = [Fraction(s) for s in shift] if shift is not None else [Fraction(0)] * r
    if n < 0:
        return []
    Q = rational_cholesky(G)
    out = []
    v = [Fraction(0)] * r

    def descend(i: int, budget: Fraction):
        centre = -sum((Q[i][j] * v[j] for j in range(i + 1, r)), Fraction(0))
        # need Q_ii * (c_i + z - centre)^2 <= budget
        w = c[i] - centre
        bound = budget / Q[i][i]
        s = _floor_sqrt(bound) + 1
        lo = -w - s
        hi = -w + s
        for z in range(lo.__floor__(), hi.__ceil__() + 1):
            t = z + w
            rest = budget - Q[i][i] * t * t
            if rest < 0:
                continue
            v[i] = c[i] + z
            if i == 0:
                if rest == 0:
                    out.append(tuple(v))
            else:
                descend(i - 1, rest)
        v[i] = Fraction(0)

    if r == 0:
        return [()] if n == 0 else []
    descend(r - 1, n)
    out.sort()
    return out


def symmetric_signature(G: Sequence[Sequence]) -> tuple:
    """(n_plus, n_minus, n_zero) of a symmetric rational matrix, exactly."""
    M = [[Fraction(v) for v in row] for row in G]
    pos = neg = 0
    n = len(M)
    active = list(range(n))
    while active:
        i = next((k for k in active if M[k][k] != 0), None)
        if i is not None:
            p = M[i][i]
            if p > 0:
                pos += 1
            else:
                neg += 1
            active.remove(i)
            for k in active:
                f = M[k][i] / p
                if f:
                    for l in active:
                        M[k][l] -= f * M[i][l]
            continue
        pair = next(((k, l) for k in active for l in active if k < l and M[k][l] != 0), None)
        if pair is None:
            break
        # zero diagonal: replace e_k by e_k + e_l to create a nonzero pivot
        k, l = pair
        for t in range(n):
            M[k][t] += M[l][t]
        for t in range(n):
            M[t][k] += M[t][l]
    return pos, neg, len(active)
