"""Exact integer and rational linear algebra.

Everything here works on plain Python ``int`` / ``fractions.Fraction``
matrices given as sequences of rows.  Nothing is floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Sequence

Matrix = Sequence[Sequence[int]]


def _as_fraction_rows(A) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in A]


def determinant(A) -> Fraction:
    """Exact determinant by fraction-valued Gaussian elimination."""
    M = _as_fraction_rows(A)
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for i in range(n):
        piv = next((k for k in range(i, n) if M[k][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            det = -det
        det *= M[i][i]
        inv = 1 / M[i][i]
        for k in range(i + 1, n):
            c = M[k][i] * inv
            if c:
                rk, ri = M[k], M[i]
                for j in range(i, n):
                    rk[j] -= c * ri[j]
    return det


def inertia(A) -> tuple[int, int, int]:
    """Return ``(n_plus, n_minus, n_zero)`` of a symmetric rational matrix.

    Uses congruence diagonalisation with exact pivoting; when every
    remaining diagonal entry vanishes, a row/column ``k`` is replaced by
    ``k + l`` for some nonzero off-diagonal entry ``(k, l)``.
    """
    M = _as_fraction_rows(A)
    n = len(M)
    for i in range(n):
        for j in range(n):
            if M[i][j] != M[j][i]:
                raise ValueError("inertia of a non-symmetric matrix")
    pos = neg = 0
    i = 0
    while i < n:
        piv = next((k for k in range(i, n) if M[k][k] != 0), None)
        if piv is None:
            pair = next(((k, l) for k in range(i, n) for l in range(k + 1, n) if M[k][l] != 0), None)
            if pair is None:
                break
            k, l = pair
            for j in range(n):
                M[k][j] += M[l][j]
            for j in range(n):
                M[j][k] += M[j][l]
            piv = k
        if piv != i:
            M[i], M[piv] = M[piv], M[i]
            for row in M:
                row[i], row[piv] = row[piv], row[i]
        d = M[i][i]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for k in range(i + 1, n):
            c = M[k][i] / d
            if c:
                for j in range(i, n):
                    M[k][j] -= c * M[i][j]
        for k in range(i + 1, n):
            M[i][k] = Fraction(0)
            M[k][i] = Fraction(0)
        i += 1
    return pos, neg, n - pos - neg


def smith_invariants(A: Matrix) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix.

    Returns ``min(rows, cols)`` nonnegative integers ``d1 | d2 | ...``;
    trailing zeros mark rank deficiency.
    """
    M = [[int(x) for x in row] for row in A]
    if not M:
        return []
    rows, cols = len(M), len(M[0])
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    for row, orig in zip(M, A):
        for x, y in zip(row, orig):
            if x != y:
                raise ValueError("smith_invariants needs integer entries")
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        # pivot on the smallest nonzero entry of the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if M[i][j] and (best is None or abs(M[i][j]) < abs(M[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        M[t], M[i] = M[i], M[t]
        for row in M:
            row[t], row[j] = row[j], row[t]
        done = False
        while not done:
            done = True
            p = M[t][t]
            for i in range(t + 1, rows):
                q = M[i][t] // p
                if q:
                    ri, rt = M[i], M[t]
                    for j in range(t, cols):
                        ri[j] -= q * rt[j]
                if M[i][t]:
                    M[t], M[i] = M[i], M[t]
                    done = False
                    break
            if not done:
                continue
            for j in range(t + 1, cols):
                q = M[t][j] // p
                if q:
                    for row in M[t:]:
                        row[j] -= q * row[t]
                if M[t][j]:
                    for row in M:
                        row[t], row[j] = row[j], row[t]
                    done = False
                    break
            if not done:
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if M[i][j] % p), None)
            if bad is not None:
                i, _ = bad
                rt, ri = M[t], M[i]
                for j in range(t, cols):
                    rt[j] += ri[j]
                done = False
        diag.append(abs(M[t][t]))
        t += 1
    diag.extend([0] * (min(rows, cols) - len(diag)))
    return diag


def hermite_rows(A: Matrix) -> list[list[int]]:
    """Row-style Hermite normal form; zero rows are dropped.

    The returned rows form a basis of the Z-span of the rows of ``A``.
    """
    M = [[int(x) for x in row] for row in A if any(row)]
    if not M:
        return []
    cols = len(M[0])
    out: list[list[int]] = []
    r = 0
    for c in range(cols):
        rows = [i for i in range(r, len(M)) if M[i][c]]
        if not rows:
            continue
        while True:
            rows = [i for i in range(r, len(M)) if M[i][c]]
            piv = min(rows, key=lambda i: abs(M[i][c]))
            M[r], M[piv] = M[piv], M[r]
            others = [i for i in range(r + 1, len(M)) if M[i][c]]
            if not others:
                break
            for i in others:
                q = M[i][c] // M[r][c]
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        if M[r][c] < 0:
            M[r] = [-a for a in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [a - q * b for a, b in zip(M[i], M[r])]
        r += 1
        if r == len(M):
            break
    out = [row for row in M[:r]]
    return out


def integer_kernel(A: Matrix) -> list[list[int]]:
    """Basis of ``{x in Z^n : A x = 0}`` as a list of integer vectors.

    Row-reduces ``[A^T | I]``; rows whose ``A^T`` part vanishes carry the
    kernel in their identity part, and the transform is unimodular so the
    basis is a genuine Z-basis of the kernel lattice.
    """
    k = len(A)
    if k == 0:
        raise ValueError("empty constraint matrix")
    n = len(A[0])
    aug = [[int(A[i][j]) for i in range(k)] + [1 if t == j else 0 for t in range(n)] for j in range(n)]
    r = 0
    for c in range(k):
        while True:
            rows = [i for i in range(r, n) if aug[i][c]]
            if not rows:
                break
            piv = min(rows, key=lambda i: abs(aug[i][c]))
            aug[r], aug[piv] = aug[piv], aug[r]
            others = [i for i in range(r + 1, n) if aug[i][c]]
            if not others:
                r += 1
                break
            for i in others:
                q = aug[i][c] // aug[r][c]
                aug[i] = [a - q * b for a, b in zip(aug[i], aug[r])]
        if r == n:
            break
    return [row[k:] for row in aug[r:]]


def solve_rational(A, b) -> list[Fraction] | None:
    """Solve ``A x = b`` exactly for square nonsingular ``A``; ``None`` if singular."""
    n = len(A)
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(n)]
    for i in range(n):
        piv = next((k for k in range(i, n) if M[k][i] != 0), None)
        if piv is None:
            return None
        M[i], M[piv] = M[piv], M[i]
        inv = 1 / M[i][i]
        M[i] = [x * inv for x in M[i]]
        for k in range(n):
            if k != i and M[k][i]:
                c = M[k][i]
                M[k] = [x - c * y for x, y in zip(M[k], M[i])]
    return [M[i][n] for i in range(n)]


def rational_rank(A) -> int:
    M = _as_fraction_rows(A)
    if not M:
        return 0
    rank = 0
    cols = len(M[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / M[rank][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def gram_of(basis: Matrix, G) -> list[list[Fraction]]:
    """Gram matrix ``B G B^T`` of row vectors ``basis`` under form ``G``."""
    n = len(G)
    BG = [[sum(Fraction(row[k]) * G[k][j] for k in range(n) if row[k]) for j in range(n)] for row in basis]
    return [[sum(bg[k] * row[k] for k in range(n) if row[k]) for row in basis] for bg in BG]


def ldl(Q) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Decompose a positive definite ``Q`` as ``sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2``.

    Raises ``ValueError`` if ``Q`` is not positive definite.
    """
    n = len(Q)
    A = _as_fraction_rows(Q)
    d = [Fraction(0)] * n
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if A[i][i] <= 0:
            raise ValueError("form is not positive definite")
        d[i] = A[i][i]
        for j in range(i + 1, n):
            mu[i][j] = A[i][j] / d[i]
        for k in range(i + 1, n):
            for j in range(k, n):
                A[k][j] -= mu[i][k] * d[i] * mu[i][j]
                A[j][k] = A[k][j]
    return d, mu


def lll_gram(Q, delta: Fraction = Fraction(3, 4)) -> tuple[list[list[Fraction]], list[list[int]]]:
    """LLL-reduce a positive definite Gram matrix exactly.

    Returns ``(Q', T)`` with ``Q' = T Q T^T`` and ``T`` unimodular.
    """
    n = len(Q)
    G = _as_fraction_rows(Q)
    T = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = G[i][j] - sum(mu[j][k] * mu[i][k] * B[k] for k in range(j))
                mu[i][j] = s / B[j]
            B[i] = G[i][i] - sum(mu[i][k] ** 2 * B[k] for k in range(i))
        return mu, B

    k = 1
    mu, B = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                _reduce(G, T, k, j, q)
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            T[k], T[k - 1] = T[k - 1], T[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return G, T


def _reduce(G, T, i, j, q):
    """Replace basis vector ``i`` by ``b_i - q b_j`` in Gram ``G`` and transform ``T``."""
    n = len(G)
    gii = G[i][i] - 2 * q * G[i][j] + q * q * G[j][j]
    row = [G[i][k] - q * G[j][k] for k in range(n)]
    row[i] = gii
    for k in range(n):
        G[i][k] = row[k]
        G[k][i] = row[k]
    T[i] = [a - q * b for a, b in zip(T[i], T[j])]


def _isqrt_floor_fraction(x: Fraction) -> int:
    """Largest integer ``y >= 0`` with ``y*y <= x`` (``x >= 0``)."""
    return isqrt(x.numerator // x.denominator)


def short_vectors(Q, bound) -> Iterator[tuple[int, ...]]:
    """Yield every nonzero integer ``x`` with ``x^T Q x <= bound``.

    ``Q`` must be positive definite.  Fincke-Pohst enumeration, exact in
    rational arithmetic: each coordinate range is obtained from integer
    square roots rather than floating-point estimates.
    """
    n = len(Q)
    d, mu = ldl(Q)
    bound = Fraction(bound)
    x = [0] * n

    def centre(i):
        return -sum((mu[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))

    def rec(i, remaining):
        c = centre(i)
        # need d_i (x_i - c)^2 <= remaining
        t = remaining / d[i]
        if t < 0:
            return
        # y = den*x_i - num, with c = num/den; need y^2 <= t den^2
        num, den = c.numerator, c.denominator
        lim = t * den * den
        Y = _isqrt_floor_fraction(lim)
        lo = -(-(num - Y) // den)
        hi = (num + Y) // den
        for xi in range(lo, hi + 1):
            diff = xi - c
            used = d[i] * diff * diff
            if used > remaining:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    yield tuple(x)
            else:
                yield from rec(i - 1, remaining - used)
        x[i] = 0

    yield from rec(n - 1, bound)


def quadratic_value(Q, x) -> Fraction:
    n = len(Q)
    return sum((Fraction(Q[i][j]) * x[i] * x[j] for i in range(n) for j in range(n) if x[i] and x[j]), Fraction(0))


def vector_gcd(v) -> int:
    g = 0
    for a in v:
        g = gcd(g, int(a))
    return g
