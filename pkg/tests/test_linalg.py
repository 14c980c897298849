from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hkembed import linalg

small_int = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small_int, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: matrices(n, n)))
def test_determinant_matches_sympy(A):
    assert linalg.determinant(A) == sympy.Matrix(A).det()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_smith_invariants_match_sympy(A):
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(sympy.Matrix(A), domain=sympy.ZZ)
    expected = [abs(int(S[i, i])) for i in range(min(S.shape))]
    got = linalg.smith_invariants(A)
    assert sorted(x for x in got if x) == sorted(x for x in expected if x)
    nz = [x for x in got if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_smith_examples():
    assert linalg.smith_invariants([[2, 0], [0, 2]]) == [2, 2]
    assert linalg.smith_invariants([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [1, 1, 1]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(2, 5).flatmap(lambda c: matrices(r, c))))
def test_integer_kernel_is_saturated_basis(A):
    K = linalg.integer_kernel(A)
    n = len(A[0])
    assert len(K) == n - sympy.Matrix(A).rank()
    for k in K:
        assert all(sum(a * x for a, x in zip(row, k)) == 0 for row in A)
    if K:
        # a basis of the full integer kernel spans a saturated sublattice
        assert all(d == 1 for d in linalg.smith_invariants(K))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: matrices(n, n)))
def test_inertia_matches_eigen_signs(A):
    S = [[A[i][j] + A[j][i] for j in range(len(A))] for i in range(len(A))]
    pos, neg, zero = linalg.inertia(S)
    eig = sympy.Matrix(S).eigenvals()
    p = sum(mult for ev, mult in eig.items() if sympy.re(sympy.N(ev, 50)) > 1e-30)
    q = sum(mult for ev, mult in eig.items() if sympy.re(sympy.N(ev, 50)) < -1e-30)
    assert (pos, neg) == (p, q)
    assert pos + neg + zero == len(S)


def _random_pd(seed, n):
    import random

    rng = random.Random(seed)
    while True:
        B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if linalg.determinant(B) != 0:
            return [[sum(B[k][i] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


@pytest.mark.parametrize("seed", range(12))
def test_lll_is_unimodular_change_of_basis(seed):
    Q = _random_pd(seed, 4)
    G, T = linalg.lll_gram(Q)
    assert abs(linalg.determinant(T)) == 1
    TQ = [[sum(T[i][k] * Q[k][l] * T[j][l] for k in range(4) for l in range(4)) for j in range(4)] for i in range(4)]
    assert TQ == [[Fraction(x) for x in row] for row in G]


@pytest.mark.parametrize("seed", range(12))
def test_short_vectors_against_box_enumeration(seed):
    Q = _random_pd(seed + 100, 3)
    bound = 12
    got = set(linalg.short_vectors(Q, bound))
    # |x|^2 <= bound / lambda_min <= bound * trace(Q^-1)
    r = int(sympy.sqrt(bound * sympy.Matrix(Q).inv().trace())) + 1
    want = set()
    for x in itertools.product(range(-r, r + 1), repeat=3):
        if any(x) and linalg.quadratic_value(Q, x) <= bound:
            want.add(x)
    assert got == want


def test_ldl_rejects_indefinite():
    with pytest.raises(ValueError):
        linalg.ldl([[1, 0], [0, -1]])
