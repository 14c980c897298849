from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest
import sympy

from hkembed import linalg
from hkembed.lattice import (
    A1_VEC,
    A2_VEC,
    E8_FRAME,
    SEARCH_FRAME,
    AmbientVector,
    IntLattice,
    SublatticeSpan,
    direct_sum,
    discriminant_group,
    frame_vector,
    in_overlattice,
    inner_product,
    is_primitive_sublattice,
    make_named_lattice,
    md_gram,
    overlattice_lattice,
    twist,
)


def test_named_examples():
    assert make_named_lattice("Md(8m, m=1)").gram == ((-2, 0, 0), (0, -2, 0), (0, 0, 2))
    assert make_named_lattice("U").gram == ((0, 1), (1, 0))
    assert make_named_lattice("Md", cls="8m+2", m=3).gram == ((-2, 0, 0), (0, -2, 1), (0, 1, 6))


def test_md_8m4_determinant_sign():
    # this 3x3 Gram has determinant +(8m+4); only its absolute value is d
    for m in (1, 2, 7, 100):
        assert linalg.determinant(md_gram("8m+4", m)) == 8 * m + 4
    assert sympy.Matrix(md_gram("8m+4", 1)).det() == 12


@pytest.mark.parametrize("cls,off", [("8m", 0), ("8m+2", 2), ("8m+4", 4)])
def test_md_abs_det_is_d(cls, off):
    for m in range(1, 1001):
        assert abs(linalg.determinant(md_gram(cls, m))) == 8 * m + off


@pytest.mark.parametrize(
    "name,sig",
    [("U", (1, 1)), ("E8neg", (0, 8)), ("Lambda", (2, 20)), ("L226", (2, 26)), ("D6neg", (0, 6))],
)
def test_signatures(name, sig):
    assert make_named_lattice(name).signature == sig


def test_kdperp_signature_and_discriminant():
    for cls, off in (("8m", 0), ("8m+2", 2), ("8m+4", 4)):
        for m in (1, 5, 13):
            K = make_named_lattice("KdPerp", cls=cls, m=m)
            assert K.signature == (2, 19)
            assert discriminant_group(K).order == 8 * m + off
    assert discriminant_group(make_named_lattice("KdPerp(8m, m=5)")).order == 40


def test_discriminant_groups():
    assert discriminant_group(make_named_lattice("L226")).order == 1
    d6 = discriminant_group(make_named_lattice("D6neg"))
    assert d6.order == 4
    assert linalg.smith_invariants(make_named_lattice("E8neg").int_gram()) == [1] * 8


def test_e8_matches_sympy_determinant():
    E8 = make_named_lattice("E8")
    assert sympy.Matrix(E8.gram).det() == 1
    assert E8.is_even and E8.signature == (8, 0)
    assert all(E8.gram[i][i] in (2, 4) for i in range(8))
    assert all(make_named_lattice("E8neg").gram[i][i] in (-2, -4) for i in range(8))


def test_direct_sums_and_twists():
    U = make_named_lattice("U")
    assert direct_sum(U, U).rank == 4 and direct_sum(U, U).det == 1
    A1neg = twist(make_named_lattice("A1"), -1)
    assert A1neg.gram == ((-2,),)
    assert direct_sum(direct_sum(A1neg, A1neg), make_named_lattice("D6neg")).det == 16
    assert twist(U, 1).gram == U.gram
    with pytest.raises(ValueError):
        twist(U, 0)


def test_det_multiplicative_random():
    rng = random.Random(7)
    for _ in range(30):
        grams = []
        for n in (rng.randint(1, 3), rng.randint(1, 3)):
            while True:
                B = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
                G = tuple(tuple(sum(B[k][i] * B[k][j] for k in range(n)) + (i == j) for j in range(n)) for i in range(n))
                if linalg.determinant(G) != 0:
                    grams.append(IntLattice(G))
                    break
        assert direct_sum(*grams).det == grams[0].det * grams[1].det


def test_invalid_lattices():
    with pytest.raises(ValueError):
        IntLattice(((1, 2), (3, 1)))
    with pytest.raises(ValueError):
        IntLattice(((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        make_named_lattice("nonsense")
    with pytest.raises(ValueError):
        make_named_lattice("Md(8m, m=0)")


def test_inner_product_examples():
    v = AmbientVector.from_coords((0, 0, 0, 0, 0, 1, -1, 0), E8_FRAME)  # e4 - e5
    assert inner_product(v, v) == -2
    e, f = frame_vector(e=1), frame_vector(f=1)
    assert inner_product(e, f) == 1
    b1 = frame_vector(h=(Fraction(1, 2), Fraction(1, 2)), d=(1, 0, 0, 0, 0, 0))
    assert inner_product(b1, b1) == -2
    with pytest.raises(ValueError):
        inner_product(v, e)


def test_overlattices_are_even_unimodular():
    for p in (1, 2):
        L = overlattice_lattice(p)
        assert abs(L.det) == 1 and L.is_even and L.signature == (1, 9)
    assert in_overlattice(A1_VEC, 1) and in_overlattice(A2_VEC, 2)
    assert not in_overlattice(frame_vector(d=(Fraction(1, 2),) + (0,) * 5), 1)


def _saturation_index(rows):
    """Index of span(rows) in its saturation: gcd of the maximal minors."""
    M = sympy.Matrix(rows)
    k, n = M.shape
    g = 0
    for cols in itertools.combinations(range(n), k):
        g = sympy.igcd(g, int(M[:, list(cols)].det()))
    return abs(g)


def test_primitive_matches_saturation():
    rng = random.Random(3)
    amb = IntLattice(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
    for _ in range(60):
        k = rng.randint(1, 3)
        rows = [[rng.randint(-3, 3) for _ in range(4)] for _ in range(k)]
        if linalg.rational_rank(rows) != k:
            with pytest.raises(ValueError):
                is_primitive_sublattice(SublatticeSpan(tuple(map(tuple, rows)), amb))
            continue
        assert is_primitive_sublattice(SublatticeSpan(tuple(map(tuple, rows)), amb)) == (_saturation_index(rows) == 1)


def test_primitive_examples():
    amb = make_named_lattice("search-ambient")
    ef = SublatticeSpan(((1,) + (0,) * 9, (0, 1) + (0,) * 8), amb)
    assert is_primitive_sublattice(ef)
    U = make_named_lattice("U")
    assert not is_primitive_sublattice(SublatticeSpan(((2, 0),), U))


def test_search_frame_rank():
    assert SEARCH_FRAME.rank == 10 and E8_FRAME.rank == 8
