from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from hkembed.lattice import A1_VEC, A2_VEC, E8_FRAME, AmbientVector, frame_vector, inner_product
from hkembed.roots import (
    EmbeddingCore,
    HypothesesNotMet,
    a_complement_roots,
    classify_root,
    count_by_type_half,
    count_roots_by_type,
    count_roots_fast,
    count_roots_oracle,
    d6_root_list,
    fast_path_applies,
    orthogonal_roots,
)
from hkembed.search import admissible_parts, v_from_part


def core(cls, a, b, h, d):
    return EmbeddingCore(cls, a, b, AmbientVector.from_coords((*h, *d), E8_FRAME))


def d6(*x):
    return frame_vector(d=x)


# (alpha, beta) = (46, 47), m = 2055: alpha, beta > sqrt(m), 4 alpha beta < 5m
KEY_1 = core("8m", 46, 47, (0, 0), (12, 8, 2, 1, 1, 0))


def _key_core(x, tail=(1, 1, 0)):
    """``ell = alpha e + beta f + (x1, x2, x3) + tail`` with the smallest
    window pair (alpha < beta) fitting the norm ``x^2 + tail^2 = 2(alpha beta - m)``."""
    n = sum(t * t for t in x) + sum(t * t for t in tail)
    for m in range(2000, 4000):
        for a in range(1, 100):
            b = a + 1
            if a * a > m and 4 * a * b < 5 * m and 2 * (a * b - m) == n:
                return core("8m", a, b, (0, 0), tuple(x) + tuple(tail))
    return None


def test_d6_root_list():
    roots = d6_root_list()
    assert len(roots) == 60
    brute = {x for x in itertools.product((-1, 0, 1), repeat=6) if sum(t * t for t in x) == 2}
    assert {tuple(c // 2 for c in r.half_coords[4:]) for r in roots} == brute
    assert d6(1, 1, 0, 0, 0, 0) in roots
    assert all(inner_product(r, r) == -2 for r in roots)
    assert all(sum(1 for c in r.half_coords if c) == 2 for r in roots)


def test_a_complement_is_d6():
    for p in (1, 2):
        assert set(a_complement_roots(p)) == set(d6_root_list())


def test_key_core_norm():
    assert KEY_1.m == 2055


def test_classify_type_one():
    r = d6(0, 0, 0, 1, -1, 0)
    rep = classify_root(r, KEY_1.ell, 46, 47)
    assert rep["type"] == "I" and rep["consistent"]


def test_classify_contradiction_flag():
    # alpha' = 1, beta' = 0 with (v, v') not divisible by beta
    r = frame_vector(e=1, d=(1, 1, 0, 0, 0, 0))
    rep = classify_root(r, KEY_1.ell, 46, 47)
    assert rep["type"] == "II" and not rep["consistent"]


def test_classify_hypotheses():
    ell = core("8m", 11, 11, (0, 0), (2, 3, 5, 1, 1, 0)).ell
    with pytest.raises(HypothesesNotMet):
        classify_root(d6(0, 0, 0, 1, -1, 0), ell, 11, 11)
    with pytest.raises(HypothesesNotMet):
        classify_root(d6(0, 0, 0, 1, -1, 0), frame_vector(e=1, f=100), 1, 100)


def test_oracle_alpha_equals_beta_has_extra_root():
    c = core("8m", 11, 11, (0, 0), (2, 3, 5, 1, 1, 0))
    assert c.m == 101
    rs = count_roots_oracle(c)
    ef = frame_vector(e=1, f=-1)
    # e - f is orthogonal to 11e + 11f and has norm -2
    assert inner_product(ef, c.ell) == 0 and inner_product(ef, ef) == -2
    assert set(rs.roots) == {d6(0, 0, 0, 1, -1, 0), -d6(0, 0, 0, 1, -1, 0), ef, -ef}
    assert rs.N == 2


def test_oracle_v_zero():
    # m = 1 gives alpha = beta and the extra root e - f
    assert count_roots_oracle(core("8m", 1, 1, (0, 0), (0,) * 6)).N == 31
    for m in (2, 4, 9):
        rs = count_roots_oracle(core("8m", 1, m, (0, 0), (0,) * 6))
        assert rs.N == 30 and set(rs.roots) == set(d6_root_list())


def test_keylemma_families():
    assert count_roots_oracle(KEY_1).N == 1
    assert count_roots_fast(KEY_1) == 1
    c2 = _key_core((8, 5, 1))
    assert c2 is not None
    assert count_roots_oracle(c2).N == 3 and count_roots_fast(c2) == 3


def test_keylemma_8m2_family():
    # v = -a1/2 + (x1, x2, x3, 3, 3, 3)/2 with x odd, distinct, not 3
    for m in range(3000, 3400):
        a = next(a for a in range(50, 70) if a * a > m)
        b = a + 1
        T = 8 * (a * b - m) - 29
        if not (4 * a * b < 5 * m and T > 0):
            continue
        for x in itertools.combinations(range(1, 200, 2), 3):
            if 3 not in x and sum(t * t for t in x) == T:
                c = core("8m+2", a, b, (Fraction(-1, 2), 0), tuple(Fraction(t, 2) for t in x) + (Fraction(3, 2),) * 3)
                rs = count_roots_oracle(c)
                assert rs.N == 3 and count_roots_fast(c) == 3
                assert set(rs.roots) >= {d6(0, 0, 0, 1, -1, 0), d6(0, 0, 0, 1, 0, -1), d6(0, 0, 0, 0, 1, -1)}
                return
    pytest.fail("no instance found")


def test_fast_path_gate():
    c = core("8m", 11, 11, (0, 0), (2, 3, 5, 1, 1, 0))
    with pytest.raises(HypothesesNotMet):
        count_roots_fast(c)


def _brute_roots(c, box=4):
    """Roots a e + b f + x (x in D6, |a|, |b| <= box) orthogonal to ell, a1, a2."""
    ell = c.ell
    w2 = ell.half_coords[4:]
    by_norm = {}
    r = 6
    for x in itertools.product(range(-r, r + 1), repeat=6):
        if sum(x) % 2 == 0:
            by_norm.setdefault(sum(t * t for t in x), []).append(x)
    out = set()
    for a in range(-box, box + 1):
        for b in range(-box, box + 1):
            for x in by_norm.get(2 + 2 * a * b, []):
                if 2 * (a * c.beta + b * c.alpha) == sum(p * q for p, q in zip(x, w2)):
                    out.add((2 * a, 2 * b, 0, 0) + tuple(2 * t for t in x))
    return out


@pytest.mark.parametrize("seed", range(4))
def test_oracle_against_bounded_brute_force(seed):
    rng = random.Random(seed)
    cls = ("8m", "8m+2", "8m+4", "8m")[seed]
    while True:
        m = rng.randint(5, 30)
        a = rng.randint(1, 8)
        b = rng.randint(1, 8)
        parts = admissible_parts(cls, m, a, b)
        if parts:
            break
    c = EmbeddingCore(cls, a, b, v_from_part(cls, rng.choice(parts)))
    rs = count_roots_oracle(c)
    small = {r.half_coords for r in rs.roots if abs(r.half_coords[0]) <= 8 and abs(r.half_coords[1]) <= 8}
    assert small == _brute_roots(c)


def _random_window_core(rng, cls):
    while True:
        m = rng.randint(40, 3000)
        lo = int(m**0.5)
        a, b = rng.randint(lo, lo + 6), rng.randint(lo, lo + 6)
        if not fast_path_applies(a, b, m):
            continue
        parts = admissible_parts(cls, m, a, b)
        if not parts:
            continue
        u = list(rng.choice(parts))
        rng.shuffle(u)
        u = [t if rng.random() < 0.5 else -t for t in u]
        if cls != "8m+2" and (sum(u) // 2) % 2 != (1 if cls == "8m+4" else 0):
            continue
        c = EmbeddingCore(cls, a, b, v_from_part(cls, u))
        try:
            count_roots_oracle(c)
        except ValueError:
            continue
        return c


def test_fast_equals_oracle_random():
    rng = random.Random(2024)
    for i in range(300):
        c = _random_window_core(rng, ("8m", "8m+2", "8m+4")[i % 3])
        assert count_roots_fast(c) == count_roots_oracle(c).N


def test_type_count_equals_oracle_random():
    rng = random.Random(5)
    n = 0
    while n < 200:
        cls = rng.choice(("8m", "8m+2", "8m+4"))
        m = rng.randint(3, 200)
        a, b = rng.randint(1, 20), rng.randint(1, 20)
        if not m < a * b < 2 * m:
            continue
        parts = admissible_parts(cls, m, a, b)
        if not parts:
            continue
        u = rng.choice(parts)
        c = EmbeddingCore(cls, a, b, v_from_part(cls, u))
        o = count_roots_oracle(c)
        assert count_roots_by_type(c).keys() == o.keys()
        assert count_by_type_half(a, b, u) == o.N
        n += 1


def test_rootset_invariants():
    rng = random.Random(9)
    for _ in range(40):
        cls = rng.choice(("8m", "8m+2", "8m+4"))
        m = rng.randint(2, 60)
        a, b = rng.randint(1, 12), rng.randint(1, 12)
        parts = admissible_parts(cls, m, a, b)
        if not parts:
            continue
        c = EmbeddingCore(cls, a, b, v_from_part(cls, rng.choice(parts)))
        rs = count_roots_oracle(c)
        keys = rs.keys()
        for r in rs.roots:
            assert (-r).half_coords in keys
            assert inner_product(r, r) == -2
            assert inner_product(r, c.ell) == 0
            assert inner_product(r, A1_VEC) == 0 and inner_product(r, A2_VEC) == 0
            assert r.is_integral
        assert rs.N * 2 == len(rs.roots)


def test_oracle_errors():
    with pytest.raises(ValueError):
        count_roots_oracle(core("8m", 1, 1, (0, 0), (2, 0, 0, 0, 0, 0)))  # ell^2 = 2 - 4 < 0
    with pytest.raises(ValueError):
        count_roots_oracle(core("8m", 3, 3, (0, 0), (Fraction(1, 2), 0, 0, 0, 0, 0)))


def test_definiteness_guard():
    with pytest.raises(ArithmeticError):
        orthogonal_roots((A1_VEC.half_coords,), 1)
