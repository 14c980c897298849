"""(-2)-roots of L_{2,26} orthogonal to an embedded K_d^perp.

With the first summands fixed, these roots live in ``U + E8(-1)`` and are
exactly the norm -2 vectors orthogonal to ``a1``, ``a2`` and
``ell = alpha e + beta f + v``.  Three counters are provided:

* :func:`count_roots_oracle` enumerates the negative definite complement
  directly (kernel basis, LLL, Fincke-Pohst) and is always valid;
* :func:`count_roots_by_type` counts the Type I/II/III roots, valid when
  ``m < alpha*beta < 2m``;
* :func:`count_roots_fast` counts Type I roots only, valid under the
  stronger window ``alpha, beta > sqrt(m)``, ``alpha*beta < 5m/4``,
  ``alpha != beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import linalg
from .lattice import (
    A1_VEC,
    A2_VEC,
    SEARCH_FRAME,
    AmbientVector,
    frame_ip_half,
    frame_vector,
    in_overlattice,
    inner_product,
    lift_e8,
    overlattice_basis,
)


class HypothesesNotMet(ValueError):
    """The classification lemma does not apply; use the oracle instead."""


@dataclass(frozen=True)
class Root:
    vector: AmbientVector
    type_tag: str | None = None


@dataclass(frozen=True)
class RootSet:
    roots: tuple[AmbientVector, ...]

    @property
    def N(self) -> int:
        return len(self.roots) // 2

    def keys(self) -> frozenset[tuple[int, ...]]:
        return frozenset(r.half_coords for r in self.roots)


@dataclass(frozen=True)
class EmbeddingCore:
    """The data ``(class, alpha, beta, v)`` that determines an embedding.

    ``v`` is an E8-frame vector (coordinates h1, h2, e1..e6).
    """

    cls: str
    alpha: int
    beta: int
    v: AmbientVector

    @property
    def ell(self) -> AmbientVector:
        return lift_e8(self.v, self.alpha, self.beta)

    @property
    def ell_norm(self) -> Fraction:
        return inner_product(self.ell, self.ell)

    @property
    def m(self) -> int:
        half = self.ell_norm / 2
        if half.denominator != 1:
            raise ValueError("ell^2 is not an even integer")
        return int(half)


def _sort_key(v: AmbientVector):
    return tuple(-x for x in v.half_coords)


def _canonical(vectors) -> tuple[AmbientVector, ...]:
    return tuple(sorted(set(vectors), key=_sort_key))


@lru_cache(maxsize=None)
def _d6_root_half() -> tuple[tuple[int, ...], ...]:
    out = []
    for i, j in combinations(range(6), 2):
        for si in (1, -1):
            for sj in (1, -1):
                x = [0] * 6
                x[i], x[j] = 2 * si, 2 * sj
                out.append(tuple(x))
    return tuple(out)


def d6_root_list() -> list[AmbientVector]:
    """The 60 roots ``+-e_i +- e_j`` of D6(-1) as search-frame vectors."""
    return [AmbientVector((0, 0, 0, 0) + x, SEARCH_FRAME) for x in _d6_root_half()]


def _ell_parts(core: EmbeddingCore) -> tuple[int, int, tuple[int, ...]]:
    return core.alpha, core.beta, core.v.half_coords[2:]


def classify_root(r: AmbientVector, ell: AmbientVector, alpha: int, beta: int) -> dict:
    """Type of ``r = alpha' e + beta' f + v'`` relative to ``ell``.

    Returns a report with ``type`` (``"I"``, ``"II"``, ``"III"`` or
    ``None``), ``orthogonal`` and ``consistent``; a vector that cannot
    belong to R_ell (for instance ``alpha' != 0`` with ``(v, v')`` not
    divisible by ``beta``) is reported with ``consistent=False``.
    """
    if alpha == beta:
        raise HypothesesNotMet("alpha == beta")
    norm = inner_product(ell, ell)
    m = norm / 2
    if not (m < alpha * beta < 2 * m):
        raise HypothesesNotMet("alpha*beta outside (m, 2m)")
    if (2 * alpha, 2 * beta) != ell.half_coords[:2]:
        raise ValueError("alpha, beta do not match ell")
    ap, bp = Fraction(r.half_coords[0], 2), Fraction(r.half_coords[1], 2)
    v = AmbientVector((0, 0, 0, 0) + ell.half_coords[4:], SEARCH_FRAME)
    vp = AmbientVector((0, 0) + r.half_coords[2:], SEARCH_FRAME)
    s = inner_product(v, vp)
    orthogonal = inner_product(r, ell) == 0
    is_root = inner_product(r, r) == -2
    if ap == 0 and bp == 0:
        tag, divisible = "I", s == 0
    elif bp == 0:
        tag, divisible = "II", s.denominator == 1 and int(s) % beta == 0
    elif ap == 0:
        tag, divisible = "III", s.denominator == 1 and int(s) % alpha == 0
    else:
        tag, divisible = None, False
    return {
        "type": tag,
        "orthogonal": orthogonal,
        "is_root": is_root,
        "divisible": divisible,
        "consistent": tag is not None and divisible and orthogonal and is_root,
    }


def _pair_values(w_half: tuple[int, ...]):
    """Yield ``(x, s)`` for the 60 D6 roots ``x`` with ``s = x . w`` (dot product)."""
    for x in _d6_root_half():
        s4 = sum(a * b for a, b in zip(x, w_half))
        yield x, s4 // 4 if s4 % 4 == 0 else Fraction(s4, 4)


def count_by_type_half(alpha: int, beta: int, w_half: tuple[int, ...]) -> int:
    """Integer-only Type count used in the scan inner loop.

    ``w_half`` holds the doubled e1..e6 coordinates of ``v``; requires
    ``m < alpha*beta < 2m``.  Each pair ``i < j`` contributes the two
    values ``w_i + w_j`` and ``w_i - w_j`` (the roots of each sign pair
    give the same divisibility pattern).
    """
    n = 1 if alpha == beta else 0
    for i in range(6):
        wi = w_half[i]
        for j in range(i + 1, 6):
            wj = w_half[j]
            for s2 in (wi + wj, wi - wj):
                if s2 == 0:
                    n += 1
                elif s2 % 2 == 0:
                    s = s2 // 2
                    if s % beta == 0:
                        n += 1
                    if s % alpha == 0:
                        n += 1
    return n


def count_roots_by_type(core: EmbeddingCore) -> RootSet:
    """All of R_ell from the Type I/II/III classification.

    Valid for ``m < alpha*beta < 2m``: then ``alpha' beta' = 0`` for every
    root except ``+-(e - f)``, which is orthogonal to ``ell`` exactly when
    ``alpha == beta``.
    """
    alpha, beta, w = _ell_parts(core)
    m = core.m
    if not (m < alpha * beta < 2 * m):
        raise HypothesesNotMet("alpha*beta outside (m, 2m)")
    roots = []
    if alpha == beta:
        ef = frame_vector(e=1, f=-1)
        roots += [ef, -ef]
    for x, s in _pair_values(w):
        base = (0, 0, 0, 0) + x
        if s == 0:
            roots.append(AmbientVector(base, SEARCH_FRAME))
            continue
        if isinstance(s, Fraction):
            continue
        # (r, ell) = alpha' beta + beta' alpha - x.w = 0
        if s % beta == 0:
            roots.append(AmbientVector((2 * (s // beta), 0) + base[2:], SEARCH_FRAME))
        if s % alpha == 0:
            roots.append(AmbientVector((0, 2 * (s // alpha)) + base[2:], SEARCH_FRAME))
    return RootSet(_canonical(roots))


def fast_path_applies(alpha: int, beta: int, m: int) -> bool:
    return alpha != beta and alpha * alpha > m and beta * beta > m and 4 * alpha * beta < 5 * m


def count_roots_fast(core: EmbeddingCore) -> int:
    """N from Type I roots alone; raises :class:`HypothesesNotMet` outside
    the window where every root is of Type I."""
    alpha, beta, w = _ell_parts(core)
    m = core.m
    if not fast_path_applies(alpha, beta, m):
        raise HypothesesNotMet("fast path needs alpha != beta, alpha^2, beta^2 > m, 4 alpha beta < 5m")
    return sum(1 for _, s in _pair_values(w) if s == 0) // 2


def _overlattice_for(ell: AmbientVector) -> int:
    for p in (1, 2):
        if in_overlattice(ell, p):
            return p
    raise ValueError("ell is not in U + E8(-1) for either overlattice")


def count_roots_oracle(core: EmbeddingCore) -> RootSet:
    """Ground-truth R_ell by definite-lattice enumeration.

    Computes an integral basis of ``{x in U + E8(-1) : (x, a1) = (x, a2) =
    (x, ell) = 0}``, checks that its Gram matrix is negative definite,
    LLL-reduces the negated Gram matrix and enumerates every vector of
    norm 2 with Fincke-Pohst.
    """
    ell = core.ell
    if ell.ambient != SEARCH_FRAME:
        raise ValueError("ell must be a search-frame vector")
    if inner_product(ell, ell) <= 0:
        raise ValueError("ell^2 must be positive")
    for a in (A1_VEC, A2_VEC):
        if inner_product(ell, a).denominator != 1:
            raise ValueError("ell is not admissible: non-integral pairing with a1/a2")
    p = _overlattice_for(ell)
    return RootSet(_canonical(_oracle_roots(ell.half_coords, p)))


def _oracle_roots(ell_half: tuple[int, ...], p: int) -> tuple[AmbientVector, ...]:
    return orthogonal_roots((A1_VEC.half_coords, A2_VEC.half_coords, ell_half), p)


@lru_cache(maxsize=8192)
def orthogonal_roots(constraints: tuple[tuple[int, ...], ...], p: int) -> tuple[AmbientVector, ...]:
    """Norm -2 vectors of ``U + L_p`` orthogonal to every constraint vector.

    Constraint vectors are search-frame half-coordinate tuples lying in
    ``U + L_p``; their orthogonal complement must be negative definite.
    """
    B = overlattice_basis(p)
    rows = []
    for c in constraints:
        pair4 = [frame_ip_half(b, c) for b in B]
        if any(x % 4 for x in pair4):
            raise ValueError("constraint vector is not in U + E8(-1)")
        rows.append([x // 4 for x in pair4])
    kernel = linalg.integer_kernel(rows)
    K = [[sum(k[i] * B[i][t] for i in range(len(B))) for t in range(10)] for k in kernel]
    gram = [[Fraction(frame_ip_half(a, b), 4) for b in K] for a in K]
    if linalg.inertia(gram) != (0, len(K), 0):
        raise ArithmeticError("orthogonal complement is not negative definite")
    Q = [[-x for x in row] for row in gram]
    Qr, T = linalg.lll_gram(Q)
    basis = [[sum(T[i][j] * K[j][t] for j in range(len(K))) for t in range(10)] for i in range(len(K))]
    out = []
    for x in linalg.short_vectors(Qr, 2):
        if linalg.quadratic_value(Qr, x) != 2:
            continue
        vec = tuple(sum(x[i] * basis[i][t] for i in range(len(x))) for t in range(10))
        out.append(AmbientVector(vec, SEARCH_FRAME))
    return _canonical(out)


def a_complement_roots(p: int = 1) -> tuple[AmbientVector, ...]:
    """Roots of ``<a1, a2>^perp`` inside ``L_p``: the D6(-1) root system.

    The hyperbolic plane is removed by also requiring orthogonality to
    ``e`` and ``f``.
    """
    e, f = frame_vector(e=1).half_coords, frame_vector(f=1).half_coords
    return orthogonal_roots((e, f, A1_VEC.half_coords, A2_VEC.half_coords), p)

