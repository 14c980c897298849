"""Lattices with exact Gram matrices, vectors over a half-integer frame,
and the named lattices used by the embedding search.

Coordinates of frame vectors are stored as integers over a fixed global
denominator 2 ("half-coordinates").  Inner products are therefore
``(1/4) * a^T G b`` and stay exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg


@dataclass(frozen=True)
class IntLattice:
    """A free module with a nondegenerate symmetric form given by ``gram``."""

    gram: tuple[tuple[Fraction, ...], ...]
    name: str | None = None

    def __post_init__(self):
        g = tuple(tuple(Fraction(x) for x in row) for row in self.gram)
        n = len(g)
        if n == 0 or any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square and nonempty")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)
        if linalg.determinant(g) == 0:
            raise ValueError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> Fraction:
        return linalg.determinant(self.gram)

    @property
    def signature(self) -> tuple[int, int]:
        pos, neg, _ = linalg.inertia(self.gram)
        return pos, neg

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    @property
    def is_even(self) -> bool:
        return self.is_integral and all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def int_gram(self) -> list[list[int]]:
        if not self.is_integral:
            raise ValueError(f"{self.name or 'lattice'} is not integral")
        return [[int(x) for x in row] for row in self.gram]

    def __repr__(self):
        return f"IntLattice(name={self.name!r}, rank={self.rank})"


@dataclass(frozen=True)
class AmbientVector:
    """A vector ``half_coords / 2`` in the coordinates of ``ambient``."""

    half_coords: tuple[int, ...]
    ambient: IntLattice = field(repr=False)

    def __post_init__(self):
        hc = tuple(int(x) for x in self.half_coords)
        if len(hc) != self.ambient.rank:
            raise ValueError(f"expected {self.ambient.rank} coordinates, got {len(hc)}")
        object.__setattr__(self, "half_coords", hc)

    @classmethod
    def from_coords(cls, coords: Sequence, ambient: IntLattice) -> "AmbientVector":
        half = []
        for c in coords:
            c2 = Fraction(c) * 2
            if c2.denominator != 1:
                raise ValueError(f"coordinate {c} is not a half-integer")
            half.append(int(c2))
        return cls(tuple(half), ambient)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, 2) for x in self.half_coords)

    @property
    def is_integral(self) -> bool:
        return all(x % 2 == 0 for x in self.half_coords)

    def __add__(self, other: "AmbientVector") -> "AmbientVector":
        _same_ambient(self, other)
        return AmbientVector(tuple(a + b for a, b in zip(self.half_coords, other.half_coords)), self.ambient)

    def __sub__(self, other: "AmbientVector") -> "AmbientVector":
        _same_ambient(self, other)
        return AmbientVector(tuple(a - b for a, b in zip(self.half_coords, other.half_coords)), self.ambient)

    def __neg__(self) -> "AmbientVector":
        return AmbientVector(tuple(-a for a in self.half_coords), self.ambient)

    def scaled(self, k: int) -> "AmbientVector":
        return AmbientVector(tuple(k * a for a in self.half_coords), self.ambient)

    def norm(self) -> Fraction:
        return inner_product(self, self)


def _same_ambient(v: AmbientVector, w: AmbientVector) -> None:
    if v.ambient != w.ambient:
        raise ValueError("vectors live in different ambient lattices")


def inner_product(v: AmbientVector, w: AmbientVector) -> Fraction:
    _same_ambient(v, w)
    G = v.ambient.gram
    a, b = v.half_coords, w.half_coords
    total = Fraction(0)
    for i, ai in enumerate(a):
        if ai:
            row = G[i]
            total += ai * sum(row[j] * bj for j, bj in enumerate(b) if bj)
    return total / 4


@dataclass(frozen=True)
class SublatticeSpan:
    """Rows are integral coordinates of spanning vectors in ``ambient``'s basis."""

    basis_rows: tuple[tuple[int, ...], ...]
    ambient: IntLattice

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.basis_rows)
        if any(len(r) != self.ambient.rank for r in rows):
            raise ValueError("row length does not match ambient rank")
        object.__setattr__(self, "basis_rows", rows)


def is_primitive_sublattice(S: SublatticeSpan) -> bool:
    """True iff the span is saturated, i.e. ambient/span is torsion-free."""
    if not S.basis_rows:
        return True
    if linalg.rational_rank(S.basis_rows) != len(S.basis_rows):
        raise ValueError("spanning rows are linearly dependent")
    return all(d == 1 for d in linalg.smith_invariants(S.basis_rows))


def direct_sum(L1: IntLattice, L2: IntLattice, name: str | None = None) -> IntLattice:
    n1, n2 = L1.rank, L2.rank
    rows = [list(r) + [0] * n2 for r in L1.gram] + [[0] * n1 + list(r) for r in L2.gram]
    if name is None and L1.name and L2.name:
        name = f"{L1.name}+{L2.name}"
    return IntLattice(tuple(tuple(r) for r in rows), name)


def direct_sum_all(parts: Sequence[IntLattice], name: str | None = None) -> IntLattice:
    out = parts[0]
    for p in parts[1:]:
        out = direct_sum(out, p)
    return IntLattice(out.gram, name or out.name)


def twist(L: IntLattice, n: int, name: str | None = None) -> IntLattice:
    if n == 0:
        raise ValueError("twist by zero")
    if name is None and L.name:
        name = L.name if n == 1 else f"{L.name}({n})"
    return IntLattice(tuple(tuple(n * x for x in row) for row in L.gram), name)


@dataclass(frozen=True)
class DiscriminantGroup:
    invariants: tuple[int, ...]
    order: int


def discriminant_group(L: IntLattice) -> DiscriminantGroup:
    """Invariant factors (those > 1) of ``L^v / L`` and its order ``|det|``."""
    G = L.int_gram()
    inv = linalg.smith_invariants(G)
    order = 1
    for d in inv:
        order *= d
    return DiscriminantGroup(tuple(d for d in inv if d != 1), order)


# --- named lattices --------------------------------------------------------

E8_GRAM = (
    (2, 0, -2, -1, 0, 0, 0, 0),
    (0, 2, 0, -1, -1, 0, 0, 0),
    (-2, 0, 4, 0, 0, 0, 0, 1),
    (-1, -1, 0, 2, 0, 0, 0, 0),
    (0, -1, 0, 0, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 1, 0, 0, 0, 0, 2),
)

# Z-basis of the checkerboard lattice D6 in the coordinates e1..e6.
D6_BASIS = (
    (1, -1, 0, 0, 0, 0),
    (0, 1, -1, 0, 0, 0),
    (0, 0, 1, -1, 0, 0),
    (0, 0, 0, 1, -1, 0),
    (0, 0, 0, 0, 1, -1),
    (0, 0, 0, 0, 1, 1),
)

CLASS_OFFSETS = {"8m": 0, "8m+2": 2, "8m+4": 4}


def hyperbolic_plane() -> IntLattice:
    return IntLattice(((0, 1), (1, 0)), "U")


def md_gram(cls: str, m: int) -> tuple[tuple[int, ...], ...]:
    if cls not in CLASS_OFFSETS:
        raise ValueError(f"unknown congruence class {cls!r}")
    # d = 4 is class 8m+4 with m = 0, the one nonempty discriminant with m < 1
    if m < 1 and not (cls == "8m+4" and m == 0):
        raise ValueError("m must be positive")
    if cls == "8m":
        return ((-2, 0, 0), (0, -2, 0), (0, 0, 2 * m))
    if cls == "8m+2":
        return ((-2, 0, 0), (0, -2, 1), (0, 1, 2 * m))
    return ((-2, 0, 1), (0, -2, 1), (1, 1, 2 * m))


_NAME_RE = re.compile(r"^(Md|KdPerp)\((8m(?:\+[24])?),\s*(?:m\s*=\s*)?(-?\d+)\)$")


def make_named_lattice(name: str, cls: str | None = None, m: int | None = None) -> IntLattice:
    """Build one of the lattices by token.

    Tokens: ``U``, ``A1``, ``E8``, ``E8neg``, ``D6``, ``D6neg``, ``L226``,
    ``M``, ``Lambda``, ``search-ambient``, ``Md`` and ``KdPerp``.  The last
    two take a congruence class and ``m``, either as keyword arguments or
    inline as ``"Md(8m+2, m=3)"``.
    """
    match = _NAME_RE.match(name.replace(" ", ""))
    if match:
        name, cls, m = match.group(1), match.group(2), int(match.group(3))
    U = hyperbolic_plane()
    if name == "U":
        return U
    if name == "A1":
        return IntLattice(((2,),), "A1")
    if name == "E8":
        return IntLattice(E8_GRAM, "E8")
    if name == "E8neg":
        return twist(IntLattice(E8_GRAM, "E8"), -1, "E8(-1)")
    if name in ("D6", "D6neg"):
        d6 = IntLattice(tuple(tuple(sum(a * b for a, b in zip(r, s)) for s in D6_BASIS) for r in D6_BASIS), "D6")
        return d6 if name == "D6" else twist(d6, -1, "D6(-1)")
    e8n = make_named_lattice("E8neg")
    if name == "L226":
        return direct_sum_all([U, U, e8n, e8n, e8n], "L_{2,26}")
    if name == "M":
        return direct_sum_all([U, U, U, e8n, e8n, IntLattice(((-2,),))], "M")
    if name == "Lambda":
        m2 = IntLattice(((-2,),))
        return direct_sum_all([U, U, e8n, e8n, m2, m2], "Lambda")
    if name == "search-ambient":
        return direct_sum(U, e8n, "U+E8(-1)")
    if name in ("Md", "KdPerp"):
        if cls is None or m is None:
            raise ValueError(f"{name} needs a congruence class and m")
        md = IntLattice(md_gram(cls, m), f"M_{8 * m + CLASS_OFFSETS[cls]}")
        if name == "Md":
            return md
        return direct_sum_all([md, U, e8n, e8n], f"K_{8 * m + CLASS_OFFSETS[cls]}^perp")
    raise ValueError(f"unknown lattice token {name!r}")


# --- the search frame ------------------------------------------------------
#
# The third summand U + E8(-1) of L_{2,26} is handled inside the rational
# space  U + <h1, h2> + Q^6(-1)  with coordinates (e, f, h1, h2, e1..e6).
# E8(-1) is one of the two even unimodular overlattices L_1, L_2 of
# A1(-1)^2 + D6(-1), generated additionally by b1 and b_{2,p}.

E_IDX, F_IDX, H1_IDX, H2_IDX = 0, 1, 2, 3
D_SLICE = slice(4, 10)

E8_FRAME = IntLattice(
    tuple(tuple((-2 if i < 2 else -1) if i == j else 0 for j in range(8)) for i in range(8)),
    "A1(-1)^2+Z^6(-1) frame",
)
SEARCH_FRAME = direct_sum(hyperbolic_plane(), E8_FRAME, "U+A1(-1)^2+Z^6(-1) frame")
FRAME_GRAM_DIAG = (0, 0, -2, -2, -1, -1, -1, -1, -1, -1)


def frame_vector(e=0, f=0, h=(0, 0), d=(0, 0, 0, 0, 0, 0)) -> AmbientVector:
    return AmbientVector.from_coords((e, f, *h, *d), SEARCH_FRAME)


def e8_part(v: AmbientVector) -> AmbientVector:
    """The (h1, h2, e1..e6) part of a search-frame vector."""
    return AmbientVector(v.half_coords[2:], E8_FRAME)


def lift_e8(v: AmbientVector, alpha: int = 0, beta: int = 0) -> AmbientVector:
    """``alpha e + beta f + v`` for an E8-frame vector ``v``."""
    if v.ambient != E8_FRAME:
        raise ValueError("expected an E8-frame vector")
    return AmbientVector((2 * alpha, 2 * beta) + v.half_coords, SEARCH_FRAME)


def frame_ip_half(a: Sequence[int], b: Sequence[int]) -> int:
    """``4 * (a, b)`` for half-coordinate tuples in the search frame (integer)."""
    return a[0] * b[1] + a[1] * b[0] - 2 * (a[2] * b[2] + a[3] * b[3]) - sum(
        x * y for x, y in zip(a[4:], b[4:])
    )


A1_VEC = frame_vector(h=(1, 0))
A2_VEC = frame_vector(h=(0, 1))


@lru_cache(maxsize=None)
def overlattice_generators(p: int) -> tuple[tuple[int, ...], ...]:
    """Half-coordinate generators of ``U + L_p`` inside the search frame."""
    if p not in (1, 2):
        raise ValueError("overlattice index must be 1 or 2")
    gens = [
        (2, 0) + (0,) * 8,
        (0, 2) + (0,) * 8,
        (0, 0, 2, 0) + (0,) * 6,
        (0, 0, 0, 2) + (0,) * 6,
    ]
    for row in D6_BASIS:
        gens.append((0, 0, 0, 0) + tuple(2 * x for x in row))
    # b1 = e1 + (h1 + h2)/2
    gens.append((0, 0, 1, 1, 2, 0, 0, 0, 0, 0))
    # b_{2,p} = (e1 + ... + e6)/2 + h_p/2
    hp = (1, 0) if p == 1 else (0, 1)
    gens.append((0, 0) + hp + (1,) * 6)
    return tuple(gens)


@lru_cache(maxsize=None)
def overlattice_basis(p: int) -> tuple[tuple[int, ...], ...]:
    """Half-coordinate Z-basis (HNF) of ``U + L_p``."""
    return tuple(tuple(r) for r in linalg.hermite_rows(overlattice_generators(p)))


@lru_cache(maxsize=None)
def overlattice_lattice(p: int) -> IntLattice:
    """``U + L_p`` as an abstract lattice in its HNF basis."""
    B = overlattice_basis(p)
    gram = [[Fraction(frame_ip_half(a, b), 4) for b in B] for a in B]
    return IntLattice(tuple(tuple(r) for r in gram), f"U+L_{p}")


def in_overlattice(v: AmbientVector, p: int) -> bool:
    """Membership of a search-frame vector in ``U + L_p``.

    ``U + L_p`` is unimodular, so it equals its own dual: a vector belongs
    to it iff it pairs integrally with every generator.
    """
    if v.ambient != SEARCH_FRAME:
        raise ValueError("expected a search-frame vector")
    a = v.half_coords
    return all(frame_ip_half(a, g) % 4 == 0 for g in overlattice_generators(p))


def e8_member_of(v: AmbientVector, p: int) -> bool:
    """Membership of an E8-frame vector in ``L_p``."""
    return in_overlattice(lift_e8(v), p)


def overlattice_coordinates(v: AmbientVector, p: int) -> tuple[int, ...] | None:
    """Integer coordinates of ``v`` in the HNF basis of ``U + L_p``, or ``None``."""
    B = overlattice_basis(p)
    n = len(B)
    cols = [[B[j][i] for j in range(n)] for i in range(n)]
    sol = linalg.solve_rational(cols, v.half_coords)
    if sol is None or any(x.denominator != 1 for x in sol):
        return None
    return tuple(int(x) for x in sol)
