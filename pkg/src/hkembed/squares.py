"""Constrained representations of an integer as a sum of three squares."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

# Integers that are not a sum of three distinct, coprime, nonzero squares
# (Halter-Koch).  A possible further exception exceeds 5 * 10**10 unless
# GRH fails to hold; below that bound this list is complete.
HALTER_KOCH_EXCEPTIONS = frozenset(
    {1, 2, 3, 6, 9, 11, 18, 19, 22, 27, 33, 43, 51, 57, 67, 99, 102, 123, 163, 177, 187, 267, 627}
)
HALTER_KOCH_VERIFIED_LIMIT = 5 * 10**10


@dataclass(frozen=True)
class ConstraintProfile:
    distinct: bool = False
    nonzero: bool = False
    coprime: bool = False
    all_odd: bool = False
    forbid_three: bool = False

    def accepts(self, t: tuple[int, int, int]) -> bool:
        x1, x2, x3 = t
        if self.distinct and not (x1 < x2 < x3):
            return False
        if self.nonzero and x1 == 0:
            return False
        if self.coprime and gcd(gcd(x1, x2), x3) != 1:
            return False
        if self.all_odd and not (x1 & x2 & x3 & 1):
            return False
        if self.forbid_three and 3 in t:
            return False
        return True


HALTER_KOCH_PROFILE = ConstraintProfile(distinct=True, nonzero=True, coprime=True)


@dataclass(frozen=True)
class SquaresTriple:
    x1: int
    x2: int
    x3: int

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3))

    @property
    def total(self) -> int:
        return self.x1**2 + self.x2**2 + self.x3**2


def legendre_representable(n: int) -> bool:
    """``n`` is a sum of three squares iff it is not ``4^a (8b + 7)``."""
    if n < 1:
        raise ValueError("n must be positive")
    while n % 4 == 0:
        n //= 4
    return n % 8 != 7


def is_halter_koch_exception(n: int) -> bool:
    if n < 1:
        raise ValueError("n must be positive")
    return n in HALTER_KOCH_EXCEPTIONS


def find_constrained_triple(T: int, profile: ConstraintProfile = ConstraintProfile()) -> SquaresTriple | None:
    """Lexicographically smallest ``x1 <= x2 <= x3`` with ``x1^2+x2^2+x3^2 = T``
    accepted by ``profile``, or ``None``."""
    if T < 1:
        raise ValueError("T must be positive")
    start = 1 if profile.nonzero else 0
    for x1 in range(start, isqrt(T) + 1):
        if 3 * x1 * x1 > T:
            break
        r1 = T - x1 * x1
        for x2 in range(x1, isqrt(r1) + 1):
            r2 = r1 - x2 * x2
            if r2 < x2 * x2:
                break
            x3 = isqrt(r2)
            if x3 * x3 == r2:
                t = (x1, x2, x3)
                if profile.accepts(t):
                    return SquaresTriple(*t)
    return None
