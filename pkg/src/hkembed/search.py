"""Construction, exhaustive search and verification of embedding certificates.

An embedding of K_d^perp is fixed by ``ell = alpha e + beta f + v`` with
``v`` in E8(-1), written in the frame ``A1(-1)^2 + D6(-1)``.  By class:

* ``8m``:   ``v = w``, ``w`` in D6;
* ``8m+2``: ``v = -a1/2 + w``, ``w`` in ``(1/2 + Z)^6``;
* ``8m+4``: ``v = -(a1+a2)/2 + w``, ``w`` in ``Z^6`` with odd coordinate sum.

so that ``((ell, a1), (ell, a2))`` is ``(0,0)``, ``(1,0)`` or ``(1,1)``.
The D6 part ``w`` is handled as doubled integer coordinates ``u = 2w``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable

from .lattice import (
    A1_VEC,
    A2_VEC,
    CLASS_OFFSETS,
    E8_FRAME,
    AmbientVector,
    SublatticeSpan,
    in_overlattice,
    inner_product,
    is_primitive_sublattice,
    lift_e8,
    overlattice_coordinates,
    overlattice_lattice,
)
from .roots import (
    EmbeddingCore,
    RootSet,
    count_by_type_half,
    count_roots_oracle,
)
from .squares import ConstraintProfile, find_constrained_triple

CLASSES = ("8m", "8m+2", "8m+4")
GENERAL_TYPE_N = frozenset({1, 3, 5})
ALL_TARGET_N = frozenset({1, 3, 5, 7})

# half-coordinates of the (h1, h2) part of v
_H_OFFSET = {"8m": (0, 0), "8m+2": (-1, 0), "8m+4": (-1, -1)}


def admissibility_target(cls: str) -> tuple[int, int]:
    if cls == "8m":
        return (0, 0)
    if cls == "8m+2":
        return (1, 0)
    if cls == "8m+4":
        return (1, 1)
    raise ValueError(f"unknown congruence class {cls!r}")


def class_of(d: int) -> tuple[str, int]:
    """``(class, m)`` with ``d = 8m + offset``."""
    if d <= 0:
        raise ValueError("d must be positive")
    r = d % 8
    for cls, off in CLASS_OFFSETS.items():
        if r == off:
            return cls, d // 8
    raise ValueError(f"d = {d} is not 0, 2 or 4 mod 8")


def gcd_condition(cls: str, alpha: int, beta: int) -> bool:
    """Coprime, or (class 8m only) both odd."""
    g = gcd(alpha, beta)
    if g == 1:
        return True
    return cls == "8m" and alpha % 2 == 1 and beta % 2 == 1


@dataclass(frozen=True)
class SearchBounds:
    """``lo_m * m + lo_k <= alpha*beta <= hi_m * m + hi_k``.

    ``coprimality`` is ``"class"`` (class defaults of :func:`gcd_condition`)
    or ``"none"`` (rely on the primitivity test alone).
    """

    lo_m: int = 1
    lo_k: int = 1
    hi_m: int = 2
    hi_k: int = -1
    coprimality: str = "class"
    max_per_cell: int | None = None

    def __post_init__(self):
        if self.coprimality not in ("class", "none"):
            raise ValueError("coprimality must be 'class' or 'none'")
        if self.max_per_cell is not None and self.max_per_cell < 1:
            raise ValueError("max_per_cell must be positive")

    def products(self, m: int) -> range:
        return range(max(1, self.lo_m * m + self.lo_k), self.hi_m * m + self.hi_k + 1)

    def admits(self, cls: str, alpha: int, beta: int) -> bool:
        return self.coprimality == "none" or gcd_condition(cls, alpha, beta)

    def describe(self) -> str:
        def expr(a, k):
            return f"{a}m{k:+d}" if k else f"{a}m"

        return f"alpha*beta in [{expr(self.lo_m, self.lo_k)}, {expr(self.hi_m, self.hi_k)}], gcd={self.coprimality}"

    def to_dict(self) -> dict:
        return {
            "lo_m": self.lo_m,
            "lo_k": self.lo_k,
            "hi_m": self.hi_m,
            "hi_k": self.hi_k,
            "coprimality": self.coprimality,
            "max_per_cell": self.max_per_cell,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SearchBounds":
        return cls(**data)


DEFAULT_BOUNDS = SearchBounds()


@dataclass(frozen=True)
class EmbeddingCertificate:
    d: int
    m: int
    cls: str
    alpha: int
    beta: int
    v: AmbientVector
    overlattice_p: int | None
    roots: RootSet
    N: int
    weight: int
    primitive: bool
    parity_ok: bool

    @property
    def ell(self) -> AmbientVector:
        return lift_e8(self.v, self.alpha, self.beta)

    @property
    def core(self) -> EmbeddingCore:
        return EmbeddingCore(self.cls, self.alpha, self.beta, self.v)

    def sort_key(self):
        return (self.d, self.N, self.alpha, self.beta, tuple(-x for x in self.v.half_coords))


# --- v-part enumeration ------------------------------------------------------


@lru_cache(maxsize=None)
def _nonincreasing(n2: int, k: int, top: int) -> tuple[tuple[int, ...], ...]:
    """Nonincreasing nonnegative k-tuples bounded by ``top`` with square sum ``n2``."""
    if k == 0:
        return ((),) if n2 == 0 else ()
    out = []
    for a in range(min(top, isqrt(n2)), -1, -1):
        if a * a * k < n2:
            break
        for rest in _nonincreasing(n2 - a * a, k - 1, a):
            out.append((a,) + rest)
    return tuple(out)


def d6_part_norm(cls: str, m: int, alpha: int, beta: int) -> int:
    """``|u|^2`` (u = doubled D6 part of v) forced by ``ell^2 = 2m``."""
    gap = alpha * beta - m
    if cls == "8m":
        return 8 * gap
    if cls == "8m+2":
        return 8 * gap - 2
    if cls == "8m+4":
        return 8 * gap - 4
    raise ValueError(f"unknown congruence class {cls!r}")


@lru_cache(maxsize=None)
def _parts_for(cls: str, n2: int) -> tuple[tuple[int, ...], ...]:
    if n2 < 0:
        return ()
    out = []
    for u in _nonincreasing(n2, 6, isqrt(n2)):
        if cls == "8m+2":
            if all(x % 2 for x in u):
                out.append(u)
            continue
        if any(x % 2 for x in u):
            continue
        odd_sum = sum(x // 2 for x in u) % 2
        if odd_sum == (1 if cls == "8m+4" else 0):
            out.append(u)
    return tuple(out)


def admissible_parts(cls: str, m: int, alpha: int, beta: int) -> tuple[tuple[int, ...], ...]:
    """Sorted ``|u|`` representatives of the admissible coset with the right norm.

    Signed permutations of ``u`` preserve N and primitivity (the overlattice
    index may switch), so one representative per multiset of ``|u_i|`` is
    complete.
    """
    return _parts_for(cls, d6_part_norm(cls, m, alpha, beta))


def v_from_part(cls: str, u: Iterable[int]) -> AmbientVector:
    return AmbientVector(_H_OFFSET[cls] + tuple(u), E8_FRAME)


def overlattice_choices(v: AmbientVector) -> tuple[int, ...]:
    ell = lift_e8(v)
    return tuple(p for p in (1, 2) if in_overlattice(ell, p))


def _overlattice_for_cert(cls: str, v: AmbientVector) -> int | None:
    if cls != "8m+2":
        return None
    ps = overlattice_choices(v)
    return ps[0] if ps else None


def primitivity(ell: AmbientVector, p: int) -> bool:
    """SNF test that span{a1, a2, ell} is saturated in ``U + L_p``."""
    rows = []
    for vec in (A1_VEC, A2_VEC, ell):
        c = overlattice_coordinates(vec, p)
        if c is None:
            return False
        rows.append(c)
    return is_primitive_sublattice(SublatticeSpan(tuple(rows), overlattice_lattice(p)))


# --- certificates -----------------------------------------------------------


def _assemble(cls: str, m: int, alpha: int, beta: int, v: AmbientVector) -> EmbeddingCertificate | None:
    p = _overlattice_for_cert(cls, v)
    if cls == "8m+2" and p is None:
        return None
    core = EmbeddingCore(cls, alpha, beta, v)
    rs = count_roots_oracle(core)
    return EmbeddingCertificate(
        d=8 * m + CLASS_OFFSETS[cls],
        m=m,
        cls=cls,
        alpha=alpha,
        beta=beta,
        v=v,
        overlattice_p=p,
        roots=rs,
        N=rs.N,
        weight=12 + rs.N,
        primitive=primitivity(core.ell, p or 1),
        parity_ok=rs.N % 2 == 1,
    )


def _emit(cert: EmbeddingCertificate | None, target_n) -> EmbeddingCertificate | None:
    if cert is None or cert.N not in target_n or not cert.primitive:
        return None
    if not verify_certificate(cert).ok:
        raise AssertionError(f"self-verification failed for {cert}")
    return cert


def _quick_count(cls: str, m: int, alpha: int, beta: int, u: tuple[int, ...]) -> int:
    if m < alpha * beta < 2 * m:
        return count_by_type_half(alpha, beta, u)
    return count_roots_oracle(EmbeddingCore(cls, alpha, beta, v_from_part(cls, u))).N


def _cells(cls: str, m: int, bounds: SearchBounds):
    for prod in bounds.products(m):
        for alpha in range(1, isqrt(prod) + 1):
            if prod % alpha == 0:
                beta = prod // alpha
                if bounds.admits(cls, alpha, beta):
                    yield alpha, beta


def exhaustive_scan(
    d: int,
    bounds: SearchBounds = DEFAULT_BOUNDS,
    target_n=ALL_TARGET_N,
    stop_on_first: bool = False,
) -> list[EmbeddingCertificate]:
    """All certificates (one per ``(alpha, beta, sorted |u|)``) with N in ``target_n``."""
    cls, m = class_of(d)
    if len(bounds.products(m)) == 0:
        raise ValueError(f"search bounds are empty for m = {m}")
    target_n = frozenset(target_n)
    found = []
    for alpha, beta in _cells(cls, m, bounds):
        kept = 0
        for u in admissible_parts(cls, m, alpha, beta):
            if _quick_count(cls, m, alpha, beta, u) not in target_n:
                continue
            cert = _emit(_assemble(cls, m, alpha, beta, v_from_part(cls, u)), target_n)
            if cert is None:
                continue
            found.append(cert)
            kept += 1
            if stop_on_first:
                return found
            if bounds.max_per_cell is not None and kept >= bounds.max_per_cell:
                break
    found.sort(key=EmbeddingCertificate.sort_key)
    return found


def best_certificates(d: int, bounds: SearchBounds = DEFAULT_BOUNDS) -> list[EmbeddingCertificate]:
    """A general-type witness if one exists, else a N = 7 witness, else nothing."""
    cls, m = class_of(d)
    if len(bounds.products(m)) == 0:
        return []
    certs = exhaustive_scan(d, bounds, GENERAL_TYPE_N, stop_on_first=True)
    if not certs:
        certs = exhaustive_scan(d, bounds, {7}, stop_on_first=True)
    return certs


# --- the class recipes ------------------------------------------------------

_RECIPES = {
    # (three-squares target, constraint profile, fixed tail of u, doubling of the triple)
    "8m": (lambda a, b, m: 2 * (a * b - m - 1), ConstraintProfile(distinct=True, nonzero=True), (2, 2, 0), 2),
    "8m+2": (
        lambda a, b, m: 8 * (a * b - m) - 29,
        ConstraintProfile(distinct=True, nonzero=True, all_odd=True, forbid_three=True),
        (3, 3, 3),
        1,
    ),
    "8m+4": (
        lambda a, b, m: 2 * (a * b - m) - 28,
        ConstraintProfile(distinct=True, nonzero=True, forbid_three=True),
        (6, 6, 6),
        2,
    ),
}


def recipe_pairs(cls: str, m: int) -> list[tuple[int, int]]:
    """``alpha < beta`` with ``alpha^2, beta^2 > m`` and ``4 alpha beta < 5m``,
    closest pairs first."""
    window = [a for a in range(isqrt(m), isqrt(5 * m // 4) + 2) if a * a > m and 4 * a * a < 5 * m]
    pairs = [(a, b) for a in window for b in window if a < b and 4 * a * b < 5 * m and gcd_condition(cls, a, b)]
    pairs.sort(key=lambda ab: (ab[1] - ab[0], ab[0]))
    return pairs


def recipe_candidate(cls: str, m: int, alpha: int, beta: int) -> AmbientVector | None:
    target, profile, tail, scale = _RECIPES[cls]
    T = target(alpha, beta, m)
    if T < 1:
        return None
    t = find_constrained_triple(T, profile)
    if t is None:
        return None
    u = tuple(sorted([scale * x for x in t] + list(tail), reverse=True))
    return v_from_part(cls, u)


def construct_certificate(
    d: int,
    target_n=GENERAL_TYPE_N,
    bounds: SearchBounds = DEFAULT_BOUNDS,
    fallback: bool = True,
) -> EmbeddingCertificate | None:
    """Recipe first, exhaustive scan as fallback.

    The recipe walks the ``(alpha, beta)`` pairs of :func:`recipe_pairs`,
    solves the class's three-squares equation and keeps the first
    oracle-confirmed primitive certificate whose N lies in ``target_n``.
    General-type values of ``target_n`` are tried before N = 7.
    """
    cls, m = class_of(d)
    target_n = frozenset(target_n)
    if m >= 1:
        for alpha, beta in recipe_pairs(cls, m):
            v = recipe_candidate(cls, m, alpha, beta)
            if v is None:
                continue
            cert = _emit(_assemble(cls, m, alpha, beta, v), target_n & GENERAL_TYPE_N)
            if cert is not None:
                return cert
    if not fallback or m < 1 or len(bounds.products(m)) == 0:
        return None
    for tier in (target_n & GENERAL_TYPE_N, target_n - GENERAL_TYPE_N):
        if tier:
            certs = exhaustive_scan(d, bounds, tier, stop_on_first=True)
            if certs:
                return certs[0]
    return None


# --- verification ------------------------------------------------------------

CHECK_NAMES = {
    "a": "norm",
    "b": "admissibility",
    "c": "membership",
    "d": "primitivity",
    "e": "roots",
    "f": "weight",
    "g": "parity",
}


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    messages: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return len(self.checks) == len(CHECK_NAMES) and all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [k for k in CHECK_NAMES if not self.checks.get(k, False)]

    def record(self, key: str, passed: bool, message: str = "") -> None:
        self.checks[key] = bool(passed)
        if message:
            self.messages[key] = message

    def lines(self) -> list[str]:
        out = []
        for k, name in CHECK_NAMES.items():
            status = "pass" if self.checks.get(k) else "FAIL"
            msg = self.messages.get(k, "")
            out.append(f"({k}) {name}: {status}" + (f" - {msg}" if msg else ""))
        return out


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def verify_certificate(cert: EmbeddingCertificate) -> VerificationReport:
    """Recompute every claim of ``cert``; never raises."""
    rep = VerificationReport()
    ell = None
    try:
        if not (isinstance(cert.v, AmbientVector) and cert.v.ambient == E8_FRAME):
            raise ValueError("v is not an E8-frame vector")
        if not (_is_int(cert.alpha) and _is_int(cert.beta) and cert.alpha > 0 and cert.beta > 0):
            raise ValueError("alpha, beta must be positive integers")
        ell = lift_e8(cert.v, cert.alpha, cert.beta)
    except Exception as exc:  # noqa: BLE001 - adversarial input
        for k in CHECK_NAMES:
            rep.record(k, False, f"malformed certificate: {exc}")
        return rep

    def run(key, fn):
        try:
            passed, msg = fn()
        except Exception as exc:  # noqa: BLE001
            passed, msg = False, f"error: {exc}"
        rep.record(key, passed, msg)

    def check_norm():
        n = inner_product(ell, ell)
        ok = _is_int(cert.m) and cert.m >= 1 and n == 2 * cert.m
        return ok, "" if ok else f"ell^2 = {n}, 2m = {2 * cert.m}"

    def check_adm():
        if cert.cls not in CLASS_OFFSETS:
            return False, f"unknown class {cert.cls!r}"
        if not (_is_int(cert.d) and cert.d == 8 * cert.m + CLASS_OFFSETS[cert.cls]):
            return False, f"d = {cert.d} inconsistent with m = {cert.m} and class {cert.cls}"
        got = (inner_product(ell, A1_VEC), inner_product(ell, A2_VEC))
        want = admissibility_target(cert.cls)
        return got == want, "" if got == want else f"(ell,a1),(ell,a2) = {got}, expected {want}"

    def check_membership():
        p = cert.overlattice_p
        if cert.cls == "8m+2":
            if p not in (1, 2):
                return False, f"overlattice index {p!r} must be 1 or 2"
            ok = in_overlattice(ell, p)
            return ok, "" if ok else f"v is not in L_{p}"
        if p is not None:
            return False, f"overlattice index must be unset for class {cert.cls}"
        ok = in_overlattice(ell, 1) and in_overlattice(ell, 2)
        return ok, "" if ok else "v is not in E8(-1)"

    def check_primitive():
        p = cert.overlattice_p if cert.overlattice_p in (1, 2) else 1
        prim = primitivity(ell, p)
        ok = prim and cert.primitive is True
        return ok, "" if ok else f"recomputed primitive = {prim}, claimed {cert.primitive!r}"

    oracle_n = None

    def check_roots():
        nonlocal oracle_n
        rs = count_roots_oracle(EmbeddingCore(cert.cls, cert.alpha, cert.beta, cert.v))
        oracle_n = rs.N
        claimed = cert.roots.keys() if isinstance(cert.roots, RootSet) else None
        if claimed != rs.keys() or len(cert.roots.roots) != len(rs.roots):
            return False, "root list does not match the oracle"
        if cert.N != rs.N:
            return False, f"N = {cert.N!r}, oracle gives {rs.N}"
        return True, ""

    def check_weight():
        n = oracle_n if oracle_n is not None else cert.N
        ok = _is_int(cert.weight) and cert.weight == 12 + n
        return ok, "" if ok else f"weight {cert.weight!r} != 12 + {n}"

    def check_parity():
        ok = _is_int(cert.N) and cert.N in ALL_TARGET_N and cert.parity_ok is True
        return ok, "" if ok else f"N = {cert.N!r} with parity flag {cert.parity_ok!r}"

    run("a", check_norm)
    run("b", check_adm)
    run("c", check_membership)
    run("d", check_primitive)
    run("e", check_roots)
    run("f", check_weight)
    run("g", check_parity)
    return rep


# --- theoretical bounds -----------------------------------------------------

THEORETICAL_BOUNDS = {
    "8m": (2055, Fraction("0.1533")),
    "8m+2": (3238, Fraction("0.025328")),
    "8m+4": (10463, Fraction("0.0014337")),
}
# number of consecutive integers the window must hold, and the avoidance
# constant the three-squares target has to exceed
WINDOW_REQUIREMENT = {"8m": 2, "8m+2": 6, "8m+4": 12}
EXCEPTION_MARGIN = {"8m": 52, "8m+2": 82, "8m+4": 15}


def theoretical_bound(cls: str) -> tuple[int, Fraction]:
    if cls not in THEORETICAL_BOUNDS:
        raise ValueError(f"unknown congruence class {cls!r}")
    return THEORETICAL_BOUNDS[cls]


def bound_window(m: int, eps: Fraction) -> list[int]:
    """Integers ``alpha`` with ``(1+eps) m < alpha^2 < 5m/4``."""
    lo = (1 + eps) * m
    return [a for a in range(isqrt(m), isqrt(5 * m // 4) + 2) if lo < a * a and 4 * a * a < 5 * m]


def window_width_exceeds(m: int, eps: Fraction, k: int) -> bool:
    """Exact test of ``sqrt(5m/4) - sqrt((1+eps) m) > k``."""
    A, B = Fraction(5 * m, 4), (1 + eps) * m
    t = A - B - k * k  # A - B - k^2 > 2k sqrt(B)
    return t > 0 and t * t > 4 * k * k * B


def window_admits(cls: str, m: int, eps: Fraction | None = None) -> bool:
    """The window holds enough consecutive integers for the class's step set."""
    eps = theoretical_bound(cls)[1] if eps is None else eps
    return len(bound_window(m, eps)) >= WINDOW_REQUIREMENT[cls]


def choice_exists(cls: str, m: int, eps: Fraction | None = None) -> bool:
    """The standard parity/divisibility choice of ``(alpha, beta)`` is available.

    8m: ``beta = alpha + 1`` for even m, an odd ``alpha`` for odd m;
    8m+2: ``beta = alpha + g``, ``g`` in {1, 3}, coprime, ``3 | 8(alpha beta - m) - 29``;
    8m+4: ``g`` in {1, 3} (m odd) or {2, 6} (m even), coprime,
    ``alpha beta - m`` odd and ``3 | 2(alpha beta - m) - 28``.
    """
    eps = theoretical_bound(cls)[1] if eps is None else eps
    w = set(bound_window(m, eps))
    if cls == "8m":
        if m % 2 == 0:
            return any(a + 1 in w for a in w)
        return any(a % 2 for a in w)
    if cls == "8m+2":
        return any(
            a + g in w and gcd(a, a + g) == 1 and (8 * (a * (a + g) - m) - 29) % 3 == 0 for a in w for g in (1, 3)
        )
    if cls == "8m+4":
        gs = (1, 3) if m % 2 else (2, 6)
        return any(
            a + g in w and gcd(a, a + g) == 1 and (a * (a + g) - m) % 2 == 1 and (2 * (a * (a + g) - m) - 28) % 3 == 0
            for a in w
            for g in gs
        )
    raise ValueError(f"unknown congruence class {cls!r}")


def bound_inequalities(cls: str) -> list[str]:
    return [
        f"sqrt(5m/4) - sqrt((1+eps)m) > {WINDOW_REQUIREMENT[cls]}",
        f"eps*m > {EXCEPTION_MARGIN[cls]}",
    ]


# --- orchestration -----------------------------------------------------------


def _scan_one(args):
    d, bounds, target, exhaustive = args
    cls, m = class_of(d)
    if len(bounds.products(m)) == 0:
        return d, []
    if exhaustive:
        return d, exhaustive_scan(d, bounds, target)
    return d, best_certificates(d, bounds)


def scan_range(
    ds: Iterable[int],
    bounds: SearchBounds = DEFAULT_BOUNDS,
    target_n=ALL_TARGET_N,
    exhaustive: bool = True,
    jobs: int = 1,
) -> dict[int, list[EmbeddingCertificate]]:
    """Scan every ``d`` (partitioned across ``jobs`` processes); merged by ``d``."""
    work = [(d, bounds, frozenset(target_n), exhaustive) for d in ds]
    if jobs <= 1:
        results = [_scan_one(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_one, work, chunksize=1))
    return {d: certs for d, certs in sorted(results)}


def random_admissible_core(rng: random.Random, cls: str, max_coord: int = 6, max_ab: int = 40) -> EmbeddingCore:
    """A random admissible ``ell`` with positive norm (test and fuzz helper)."""
    while True:
        alpha, beta = rng.randint(1, max_ab), rng.randint(1, max_ab)
        if cls == "8m+2":
            u = [2 * rng.randint(-max_coord, max_coord) + 1 for _ in range(6)]
        else:
            u = [2 * rng.randint(-max_coord, max_coord) for _ in range(6)]
            want = 1 if cls == "8m+4" else 0
            if (sum(u) // 2) % 2 != want:
                u[0] += 2
        v = v_from_part(cls, u)
        core = EmbeddingCore(cls, alpha, beta, v)
        if core.ell_norm <= 0 or not overlattice_choices(v):
            continue
        return core

