"""Per-discriminant Kodaira-dimension verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .search import (
    DEFAULT_BOUNDS,
    GENERAL_TYPE_N,
    EmbeddingCertificate,
    SearchBounds,
    scan_range,
)


class Verdict(str, Enum):
    EMPTY = "Empty"
    GENERAL_TYPE = "GeneralType"
    KODAIRA_NONNEGATIVE = "KodairaNonNegative"
    NEGATIVE_UNIRATIONAL = "NegativeUnirational"
    UNKNOWN = "Unknown"


# Literal external inputs: unirationality through the K3 moduli spaces K_d
# (d in {4, 10, 20, 26, 34}) and uniruledness of the special cubic
# fourfold moduli C_44.
EXTERNAL_NEGATIVE = {
    4: "external-K3",
    10: "external-K3",
    20: "external-K3",
    26: "external-K3",
    34: "external-K3",
    44: "external-cubic",
}
EMPTY_DISCRIMINANTS = frozenset({2, 8})

_RANK = {
    Verdict.UNKNOWN: 0,
    Verdict.NEGATIVE_UNIRATIONAL: 0,
    Verdict.KODAIRA_NONNEGATIVE: 1,
    Verdict.GENERAL_TYPE: 2,
}


@dataclass(frozen=True)
class DiscriminantRecord:
    d: int
    nonempty: bool
    components: int
    verdict: Verdict
    witness: EmbeddingCertificate | None = None
    provenance: str = "search"
    bounds: SearchBounds | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


def is_nonempty(d: int) -> bool:
    return d > 0 and d % 8 in (0, 2, 4) and d not in EMPTY_DISCRIMINANTS


def classify_discriminant(
    d: int,
    certs: list[EmbeddingCertificate] | tuple = (),
    bounds: SearchBounds = DEFAULT_BOUNDS,
) -> DiscriminantRecord:
    if d <= 0:
        raise ValueError("d must be positive")
    if not is_nonempty(d):
        return DiscriminantRecord(d, False, 0, Verdict.EMPTY, provenance="nonemptiness-rule")
    components = 2 if d % 8 == 2 else 1
    notes = ()
    if d == 10:
        notes = ("the moduli space meets only one of the two components D_10', D_10''",)
    certs = [c for c in certs if c.d == d]
    gt = [c for c in certs if c.N in GENERAL_TYPE_N]
    if gt:
        return DiscriminantRecord(d, True, components, Verdict.GENERAL_TYPE, min(gt, key=EmbeddingCertificate.sort_key), "search", bounds, notes)
    k0 = [c for c in certs if c.N == 7]
    if k0:
        return DiscriminantRecord(d, True, components, Verdict.KODAIRA_NONNEGATIVE, min(k0, key=EmbeddingCertificate.sort_key), "search", bounds, notes)
    if d in EXTERNAL_NEGATIVE:
        return DiscriminantRecord(d, True, components, Verdict.NEGATIVE_UNIRATIONAL, None, EXTERNAL_NEGATIVE[d], bounds, notes)
    return DiscriminantRecord(d, True, components, Verdict.UNKNOWN, None, "search", bounds, notes)


def at_least_as_strong(a: Verdict, b: Verdict) -> bool:
    """``a`` is no weaker than ``b`` in the order GeneralType > KodairaNonNegative > Unknown."""
    return _RANK.get(a, 0) >= _RANK.get(b, 0)


def table_discriminants(d_max: int) -> list[int]:
    return [d for d in range(2, d_max + 1) if d % 8 in (0, 2, 4)]


def build_table(
    d_max: int,
    bounds: SearchBounds = DEFAULT_BOUNDS,
    certs: dict[int, list[EmbeddingCertificate]] | None = None,
    jobs: int = 1,
) -> list[DiscriminantRecord]:
    """Records for every ``d = 0, 2, 4 mod 8`` up to ``d_max``.

    Without ``certs`` each nonempty ``d`` is scanned for its strongest
    witness under ``bounds``.
    """
    if d_max < 4:
        raise ValueError("d_max must be at least 4")
    ds = table_discriminants(d_max)
    if certs is None:
        todo = [d for d in ds if is_nonempty(d) and d // 8 >= 1]
        certs = scan_range(todo, bounds, exhaustive=False, jobs=jobs)
    return [classify_discriminant(d, certs.get(d, []), bounds) for d in ds]

