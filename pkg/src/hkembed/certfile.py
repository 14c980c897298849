"""JSON-lines certificate files.

The first line is a header; each further line is one certificate.  Vector
coordinates are written as integer numerators over the denominator 2, so
files never contain floats.  Verification status is never stored.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from typing import IO, Iterable

from . import __version__
from .lattice import E8_FRAME, SEARCH_FRAME, AmbientVector
from .roots import RootSet
from .search import EmbeddingCertificate, SearchBounds

FORMAT_VERSION = 1
DENOMINATOR = 2


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def certificate_to_dict(cert: EmbeddingCertificate) -> dict:
    return {
        "d": cert.d,
        "m": cert.m,
        "class": cert.cls,
        "alpha": cert.alpha,
        "beta": cert.beta,
        "denominator": DENOMINATOR,
        "v": list(cert.v.half_coords),
        "overlattice_p": cert.overlattice_p,
        "roots": [list(r.half_coords) for r in cert.roots.roots],
        "N": cert.N,
        "weight": cert.weight,
        "primitive": cert.primitive,
        "parity_ok": cert.parity_ok,
    }


def certificate_from_dict(data: dict) -> EmbeddingCertificate:
    """Inverse of :func:`certificate_to_dict`; raises ValueError on structural errors.

    Values are taken as found so that the verifier, not the parser, judges
    their consistency.
    """
    try:
        if data.get("denominator", DENOMINATOR) != DENOMINATOR:
            raise ValueError("unsupported coordinate denominator")
        v = AmbientVector(tuple(_int(x) for x in data["v"]), E8_FRAME)
        roots = RootSet(tuple(AmbientVector(tuple(_int(x) for x in r), SEARCH_FRAME) for r in data["roots"]))
        return EmbeddingCertificate(
            d=data["d"],
            m=data["m"],
            cls=data["class"],
            alpha=data["alpha"],
            beta=data["beta"],
            v=v,
            overlattice_p=data["overlattice_p"],
            roots=roots,
            N=data["N"],
            weight=data["weight"],
            primitive=data["primitive"],
            parity_ok=data["parity_ok"],
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed certificate: {exc!r}") from exc


def _int(x) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise ValueError(f"coordinate {x!r} is not an integer numerator")
    return x


def make_header(bounds: SearchBounds | None, timestamp: str | None = None) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "engine": f"hkembed {__version__}",
        "bounds": bounds.to_dict() if bounds is not None else None,
        "bounds_text": bounds.describe() if bounds is not None else None,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def write_certificates(
    fh: IO[str],
    certs: Iterable[EmbeddingCertificate],
    bounds: SearchBounds | None = None,
    timestamp: str | None = None,
) -> None:
    fh.write(_dumps({"header": make_header(bounds, timestamp)}) + "\n")
    for cert in sorted(certs, key=EmbeddingCertificate.sort_key):
        fh.write(_dumps(certificate_to_dict(cert)) + "\n")


def read_entries(fh: IO[str]) -> tuple[dict, list[tuple[int, dict | None, str | None]]]:
    """Header plus ``(line_number, raw dict or None, parse error or None)`` per entry."""
    header = None
    entries = []
    for lineno, line in enumerate(fh, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            entries.append((lineno, None, f"invalid JSON: {exc}"))
            continue
        if header is None and isinstance(obj, dict) and "header" in obj:
            header = obj["header"]
            continue
        if not isinstance(obj, dict):
            entries.append((lineno, None, "entry is not a JSON object"))
            continue
        entries.append((lineno, obj, None))
    if header is None:
        raise ValueError("certificate file has no header line")
    if header.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {header.get('format_version')!r}")
    return header, entries


def read_certificates(fh: IO[str]) -> tuple[dict, list[EmbeddingCertificate]]:
    header, entries = read_entries(fh)
    certs = []
    for lineno, obj, err in entries:
        if err is not None:
            raise ValueError(f"line {lineno}: {err}")
        certs.append(certificate_from_dict(obj))
    return header, certs
