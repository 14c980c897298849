"""Command-line interface: ``hkembed <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .certfile import certificate_from_dict, certificate_to_dict, read_certificates, read_entries, write_certificates
from .search import (
    ALL_TARGET_N,
    CLASSES,
    DEFAULT_BOUNDS,
    SearchBounds,
    bound_inequalities,
    class_of,
    construct_certificate,
    scan_range,
    theoretical_bound,
    verify_certificate,
)
from .squares import ConstraintProfile, find_constrained_triple
from .verdict import Verdict, build_table

JOBS_ENV = "HKEMBED_JOBS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _target_set(text: str) -> frozenset[int]:
    try:
        vals = frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"bad --target-n {text!r}")
    if not vals or not vals <= ALL_TARGET_N:
        raise UsageError("--target-n must be a nonempty subset of 1,3,5,7")
    return vals


def _bounds(args) -> SearchBounds:
    base = DEFAULT_BOUNDS
    if args.bounds:
        try:
            lo_m, lo_k, hi_m, hi_k = (int(x) for x in args.bounds.split(","))
        except ValueError:
            raise UsageError("--bounds expects LO_M,LO_K,HI_M,HI_K (alpha*beta in [LO_M m + LO_K, HI_M m + HI_K])")
        base = SearchBounds(lo_m, lo_k, hi_m, hi_k)
    try:
        return SearchBounds(base.lo_m, base.lo_k, base.hi_m, base.hi_k, args.coprimality, args.max_per_cell)
    except ValueError as exc:
        raise UsageError(str(exc))


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{JOBS_ENV} must be an integer")
    return 1


def _add_bounds_args(p):
    p.add_argument("--bounds", help="LO_M,LO_K,HI_M,HI_K for alpha*beta in [LO_M m+LO_K, HI_M m+HI_K]")
    p.add_argument("--coprimality", choices=("class", "none"), default="class")
    p.add_argument("--max-per-cell", type=int, default=None)
    p.add_argument("--jobs", type=int, default=None, help=f"worker processes (default ${JOBS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hkembed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("search", help="construct one certificate for d")
    p.add_argument("d", type=int)
    p.add_argument("--target-n", default="1,3,5,7")

    p = sub.add_parser("scan", help="exhaustive scan over a range of d")
    p.add_argument("--min", dest="dmin", type=int, required=True)
    p.add_argument("--max", dest="dmax", type=int, required=True)
    p.add_argument("--target-n", default="1,3,5,7")
    p.add_argument("--best-only", action="store_true", help="stop at the strongest witness per d")
    p.add_argument("--out", required=True)
    _add_bounds_args(p)

    p = sub.add_parser("verify", help="verify every certificate in a file")
    p.add_argument("file")
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("table", help="verdict table up to --max")
    p.add_argument("--max", dest="dmax", type=int, required=True)
    p.add_argument("--certs", help="use certificates from this file instead of scanning")
    p.add_argument("--json", dest="json_out", help="also write the table as JSON")
    _add_bounds_args(p)

    sub.add_parser("bounds", help="theoretical bounds per class")

    p = sub.add_parser("triples", help="three-squares witness for T")
    p.add_argument("T", type=int)
    p.add_argument("--odd", action="store_true")
    p.add_argument("--distinct", action="store_true")
    p.add_argument("--coprime", action="store_true")
    p.add_argument("--nonzero", action="store_true")
    p.add_argument("--no-three", action="store_true")
    return parser


def _cmd_search(args, out) -> int:
    target = _target_set(args.target_n)
    try:
        class_of(args.d)
    except ValueError as exc:
        raise UsageError(str(exc))
    cert = construct_certificate(args.d, target)
    if cert is None:
        print("none", file=out)
        return 0
    print(json.dumps(certificate_to_dict(cert), sort_keys=True), file=out)
    return 0


def _cmd_scan(args, out) -> int:
    if args.dmin < 1 or args.dmax < args.dmin:
        raise UsageError("need 1 <= --min <= --max")
    bounds = _bounds(args)
    target = _target_set(args.target_n)
    ds = [d for d in range(args.dmin, args.dmax + 1) if d % 8 in (0, 2, 4) and d // 8 >= 1]
    ds = [d for d in ds if len(bounds.products(d // 8))]
    results = scan_range(ds, bounds, target, exhaustive=not args.best_only, jobs=_jobs(args))
    certs = [c for cs in results.values() for c in cs]
    with open(args.out, "w") as fh:
        write_certificates(fh, certs, bounds)
    print(f"scanned {len(ds)} discriminants, wrote {len(certs)} certificates to {args.out}", file=out)
    return 0


def _cmd_verify(args, out) -> int:
    try:
        with open(args.file) as fh:
            _, entries = read_entries(fh)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=out)
        return 1
    failures = 0
    for lineno, obj, err in entries:
        if err is None:
            try:
                cert = certificate_from_dict(obj)
            except ValueError as exc:
                err = str(exc)
        if err is not None:
            failures += 1
            print(f"line {lineno}: FAIL ({err})", file=out)
            continue
        rep = verify_certificate(cert)
        if not rep.ok:
            failures += 1
        print(f"line {lineno}: d={cert.d} N={cert.N} {'ok' if rep.ok else 'FAIL ' + ','.join(rep.failed)}", file=out)
        if not rep.ok or not args.quiet:
            for line in rep.lines():
                print("  " + line, file=out)
    print(f"{len(entries) - failures}/{len(entries)} certificates verified", file=out)
    return 1 if failures else 0


def _cmd_table(args, out) -> int:
    if args.dmax < 4:
        raise UsageError("--max must be at least 4")
    bounds = _bounds(args)
    certs = None
    if args.certs:
        try:
            with open(args.certs) as fh:
                _, flat = read_certificates(fh)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=out)
            return 1
        bad = [c for c in flat if not verify_certificate(c).ok]
        if bad:
            print(f"error: {len(bad)} certificates in {args.certs} fail verification", file=out)
            return 1
        certs = {}
        for c in flat:
            certs.setdefault(c.d, []).append(c)
    table = build_table(args.dmax, bounds, certs, jobs=_jobs(args))
    print(f"{'d':>5}  {'verdict':<20} {'comp':>4}  {'N':>2}  provenance", file=out)
    for r in table:
        n = str(r.witness.N) if r.witness else "-"
        print(f"{r.d:>5}  {r.verdict.value:<20} {r.components:>4}  {n:>2}  {r.provenance}", file=out)
    unknown = [r.d for r in table if r.verdict == Verdict.UNKNOWN]
    print(f"unknown ({len(unknown)}): {' '.join(map(str, unknown))}", file=out)
    print(f"bounds: {bounds.describe()}", file=out)
    if args.json_out:
        rows = [
            {
                "d": r.d,
                "verdict": r.verdict.value,
                "nonempty": r.nonempty,
                "components": r.components,
                "provenance": r.provenance,
                "witness": certificate_to_dict(r.witness) if r.witness else None,
                "notes": list(r.notes),
            }
            for r in table
        ]
        with open(args.json_out, "w") as fh:
            json.dump({"bounds": bounds.to_dict(), "records": rows}, fh, sort_keys=True, indent=1)
    return 0


def _cmd_bounds(args, out) -> int:
    for cls in CLASSES:
        m0, eps = theoretical_bound(cls)
        print(f"{cls}: m >= {m0}, eps = {float(eps)}", file=out)
        for line in bound_inequalities(cls):
            print(f"    {line}", file=out)
    return 0


def _cmd_triples(args, out) -> int:
    if args.T < 1:
        raise UsageError("T must be positive")
    profile = ConstraintProfile(
        distinct=args.distinct,
        nonzero=args.nonzero,
        coprime=args.coprime,
        all_odd=args.odd,
        forbid_three=args.no_three,
    )
    t = find_constrained_triple(args.T, profile)
    print("none" if t is None else f"{t.x1} {t.x2} {t.x3}", file=out)
    return 0


_COMMANDS = {
    "search": _cmd_search,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
    "table": _cmd_table,
    "bounds": _cmd_bounds,
    "triples": _cmd_triples,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
