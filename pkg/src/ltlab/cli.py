"""Command-line entry point: verification suites, result cache, reports.

Exit codes: 0 success; 1 a mathematical assertion failed (a verification
suite returned a negative verdict — distinct from bugs so CI can tell a
refuted congruence from a crash); 2 invalid arguments; 3 a resource guard
refused the computation; 4 internal error.

Every number in a report is exact: integers, strings "a/b" for rational
valuations, or coefficient vectors for cyclotomic values; wall times are
reported as integer milliseconds.  JSON null for an achieved valuation
means the difference vanished to working precision.  Reports are cached
under a key derived from all semantically relevant inputs; cache files are
written atomically (temp file + rename) and a hit replays the stored bytes
verbatim.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from fractions import Fraction

from .congruence import congruence_report
from .formalmod import LiftError, verify_section3
from .hypersurface import GuardExceeded, HyperParams, count_points
from .lfunc import char_sums_all, conjecture_report, zeta_consistency
from .skewpoly import symmetry_report
from .symbolic import IDENTITY_NAMES, verify_identity

EXIT_OK = 0
EXIT_MATH_FAILURE = 1
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_INTERNAL = 4


def _sanitize(obj):
    """Exact-values-only JSON form: Fractions become 'a/b' strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, float):
        raise TypeError(f"floating point leaked into a report: {obj!r}")
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


def _cyc_csv(value):
    if isinstance(value, list):
        return ";".join(str(v) for v in value)
    return str(value)


def _to_csv(report, sub):
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    if sub == "count":
        w.writerow(["q", "h", "n", "count", "method"])
        w.writerow([report["q"], report["h"], report["n"],
                    report["count"], report["method"]])
    elif sub in ("charsum", "conjecture"):
        w.writerow(["q", "h", "lambda", "primitive", "n", "S",
                    "predicted", "match"])
        for row in report["per_lambda"]:
            for i, s in enumerate(row["S"]):
                pred = (row["predicted"][i]
                        if row.get("predicted") else "")
                match = row["match"] if row.get("match") is not None else ""
                w.writerow([report["q"], report["h"], row["lambda"],
                            row["primitive"], i + report.get("first_n", 1),
                            _cyc_csv(s), pred, match])
    else:
        raise ValueError(f"no CSV schema for {sub}")
    return out.getvalue()


def _verdict(report):
    """True unless the report carries a negative verification verdict."""
    for key in ("all_match", "all_pass", "all_hold", "match", "preserved",
                "center_matches_translation"):
        if key in report and report[key] is False:
            return False
    return True


def _cache_path(cache_dir, sub, params):
    key = json.dumps({"sub": sub, "params": params}, sort_keys=True)
    digest = hashlib.sha256(key.encode()).hexdigest()[:32]
    return os.path.join(cache_dir, f"{sub}-{digest}.json")


def _cache_read(path):
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError:
        return None


def _cache_write(path, data):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _run_count(args):
    t0 = time.monotonic()
    count = count_points(HyperParams(args.q, args.h, args.n),
                         threads=args.threads)
    ms = int((time.monotonic() - t0) * 1000)
    return {"q": args.q, "h": args.h, "n": args.n, "count": count,
            "method": "trace-histogram", "milliseconds": ms}


def _run_charsum(args):
    records = char_sums_all(args.q, args.h, args.n, threads=args.threads)
    rows = []
    for rec in records:
        if args.lam == "primitive" and not rec.primitive:
            continue
        if args.lam not in ("all", "primitive") \
                and rec.lam.code != int(args.lam):
            continue
        value = (rec.value.to_int() if rec.value.is_rational_integer()
                 else list(rec.value.coords))
        rows.append({"lambda": rec.lam.code, "primitive": rec.primitive,
                     "S": [value], "predicted": None, "match": None})
    if not rows:
        raise ValueError(f"no character matches selector {args.lam!r}")
    return {"q": args.q, "h": args.h, "n": args.n, "first_n": args.n,
            "per_lambda": rows}


def _run_conjecture(args):
    return conjecture_report(args.q, args.h, args.N, threads=args.threads)


def _run_zeta(args):
    return zeta_consistency(args.q, args.h, args.n, threads=args.threads)


def _run_identities(args):
    names = [args.name] if args.name else list(IDENTITY_NAMES)
    results = [verify_identity(name, args.q, args.h) for name in names]
    return {"q": args.q, "h": args.h, "identities": results,
            "all_hold": all(r["holds"] for r in results)}


def _run_formal(args):
    return verify_section3(args.q, args.h, samples=args.samples,
                           prec=args.prec,
                           residue_degree=args.residue_degree,
                           seed=args.seed)


def _run_congruence(args):
    return congruence_report(args.q, args.h, samples=args.samples,
                             prec=args.prec, seed=args.seed)


def _run_symmetry(args):
    return symmetry_report(args.q, args.h, args.n)


def _add_common(p, threads=False):
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cache-dir", default=None,
                   help="cache directory (env LTLAB_CACHE overrides)")
    p.add_argument("--no-cache", action="store_true")
    if threads:
        p.add_argument("--threads", type=int, default=1)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="ltlab",
        description="exact verification suites for the determinantal "
                    "hypersurface, its character-sum L-function, and the "
                    "formal-module congruences")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("count", help="point count of the hypersurface")
    _add_common(p, threads=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=_run_count)

    p = sub.add_parser("charsum", help="exact character sums S_n")
    _add_common(p, threads=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lambda", dest="lam", default="all",
                   help="all | primitive | explicit code")
    p.set_defaults(run=_run_charsum)

    p = sub.add_parser("conjecture",
                       help="S_n versus the predicted L-function")
    _add_common(p, threads=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(run=_run_conjecture)

    p = sub.add_parser("zeta", help="sum of S_n over characters vs count")
    _add_common(p, threads=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(run=_run_zeta)

    p = sub.add_parser("identities", help="exact polynomial identities")
    _add_common(p)
    p.add_argument("--name", choices=IDENTITY_NAMES, default=None)
    p.set_defaults(run=_run_identities)

    p = sub.add_parser("formal-verify",
                       help="determinant-functor checks at level 2")
    _add_common(p)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--prec", type=int, default=None)
    p.add_argument("--residue-degree", type=int, default=None)
    p.add_argument("--seed", type=int, default=2026)
    p.set_defaults(run=_run_formal)

    p = sub.add_parser("congruence-verify",
                       help="sampled level-2 congruence checks")
    _add_common(p)
    p.add_argument("--samples", type=int, default=5)
    p.add_argument("--prec", type=int, default=None)
    p.add_argument("--seed", type=int, default=2026)
    p.set_defaults(run=_run_congruence)

    p = sub.add_parser("symmetry",
                       help="exhaustive unit-action preservation check")
    _add_common(p)
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(run=_run_symmetry)
    return ap


_UNCACHED_KEYS = {"milliseconds", "wall_time_ms"}


def _semantic_params(args):
    skip = {"run", "subcommand", "format", "cache_dir", "no_cache"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0

    cache_dir = args.cache_dir or os.environ.get("LTLAB_CACHE")
    if os.environ.get("LTLAB_CACHE"):
        cache_dir = os.environ["LTLAB_CACHE"]
    use_cache = cache_dir is not None and not args.no_cache

    try:
        payload = None
        path = None
        if use_cache:
            path = _cache_path(cache_dir, args.subcommand,
                               _semantic_params(args))
            payload = _cache_read(path)
        if payload is None:
            report = _sanitize(args.run(args))
            payload = (json.dumps(report, indent=2, sort_keys=True) + "\n"
                       ).encode()
            if use_cache:
                _cache_write(path, payload)
        report = json.loads(payload)
        if args.format == "csv":
            sys.stdout.write(_to_csv(report, args.subcommand))
        else:
            sys.stdout.buffer.write(payload)
            sys.stdout.flush()
        return EXIT_OK if _verdict(report) else EXIT_MATH_FAILURE
    except (GuardExceeded, OverflowError) as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (ValueError, LiftError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - contract: distinct exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
