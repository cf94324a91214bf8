"""Command-line front end: every analysis as a subcommand.

Results go to stdout in the requested format (json, csv, or vertices for
region outputs); diagnostics go to stderr. Exit code 0 means the requested
computation succeeded and all checks it ran passed, 1 means a mathematical
check failed (claim violation, gap over budget, no scheme found), and 2
means the invocation itself was malformed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from .gaussian import (
    GAP_BITS,
    GaussianParams,
    check_gaussian_claims,
    inner_region,
    outer_region,
    per_bound_gap_check,
)
from .harness import MODES, SweepConfig, run_sweep, summary_json
from .ldc import (
    LdcParams,
    capacity_region,
    check_ldc_claims,
    rank_independence_check,
    scheme_search,
    scheme_verify,
    verify_lemmas_1_2,
)
from .polytope import (
    ClaimsReport,
    HalfspaceSystem,
    Region2D,
    fme_eliminate,
    per_user_gap,
    project_to_rates,
)
from .reciprocity import TAU_RECIPROCAL, check_reciprocity_claims, reciprocity_report

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2

__all__ = ["main", "EXIT_OK", "EXIT_CHECK", "EXIT_USAGE"]


class _UsageError(Exception):
    pass


def _scalar_str(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _diag(payload: dict) -> None:
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


def _int_list(text: str, n: int, flag: str) -> List[int]:
    parts = text.split(",")
    if len(parts) != n:
        raise _UsageError(f"{flag} expects {n} comma-separated integers, got {text!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise _UsageError(f"{flag} expects integers, got {text!r}")


def _float_pair(text: str, flag: str) -> List[float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise _UsageError(f"{flag} expects lo,hi, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise _UsageError(f"{flag} expects numbers, got {text!r}")


def _load_json(args) -> dict:
    given = [s for s in (args.json, args.file) if s is not None]
    if len(given) != 1:
        raise _UsageError("provide exactly one of --json or --file")
    text = args.json if args.json is not None else None
    if text is None:
        try:
            with open(args.file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _UsageError(f"cannot read {args.file}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _UsageError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        )


def _gaussian_params(args) -> GaussianParams:
    try:
        return GaussianParams.from_json_dict(_load_json(args))
    except (ValueError, KeyError, TypeError) as exc:
        raise _UsageError(f"bad channel JSON: {exc}")


def _ldc_params(args) -> LdcParams:
    n = _int_list(args.n, 4, "--n")
    k = _int_list(args.k, 2, "--k")
    try:
        return LdcParams(n[0], n[1], n[2], n[3], k[0], k[1])
    except ValueError as exc:
        raise _UsageError(str(exc))


def _emit_region(region: Region2D, fmt: str) -> None:
    if fmt == "json":
        _out(json.dumps(region.to_json_dict(), sort_keys=True))
    elif fmt == "vertices":
        _out("\n".join(f"{_scalar_str(x)},{_scalar_str(y)}" for x, y in region.vertices))
    else:
        lines = ["name,a1,a2,rhs"]
        for row in region.inequalities:
            lines.append(
                f"{row.name},{_scalar_str(row.coeff('R1'))},"
                f"{_scalar_str(row.coeff('R2'))},{_scalar_str(row.rhs)}"
            )
        _out("\n".join(lines))


def _emit_claims(report: ClaimsReport, fmt: str) -> None:
    if fmt == "json":
        _out(json.dumps(report.to_json_dict(), sort_keys=True))
    else:
        lines = ["name,slack,passed"]
        for e in report.entries:
            lines.append(f"{e.name},{_scalar_str(e.slack)},{int(e.passed)}")
        _out("\n".join(lines))


def _emit_system(system: HalfspaceSystem, fmt: str) -> None:
    if fmt == "json":
        _out(json.dumps(system.to_json_dict(), sort_keys=True))
    else:
        head = ["name", "rhs"] + list(system.variables)
        lines = [",".join(head)]
        for row in system.inequalities:
            cells = [row.name, _scalar_str(row.rhs)]
            cells += [_scalar_str(row.coeff(v)) for v in system.variables]
            lines.append(",".join(cells))
        _out("\n".join(lines))


def _cmd_ldc_region(args) -> int:
    region = capacity_region(_ldc_params(args))
    _emit_region(region, args.format)
    return EXIT_OK


def _cmd_ldc_verify(args) -> int:
    p = _ldc_params(args)
    lemmas_ok = verify_lemmas_1_2(p)
    claims = check_ldc_claims(p)
    rank_ok = rank_independence_check(p)
    ok = lemmas_ok and claims.all_pass and rank_ok
    if args.format == "json":
        _out(json.dumps({
            "params": p.to_json_dict(),
            "lemmas_1_2_ok": lemmas_ok,
            "rank_independence_ok": rank_ok,
            "claims": claims.to_json_dict(),
            "all_ok": ok,
        }, sort_keys=True))
    else:
        _emit_claims(claims, args.format)
    if not ok:
        _diag({"error": "check_failed", "lemmas_1_2_ok": lemmas_ok,
               "rank_independence_ok": rank_ok,
               "failed_claims": [e.name for e in claims.entries if not e.passed]})
        return EXIT_CHECK
    return EXIT_OK


def _cmd_ldc_scheme_search(args) -> int:
    p = _ldc_params(args)
    r1, r2 = _int_list(args.rate, 2, "--rate")
    scheme = scheme_search(p, r1, r2, budget=args.trials, seed=args.seed)
    found = scheme is not None
    verified = bool(found and scheme_verify(p, scheme, r1, r2))
    payload = {
        "params": p.to_json_dict(),
        "rate": [r1, r2],
        "trials": args.trials,
        "seed": args.seed,
        "found": found,
        "verified": verified,
        "scheme": scheme.to_json_dict() if found else None,
    }
    if args.format == "json":
        _out(json.dumps(payload, sort_keys=True))
    else:
        lines = ["found,verified"]
        lines.append(f"{int(found)},{int(verified)}")
        _out("\n".join(lines))
    if not found or not verified:
        _diag({"error": "check_failed",
               "detail": "no verifying scheme found" if not found else "scheme failed verification"})
        return EXIT_CHECK
    return EXIT_OK


def _cmd_gauss_outer(args) -> int:
    _emit_region(outer_region(_gaussian_params(args)), args.format)
    return EXIT_OK


def _cmd_gauss_inner(args) -> int:
    _emit_region(inner_region(_gaussian_params(args)), args.format)
    return EXIT_OK


def _cmd_gauss_gap(args) -> int:
    p = _gaussian_params(args)
    gap = per_user_gap(outer_region(p), inner_region(p))
    within = gap.tau <= GAP_BITS + args.gap_tol
    if args.format == "json":
        payload = gap.to_json_dict()
        payload["budget_bits"] = GAP_BITS
        payload["within_budget"] = within
        _out(json.dumps(payload, sort_keys=True))
    else:
        wx, wy = gap.witness if gap.witness is not None else ("", "")
        _out("tau,witness_r1,witness_r2,budget_bits,within_budget\n"
             f"{gap.tau!r},{wx!r},{wy!r},{GAP_BITS!r},{int(within)}")
    if not within:
        _diag({"error": "check_failed", "tau": gap.tau, "budget_bits": GAP_BITS})
        return EXIT_CHECK
    return EXIT_OK


def _cmd_gauss_claims(args) -> int:
    p = _gaussian_params(args)
    claims = check_gaussian_claims(p, args.tol)
    budgets = per_bound_gap_check(p, args.gap_tol)
    merged = ClaimsReport(claims.entries + budgets.entries)
    _emit_claims(merged, args.format)
    if not merged.all_pass:
        _diag({"error": "check_failed",
               "failed_claims": [e.name for e in merged.entries if not e.passed]})
        return EXIT_CHECK
    return EXIT_OK


def _cmd_fme(args) -> int:
    data = _load_json(args)
    try:
        system = HalfspaceSystem.from_json_dict(data)
    except (ValueError, KeyError, TypeError) as exc:
        raise _UsageError(f"bad system JSON: {exc}")
    if args.eliminate is not None and args.keep is not None:
        raise _UsageError("provide at most one of --keep and --eliminate")
    if args.eliminate is not None:
        for var in args.eliminate.split(","):
            var = var.strip()
            if var not in system.variables:
                raise _UsageError(f"unknown variable {var!r}")
            system = fme_eliminate(system, var)
        _emit_system(system, args.format)
        return EXIT_OK
    keep = tuple(v.strip() for v in (args.keep or "R1,R2").split(","))
    if len(keep) != 2:
        raise _UsageError("--keep expects exactly two variables")
    for var in keep:
        if var not in system.variables:
            raise _UsageError(f"unknown variable {var!r}")
    _emit_region(project_to_rates(system, keep), args.format)
    return EXIT_OK


def _cmd_reciprocity(args) -> int:
    p = _gaussian_params(args)
    report = reciprocity_report(p)
    if args.format == "json":
        _out(json.dumps(report, sort_keys=True))
    else:
        claims = check_reciprocity_claims(p, args.tol)
        _emit_claims(claims, args.format)
    reverse_tau = report["reverse"]["tau"]
    reverse_ok = isinstance(reverse_tau, float) and reverse_tau <= TAU_RECIPROCAL + args.gap_tol
    claims_ok = report["claims"]["all_pass"]
    if report["findings"]["forward_exceeds_tol"]:
        _diag({"finding": "forward_containment_gap",
               "tau": report["forward"]["tau"],
               "rx_tighter_rows": report["findings"]["rx_tighter_rows"]})
    if not (reverse_ok and claims_ok):
        _diag({"error": "check_failed", "reverse_tau": reverse_tau,
               "budget": TAU_RECIPROCAL, "claims_pass": claims_ok})
        return EXIT_CHECK
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        cfg = SweepConfig(
            mode=args.mode,
            count=args.count,
            seed=args.seed,
            gain_db=tuple(_float_pair(args.gain_db, "--gain-db")),
            cb_range=tuple(_float_pair(args.cb, "--cb")),
            n_max=args.n_max,
            k_max=args.k_max,
            claim_tol=args.tol,
            gap_tol=args.gap_tol,
        )
    except ValueError as exc:
        raise _UsageError(str(exc))
    start = time.perf_counter()
    summary = run_sweep(cfg, args.out)
    elapsed = time.perf_counter() - start
    if args.format == "json":
        _out(summary_json(summary))
    else:
        d = summary.to_json_dict()
        lines = ["key,value"]
        for key in sorted(d):
            lines.append(f"{key},{json.dumps(d[key], sort_keys=True)}")
        _out("\n".join(lines))
    sys.stderr.write(f"sweep: {cfg.count} samples in {elapsed:.2f}s\n")
    if summary.failures:
        _diag({"error": "check_failed", "failures": len(summary.failures),
               "first": list(summary.failures[:5])})
        return EXIT_CHECK
    return EXIT_OK


def _add_format(parser, extra=()) -> None:
    parser.add_argument("--format", choices=("json", "csv") + tuple(extra),
                        default="json", help="output format on stdout")


def _add_gaussian_input(parser) -> None:
    parser.add_argument("--json", help="channel JSON literal")
    parser.add_argument("--file", help="path to channel JSON")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="icbounds",
        description="Capacity-region bounds for the interference channel "
                    "with conferencing transmitters.",
    )
    sub = top.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("ldc-region", help="deterministic-channel capacity region")
    p.add_argument("--n", required=True, help="n11,n12,n21,n22")
    p.add_argument("--k", default="0,0", help="k12,k21")
    _add_format(p, ("vertices",))
    p.set_defaults(func=_cmd_ldc_region)

    p = sub.add_parser("ldc-verify",
                       help="projection proof plus exact claim checks for one channel")
    p.add_argument("--n", required=True, help="n11,n12,n21,n22")
    p.add_argument("--k", default="0,0", help="k12,k21")
    _add_format(p)
    p.set_defaults(func=_cmd_ldc_verify)

    p = sub.add_parser("ldc-scheme-search",
                       help="randomized search for a verifying one-shot scheme")
    p.add_argument("--n", required=True, help="n11,n12,n21,n22")
    p.add_argument("--k", default="0,0", help="k12,k21")
    p.add_argument("--rate", required=True, help="r1,r2 target rate point")
    p.add_argument("--trials", type=int, default=1000000, help="search budget")
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=_cmd_ldc_scheme_search)

    p = sub.add_parser("gauss-outer", help="Gaussian outer bound region")
    _add_gaussian_input(p)
    _add_format(p, ("vertices",))
    p.set_defaults(func=_cmd_gauss_outer)

    p = sub.add_parser("gauss-inner", help="Gaussian achievable region")
    _add_gaussian_input(p)
    _add_format(p, ("vertices",))
    p.set_defaults(func=_cmd_gauss_inner)

    p = sub.add_parser("gauss-gap", help="per-user gap between outer and inner")
    _add_gaussian_input(p)
    p.add_argument("--gap-tol", type=float, default=1e-6)
    _add_format(p)
    p.set_defaults(func=_cmd_gauss_gap)

    p = sub.add_parser("gauss-claims", help="numeric claim and budget checks")
    _add_gaussian_input(p)
    p.add_argument("--tol", type=float, default=1e-9, help="claim slack tolerance")
    p.add_argument("--gap-tol", type=float, default=1e-6, help="budget tolerance")
    _add_format(p)
    p.set_defaults(func=_cmd_gauss_claims)

    p = sub.add_parser("fme", help="project or eliminate variables of a system")
    _add_gaussian_input(p)
    p.add_argument("--keep", help="two variables to project onto (default R1,R2)")
    p.add_argument("--eliminate", help="comma-separated variables to eliminate in order")
    _add_format(p, ("vertices",))
    p.set_defaults(func=_cmd_fme)

    p = sub.add_parser("reciprocity",
                       help="transmitter- vs receiver-conferencing bound comparison")
    _add_gaussian_input(p)
    p.add_argument("--tol", type=float, default=1e-9, help="claim slack tolerance")
    p.add_argument("--gap-tol", type=float, default=1e-6)
    _add_format(p)
    p.set_defaults(func=_cmd_reciprocity)

    p = sub.add_parser("sweep", help="seeded random sweep with per-sample CSV")
    p.add_argument("--mode", choices=MODES, default="gaussian")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="per-sample CSV path")
    p.add_argument("--gain-db", default="0,60", help="gain range in dB")
    p.add_argument("--cb", default="0,10", help="conference capacity range in bits")
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--tol", type=float, default=1e-9, help="claim slack tolerance")
    p.add_argument("--gap-tol", type=float, default=1e-6)
    _add_format(p)
    p.set_defaults(func=_cmd_sweep)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
