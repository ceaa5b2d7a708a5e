"""``levy2d`` command line: one JSON report on stdout, a summary on stderr.

Exit codes: 0 success, 2 tolerance/budget failure, 3 verification failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import subprocess
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .geometry import DomainError, Region

EXIT_OK, EXIT_BUDGET, EXIT_VERIFY, EXIT_USAGE = 0, 2, 3, 64
SCHEMA_VERSION = 1
INNER_GAP_TOL = 1e-6
DEFAULT_THETAS = {1: 10_000, 2: 40_000}
DEFAULT_QMAX = {1: 1_000_000, 2: 10_000_000}
# tolerance for the quadrature reference used by the MC comparison
REFERENCE_TOL = 1e-9


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    parameters: dict
    value: float | None
    error: float | None
    samples_or_evals: int
    wall_time_s: float
    git_or_build_id: str
    seed: int | None = None
    status: str = "ok"
    extra: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_json(self) -> str:
        return json.dumps(_plain(asdict(self)), indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _plain(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def build_id() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"], cwd=Path(__file__).resolve().parent,
            capture_output=True, text=True, timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return "git-" + out.stdout.strip()
    except (OSError, subprocess.SubprocessError):
        pass
    return "artifact-" + __version__


def resolve_threads(flag: int | None) -> int:
    if flag:
        return int(flag)
    env = os.environ.get("LEVY_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"LEVY_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _count(text: str) -> int:
    """Positive integer that may be written as 1e8."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v) or v < 1 or v != int(v):
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return int(v)


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="levy2d", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--threads", type=_count, default=None, help="default: $LEVY_THREADS, then all cores")
    common.add_argument("--dump", metavar="PATH", default=None, help="write a CSV side output")

    c = sub.add_parser("compute", parents=[common], help="adaptive quadrature of 3 mu_S and the Levy constant")
    c.add_argument("--tol", type=_positive, default=1e-5, help="absolute error target")
    c.add_argument("--budget", type=_count, default=2000, help="max subdivisions per piece")
    c.add_argument("--region", choices=["I", "II", "III", "all"], action="append", default=None)
    c.add_argument("--a2-min", type=float, default=0.0, help="cut region III to a2 >= a2_min")
    c.add_argument("--literal-x", action="store_true", help="use the uncorrected x denominator")

    m = sub.add_parser("oracle-mc", parents=[common], help="Monte Carlo estimate of 3 mu_S")
    m.add_argument("--samples", type=_count, default=10_000_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--stratified", action="store_true")
    m.add_argument("--b-strata", type=_count, default=4)
    m.add_argument("--block-size", type=_count, default=1_000_000)
    m.add_argument("--audit", type=float, default=0.0, help="fraction of accepted samples checked by lattice enumeration")

    o = sub.add_parser("oracle-inner", parents=[common], help="closed-form inner integral vs direct 2D quadrature")
    o.add_argument("--a1", type=float, required=True)
    o.add_argument("--a2", type=float, required=True)
    o.add_argument("--b", type=float, required=True)
    o.add_argument("--tol", type=_positive, default=1e-10)
    o.add_argument("--literal-x", action="store_true")

    s = sub.add_parser("simulate", parents=[common], help="empirical Levy constant from best approximations")
    s.add_argument("-d", type=int, choices=[1, 2], default=2)
    s.add_argument("--thetas", type=_count, default=None, help="default: 1e4 (d=1), 4e4 (d=2)")
    s.add_argument("--qmax", type=_count, default=None, help="default: 1e6 (d=1), 1e7 (d=2)")
    s.add_argument("--burn-in", type=_count, default=3)
    s.add_argument("--q-min", type=_count, default=10)
    s.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", parents=[common], help="invariant suite")
    v.add_argument("level", choices=["quick", "full"], nargs="?", default="quick")
    v.add_argument("--samples", type=_count, default=None, help="MC samples for the full level (default 1e8)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--literal-x", action="store_true", help="inject the uncorrected x denominator")
    return p


# ----------------------------------------------------------------------------- commands


def cmd_compute(args, threads: int) -> tuple[RunReport, int]:
    from .integrand import BudgetExceededError
    from .quadrature import PRINTED_ZETAS, PUBLISHED_MU_S3, ZetaConstants, integrate_outer, levy_constant

    names = args.region or ["all"]
    regions = tuple(Region) if "all" in names else tuple(Region[n] for n in dict.fromkeys(names))
    status, code = "ok", EXIT_OK
    try:
        res = integrate_outer(args.tol, args.budget, regions, a2_min=args.a2_min,
                              literal_x=args.literal_x or None, workers=min(threads, 6))
    except BudgetExceededError as exc:
        res, status, code = exc.estimate, "budget_exceeded", EXIT_BUDGET
    except DomainError as exc:
        # only reachable with --literal-x: the integrand leaves its domain
        params = {"tol": args.tol, "budget": args.budget, "regions": [r.name for r in regions],
                  "a2_min": args.a2_min, "literal_x": args.literal_x}
        return RunReport("compute", params, None, None, 0, 0.0, "", None, "verification_failed",
                         {"integrand_error": str(exc)}), EXIT_VERIFY
    extra = {"region_breakdown": res.region_breakdown, "region_errors": res.region_errors,
             "max_depth": res.max_depth, "converged": res.converged}
    if len(regions) == len(Region):
        extra.update(
            levy_constant=levy_constant(res.value, ZetaConstants()),
            levy_constant_printed_zetas=levy_constant(res.value, PRINTED_ZETAS),
            published_value=PUBLISHED_MU_S3,
            relative_gap_to_published=(res.value - PUBLISHED_MU_S3) / PUBLISHED_MU_S3,
        )
    if args.dump:
        with open(args.dump, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["region", "value", "error"])
            for k in res.region_breakdown:
                w.writerow([k, repr(res.region_breakdown[k]), repr(res.region_errors[k])])
    params = {"tol": args.tol, "budget": args.budget, "regions": [r.name for r in regions],
              "a2_min": args.a2_min, "literal_x": args.literal_x}
    return RunReport("compute", params, res.value, res.error_estimate, res.evaluations, 0.0, "", None, status, extra), code


def _reference_mu_s3() -> tuple[float, float]:
    from .quadrature import integrate_outer

    res = integrate_outer(REFERENCE_TOL, 10_000)
    return res.value, res.error_estimate


def cmd_oracle_mc(args, threads: int) -> tuple[RunReport, int]:
    from .montecarlo import estimate_mu7, estimate_mu7_stratified

    if args.stratified:
        est = estimate_mu7_stratified(args.samples, args.seed, b_strata=args.b_strata, block_size=args.block_size)
    else:
        est = estimate_mu7(args.samples, args.seed, block_size=args.block_size, audit_fraction=args.audit)
    value, err = 3.0 * est.mean, 3.0 * est.stderr
    ref, ref_err = _reference_mu_s3()
    z = (value - ref) / err if err > 0 else math.inf
    extra = {"mu_s": est.mean, "mu_s_stderr": est.stderr, "accepted": est.accepted, "diagnostics": est.diagnostics,
             "quadrature_value": ref, "quadrature_error": ref_err, "z_vs_quadrature": z,
             "within_3_sigma": abs(z) <= 3.0}
    params = {"samples": args.samples, "stratified": args.stratified, "block_size": args.block_size,
              "b_strata": args.b_strata if args.stratified else None, "audit": args.audit}
    return RunReport("oracle-mc", params, value, err, args.samples, 0.0, "", args.seed, "ok", extra), EXIT_OK


def cmd_oracle_inner(args, threads: int) -> tuple[RunReport, int]:
    from . import fundamental_domain as fd
    from .integrand import inner_integrand, inner_oracle

    a = complex(args.a1, args.a2)
    region = fd._check_inputs(a, args.b)[1]
    oracle = inner_oracle(a, args.b, args.tol)
    try:
        closed = inner_integrand(a, args.b, literal_x=args.literal_x or None)
    except DomainError as exc:
        closed, note = math.nan, str(exc)
    else:
        note = None
    gap = abs(closed - oracle) / abs(oracle) if math.isfinite(closed) else math.inf
    ok = gap < INNER_GAP_TOL
    if args.dump:
        F = fd.build_F(a, args.b)
        with open(args.dump, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y"])
            for x, y in F.vertices():
                w.writerow([repr(float(x)), repr(float(y))])
    extra = {"closed_form": closed, "oracle": oracle, "relative_gap": gap, "region": region.name,
             "area": 1.0 - args.a1 * args.b, "gap_below_tolerance": ok}
    if note:
        extra["closed_form_error"] = note
    params = {"a1": args.a1, "a2": args.a2, "b": args.b, "tol": args.tol, "literal_x": args.literal_x}
    status = "ok" if ok else "verification_failed"
    return RunReport("oracle-inner", params, closed, gap, 0, 0.0, "", None, status, extra), (EXIT_OK if ok else EXIT_VERIFY)


def cmd_simulate(args, threads: int) -> tuple[RunReport, int]:
    from .diophantine import LEVY_1D, dump_records, levy_estimate
    from .quadrature import PRINTED_ZETAS, PUBLISHED_LEVY, ZetaConstants, levy_constant

    thetas = args.thetas or DEFAULT_THETAS[args.d]
    qmax = args.qmax or DEFAULT_QMAX[args.d]
    if not args.q_min < qmax:
        raise UsageError("--q-min must be below --qmax")
    est, th = levy_estimate(args.d, thetas, qmax, args.burn_in, args.seed, q_min=args.q_min,
                            threads=threads, return_thetas=True)
    if args.d == 1:
        candidates = {"one_dimensional_closed_form": LEVY_1D}
    else:
        ref, _ = _reference_mu_s3()
        candidates = {
            "published": PUBLISHED_LEVY,
            "corrected_zeta": levy_constant(ref, ZetaConstants()),
            "printed_zeta_recomputed": levy_constant(ref, PRINTED_ZETAS),
        }
    dist = {k: (est.mean - v) / est.stderr for k, v in candidates.items()}
    within = sorted(k for k, z in dist.items() if abs(z) <= 3.0)
    extra = {"estimate": est.as_dict(), "candidates": candidates, "standardized_distance": dist,
             "within_3_sigma": within, "relative_stderr": est.stderr / est.mean,
             "relative_error_vs_candidates": {k: (est.mean - v) / v for k, v in candidates.items()}}
    if args.dump:
        dump_records(args.dump, th, qmax)
    params = {"d": args.d, "thetas": thetas, "qmax": qmax, "burn_in": args.burn_in, "q_min": args.q_min,
              "threads": threads}
    return RunReport("simulate", params, est.mean, est.stderr, thetas, 0.0, "", args.seed, "ok", extra), EXIT_OK


def cmd_verify(args, threads: int) -> tuple[RunReport, int]:
    from . import verification as V

    lx = args.literal_x or None
    checks = V.quick_checks(lx) if args.level == "quick" else V.full_checks(lx)
    results = []
    for fn in checks:
        try:
            r = fn()
        except Exception as exc:  # a crash is a failure, never a skip
            r = V.Check(getattr(fn, "__name__", "check"), False, {"exception": f"{type(exc).__name__}: {exc}"})
        results.append(r)
        print(r.line(), file=sys.stderr)
    samples = 0
    if args.level == "full":
        samples = args.samples or 100_000_000
        t0 = time.perf_counter()
        mc_args = argparse.Namespace(samples=samples, seed=args.seed, stratified=False, block_size=1_000_000,
                                     b_strata=4, audit=0.0)
        rep, _ = cmd_oracle_mc(mc_args, threads)
        x = rep.extra
        r = V.Check("mc_vs_quadrature", bool(x["within_3_sigma"]),
                    {"mc": rep.value, "stderr": rep.error, "quadrature": x["quadrature_value"],
                     "z": x["z_vs_quadrature"]}, seconds=time.perf_counter() - t0)
        results.append(r)
        print(r.line(), file=sys.stderr)
    gating = [r for r in results if r.gating]
    failed = [r.name for r in gating if not r.passed]
    extra = {"checks": [asdict(r) for r in results], "failed": failed,
             "findings": [r.name for r in results if not r.gating and not r.passed]}
    ok = not failed
    params = {"level": args.level, "literal_x": args.literal_x, "mc_samples": samples or None}
    rep = RunReport("verify", params, float(sum(r.passed for r in gating)), float(len(failed)), samples, 0.0, "",
                    args.seed if args.level == "full" else None, "ok" if ok else "verification_failed", extra)
    return rep, (EXIT_OK if ok else EXIT_VERIFY)


COMMANDS = {
    "compute": cmd_compute,
    "oracle-mc": cmd_oracle_mc,
    "oracle-inner": cmd_oracle_inner,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def _summary(rep: RunReport) -> str:
    parts = [f"{rep.command}: value={rep.value!r} error={rep.error!r}", f"status={rep.status}",
             f"{rep.wall_time_s:.2f}s"]
    x = rep.extra
    if "levy_constant" in x:
        parts.append(f"K={x['levy_constant']!r} (printed zeta numerals: {x['levy_constant_printed_zetas']!r})")
    if "z_vs_quadrature" in x:
        parts.append(f"z={x['z_vs_quadrature']:.3f} vs quadrature")
    if "standardized_distance" in x:
        parts.append("z: " + ", ".join(f"{k}={v:+.2f}" for k, v in x["standardized_distance"].items()))
        parts.append(f"within 3 sigma of: {', '.join(x['within_3_sigma']) or 'none'}")
    return " | ".join(parts)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = resolve_threads(getattr(args, "threads", None))
        t0 = time.perf_counter()
        rep, code = COMMANDS[args.command](args, threads)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"levy2d {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep.wall_time_s = time.perf_counter() - t0
    rep.git_or_build_id = build_id()
    print(rep.to_json())
    print(_summary(rep), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
