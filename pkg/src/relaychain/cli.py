"""Command-line front end: ``relaychain {rates,sweep,optimize,validate}``.

Exit codes: 0 success, 1 validation-check failure, 2 bad arguments,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict

from . import kernels
from .chain import ChainParams, QuantLevels, db_to_power, is_scenario, scenario_params, validate
from .concat import concat_gap, concat_rate, optimal_q1
from .cutset import cutset_bound
from .errors import RelayChainError
from .montecarlo import validate_regression
from .nnc import nnc_gaps, nnc_rates_closed, nnc_rates_generic
from .optimize import GridSpec, optimize_quant

SWEEP_HEADER = ["rho12", "cutset_min", "nnc_r1", "nnc_r2", "nnc_r3", "nnc_min",
                "concat_rate", "concat_gap", "nnc_gap"]

EXIT_OK, EXIT_CHECK, EXIT_ARGS, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    """12 significant digits; infinities as ``inf``/``-inf``."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"  # collapse -0.0
    return format(x, ".12g")


def _json_num(x: float):
    return fmt(x) if math.isinf(x) else x


def _add_param_flags(ap: argparse.ArgumentParser) -> None:
    g = ap.add_argument_group("channel")
    h1 = g.add_mutually_exclusive_group()
    h1.add_argument("--h1-sq-db", type=float, help="h1^2 in dB (20 means h1^2 = 100)")
    h1.add_argument("--h1-sq", type=float, help="h1^2 (linear power gain)")
    h1.add_argument("--h1", type=float, help="h1 (amplitude gain)")
    for k in (2, 3):
        hk = g.add_mutually_exclusive_group()
        hk.add_argument(f"--h{k}-sq-db", type=float)
        hk.add_argument(f"--h{k}-sq", type=float)
        hk.add_argument(f"--h{k}", type=float)
    g.add_argument("--rho12", type=float, default=0.0)
    g.add_argument("--rho13", type=float, default=0.0)
    g.add_argument("--rho23", type=float, default=0.0)
    g.add_argument("--scenario", action="store_true",
                   help="set rho13 = rho23 = 0 and h2^2 = h3^2 = h1^2 / (1 - rho12^2)")


def _gain_sq(args, k: int, default: float | None = 1.0) -> float | None:
    db = getattr(args, f"h{k}_sq_db")
    sq = getattr(args, f"h{k}_sq")
    amp = getattr(args, f"h{k}")
    if db is not None:
        return db_to_power(db)
    if sq is not None:
        if sq < 0:
            raise UsageError(f"--h{k}-sq must be non-negative")
        return sq
    if amp is not None:
        return amp * amp
    return default


def params_from_args(args) -> ChainParams:
    h1_sq = _gain_sq(args, 1)
    rho = args.rho12
    if not abs(rho) <= 1.0:
        raise UsageError(f"correlation out of range: |rho12| = {abs(rho)} > 1")
    if args.scenario:
        if abs(rho) >= 1.0:
            raise UsageError("--scenario needs |rho12| < 1")
        if not h1_sq > 0:
            raise UsageError("--scenario needs h1^2 > 0")
        return scenario_params(h1_sq, rho)
    p = ChainParams.from_powers(h1_sq, _gain_sq(args, 2), _gain_sq(args, 3),
                                rho, args.rho13, args.rho23)
    msg = validate(p)
    if msg is not None:
        raise UsageError(msg)
    return p


def _quant_from_args(args) -> QuantLevels:
    q1 = args.q1 if args.q1 is not None else 1.0
    q2 = args.q2 if args.q2 is not None else 1.0
    if not (q1 > 0 and q2 > 0):
        raise UsageError("quantization levels must be positive")
    return QuantLevels(q1, q2)


def rates_report(p: ChainParams, q: QuantLevels, concat_q1: float | None = None) -> dict:
    """Single-point report: cut-set bounds, NNC rates (both routes), gaps, concatenation."""
    cb = cutset_bound(p)
    closed = nnc_rates_closed(p, q)
    generic = nnc_rates_generic(p, q)
    gaps = nnc_gaps(p, q)
    rep = {
        "params": asdict(p),
        "quant": asdict(q),
        "cutset": {"c1": cb.c1, "c2": cb.c2, "c3": cb.c3, "c4": cb.c4,
                   "c_min": cb.c_min, "divergent": cb.divergent},
        "nnc_closed": {"r1": closed.r1, "r2": closed.r2, "r3": closed.r3,
                       "r_min": closed.r_min, "r_min_clamped": closed.r_min_clamped},
        "nnc_generic": {"r1": generic.r1, "r2": generic.r2, "r3": generic.r3,
                        "r_min": generic.r_min, "r_min_clamped": generic.r_min_clamped},
        "nnc_max_discrepancy": max(abs(a - b) for a, b in
                                   zip(closed.as_tuple(), generic.as_tuple())),
        "nnc_gaps": {"d1": gaps.d1, "d2": gaps.d2, "d3": gaps.d3, "d_max": gaps.d_max},
        "concat": None,
    }
    if is_scenario(p) and abs(p.rho12) < 1.0:
        cq = concat_q1 if concat_q1 is not None else optimal_q1(p.rho12)
        cr = concat_rate(p, cq)
        rep["concat"] = {"rate": cr.rate, "q1": cr.q1, "q1_star": cr.q1_star,
                         "stage1_terms": list(cr.stage1_terms), "stage2_term": cr.stage2_term,
                         "gap_bound": cr.gap_bound, "gap": concat_gap(p, cq)}
    return rep


def _clean(obj):
    if isinstance(obj, float):
        return _json_num(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            for i, x in enumerate(v):
                out[f"{key}.{i}"] = x
        elif v is not None:
            out[key] = v
    return out


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", newline="") as fh:
        fh.write(text)


def cmd_rates(args) -> int:
    p = params_from_args(args)
    q = _quant_from_args(args)
    if args.concat_q1 is not None and not args.concat_q1 > 0:
        raise UsageError("--concat-q1 must be positive")
    rep = rates_report(p, q, args.concat_q1)
    if args.format == "json":
        text = json.dumps(_clean(rep), indent=2) + "\n"
    else:
        flat = _flatten(rep)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(fmt(v) if isinstance(v, float) else v for v in flat.values())
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def parse_q_policy(text: str):
    if text in ("fig2", "optimized"):
        return text, None
    if text.startswith("fixed:"):
        try:
            q1, q2 = (float(v) for v in text[len("fixed:"):].split(","))
        except ValueError:
            raise UsageError(f"bad q-policy {text!r}; expected fixed:Q1,Q2") from None
        if not (q1 > 0 and q2 > 0):
            raise UsageError("fixed quantization levels must be positive")
        return "fixed", QuantLevels(q1, q2)
    raise UsageError(f"unknown q-policy {text!r}")


def sweep_rho(lo: float, hi: float, steps: int) -> list[float]:
    """``steps`` uniformly spaced points from lo to hi inclusive.

    Written as a convex combination so symmetric ranges give exact 0 at the
    midpoint and mirror-image values at mirrored indices.
    """
    n = steps - 1
    return [(lo * (n - i) + hi * i) / n for i in range(steps)]


def sweep_row(h1_sq: float, rho: float, policy: str, fixed: QuantLevels | None,
              grid: GridSpec | None = None) -> list[float]:
    p = scenario_params(h1_sq, rho)
    if policy == "fig2":
        q = QuantLevels(optimal_q1(rho), 1.0)
    elif policy == "fixed":
        q = fixed
    else:
        res = optimize_quant(p, grid)
        q = QuantLevels(res.q1_opt, res.q2_opt)
    cb = cutset_bound(p)
    r = nnc_rates_closed(p, q)
    cr = concat_rate(p, optimal_q1(rho))
    return [rho, cb.c_min, r.r1, r.r2, r.r3, r.r_min, cr.rate,
            cb.c_min - cr.rate, cb.c_min - r.r_min]


def sweep_table(h1_sq: float, rho_min: float, rho_max: float, steps: int,
                policy: str = "fig2", fixed: QuantLevels | None = None) -> list[list[float]]:
    if not (-1.0 < rho_min < rho_max < 1.0):
        raise UsageError("need -1 < rho-min < rho-max < 1")
    if steps < 2:
        raise UsageError("steps must be >= 2")
    if not h1_sq > 0:
        raise UsageError("h1^2 must be positive")
    return [sweep_row(h1_sq, rho, policy, fixed) for rho in sweep_rho(rho_min, rho_max, steps)]


def sweep_csv(rows: list[list[float]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for row in rows:
        w.writerow(fmt(v) for v in row)
    return buf.getvalue()


def cmd_sweep(args) -> int:
    h1_sq = db_to_power(args.h1_sq_db) if args.h1_sq_db is not None else args.h1_sq
    policy, fixed = parse_q_policy(args.q_policy)
    rows = sweep_table(h1_sq, args.rho_min, args.rho_max, args.steps, policy, fixed)
    _emit(sweep_csv(rows), args.out)
    print(f"sweep: {len(rows)} rows, h1^2={h1_sq:g}, q-policy={args.q_policy}, "
          f"backend={kernels.BACKEND}", file=sys.stderr)
    return EXIT_OK


def cmd_optimize(args) -> int:
    p = params_from_args(args)
    grid = GridSpec(args.q_lo, args.q_hi, args.points_per_decade)
    res = optimize_quant(p, grid)
    doc = {"params": asdict(p), "grid": asdict(grid), "result": asdict(res)}
    _emit(json.dumps(_clean(doc), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    if args.n_samples < 10**4:
        raise UsageError("--n-samples must be at least 10000")
    checks = validate_regression(args.n_samples, args.seed, args.workers)
    lines = [f"{'pt':>2} {'term':<15} {'closed':>12} {'mc':>12} {'|err|':>10} {'tol':>10} result"]
    for c in checks:
        lines.append(f"{c.point:>2} {c.term:<15} {c.closed:>12.6f} {c.estimate.value:>12.6f} "
                     f"{c.error:>10.2e} {c.tolerance:>10.2e} {'PASS' if c.passed else 'FAIL'}")
    n_fail = sum(not c.passed for c in checks)
    lines.append(f"{len(checks) - n_fail}/{len(checks)} terms within tolerance "
                 f"(n={args.n_samples}, seed={args.seed})")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if n_fail == 0 else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relaychain",
                                 description="Rate analysis for the four-node Gaussian relay chain.")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("rates", help="evaluate bounds and rates at one parameter point")
    _add_param_flags(r)
    r.add_argument("--q1", type=float)
    r.add_argument("--q2", type=float)
    r.add_argument("--concat-q1", type=float,
                   help="quantization level for the concatenated scheme (default 1 - rho12^2)")
    r.add_argument("--format", choices=["json", "csv"], default="json")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rates)

    s = sub.add_parser("sweep", help="sweep rho12 under the symmetric scenario, write CSV")
    hs = s.add_mutually_exclusive_group()
    hs.add_argument("--h1-sq-db", type=float)
    hs.add_argument("--h1-sq", type=float)
    s.set_defaults(h1_sq_db=20.0)
    s.add_argument("--rho-min", type=float, default=-0.99)
    s.add_argument("--rho-max", type=float, default=0.99)
    s.add_argument("--steps", type=int, default=199)
    s.add_argument("--q-policy", default="fig2",
                   help="fig2 (q1 = 1 - rho12^2, q2 = 1), optimized, or fixed:Q1,Q2")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    o = sub.add_parser("optimize", help="maximize the min-cut NNC rate over (q1, q2)")
    _add_param_flags(o)
    o.add_argument("--q-lo", type=float, default=1e-4)
    o.add_argument("--q-hi", type=float, default=1e4)
    o.add_argument("--points-per-decade", type=int, default=8)
    o.add_argument("--out")
    o.set_defaults(func=cmd_optimize)

    v = sub.add_parser("validate", help="Monte Carlo check of all closed-form terms")
    v.add_argument("--n-samples", type=int, default=10**6)
    v.add_argument("--seed", type=int, default=20240601)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_validate)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "sweep" and args.h1_sq is not None:
        args.h1_sq_db = None
    try:
        return args.func(args)
    except (UsageError, RelayChainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
