"""Command line interface: evolve, scan, canon, stats, bounds, simulate.

Every subcommand is deterministic given its full flag set (including --seed),
writes data to stdout (or --out) and diagnostics to stderr, and exits 0 only
on success.  CSV floats are printed with 12 significant digits; JSON output
validates against schemas/cli_output.schema.json shipped with the package.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from . import distribution as dist_mod
from .canonical import SequenceClass, canonicalize, decompose_blocks
from .process import (
    IncrementDistribution,
    format_digits,
    parse_digits,
    validate_params,
    value_of,
)
from .stats import exhaustive_expectations, monte_carlo_frequencies

__all__ = ["build_parser", "main", "run"]

#: tvd thresholds whose first crossing the scan subcommand records
SCAN_THRESHOLDS = (0.75, 0.5, 0.25, 0.05)

#: moduli above this cannot be simulated with int64 arithmetic
SIMULATE_MAX_MODULUS = 1 << 61

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _workers() -> int:
    raw = os.environ.get("CDG_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _fmt(x: float) -> str:
    return "%.12g" % x


def _parse_dist(text: str) -> IncrementDistribution:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--dist needs three comma separated values, got {text!r}")
    vals = []
    for part in parts:
        part = part.strip()
        if "/" in part:
            num, den = part.split("/", 1)
            vals.append(float(num) / float(den))
        else:
            vals.append(float(part))
    return IncrementDistribution(*vals)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_json(obj: dict, out: str | None) -> None:
    _emit(json.dumps(obj, indent=2) + "\n", out)


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# ----------------------------------------------------------------- evolve

def cmd_evolve(args) -> int:
    params = validate_params(args.p, 2, _parse_dist(args.dist))
    max_p = args.max_p_override or dist_mod.DEFAULT_MAX_MODULUS
    _, rows = dist_mod.evolve_with_trace(params, args.steps, args.delta, max_p)
    if args.format == "csv":
        lines = ["step,tvd,entropy_bits,support,typical99"]
        lines += [
            f"{r.step},{_fmt(r.tvd)},{_fmt(r.entropy_bits)},{r.support},{r.typical}"
            for r in rows
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json(
            {
                "command": "evolve",
                "p": params.modulus,
                "steps": args.steps,
                "dist": list(params.increments.as_tuple()),
                "delta": args.delta,
                "trace": [
                    {
                        "step": r.step,
                        "tvd": r.tvd,
                        "entropy_bits": r.entropy_bits,
                        "support": r.support,
                        "typical99": r.typical,
                    }
                    for r in rows
                ],
            },
            args.out,
        )
    return 0


# ------------------------------------------------------------------- scan

def _scan_moduli(args) -> list[int]:
    if args.primes:
        moduli = []
        for part in args.primes.split(","):
            p = int(part.strip())
            if p < 3 or p % 2 == 0:
                raise ValueError(f"scan modulus {p} must be an odd integer >= 3")
            if not is_prime(p):
                _warn(f"NonPrimeInput: {p} is composite")
                if not args.allow_composite:
                    _warn(f"skipping {p} (use --allow-composite to keep it)")
                    continue
            moduli.append(p)
        return moduli
    if args.p_min is None or args.p_max is None:
        raise ValueError("scan needs either --primes or both --p-min and --p-max")
    lo, hi = max(3, args.p_min), args.p_max
    out = []
    for p in range(lo | 1, hi + 1, 2):
        if args.allow_composite or is_prime(p):
            out.append(p)
    return out


def _scan_row(p: int, dist: IncrementDistribution, max_p: int, cap: int | None) -> dict:
    params = validate_params(p, 2, dist)
    if p > max_p:
        raise dist_mod.ModulusTooLargeError(
            f"modulus {p} exceeds guard {max_p}; raise --max-p-override"
        )
    limit = cap if cap else 4 * math.ceil(math.log2(p)) + 64
    vec = dist_mod.initial_dist(p, max_p)
    perm = dist_mod._doubling_permutation(p, params.multiplier)
    crossings: dict[float, int | None] = {t: None for t in SCAN_THRESHOLDS}
    n = 0
    while any(v is None for v in crossings.values()) and n < limit:
        vec = dist_mod._apply_step(vec, params, perm)
        n += 1
        tvd = dist_mod.tvd_uniform(vec)
        for t in SCAN_THRESHOLDS:
            if crossings[t] is None and tvd < t:
                crossings[t] = n
    return {
        "p": p,
        "log2_p": math.log2(p),
        "cross_075": crossings[0.75],
        "cross_050": crossings[0.5],
        "cross_025": crossings[0.25],
        "cross_005": crossings[0.05],
        "pred_support": bounds_mod.predict_threshold(p, "support"),
        "pred_c1_basic": bounds_mod.predict_threshold(p, "c1_basic"),
        "pred_c1_refined": bounds_mod.predict_threshold(p, "c1_refined"),
        "pred_c_hat": bounds_mod.predict_threshold(p, "c_hat"),
    }


_SCAN_COLUMNS = (
    "p",
    "log2_p",
    "cross_075",
    "cross_050",
    "cross_025",
    "cross_005",
    "pred_support",
    "pred_c1_basic",
    "pred_c1_refined",
    "pred_c_hat",
)


def cmd_scan(args) -> int:
    dist = _parse_dist(args.dist)
    max_p = args.max_p_override or dist_mod.DEFAULT_MAX_MODULUS
    rows = [_scan_row(p, dist, max_p, args.steps) for p in _scan_moduli(args)]
    if args.format == "csv":
        lines = [",".join(_SCAN_COLUMNS)]
        for row in rows:
            cells = []
            for col in _SCAN_COLUMNS:
                v = row[col]
                if v is None:
                    cells.append("")
                elif isinstance(v, float):
                    cells.append(_fmt(v))
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json({"command": "scan", "rows": rows}, args.out)
    return 0


# ------------------------------------------------------------------- canon

def cmd_canon(args) -> int:
    digits = parse_digits(args.digits)
    form = canonicalize(digits)
    cls = form.sequence_class
    payload = {
        "command": "canon",
        "input": format_digits(digits),
        "class": cls.value,
        "value": value_of(digits),
        "canonical": format_digits(form.digits),
        "leading_zeros": None,
        "blocks": None,
        "start_positions": None,
        "last_block_partial": None,
        "block_source": None,
    }
    if cls is not SequenceClass.ALL_ZERO:
        source = digits if cls is SequenceClass.FIRST_ONE else -digits
        dec = decompose_blocks(source)
        payload.update(
            leading_zeros=dec.leading_zeros,
            blocks=[format_digits(b) for b in dec.blocks],
            start_positions=list(dec.start_positions),
            last_block_partial=dec.last_is_partial,
            block_source="input" if cls is SequenceClass.FIRST_ONE else "negated_input",
        )
    _emit_json(payload, args.out)
    return 0


# ------------------------------------------------------------------- stats

def cmd_stats(args) -> int:
    if args.mode == "exhaustive":
        cls = SequenceClass(args.cls)
        report = exhaustive_expectations(args.n, cls, workers=_workers())
    else:
        params = validate_params(args.p, 2, _parse_dist(args.dist))
        report = monte_carlo_frequencies(
            params, args.n, args.trials, args.seed, workers=_workers()
        )
    if args.format == "csv":
        lines = ["row,col,parity,count,frequency,stderr"]
        d = report.to_dict()
        for key, cell in d["cells"].items():
            row, col, parity = key.split("|")
            err = "" if cell["stderr"] is None else _fmt(cell["stderr"])
            lines.append(
                f"{row},{col},{parity},{cell['count']},{_fmt(cell['frequency'])},{err}"
            )
        _emit("\n".join(lines) + "\n", args.out)
    else:
        payload = {"command": "stats", "seed": args.seed if args.mode == "mc" else None}
        payload.update(report.to_dict())
        _emit_json(payload, args.out)
    return 0


# ------------------------------------------------------------------ bounds

def cmd_bounds(args) -> int:
    consts = bounds_mod.compute_constants()
    payload: dict = {
        "command": "bounds",
        "constants": {
            "c_hat": consts.c_hat,
            "c1_basic": consts.c1_basic,
            "c1_refined": consts.c1_refined,
            "exponent_basic": consts.exponent_basic,
            "exponent_refined": consts.exponent_refined,
        },
        "c2": {"eps": args.eps, "value": bounds_mod.c2_of_eps(args.eps)},
    }
    if args.n is not None:
        n = args.n
        tail = bounds_mod.binomial_tail_count(n, args.eps)
        region_r = bounds_mod.multinomial_region_count(bounds_mod.CountRegion("R", n, args.eps))
        region_s = bounds_mod.multinomial_region_count(bounds_mod.CountRegion("S", n, args.eps))
        stirling = bounds_mod.stirling_upper_bound(n, args.eps)
        payload["counts"] = {
            "n": n,
            "eps": args.eps,
            "binomial_tail": {
                "count": str(tail) if n <= bounds_mod.EXACT_COUNT_MAX_N else None,
                "log2_count": math.log2(tail),
            },
            "region_R": {
                "count": None if region_r.count is None else str(region_r.count),
                "log2_count": region_r.log2_count,
                "method": region_r.method,
            },
            "region_S": {
                "count": None if region_s.count is None else str(region_s.count),
                "log2_count": region_s.log2_count,
                "method": region_s.method,
            },
            "stirling": {
                "exponent": stirling.exponent,
                "log2_bound": stirling.log2_bound,
                "prefactor_degree": stirling.prefactor_degree,
            },
        }
    _emit_json(payload, args.out)
    return 0


# ---------------------------------------------------------------- simulate

def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise ValueError(f"trial count {args.trials} must be at least 1")
    dist = _parse_dist(args.dist)
    params = validate_params(args.p, 2, dist)
    p = params.modulus
    if p > SIMULATE_MAX_MODULUS:
        raise ValueError(f"modulus {p} exceeds the int64 simulation limit")
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    x = np.zeros(args.trials, dtype=np.int64)
    support = np.array([-1, 0, 1], dtype=np.int64)
    probs = list(dist.as_tuple())
    for _ in range(args.steps):
        if dist.is_uniform_thirds:
            b = rng.integers(-1, 2, size=args.trials)
        else:
            b = rng.choice(support, size=args.trials, p=probs)
        x = (2 * x + b) % p
    residues, counts = np.unique(x, return_counts=True)
    # plug-in estimate: visited residues contribute |c/T - 1/p|, the rest 1/p each
    tvd = 0.5 * (
        np.abs(counts / args.trials - 1.0 / p).sum() + (p - residues.size) / p
    )
    bias_note = (
        "plug-in TVD is biased upward by roughly sqrt(p/(2*pi*trials)) "
        "when trials is not much larger than p"
    )
    if args.format == "csv":
        lines = [
            f"# p={p} steps={args.steps} trials={args.trials} seed={args.seed}",
            f"# tvd_estimate={_fmt(float(tvd))}",
            f"# {bias_note}",
            "residue,count",
        ]
        lines += [f"{int(r)},{int(c)}" for r, c in zip(residues, counts)]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit_json(
            {
                "command": "simulate",
                "p": p,
                "steps": args.steps,
                "trials": args.trials,
                "seed": args.seed,
                "dist": probs,
                "tvd_estimate": float(tvd),
                "bias_note": bias_note,
                "distinct_endpoints": int(residues.size),
                "histogram": {str(int(r)): int(c) for r, c in zip(residues, counts)},
            },
            args.out,
        )
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdg",
        description="Doubling random walk x -> 2x+b (mod p): exact evolution, "
        "standard forms, pair statistics, bounds, and Monte Carlo simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, fmt_default):
        sp.add_argument("--format", choices=("csv", "json"), default=fmt_default)
        sp.add_argument("--out", default=None, help="write output to this path")

    sp = sub.add_parser("evolve", help="exact per-step trace of tvd/entropy/support")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--dist", default="1/3,1/3,1/3", help="q-1,q0,q1")
    sp.add_argument("--delta", type=float, default=0.01, help="typical-set tail mass")
    sp.add_argument("--max-p-override", type=int, default=None)
    add_common(sp, "csv")
    sp.set_defaults(func=cmd_evolve)

    sp = sub.add_parser("scan", help="first tvd crossings vs predicted thresholds")
    sp.add_argument("--primes", default=None, help="comma separated moduli")
    sp.add_argument("--p-min", type=int, default=None)
    sp.add_argument("--p-max", type=int, default=None)
    sp.add_argument("--steps", type=int, default=None, help="cap on evolved steps")
    sp.add_argument("--dist", default="1/3,1/3,1/3")
    sp.add_argument("--allow-composite", action="store_true")
    sp.add_argument("--max-p-override", type=int, default=None)
    add_common(sp, "csv")
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("canon", help="standard form, class, value and blocks")
    sp.add_argument(
        "digits",
        help="compact digit text, e.g. 00+-0+0+-++ "
        "(prefix with -- when the string starts with '-')",
    )
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_canon)

    sp = sub.add_parser("stats", help="pair-table frequencies")
    sp.add_argument("--mode", choices=("exhaustive", "mc"), default="exhaustive")
    sp.add_argument("--n", type=int, default=12)
    sp.add_argument("--cls", choices=("first_one", "first_minus_one"),
                    default="first_one", help="conditioning class (exhaustive mode)")
    sp.add_argument("--p", type=int, default=3, help="modulus (unused by statistics)")
    sp.add_argument("--dist", default="1/3,1/3,1/3")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    add_common(sp, "json")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("bounds", help="rate constants and counting bounds")
    sp.add_argument("--eps", type=float, default=0.005)
    sp.add_argument("--n", type=int, default=None, help="even length for the counts")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bounds, format="json")

    sp = sub.add_parser("simulate", help="Monte Carlo endpoint histogram")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--dist", default="1/3,1/3,1/3")
    add_common(sp, "json")
    sp.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
