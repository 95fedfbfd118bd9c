"""Command-line front end.

Lengths are given in km and times in ms unless a unit suffix is attached
(``1000km``, ``2e6m``, ``5ms``, ``0.1s``, ``100us``, ``inf``). Results are
printed as JSON, sweeps as CSV; all values in the output are SI.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import re
import sys
from typing import Optional, Sequence

import numpy as np

from .core import KM, MS, ChannelModel, RepeaterConfig
from .measures import MeasureKind
from .optimize import (
    DEFAULT_N_MAX,
    Physics,
    asymptotic_l0_opt,
    asymptotic_m_opt,
    optimize,
    power_law_fit,
    scaling_fit,
)
from .rates import RateVariant, normalized_rate
from .sim import SimConfig, compare_to_analytic, run

SWEEP_HEADER = ["param", "n_opt", "m_opt", "q", "decay_time_s", "measure_value", "rate_per_memory_per_s"]

_LENGTH_UNITS = {"km": KM, "m": 1.0}
_TIME_UNITS = {"s": 1.0, "ms": MS, "us": 1e-6, "ns": 1e-9}
_QTY = re.compile(r"^\s*([-+0-9.eE]+|inf)\s*([a-zA-Z]*)\s*$")


def _quantity(text, units: dict, default: str) -> float:
    if isinstance(text, (int, float)):
        return float(text) * units[default]
    match = _QTY.match(str(text))
    if not match:
        raise argparse.ArgumentTypeError(f"cannot parse quantity {text!r}")
    value, unit = match.groups()
    unit = unit or default
    if unit not in units:
        raise argparse.ArgumentTypeError(f"unknown unit {unit!r}; expected one of {sorted(units)}")
    return float(value) * units[unit]


def length(text) -> float:
    return _quantity(text, _LENGTH_UNITS, "km")


def duration(text) -> float:
    return _quantity(text, _TIME_UNITS, "ms")


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def _emit(obj) -> None:
    json.dump(_jsonable(obj), sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# argument plumbing


def _channel(args) -> ChannelModel:
    return ChannelModel(
        c=args.c,
        alpha=1.0 / args.alpha_inv,
        ps_prefactor=args.ps_prefactor,
        ps_exponent_per_m=args.ps_exponent / KM,
        ps_override=args.ps,
    )


def _physics(args) -> Physics:
    return Physics(p_m=args.pm, tau_c=args.tauc, channel=_channel(args))


def _config(args) -> RepeaterConfig:
    return RepeaterConfig(
        L=args.L, n=args.n, m=args.m, N=args.N, p_m=args.pm, tau_c=args.tauc, channel=_channel(args)
    )


def _config_dict(cfg: RepeaterConfig) -> dict:
    ch = cfg.channel
    return {
        "L_m": cfg.L,
        "n": cfg.n,
        "m": cfg.m,
        "N": cfg.N,
        "p_m": cfg.p_m,
        "tau_c_s": cfg.tau_c,
        "l0_m": cfg.l0,
        "p_s": cfg.p_s,
        "channel": {
            "c_m_per_s": ch.c,
            "alpha_per_m": ch.alpha,
            "ps_prefactor": ch.ps_prefactor,
            "ps_exponent_log10_per_m": ch.ps_exponent_per_m,
            "ps_override": ch.ps_override,
        },
    }


def _result_dict(res) -> dict:
    return {
        "q_pairs_per_s_per_memory": res.q,
        "decay_time_s": res.effective_decay_time,
        "measure": res.measure.value,
        "measure_value_ebits_per_pair": res.measure_value,
        "rate_ebits_per_s_per_memory": res.r,
        "variant": res.variant.value,
    }


def _add_physics(p: argparse.ArgumentParser, pm_required: bool = True) -> None:
    g = p.add_argument_group("physics")
    g.add_argument("--L", type=length, default=1000 * KM, help="total distance (default 1000km)")
    g.add_argument("--pm", type=float, required=pm_required, help="BSM success probability")
    g.add_argument("--tauc", type=duration, default=math.inf, help="memory coherence time (default inf)")
    g.add_argument("--c", type=float, default=2e8, help="signal speed in m/s")
    g.add_argument("--alpha-inv", type=length, default=50 * KM, help="attenuation length 1/alpha (default 50km)")
    g.add_argument("--ps", type=float, default=None, help="fixed elementary success probability")
    g.add_argument("--ps-prefactor", type=float, default=0.2)
    g.add_argument("--ps-exponent", type=float, default=0.01, help="log10 loss per km in P_S")


def _add_rate_choice(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=[v.value for v in RateVariant], default="pur")
    p.add_argument("--measure", choices=[k.value for k in MeasureKind], default="ec")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pnp-repeater", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file supplying default values for any flag")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="normalized rate of one chain layout")
    _add_physics(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, default=1)
    _add_rate_choice(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sweep", help="optimized rate along one swept parameter, as CSV")
    _add_physics(p, pm_required=False)
    _add_rate_choice(p)
    p.add_argument("--param", choices=["n", "tau_c", "L", "P_M"], required=True)
    p.add_argument("--values", help="comma-separated sweep values (units as for the flag)")
    p.add_argument("--start")
    p.add_argument("--stop")
    p.add_argument("--num", type=int, default=10)
    p.add_argument("--log", action="store_true", help="log-spaced points between start and stop")
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="best (n, m) with closed-form asymptotics alongside")
    _add_physics(p)
    _add_rate_choice(p)
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.add_argument("--table", action="store_true", help="include the full (n, m, R) table")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("asymptotics", help="closed-form large-distance optima")
    _add_physics(p)
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("simulate", help="Monte-Carlo run compared with the analytic rate")
    _add_physics(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--warmup", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--measure", choices=[k.value for k in MeasureKind], default="ec")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scaling-fit", help="fit ln R_opt against sqrt(L) and ln L")
    _add_physics(p)
    _add_rate_choice(p)
    p.add_argument("--L-min", type=length, required=True)
    p.add_argument("--L-max", type=length, required=True)
    p.add_argument("--num", type=int, default=10)
    p.add_argument("--n-max", type=int, default=DEFAULT_N_MAX)
    p.set_defaults(func=cmd_scaling_fit)
    return parser


def _apply_config_file(parser: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        with open(known.config) as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file {known.config}: {exc}")
    if not isinstance(values, dict):
        parser.error("config file must hold a JSON object")
    values = {k.replace("-", "_"): v for k, v in values.items()}
    subparsers = [a for a in parser._actions if isinstance(a, argparse._SubParsersAction)]
    for sp in subparsers[0].choices.values():
        for action in sp._actions:
            if action.dest in values:
                raw = values[action.dest]
                action.default = action.type(raw) if action.type and raw is not None else raw
                action.required = False


# ---------------------------------------------------------------------------
# commands


def cmd_rate(args) -> int:
    res = normalized_rate(_config(args), RateVariant(args.variant), MeasureKind(args.measure))
    _emit({"config": _config_dict(_config(args)), "result": _result_dict(res)})
    return 0


def _sweep_points(args) -> list:
    conv = {"n": int, "P_M": float, "tau_c": duration, "L": length}[args.param]
    if args.values:
        pts = [conv(v) for v in args.values.split(",") if v.strip()]
    else:
        if args.start is None or args.stop is None:
            raise ValueError("sweep needs either --values or both --start and --stop")
        lo, hi = conv(args.start), conv(args.stop)
        if args.param == "n":
            pts = list(range(int(lo), int(hi) + 1))
        elif args.log:
            if not (lo > 0 and hi > 0):
                raise ValueError("log spacing needs positive endpoints")
            pts = list(np.geomspace(lo, hi, args.num))
        else:
            pts = list(np.linspace(lo, hi, args.num))
    if not pts:
        raise ValueError("sweep range is empty")
    return pts


def cmd_sweep(args) -> int:
    pts = _sweep_points(args)
    variant, measure = RateVariant(args.variant), MeasureKind(args.measure)
    if args.param != "P_M" and args.pm is None:
        raise ValueError("--pm is required unless sweeping P_M")
    rows = []
    for x in pts:
        L, pm, tauc = args.L, args.pm, args.tauc
        n_values = None
        if args.param == "n":
            n_values = [int(x)]
        elif args.param == "tau_c":
            tauc = x
        elif args.param == "L":
            L = x
        else:
            pm = x
        phys = Physics(p_m=pm, tau_c=tauc, channel=_channel(args))
        opt = optimize(L, phys, variant, measure, n_max=args.n_max, n_values=n_values)
        b = opt.best
        rows.append([x, opt.n_opt, opt.m_opt, b.q, b.effective_decay_time, b.measure_value, b.r])
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    return 0


def _asymptotics(args) -> dict:
    ch = _channel(args)
    l0 = asymptotic_l0_opt(args.pm, ch.alpha)
    block = {
        "l0_opt_m": l0,
        "n_opt_estimate": math.log2(args.L / l0),
    }
    if math.isfinite(args.tauc):
        m_log2 = asymptotic_m_opt(args.L, args.pm, args.tauc, ch.c, ch.alpha)
        block.update({"m_opt_log2": m_log2, "two_pow_m_opt": 2**m_log2, "m_opt_rounded": round(m_log2)})
    else:
        block["m_opt_log2"] = None
    return block


def cmd_optimize(args) -> int:
    phys = _physics(args)
    opt = optimize(args.L, phys, RateVariant(args.variant), MeasureKind(args.measure), n_max=args.n_max)
    try:
        asym = _asymptotics(args)
    except ValueError as exc:
        asym = {"error": str(exc)}
    out = {
        "optimum": {
            "n_opt": opt.n_opt,
            "m_opt": opt.m_opt,
            "l0_opt_m": opt.l0_opt,
            "r_opt_ebits_per_s_per_memory": opt.r_opt,
            "result": _result_dict(opt.best),
        },
        "asymptotics": asym,
    }
    if args.table:
        out["table"] = [{"n": n, "m": m, "rate_ebits_per_s_per_memory": r} for n, m, r in opt.table]
    _emit(out)
    return 0


def cmd_asymptotics(args) -> int:
    _emit({"L_m": args.L, "p_m": args.pm, "tau_c_s": args.tauc, "asymptotics": _asymptotics(args)})
    return 0


def cmd_simulate(args) -> int:
    rep = _config(args)
    cfg = SimConfig(
        repeater=rep,
        cycles=args.cycles,
        warmup_cycles=args.warmup,
        seed=args.seed,
        measure=MeasureKind(args.measure),
    )
    stats = run(cfg)
    cmp = compare_to_analytic(stats, rep)
    _emit(
        {
            "config": _config_dict(rep),
            "simulation": {
                "cycles": cfg.cycles,
                "warmup_cycles": cfg.warmup_cycles,
                "seed": cfg.seed,
                "measure": cfg.measure.value,
            },
            "prng": stats.prng,
            "stats": stats.to_dict(),
            "comparison": cmp.to_dict(),
        }
    )
    return 0


def cmd_scaling_fit(args) -> int:
    phys = _physics(args)
    variant, measure = RateVariant(args.variant), MeasureKind(args.measure)
    L = np.geomspace(args.L_min, args.L_max, args.num)
    out = {}
    try:
        fit = scaling_fit(phys, variant, measure, L, n_max=args.n_max)
        out["sqrt_fit"] = {
            "slope_per_sqrt_m": fit.slope,
            "predicted_slope_per_sqrt_m": fit.predicted_slope,
            "relative_error": fit.relative_error,
            "r_squared": fit.r_squared,
        }
    except ValueError as exc:
        out["sqrt_fit"] = {"error": str(exc)}
    pl = power_law_fit(phys, variant, measure, L, n_max=args.n_max)
    out["power_law_fit"] = {"exponent": pl.exponent, "r_squared": pl.r_squared}
    out["samples"] = [{"L_m": x, "r_opt": r} for x, r in zip(pl.L_values, pl.rates)]
    _emit(out)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    _apply_config_file(parser, argv)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
