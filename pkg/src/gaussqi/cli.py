"""Command-line front end.

Subcommands:
    chernoff   single-point exponent evaluation
    sweep      run a plan file (flat key = value text)
    figure     reproduce a named reference-figure data set
    verify     run an expansion-residual check (or "all")
    limits     limit-order study for one target model

Exit codes: 0 success, 1 invalid input, 2 failed verification check.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .divergence import chernoff
from .sweeps import (
    CHECKS,
    FIGURES,
    QUANTITIES,
    SweepPlan,
    SweepRow,
    emit,
    limit_order_study,
    reproduce_figure,
    run_sweep,
    verify_expansion,
)
from .target import TargetConfig, make_pair
from .transmitters import KINDS, TransmitterSpec


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the CLI contract wants 1.
    def error(self, message):
        raise _CliError(message)


def parse_grid(text: str) -> tuple:
    """Parse a grid expression.

    Accepted forms: "0.1,0.2,0.5" (explicit list), "log:1e-3:10:41"
    (log-spaced inclusive range), "lin:0:30:601" (linear range).
    Scientific notation is accepted everywhere.
    """
    text = text.strip()
    if text.startswith("log:") or text.startswith("lin:"):
        kind, lo, hi, num = text.split(":")
        lo, hi, num = float(lo), float(hi), int(num)
        if num < 1:
            raise _CliError(f"grid {text!r} needs at least one point")
        if kind == "log":
            if lo <= 0 or hi <= 0:
                raise _CliError(f"log grid {text!r} needs positive endpoints")
            return tuple(np.logspace(np.log10(lo), np.log10(hi), num))
        return tuple(np.linspace(lo, hi, num))
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise _CliError(f"cannot parse grid {text!r}: {exc}") from exc


def read_plan(path: str, out_override=None, format_override=None) -> SweepPlan:
    """Read a flat key = value plan file.

    Keys: transmitter(s), quantity/quantities, ns or grid_ns, nb or
    grid_nb, kappa or grid_kappa, model, out, format.  Lines starting with
    '#' are comments.
    """
    fields: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise _CliError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, _, value = line.partition("=")
            fields[key.strip().lower()] = value.strip()

    def names(*keys, default=None):
        for k in keys:
            if k in fields:
                return tuple(v.strip() for v in fields[k].split(",") if v.strip())
        return default

    def grid(single_key, grid_key, default):
        if grid_key in fields:
            return parse_grid(fields[grid_key])
        if single_key in fields:
            return parse_grid(fields[single_key])
        return default

    try:
        return SweepPlan(
            transmitters=names("transmitter", "transmitters", default=("coherent",)),
            quantities=names("quantity", "quantities", default=("chernoff",)),
            n_s_grid=grid("ns", "grid_ns", (1.0,)),
            n_b_grid=grid("nb", "grid_nb", (1.0,)),
            kappa_grid=grid("kappa", "grid_kappa", (1e-2,)),
            model=fields.get("model", "agnostic"),
            out_path=out_override or fields.get("out"),
            out_format=format_override or fields.get("format", "csv"),
        )
    except ValueError as exc:
        raise _CliError(str(exc)) from exc


def _write_or_print(rows: list[SweepRow], out, out_format: str) -> None:
    if out:
        emit(rows, out, out_format)
    else:
        emit(rows, sys.stdout, out_format)


def _cmd_chernoff(args) -> int:
    spec = TransmitterSpec(args.transmitter, 0.0 if args.transmitter == "vacuum" else args.ns)
    cfg = TargetConfig(kappa=args.kappa, n_b=args.nb, model=args.model)
    pair = make_pair(spec, cfg)
    res = chernoff(pair, s_tol=args.tol)
    print(f"transmitter={args.transmitter} model={args.model} "
          f"n_s={spec.n_signal:g} n_b={args.nb:g} kappa={args.kappa:g}")
    print(f"s_star   = {res.s_star:.12g}")
    print(f"q_star   = {res.q_star:.17g}")
    print(f"xi       = {res.xi:.17g}")
    print(f"q_half   = {res.q_half:.17g}")
    if res.flags:
        print(f"flags    = {';'.join(res.flags)}")
    if args.out:
        rows = [
            SweepRow(args.transmitter, args.model, spec.n_signal, args.nb,
                     args.kappa, "chernoff", res.xi, res.s_star, tuple(res.flags)),
            SweepRow(args.transmitter, args.model, spec.n_signal, args.nb,
                     args.kappa, "q_half", res.q_half, res.s_star, tuple(res.flags)),
        ]
        emit(rows, args.out, args.format)
    return 0


def _cmd_sweep(args) -> int:
    plan = read_plan(args.plan, out_override=args.out, format_override=args.format)
    rows = run_sweep(plan)
    _write_or_print(rows, plan.out_path, plan.out_format)
    return 0


def _cmd_figure(args) -> int:
    rows, summary = reproduce_figure(args.name)
    if args.grid_ns or args.grid_nb:
        print("note: figure grids are pinned for reproducibility; "
              "--grid-ns/--grid-nb are ignored here", file=sys.stderr)
    if args.out:
        emit(rows, args.out, args.format)
    for key, value in summary.items():
        print(f"{key} = {value}")
    return 0 if summary["passed"] else 2


def _cmd_verify(args) -> int:
    names = list(CHECKS) if args.check == "all" else [args.check]
    if any(n not in CHECKS for n in names):
        raise _CliError(f"unknown check {args.check!r}; expected one of {CHECKS} or 'all'")
    failed = False
    for name in names:
        check = verify_expansion(name)
        status = "pass" if check.passed else "FAIL"
        if check.fitted_order is not None:
            print(f"[{status}] {name}: fitted order {check.fitted_order:.3f} "
                  f"(expected > {check.expected_order - 0.1:.2f})")
        else:
            print(f"[{status}] {name}: {check.details}")
        failed = failed or not check.passed
    return 2 if failed else 0


def _cmd_limits(args) -> int:
    rows = limit_order_study(args.model)
    _write_or_print(rows, args.out, args.format)
    for row in rows:
        path = row.flags[0] if row.flags else ""
        print(f"{row.model} {path:12s} n_s={row.n_s:g} kappa={row.kappa:g} "
              f"ratio={row.value:.6f}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="gaussqi", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chernoff", help="exponent at a single parameter point")
    p.add_argument("--transmitter", choices=KINDS, required=True)
    p.add_argument("--ns", type=float, default=0.0, help="signal intensity N_S")
    p.add_argument("--nb", type=float, required=True, help="background occupation N_B")
    p.add_argument("--kappa", type=float, required=True, help="reflectivity")
    p.add_argument("--model", choices=("agnostic", "legacy"), default="agnostic")
    p.add_argument("--tol", type=float, default=1e-7, help="absolute s tolerance")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_chernoff)

    p = sub.add_parser("sweep", help="run a plan file")
    p.add_argument("plan", help="flat key = value plan file")
    p.add_argument("--out", default=None, help="override the plan's output path")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="reproduce a reference-figure data set")
    p.add_argument("name", choices=FIGURES)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--grid-ns", default=None, help="accepted for interface parity")
    p.add_argument("--grid-nb", default=None, help="accepted for interface parity")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("verify", help="run an expansion-residual check")
    p.add_argument("check", help=f"one of {', '.join(CHECKS)}, or 'all'")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("limits", help="limit-order study for one model")
    p.add_argument("model", choices=("agnostic", "legacy"))
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_limits)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
