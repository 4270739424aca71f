"""Command-line entry point: ``emitcorr <verb> ...``."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import kernels
from .scenario import (
    FIGURES,
    SweepSpec,
    figure_preset,
    figure_sweep,
    format_records,
    format_sweep,
    parse_config,
    parse_grid,
    render_config,
    run_scenario,
    run_steady,
    run_sweep,
)


def _load(path):
    return parse_config(Path(path).read_text(encoding="utf-8"))


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_simulate(args):
    return format_records(run_scenario(_load(args.config)))


def cmd_steady(args):
    return format_records([run_steady(_load(args.config))])


def cmd_sweep(args):
    cfg = _load(args.config)
    sweep = SweepSpec(args.path, parse_grid(args.grid))
    return format_sweep(sweep.path, run_sweep(cfg, sweep))


def cmd_figure(args):
    cfg = figure_preset(args.id)
    if args.sample_count is not None or args.t_final is not None:
        cfg = dataclasses.replace(
            cfg,
            sample_count=args.sample_count or cfg.sample_count,
            t_final=args.t_final or cfg.t_final,
        )
    if args.config_only:
        return render_config(cfg)
    sweep = figure_sweep(args.id)
    if sweep is not None:
        return format_sweep(sweep.path, run_sweep(cfg, sweep))
    return format_records(run_scenario(cfg))


def cmd_validate(args):
    cfg = _load(args.config)
    p = cfg.collective_params()
    return (
        f"ok: {cfg.coupling_model} model, V = {p.v_coherent:.6g}, gamma = {p.gamma_collective:.6g}, "
        f"t_final = {cfg.t_final:g}, samples = {cfg.sample_count}, backend = {kernels.BACKEND}\n"
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="emitcorr",
        description="Correlation dynamics of two driven emitters with collective decay.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        return p

    add("simulate", cmd_simulate, "integrate a config and write the correlation CSV").add_argument("config")
    add("steady", cmd_steady, "stationary-state correlation record").add_argument("config")
    p = add("sweep", cmd_sweep, "run a config over a parameter grid")
    p.add_argument("config")
    p.add_argument("path", help="e.g. initial_state.alpha or drive.amplitude1")
    p.add_argument("grid", help="start:stop:count or a comma-separated list")
    p = add("figure", cmd_figure, "run a figure preset")
    p.add_argument("id", choices=FIGURES)
    p.add_argument("--sample-count", type=int, default=None)
    p.add_argument("--t-final", type=float, default=None)
    p.add_argument("--config-only", action="store_true", help="print the preset config and exit")
    add("validate", cmd_validate, "check a config file").add_argument("config")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _emit(args.func(args), args.output)
    except (ValueError, KeyError, RuntimeError, OSError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"emitcorr: error: {msg}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
