"""Command-line entry point.

Usage::

    fracmg run <preset|config-path> [--grid WxH | --levels M] [--kf VALUE]
               [--mode conducting|blocking] [--tol T] [--cycle W|V]
               [--nu1 N --nu2 N] [--out DIR]

Runs one experiment (a named preset or a YAML configuration file), solves
it with the multigrid method and writes ``convergence.csv``,
``summary.txt`` and the VTK pressure fields into the output directory.
Exit status: 0 on convergence, 2 when the iteration limit is hit (the
convergence report is still written), 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .config import parse_file
from .errors import FracmgError, NoConvergence
from .multigrid import MultigridSolver
from .output import write_outputs
from .presets import PRESET_NAMES, preset


def _parse_grid(text):
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must look like 64x32, got {text!r}")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="fracmg",
        description="Mixed-dimensional multigrid solver for Darcy flow in "
                    "fractured porous media.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser(
        "run", help="solve one experiment and write its reports",
        description=f"EXPERIMENT is a preset name ({', '.join(PRESET_NAMES)}) "
                    "or the path of a YAML configuration file.")
    run.add_argument("experiment", metavar="EXPERIMENT")
    res = run.add_mutually_exclusive_group()
    res.add_argument("--grid", type=_parse_grid, metavar="WxH",
                     help="target finest grid, e.g. 128x64")
    res.add_argument("--levels", type=int, metavar="M",
                     help="refinement count from the coarsest grid "
                          "(0 solves the coarsest grid directly)")
    run.add_argument("--kf", type=float,
                     help="constant fracture permeability override")
    run.add_argument("--mode", choices=("conducting", "blocking"),
                     help="benchmark preset variant")
    run.add_argument("--tol", type=float,
                     help="relative residual reduction target")
    run.add_argument("--cycle", choices=("W", "V"), help="cycle type")
    run.add_argument("--nu1", type=int, help="pre-smoothing steps")
    run.add_argument("--nu2", type=int, help="post-smoothing steps")
    run.add_argument("--out", metavar="DIR", help="output directory")
    return ap


def load_config(args):
    if args.experiment in PRESET_NAMES:
        cfg = preset(args.experiment, kf=args.kf, mode=args.mode)
    else:
        if not os.path.exists(args.experiment):
            raise FracmgError(
                f"{args.experiment!r} is neither a preset "
                f"({', '.join(PRESET_NAMES)}) nor an existing config file")
        if args.kf is not None or args.mode is not None:
            raise FracmgError("--kf/--mode apply to presets only")
        cfg = parse_file(args.experiment)

    if args.grid is not None:
        cfg = dataclasses.replace(cfg, grid=args.grid, levels=None)
    elif args.levels is not None:
        cfg = dataclasses.replace(cfg, grid=None, levels=args.levels)
    cyc = {}
    if args.tol is not None:
        cyc["tol"] = args.tol
    if args.cycle is not None:
        cyc["cycle"] = args.cycle
    if args.nu1 is not None:
        cyc["nu1"] = args.nu1
    if args.nu2 is not None:
        cyc["nu2"] = args.nu2
    if cyc:
        cfg = dataclasses.replace(cfg, cycle=dataclasses.replace(cfg.cycle, **cyc))
    if args.out is not None:
        cfg = dataclasses.replace(cfg, out_dir=args.out)
    return cfg


def run_experiment(cfg):
    """Solve one configured experiment and write its outputs.

    Returns the process exit status (0 converged, 2 no convergence).
    """
    hierarchy = cfg.hierarchy()
    level = hierarchy.finest
    out_dir = cfg.out_dir or f"out/{cfg.name}"
    solver = MultigridSolver(hierarchy, cfg.cycle)
    try:
        x, report = solver.solve()
        status = 0
    except NoConvergence as exc:
        x, report, status = None, exc.report, 2
        print(f"fracmg: {exc}", file=sys.stderr)
    write_outputs(out_dir, cfg.name, level, x, report, cfg.cycle)
    rho = report.reduction_factor
    print(f"{cfg.name}: grid {level.nx}x{level.ny}, "
          f"{report.iterations} iteration(s), "
          f"final residual {report.residuals[-1]:.3e}"
          + (f", factor {rho:.3f}" if rho == rho else "")
          + f" -> {out_dir}")
    return status


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
    except (FracmgError, ValueError) as exc:
        print(f"fracmg: {exc}", file=sys.stderr)
        return 1
    try:
        return run_experiment(cfg)
    except NoConvergence:           # pragma: no cover - handled inside
        return 2
    except (FracmgError, ValueError) as exc:
        print(f"fracmg: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
