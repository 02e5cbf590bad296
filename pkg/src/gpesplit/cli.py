"""Command-line front end: ``simulate``, ``converge`` and ``bench``.

Exit codes: 0 success, 1 bad arguments, 2 numerical instability.

Any option may also come from a config file given with ``--config``.  The
grammar is one ``key = value`` pair per line; ``#`` starts a comment, blank
lines are ignored, keys are the long option names without leading dashes
(``max-iter`` and ``max_iter`` are equivalent) and boolean switches take
``true`` or ``false``.  Command-line flags override file values.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from typing import Sequence

from . import __version__
from .diagnostics import DiagnosticsRecord
from .experiments import (
    BENCH_METHODS, InstabilityError, Problem, RunSpec, build_reference,
    convergence_tableau, benchmark, run_simulation,
)
from .grid import build_grid, build_time_mesh
from .steppers import ModelParams, Scheme, SchemeConfig

log = logging.getLogger("gpesplit")

SIM_COLUMNS = DiagnosticsRecord.columns()
EXIT_OK, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _method(name: str) -> Scheme:
    try:
        return Scheme(name)
    except ValueError:
        valid = ", ".join(s.value for s in Scheme)
        raise argparse.ArgumentTypeError(f"unknown method {name!r}; valid names: {valid}")


def _method_list(text: str) -> list[Scheme]:
    return [_method(part.strip()) for part in text.split(",") if part.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _fmt(value: float) -> str:
    return "%.6e" % value


# --- config files -------------------------------------------------------------

def read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            values[key.strip().replace("_", "-")] = value.strip()
    return values


def _config_argv(parser: argparse.ArgumentParser, config: dict[str, str]) -> list[str]:
    by_flag = {}
    for action in parser._actions:
        for opt in action.option_strings:
            if opt.startswith("--"):
                by_flag[opt[2:]] = action
    argv = []
    for key, value in config.items():
        action = by_flag.get(key)
        if action is None:
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() in ("1", "true", "yes", "on"):
                argv.append(f"--{key}")
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects true or false")
        else:
            argv += [f"--{key}", value]
    return argv


# --- parser -------------------------------------------------------------------

def _model_options(p):
    p.add_argument("--g", type=float, default=-1.0, help="interaction strength")
    p.add_argument("--sigma", type=float, default=1.0, help="nonlinearity exponent")
    p.add_argument("--tol", type=float, default=1e-5, help="Picard tolerance")
    p.add_argument("--max-iter", type=int, default=5, help="Picard iteration cap")
    p.add_argument("--symmetric-width", action="store_true",
                   help="give the second pulse of the two-soliton data width sqrt(2)")


def _output_options(p):
    p.add_argument("--out", default="-", help="output file, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gpesplit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="key = value file with option defaults")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one scheme and write diagnostics")
    sim.add_argument("--method", type=_method, required=True)
    sim.add_argument("--problem", choices=[p.value for p in Problem], default="single")
    sim.add_argument("--L", type=float, default=40.0)
    sim.add_argument("--M", type=int, default=512)
    sim.add_argument("--T", type=float, default=10.0)
    sim.add_argument("--N", type=int, default=2000)
    sim.add_argument("--record-every", type=int, default=1)
    sim.add_argument("--with-reference", action="store_true",
                     help="build the fine-grid reference so two-soliton errors are reported")
    _model_options(sim)
    _output_options(sim)

    conv = sub.add_parser("converge", help="write a convergence tableau")
    conv.add_argument("--method", type=_method, required=True)
    conv.add_argument("--problem", choices=[p.value for p in Problem], default="exact")
    conv.add_argument("--L", type=float, default=40.0)
    conv.add_argument("--T", type=float, default=1.0)
    conv.add_argument("--base-M", type=int, default=256)
    conv.add_argument("--base-N", type=int, default=256)
    conv.add_argument("--dt-factors", type=_int_list, default=[4, 8, 16])
    conv.add_argument("--dx-divisors", type=_int_list, default=[4, 8, 16])
    conv.add_argument("--workers", type=int, default=None,
                      help="worker processes (default: GPE_THREADS or CPU count)")
    _model_options(conv)
    _output_options(conv)

    bench = sub.add_parser("bench", help="time schemes over several horizons")
    bench.add_argument("--methods", type=_method_list,
                       default=list(BENCH_METHODS))
    bench.add_argument("--problem", choices=[p.value for p in Problem], default="single")
    bench.add_argument("--horizons", type=_float_list, default=[2.5, 5.0, 7.5, 10.0])
    bench.add_argument("--L", type=float, default=40.0)
    bench.add_argument("--M", type=int, default=512)
    bench.add_argument("--dt", type=float, default=0.005)
    bench.add_argument("--repeats", type=int, default=3)
    _model_options(bench)
    _output_options(bench)
    return parser


def _parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config is None:
        return parser.parse_args(argv)
    try:
        config = read_config(known.config)
    except OSError as exc:
        parser.error(f"cannot read config: {exc}")
    except UsageError as exc:
        parser.error(str(exc))
    command = next((a for a in argv if a in ("simulate", "converge", "bench")), None)
    if command is None:
        parser.error("a command is required")
    subparser = parser._subparsers._group_actions[0].choices[command]
    try:
        extra = _config_argv(subparser, config)
    except UsageError as exc:
        parser.error(str(exc))
    # file values first so that explicit flags win
    i = list(argv).index(command) + 1
    return parser.parse_args(list(argv[:i]) + extra + list(argv[i:]))


# --- writers ------------------------------------------------------------------

def _open(path: str):
    return sys.stdout if path == "-" else open(path, "w", encoding="utf-8", newline="")


def _json_number(v: float):
    return None if v is None or (isinstance(v, float) and not math.isfinite(v)) else v


def write_records_csv(fh, records: list[DiagnosticsRecord]):
    fh.write(",".join(SIM_COLUMNS) + "\n")
    for r in records:
        fh.write(",".join(_fmt(v) for v in r.as_tuple()) + "\n")


def tableau_rows(tab) -> list[list[str]]:
    header = ["dt_factor"] + [f"dx/{d}" for d in tab.dx_divisors]
    rows = [header]
    for fac, row in zip(tab.dt_factors, tab.cells):
        rows.append([f"{fac}dt"] + [_fmt(v) for v in row])
    for (a, b), orders in zip(zip(tab.dt_factors, tab.dt_factors[1:]), tab.temporal_orders()):
        rows.append([f"order_dt_{a}-{b}"] + [_fmt(v) for v in orders])
    for fac, orders in zip(tab.dt_factors, tab.spatial_orders()):
        rows.append([f"order_dx_{fac}dt", _fmt(math.nan)] + [_fmt(v) for v in orders])
    return rows


def bench_header(horizons) -> list[str]:
    return (["method"] + [f"seconds_T{h:g}" for h in horizons]
            + [f"error_T{h:g}" for h in horizons] + ["status"])


def bench_rows(rows) -> list[list[str]]:
    out = [bench_header(rows[0].horizons if rows else [])]
    for r in rows:
        status = "ok" if all(s == "ok" for s in r.status) else ";".join(r.status)
        out.append([r.method] + [_fmt(v) for v in r.seconds]
                   + [_fmt(v) for v in r.errors] + [status])
    return out


# --- commands -----------------------------------------------------------------

def _model(args) -> ModelParams:
    return ModelParams(args.g, args.sigma)


def _scheme(args, kind) -> SchemeConfig:
    return SchemeConfig(kind, args.tol, args.max_iter)


def cmd_simulate(args) -> int:
    try:
        spec = RunSpec(scheme=_scheme(args, args.method), L=args.L, M=args.M, T=args.T,
                       N=args.N, model=_model(args), problem=Problem(args.problem),
                       record_every=args.record_every, symmetric_width=args.symmetric_width)
        grid, mesh = build_grid(args.L, args.M), build_time_mesh(args.T, args.N)
    except ValueError as exc:
        raise UsageError(str(exc))
    reference = None
    if spec.problem is Problem.TWO and args.with_reference:
        reference = build_reference(spec.problem, grid, mesh, spec.model,
                                    symmetric_width=spec.symmetric_width)
    aborted = None
    try:
        records = run_simulation(spec, reference=reference).records
    except InstabilityError as exc:
        records, aborted = exc.records, exc.step
        log.error("%s", exc)

    fh = _open(args.out)
    try:
        if args.format == "csv":
            write_records_csv(fh, records)
            if aborted is not None:
                fh.write(f"# aborted at step {aborted}\n")
        else:
            json.dump({
                "method": spec.scheme.kind.value,
                "problem": spec.problem.value,
                "L": spec.L, "M": spec.M, "T": spec.T, "N": spec.N,
                "g": spec.model.g, "sigma": spec.model.sigma,
                "aborted_at": aborted,
                "records": [{k: _json_number(v) for k, v in zip(SIM_COLUMNS, r.as_tuple())}
                            for r in records],
            }, fh, indent=1)
            fh.write("\n")
        fh.flush()
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_UNSTABLE if aborted is not None else EXIT_OK


def _default_workers() -> int:
    env = os.environ.get("GPE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"GPE_THREADS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def cmd_converge(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    try:
        tab = convergence_tableau(_scheme(args, args.method), Problem(args.problem), L=args.L,
                                  T=args.T, base_M=args.base_M, base_N=args.base_N,
                                  dt_factors=args.dt_factors, dx_divisors=args.dx_divisors,
                                  model=_model(args), workers=workers,
                                  symmetric_width=args.symmetric_width)
    except ValueError as exc:
        raise UsageError(str(exc))
    fh = _open(args.out)
    try:
        if args.format == "csv":
            for row in tableau_rows(tab):
                fh.write(",".join(row) + "\n")
        else:
            clean = lambda a: [[_json_number(float(v)) for v in row] for row in a]  # noqa: E731
            json.dump({
                "scheme": tab.scheme, "dt_factors": tab.dt_factors,
                "dx_divisors": tab.dx_divisors, "base_dt": tab.base_dt,
                "base_dx": tab.base_dx, "cells": clean(tab.cells),
                "temporal_orders": clean(tab.temporal_orders()),
                "spatial_orders": clean(tab.spatial_orders()),
            }, fh, indent=1)
            fh.write("\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.repeats < 1 or args.dt <= 0 or not args.horizons:
        raise UsageError("need repeats >= 1, dt > 0 and at least one horizon")
    rows = benchmark(args.methods, Problem(args.problem), args.horizons, L=args.L, M=args.M,
                     dt=args.dt, model=_model(args), repeats=args.repeats,
                     picard_tol=args.tol, picard_max=args.max_iter,
                     symmetric_width=args.symmetric_width)
    fh = _open(args.out)
    try:
        if args.format == "csv":
            for row in bench_rows(rows):
                fh.write(",".join(row) + "\n")
        else:
            json.dump([{"method": r.method, "horizons": r.horizons,
                        "seconds": r.seconds,
                        "errors": [_json_number(e) for e in r.errors],
                        "status": r.status} for r in rows], fh, indent=1)
            fh.write("\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


COMMANDS = {"simulate": cmd_simulate, "converge": cmd_converge, "bench": cmd_bench}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gpesplit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
