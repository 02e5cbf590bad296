"""Simulation driver, reference solutions, convergence tableaus and timings."""
from __future__ import annotations

import logging
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import solitons
from .diagnostics import DiagnosticsRecord, error_nodes, record
from .field import WaveField, as_layout, sample
from .grid import SpaceGrid, TimeMesh, build_grid, build_time_mesh
from .steppers import ModelParams, Scheme, SchemeConfig, advance, scheme_layout

log = logging.getLogger(__name__)


class Problem(str, Enum):
    SINGLE = "single"   # benchmark one-soliton data and closed form
    TWO = "two"         # two-pulse data, fine-grid reference
    EXACT = "exact"     # verified travelling bright soliton


class InstabilityError(RuntimeError):
    def __init__(self, step: int, records: list[DiagnosticsRecord]):
        super().__init__(f"solution blew up at step {step}")
        self.step = step
        self.records = records


@dataclass(frozen=True)
class RunSpec:
    scheme: SchemeConfig = field(default_factory=SchemeConfig)
    L: float = 40.0
    M: int = 512
    T: float = 10.0
    N: int = 2000
    model: ModelParams = field(default_factory=ModelParams)
    problem: Problem = Problem.SINGLE
    record_every: int = 1
    symmetric_width: bool = False
    blowup: float = 1e8

    def __post_init__(self):
        object.__setattr__(self, "problem", Problem(self.problem))
        if self.record_every < 1 or self.N % self.record_every:
            raise ValueError(f"record_every={self.record_every} must divide N={self.N}")

    @property
    def grid(self) -> SpaceGrid:
        return build_grid(self.L, self.M)

    @property
    def mesh(self) -> TimeMesh:
        return build_time_mesh(self.T, self.N)


def initial_field(problem: Problem, grid: SpaceGrid, layout,
                  model: ModelParams | None = None,
                  symmetric_width: bool = False) -> WaveField:
    problem = Problem(problem)
    if problem is Problem.SINGLE:
        return solitons.initial_single_soliton(grid, layout)
    if problem is Problem.TWO:
        return solitons.initial_two_solitons(grid, layout, symmetric_width)
    g = (model or ModelParams()).g
    return sample(lambda x: solitons.bright_soliton(x, 0.0, g=g), grid, layout)


def closed_form(problem: Problem, model: ModelParams | None = None):
    """``u(x, t)`` for problems that have one, else ``None``."""
    problem = Problem(problem)
    if problem is Problem.SINGLE:
        return solitons.exact_single_soliton
    if problem is Problem.EXACT:
        g = (model or ModelParams()).g
        return lambda x, t: solitons.bright_soliton(x, t, g=g)
    return None


@dataclass
class SimulationResult:
    final: WaveField
    records: list[DiagnosticsRecord]
    iterations: int = 0
    unconverged_steps: int = 0
    series: np.ndarray | None = None

    def __iter__(self):
        # (final, records) unpacking
        return iter((self.final, self.records))


def _check_stable(u: np.ndarray, bound: float) -> bool:
    return bool(np.all(np.isfinite(u))) and float(np.max(np.abs(u), initial=0.0)) <= bound


def _level_error_sq(ref: np.ndarray, num: np.ndarray, dt: float, dx: float) -> float:
    diff = ref - num
    return dt * dx * float(np.sum(diff.real ** 2 + diff.imag ** 2))


def accumulate_error_sq(series: np.ndarray, ref: np.ndarray, dx: float, dt: float) -> float:
    """Level-by-level sum matching the running error of :func:`run_simulation`."""
    total = 0.0
    for n in range(1, len(series)):
        total += _level_error_sq(ref[n], series[n], dt, dx)
    return total


def run_simulation(spec: RunSpec, reference: np.ndarray | None = None,
                   initial: WaveField | None = None,
                   keep_series: bool = False) -> SimulationResult:
    """Advance ``spec.N`` steps, recording diagnostics every ``record_every``.

    The running space-time error uses the problem's closed form, or
    ``reference`` (shape ``(N + 1, M)`` on ``x_1 .. x_M``) when given; without
    either it is reported as NaN.  ``keep_series`` stores the samples at
    ``x_1 .. x_M`` for every level.
    """
    grid, mesh = spec.grid, spec.mesh
    dt, dx = mesh.dt, grid.dx
    layout = scheme_layout(spec.scheme.kind)
    f = as_layout(initial, layout) if initial is not None else initial_field(
        spec.problem, grid, layout, spec.model, spec.symmetric_width)

    exact = closed_form(spec.problem, spec.model)
    if reference is not None:
        reference = np.asarray(reference)
        if reference.shape != (mesh.N + 1, grid.M):
            raise ValueError(f"reference shape {reference.shape} != {(mesh.N + 1, grid.M)}")
    x_err = grid.points[1:]
    times = mesh.times
    track_error = reference is not None or exact is not None

    def ref_at(n):
        return reference[n] if reference is not None else exact(x_err, times[n])

    series = np.empty((mesh.N + 1, grid.M), dtype=complex) if keep_series else None
    if keep_series:
        series[0] = error_nodes(f)

    err_sq = 0.0
    records = [record(f, 0.0, grid, spec.model, 0.0 if track_error else math.nan)]
    iterations = unconverged = 0
    bound = spec.blowup * max(1.0, float(np.max(np.abs(f.values), initial=0.0)))
    for n in range(1, mesh.N + 1):
        f, its, ok = advance(f, dt, grid, spec.model, spec.scheme)
        iterations += its
        unconverged += not ok
        if not _check_stable(f.values, bound):
            raise InstabilityError(n, records)
        nodes = error_nodes(f)
        if keep_series:
            series[n] = nodes
        if track_error:
            err_sq += _level_error_sq(ref_at(n), nodes, dt, dx)
        if n % spec.record_every == 0:
            records.append(record(f, times[n], grid, spec.model,
                                  err_sq if track_error else math.nan))
    if unconverged:
        log.info("%s: Picard cap reached on %d of %d steps",
                 spec.scheme.kind.value, unconverged, mesh.N)
    return SimulationResult(f, records, iterations, unconverged, series)


def build_reference(problem: Problem, grid: SpaceGrid, mesh: TimeMesh,
                    model: ModelParams | None = None, space_factor: int = 8,
                    time_factor: int = 16, symmetric_width: bool = False,
                    max_work: float = 5e9, max_bytes: float = 2e9) -> np.ndarray:
    """Fine-grid ABA (spectral) solution sampled at the coarse ``x_1 .. x_M``
    for every coarse level; shape ``(N + 1, M)``."""
    model = model or ModelParams()
    fine_M, fine_N = grid.M * space_factor, mesh.N * time_factor
    if fine_M * fine_N > max_work:
        raise MemoryError(f"reference needs {fine_M} x {fine_N} point-steps (> {max_work:g})")
    if (mesh.N + 1) * grid.M * 16 > max_bytes:
        raise MemoryError("reference series would exceed the memory budget")
    spec = RunSpec(scheme=SchemeConfig(Scheme.ABA_SPEC), L=grid.L, M=fine_M, T=mesh.T,
                   N=fine_N, model=model, problem=problem, record_every=fine_N,
                   symmetric_width=symmetric_width)
    fine_grid = spec.grid
    f = initial_field(problem, fine_grid, scheme_layout(Scheme.ABA_SPEC), model, symmetric_width)
    out = np.empty((mesh.N + 1, grid.M), dtype=complex)
    out[0] = f.nodes()[::space_factor][1:]
    dt = spec.mesh.dt
    for n in range(1, fine_N + 1):
        f, _, _ = advance(f, dt, fine_grid, model, spec.scheme)
        if n % time_factor == 0:
            out[n // time_factor] = f.nodes()[::space_factor][1:]
    return out


# --- convergence tableaus ---------------------------------------------------

@dataclass
class ConvergenceTableau:
    dt_factors: list[int]
    dx_divisors: list[int]
    cells: np.ndarray          # squared space-time errors; NaN = unavailable
    base_dt: float
    base_dx: float
    scheme: str = ""

    def temporal_orders(self) -> np.ndarray:
        """Amplitude orders between adjacent rows, shape ``(rows - 1, cols)``."""
        f = np.asarray(self.dt_factors, dtype=float)
        ratio = np.log2(self.cells[1:] / self.cells[:-1])
        return 0.5 * ratio / np.log2(f[1:] / f[:-1])[:, None]

    def spatial_orders(self) -> np.ndarray:
        """Amplitude orders between adjacent columns, shape ``(rows, cols - 1)``."""
        d = np.asarray(self.dx_divisors, dtype=float)
        ratio = np.log2(self.cells[:, :-1] / self.cells[:, 1:])
        return 0.5 * ratio / np.log2(d[1:] / d[:-1])[None, :]


def _tableau_cell(args) -> float:
    spec, reference = args
    try:
        result = run_simulation(spec, reference=reference)
    except (InstabilityError, ArithmeticError) as exc:
        log.warning("tableau cell M=%d N=%d unavailable: %s", spec.M, spec.N, exc)
        return math.nan
    return result.records[-1].l2err_sq


def convergence_tableau(scheme: SchemeConfig, problem: Problem = Problem.EXACT,
                        L: float = 40.0, T: float = 1.0, base_M: int = 256,
                        base_N: int = 256, dt_factors=(4, 8, 16),
                        dx_divisors=(4, 8, 16), model: ModelParams | None = None,
                        workers: int | None = None,
                        symmetric_width: bool = False) -> ConvergenceTableau:
    """Squared space-time errors for ``dt = f * T/base_N`` (rows) and
    ``dx = (2L/base_M) / d`` (columns)."""
    model = model or ModelParams()
    problem = Problem(problem)
    for fac in dt_factors:
        if base_N % fac:
            raise ValueError(f"dt factor {fac} does not divide base_N={base_N}")
    specs = [[RunSpec(scheme=scheme, L=L, M=base_M * d, T=T, N=base_N // fac,
                      model=model, problem=problem, record_every=base_N // fac,
                      symmetric_width=symmetric_width)
              for d in dx_divisors] for fac in dt_factors]

    jobs = []
    if closed_form(problem, model) is None:
        fine_grid = build_grid(L, base_M * max(dx_divisors))
        fine_mesh = build_time_mesh(T, base_N // min(dt_factors))
        ref = build_reference(problem, fine_grid, fine_mesh, model,
                              symmetric_width=symmetric_width)
        for row in specs:
            for s in row:
                sx = fine_grid.M // s.M
                st = fine_mesh.N // s.N
                # coarse x_i = fine x_{sx i}; stored rows start at x_1
                jobs.append((s, ref[::st, sx - 1::sx]))
    else:
        jobs = [(s, None) for row in specs for s in row]

    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_tableau_cell, jobs))
    else:
        values = [_tableau_cell(j) for j in jobs]

    cells = np.array(values, dtype=float).reshape(len(dt_factors), len(dx_divisors))
    return ConvergenceTableau(list(dt_factors), list(dx_divisors), cells,
                              T / base_N, 2.0 * L / base_M, scheme.kind.value)


# --- benchmarks ---------------------------------------------------------------

BENCH_METHODS = (
    Scheme.IMPLICIT_EULER, Scheme.CRANK_NICOLSON, Scheme.AB_SPEC_SPEC,
    Scheme.AB_SPEC_FD, Scheme.AB_FD_SPEC, Scheme.AB_FD_FD, Scheme.ABA_SPEC,
    Scheme.BAB_SPEC, Scheme.ABA_CN, Scheme.ABA_ICN, Scheme.CONSERVATIVE_CN,
)


@dataclass
class BenchRow:
    method: str
    horizons: list[float]
    seconds: list[float]
    errors: list[float]
    status: list[str]


def _timed_run(spec: RunSpec) -> tuple[float, np.ndarray | None, str]:
    start = time.perf_counter()
    try:
        series = _stepping_only(spec)
    except InstabilityError as exc:
        return time.perf_counter() - start, None, f"unstable@{exc.step}"
    return time.perf_counter() - start, series, "ok"


def _stepping_only(spec: RunSpec) -> np.ndarray:
    grid, mesh = spec.grid, spec.mesh
    f = initial_field(spec.problem, grid, scheme_layout(spec.scheme.kind),
                      spec.model, spec.symmetric_width)
    series = np.empty((mesh.N + 1, grid.M), dtype=complex)
    series[0] = error_nodes(f)
    bound = spec.blowup * max(1.0, float(np.max(np.abs(f.values))))
    for n in range(1, mesh.N + 1):
        f = advance(f, mesh.dt, grid, spec.model, spec.scheme).field
        if not _check_stable(f.values, bound):
            raise InstabilityError(n, [])
        series[n] = error_nodes(f)
    return series


def benchmark(schemes, problem: Problem = Problem.SINGLE,
              horizons=(2.5, 5.0, 7.5, 10.0), L: float = 40.0, M: int = 512,
              dt: float = 0.005, model: ModelParams | None = None,
              repeats: int = 3, picard_tol: float = 1e-5, picard_max: int = 5,
              symmetric_width: bool = False) -> list[BenchRow]:
    """Median wall-clock over ``repeats`` serial runs per scheme and horizon,
    paired with the squared space-time error of the run."""
    model = model or ModelParams()
    problem = Problem(problem)
    grid = build_grid(L, M)
    steps = [int(round(T / dt)) for T in horizons]
    exact = closed_form(problem, model)
    reference = None
    if exact is None:
        longest = int(np.argmax(horizons))
        reference = build_reference(problem, grid, build_time_mesh(horizons[longest], steps[longest]),
                                    model, symmetric_width=symmetric_width)

    rows = []
    for kind in schemes:
        cfg = SchemeConfig(Scheme(kind), picard_tol, picard_max)
        seconds, errors, status = [], [], []
        for T, N in zip(horizons, steps):
            spec = RunSpec(scheme=cfg, L=L, M=M, T=T, N=N, model=model, problem=problem,
                           record_every=N, symmetric_width=symmetric_width)
            timings, series, state = [], None, "ok"
            for _ in range(repeats):
                elapsed, series, state = _timed_run(spec)
                timings.append(elapsed)
            seconds.append(statistics.median(timings))
            status.append(state)
            if series is None:
                errors.append(math.nan)
                continue
            mesh = spec.mesh
            if exact is not None:
                ref = exact(grid.points[1:][None, :], mesh.times[:, None])
            else:
                ref = reference[: N + 1]
            errors.append(accumulate_error_sq(series, ref, grid.dx, mesh.dt))
        rows.append(BenchRow(Scheme(kind).value, list(horizons), seconds, errors, status))
    return rows


# --- temporal order studies -------------------------------------------------

def richardson_orders(errors, ratio: float = 2.0) -> np.ndarray:
    """``log(e_k / e_{k+1}) / log(ratio)`` for successive refinements."""
    e = np.asarray(errors, dtype=float)
    return np.log(e[:-1] / e[1:]) / np.log(ratio)


def temporal_order_study(scheme: SchemeConfig, Ns=(250, 500, 1000, 2000),
                         problem: Problem = Problem.EXACT, L: float = 64.0,
                         M: int = 1024, T: float = 1.0,
                         model: ModelParams | None = None,
                         self_convergence: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Errors and observed orders for successively doubled ``N``.

    By default the error is the root of the space-time error against the
    closed form.  With ``self_convergence`` it is the discrete l2 distance
    between final states at ``N`` and ``2N``, which needs no exact solution
    and isolates the time discretisation from the spatial error; one extra
    run at twice the largest ``N`` is made.
    """
    model = model or ModelParams()
    Ns = list(Ns)
    if any(b != 2 * a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("step counts must double")

    def run(N):
        spec = RunSpec(scheme=scheme, L=L, M=M, T=T, N=N, model=model,
                       problem=problem, record_every=N)
        return run_simulation(spec)

    if not self_convergence:
        errors = [math.sqrt(run(N).records[-1].l2err_sq) for N in Ns]
    else:
        dx = 2.0 * L / M
        finals = [error_nodes(run(N).final) for N in Ns + [2 * Ns[-1]]]
        errors = [math.sqrt(dx * float(np.sum(np.abs(a - b) ** 2)))
                  for a, b in zip(finals, finals[1:])]
    errors = np.array(errors)
    return errors, richardson_orders(errors)
