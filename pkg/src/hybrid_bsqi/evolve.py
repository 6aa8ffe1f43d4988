"""Hybrid semi-discrete operator, SSP-RK3 stepping and the time loop."""

from __future__ import annotations

import csv
import math
import time as _time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from ._kernels.numpy_impl import FLUX_IDS
from .grid import PERIODIC, TRANSMISSIVE, Grid, SolutionField, apply_bc, build_grid
from .schemes import DEFAULT_EPSILON, SchemeKind

ALPHA_FLOOR = 1e-12

HYBRID, PURE_BSQI, PURE_WENO = "hybrid", "bsqi", "weno"

# name -> (smooth scheme, shock scheme, mode)
PAIRINGS = {
    "hybrid4": (SchemeKind.CBSQI, SchemeKind.WENO3, HYBRID),
    "hybrid6": (SchemeKind.QNBSQI, SchemeKind.WENO5, HYBRID),
    "cbsqi": (SchemeKind.CBSQI, SchemeKind.WENO3, PURE_BSQI),
    "qnbsqi": (SchemeKind.QNBSQI, SchemeKind.WENO5, PURE_BSQI),
    "weno3": (SchemeKind.CBSQI, SchemeKind.WENO3, PURE_WENO),
    "weno5": (SchemeKind.QNBSQI, SchemeKind.WENO5, PURE_WENO),
}


class NumericalError(RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time


@dataclass
class HybridConfig:
    """Scheme selection and indicator parameters.

    ``K=None`` means K = 1/dx. ``dt_fixed=(c, q)`` replaces the CFL rule by
    dt = c * dx**q. ``cfl=None`` takes the problem's default. With ``fused``
    a problem that names a compiled flux is stepped by one kernel call per
    step; results agree with the unfused path to rounding.
    """

    scheme: str = "hybrid6"
    K: float | None = None
    M: int = 2
    epsilon: float = DEFAULT_EPSILON
    cfl: float | None = None
    dt_fixed: tuple[float, float] | None = None
    smooth_scheme: SchemeKind | None = None
    shock_scheme: SchemeKind | None = None
    allow_mixed: bool = False
    backend: str | None = None
    fused: bool = True

    def __post_init__(self):
        self.scheme = self.scheme.lower()
        if self.scheme not in PAIRINGS:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {', '.join(PAIRINGS)}")
        smooth, shock, _ = PAIRINGS[self.scheme]
        self.smooth_scheme = SchemeKind.parse(self.smooth_scheme or smooth)
        self.shock_scheme = SchemeKind.parse(self.shock_scheme or shock)
        if not self.smooth_scheme.is_bsqi or self.shock_scheme.is_bsqi:
            raise ValueError("smooth scheme must be a BSQI scheme and shock scheme a WENO scheme")
        if (self.smooth_scheme, self.shock_scheme) != (smooth, shock) and not self.allow_mixed:
            raise ValueError(f"{self.scheme} pairs {smooth.name} with {shock.name}; "
                             "set allow_mixed=True to override")
        if self.M < 0:
            raise ValueError("M must be non-negative")
        if self.K is not None and self.K < 0:
            raise ValueError("K must be non-negative")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.cfl is not None and not 0 < self.cfl <= 1:
            raise ValueError("cfl must lie in (0, 1]")
        if self.dt_fixed is not None and self.dt_fixed[0] <= 0:
            raise ValueError("fixed dt coefficient must be positive")

    @property
    def mode(self) -> str:
        return PAIRINGS[self.scheme][2]


@dataclass
class StepDiagnostics:
    step: int
    time: float
    dt: float
    alpha: float
    weno_cells: int
    total_cells: int


@dataclass
class RunReport:
    problem: str
    scheme: str
    m: int
    t_final: float
    steps: int = 0
    wall_seconds: float = 0.0
    diagnostics: list[StepDiagnostics] = field(default_factory=list)
    indicator_history: list[np.ndarray] | None = None
    mass_initial: np.ndarray | None = None
    mass_final: np.ndarray | None = None

    @property
    def final_weno_fraction(self) -> float:
        d = self.diagnostics[-1]
        return d.weno_cells / d.total_cells

    @property
    def mass_change(self) -> np.ndarray:
        """Change of sum_j u_j dx; the conservation defect under periodic BC."""
        return self.mass_final - self.mass_initial

    def write_diagnostics_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["step", "t", "dt", "alpha", "weno_cell_count"])
            for d in self.diagnostics:
                w.writerow([d.step, f"{d.time:.9e}", f"{d.dt:.9e}", f"{d.alpha:.9e}", d.weno_cells])

    def write_indicator_csv(self, path) -> None:
        """One row per step: the step's start time, then one 0/1 flag per node."""
        if self.indicator_history is None:
            raise ValueError("run was made without recording the indicator")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            n = len(self.indicator_history[0]) if self.indicator_history else 0
            w.writerow(["t"] + [f"node_{j}" for j in range(n)])
            for d, row in zip(self.diagnostics, self.indicator_history):
                w.writerow([f"{d.time:.9e}"] + [int(v) for v in row])

    def summary(self) -> dict:
        out = {k: v for k, v in asdict(self).items()
               if k not in ("diagnostics", "indicator_history", "mass_initial", "mass_final")}
        if self.diagnostics:
            out["final_weno_fraction"] = self.final_weno_fraction
        if self.mass_initial is not None:
            out["mass_change"] = self.mass_change.tolist()
        return out


def compute_dt(u: SolutionField, problem, grid: Grid, cfl: float,
               dt_fixed: tuple[float, float] | None = None) -> tuple[float, float]:
    """(dt, alpha) with alpha the global maximum wave speed over the nodes."""
    if cfl <= 0:
        raise ValueError("cfl must be positive")
    alpha = float(problem.max_speed(u.interior))
    if dt_fixed is not None:
        c, q = dt_fixed
        return c * grid.dx ** q, alpha
    return cfl * grid.dx / max(alpha, ALPHA_FLOOR), alpha


def rhs_hybrid(u: SolutionField, flags, cfg: HybridConfig, problem, grid: Grid,
               alpha: float | None = None) -> np.ndarray:
    """L(u) at the nodes x_0..x_m; ghosts of ``u`` must be filled."""
    values = u.values
    if alpha is None:
        alpha = max(float(problem.max_speed(u.interior)), ALPHA_FLOOR)
    flags = np.ascontiguousarray(flags, dtype=np.int8)
    if flags.shape[0] != grid.n_nodes:
        raise ValueError("one flag per node expected")
    k = _kernels.get(cfg.backend)
    out = k.hybrid_rhs(values, problem.flux(values), alpha, flags, grid.dx,
                       int(cfg.smooth_scheme), int(cfg.shock_scheme), cfg.epsilon, u.ghost_width)
    if not np.all(np.isfinite(out)):
        raise NumericalError("non-finite right-hand side")
    return out


def ssprk3_step(u: SolutionField, dt: float, rhs: Callable[[np.ndarray], np.ndarray],
                bc=None, duplicate: bool = True, backend: str | None = None) -> SolutionField:
    """Three-stage SSP Runge-Kutta step.

    ``rhs`` maps a ghost-padded array to L at the non-ghost rows. When ``bc``
    is given the ghosts are refreshed before every stage; ``duplicate`` is
    forwarded to :func:`apply_bc`.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    k = _kernels.get(backend)
    g = u.ghost_width
    v0 = u.values
    sl = slice(g, v0.shape[0] - g)
    # ghosts are overwritten by apply_bc when a boundary condition is given
    new = np.empty_like if bc is not None else np.copy

    def stage(base):
        if bc is not None:
            apply_bc(base, g, bc, duplicate)
        return rhs(base)

    v1 = new(v0)
    k.rk_stage(v1, v0, v0, stage(v0), 0.0, 1.0, dt, g)
    v2 = new(v0)
    k.rk_stage(v2, v0, v1, stage(v1), 0.75, 0.25, dt, g)
    v3 = new(v0)
    k.rk_stage(v3, v0, v2, stage(v2), 1.0 / 3.0, 2.0 / 3.0, dt, g)
    if bc is not None:
        apply_bc(v3, g, bc, duplicate)
    if not np.all(np.isfinite(v3[sl])):
        raise NumericalError(f"non-finite state at t={u.time + dt:.6g}; CFL too large?",
                             time=u.time + dt)
    return SolutionField(v3, g, u.time + dt)


def initial_field(problem, grid: Grid) -> SolutionField:
    u0 = np.asarray(problem.initial(grid.nodes), dtype=float).reshape(grid.n_nodes, -1)
    dup = grid.duplicates_endpoint(problem.bc)
    if dup:
        u0[-1] = u0[0]
    field = SolutionField.from_interior(u0, grid.ghost_width)
    apply_bc(field.values, field.ghost_width, problem.bc, dup)
    return field


def _fused_args(problem, bc, dup, k):
    """Trailing arguments of ``hybrid_step`` for a problem with a compiled flux."""
    if problem.flux_kernel is None:
        return None
    p = problem.components
    left = right = np.zeros(p)
    if bc.kind == PERIODIC:
        code = 0 if dup else 1
    elif bc.kind == TRANSMISSIVE:
        code = 2
    else:
        code = 3
        left = np.asarray(bc.left_state, dtype=float).reshape(p)
        right = np.asarray(bc.right_state, dtype=float).reshape(p)
    gamma = problem.gamma if problem.gamma is not None else 0.0
    return code, left, right, FLUX_IDS[problem.flux_kernel], gamma


def run(problem, grid: Grid | None = None, cfg: HybridConfig | None = None,
        t_final: float | None = None, record_indicator: bool = False,
        u0: SolutionField | None = None) -> tuple[SolutionField, RunReport]:
    """Integrate ``problem`` to ``t_final`` and return the final field and a report."""
    cfg = cfg or HybridConfig()
    if grid is None:
        grid = build_grid(*problem.domain, problem.m)
    t_final = problem.t_final if t_final is None else t_final
    if t_final <= 0:
        raise ValueError("t_final must be positive")
    cfl = cfg.cfl if cfg.cfl is not None else problem.cfl
    K = cfg.K if cfg.K is not None else 1.0 / grid.dx
    thresh = K * grid.dx ** 4
    bc = problem.bc
    periodic = bc.is_periodic
    dup = grid.duplicates_endpoint(bc)
    unique = grid.unique_nodes(bc)
    k = _kernels.get(cfg.backend)
    g = grid.ghost_width
    n = grid.n_nodes
    smooth, shock = int(cfg.smooth_scheme), int(cfg.shock_scheme)
    field = u0.copy() if u0 is not None else initial_field(problem, grid)
    flux = problem.flux
    max_speed = problem.max_speed
    report = RunReport(problem.name, cfg.scheme, grid.m, t_final)
    report.indicator_history = [] if record_indicator else None
    report.mass_initial = field.values[unique].sum(axis=0) * grid.dx

    zeros = np.zeros(n, dtype=np.int8)
    ones = np.ones(n, dtype=np.int8)
    fused = _fused_args(problem, bc, dup, k) if cfg.fused else None
    prev_values = prev_f = None
    prev_dt = 0.0
    t = field.time
    values = field.values
    f_curr = flux(values)
    speed = float(max_speed(values[g:g + n]))
    step = 0
    start = _time.perf_counter()
    while t < t_final:
        if cfg.dt_fixed is not None:
            dt = cfg.dt_fixed[0] * grid.dx ** cfg.dt_fixed[1]
        else:
            dt = cfl * grid.dx / max(speed, ALPHA_FLOOR)
        last = t + dt >= t_final
        if last:
            dt = t_final - t
        alpha = max(speed, ALPHA_FLOOR)

        if cfg.mode == PURE_BSQI:
            flags = zeros
        elif cfg.mode == PURE_WENO or prev_values is None:
            flags = ones
        else:
            raw = k.wlte_flags(prev_values, values, prev_f, f_curr, grid.dx, prev_dt, g, thresh)
            if dup:
                raw[0] |= raw[-1]
                flags = np.empty(n, dtype=np.int8)
                flags[:-1] = k.dilate(raw[:-1], cfg.M, True)
                flags[-1] = flags[0]
            else:
                flags = k.dilate(raw, cfg.M, periodic)

        if fused is not None:
            new_values, f_next, speed, ok = k.hybrid_step(
                values, f_curr, dt, flags, alpha, grid.dx, smooth, shock, cfg.epsilon, g,
                *fused)
            if not ok:
                raise NumericalError(f"step {step + 1} at t={t:.6g}: non-finite state "
                                     f"at t={t + dt:.6g}; CFL too large?", step + 1, t)
        else:
            first = [True]

            def rhs(v, flags=flags, alpha=alpha, f_curr=f_curr):
                fv = f_curr if first[0] else flux(v)
                first[0] = False
                return k.hybrid_rhs(v, fv, alpha, flags, grid.dx, smooth, shock, cfg.epsilon, g)

            try:
                new_values = ssprk3_step(SolutionField(values, g, t), dt, rhs, bc, dup,
                                         cfg.backend).values
            except NumericalError as exc:
                raise NumericalError(f"step {step + 1} at t={t:.6g}: {exc}", step + 1, t) from None
            f_next = flux(new_values)
            speed = float(max_speed(new_values[g:g + n]))

        step += 1
        weno_cells = np.count_nonzero(flags[:n - 1] if dup else flags)
        total = n - 1 if dup else n
        report.diagnostics.append(StepDiagnostics(step, t, dt, alpha, weno_cells, total))
        if record_indicator:
            report.indicator_history.append(flags.copy())
        prev_values, prev_f, prev_dt = values, f_curr, dt
        values, f_curr = new_values, f_next
        t = t_final if last else t + dt

    report.wall_seconds = _time.perf_counter() - start
    report.steps = step
    result = SolutionField(values, g, t)
    report.mass_final = values[unique].sum(axis=0) * grid.dx
    return result, report
