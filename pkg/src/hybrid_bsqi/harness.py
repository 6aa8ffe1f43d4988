"""Error norms, convergence tables, WENO usage and wall-clock benchmarks."""

from __future__ import annotations

import csv
import math
import statistics
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import evolve
from .grid import CELL, build_grid
from .problems import Problem, reference_solution

WEIGHTED, MEAN = "weighted", "mean"

CSV_COLUMNS = ("n", "linf", "order_linf", "l1", "order_l1", "l2", "order_l2",
               "seconds", "weno_pct")


@dataclass
class ErrorReport:
    n: int
    linf: float
    l1: float
    l2: float
    order_linf: float | None = None
    order_l1: float | None = None
    order_l2: float | None = None
    wall_seconds: float = 0.0
    weno_fraction: float = 0.0

    def row(self) -> tuple:
        return (self.n, self.linf, self.order_linf, self.l1, self.order_l1,
                self.l2, self.order_l2, self.wall_seconds, 100.0 * self.weno_fraction)


def error_norms(numerical, exact, dx: float, norm: str = WEIGHTED) -> tuple[float, float, float]:
    """(linf, l1, l2) of numerical - exact.

    ``norm="weighted"`` gives sum|e| dx and sqrt(sum e^2 dx); ``norm="mean"``
    replaces the dx weight by 1/len, i.e. the root-mean-square and mean error.
    """
    num = np.asarray(numerical, dtype=float)
    ref = np.asarray(exact, dtype=float)
    if num.shape != ref.shape:
        raise ValueError(f"shape mismatch: {num.shape} vs {ref.shape}")
    if num.size == 0:
        raise ValueError("empty fields")
    e = np.abs(num - ref).ravel()
    if norm == WEIGHTED:
        w = dx
    elif norm == MEAN:
        w = 1.0 / e.size
    else:
        raise ValueError(f"norm must be {WEIGHTED!r} or {MEAN!r}")
    return float(e.max()), float(e.sum() * w), float(math.sqrt((e * e).sum() * w))


def convergence_rates(errors: Sequence[float], ns: Sequence[int]) -> list[float | None]:
    """r_l = log(e_l / e_{l-1}) / log(N_{l-1} / N_l), None for the first level."""
    if len(errors) != len(ns):
        raise ValueError("one error per mesh size expected")
    out: list[float | None] = [None]
    for l in range(1, len(ns)):
        e0, e1 = errors[l - 1], errors[l]
        if e0 <= 0 or e1 <= 0:
            out.append(None)
        else:
            out.append(math.log(e1 / e0) / math.log(ns[l - 1] / ns[l]))
    return out


def _fill_orders(reports: list[ErrorReport]) -> None:
    ns = [r.n for r in reports]
    for name in ("linf", "l1", "l2"):
        rates = convergence_rates([getattr(r, name) for r in reports], ns)
        for r, q in zip(reports, rates):
            setattr(r, "order_" + name, q)


def measure(problem: Problem, cfg: evolve.HybridConfig, n: int, t_final: float | None = None,
            layout: str = CELL, norm: str = WEIGHTED, component: int | None = None,
            reference_n: int | None = None) -> tuple[ErrorReport, evolve.RunReport]:
    """Run one resolution and compare with the exact (or a fine reference) solution."""
    t_final = problem.t_final if t_final is None else t_final
    grid = build_grid(*problem.domain, n, layout=layout)
    u, rep = evolve.run(problem, grid, cfg, t_final)
    if problem.exact is not None:
        ref = reference_solution(problem, t_final, 0, grid.nodes)
    elif reference_n is not None:
        ref = reference_solution(problem, t_final, reference_n, grid.nodes, layout)
    else:
        raise ValueError(f"{problem.name} has no exact solution; pass reference_n")
    num = u.interior
    ref = np.asarray(ref, dtype=float).reshape(num.shape)
    if component is not None:
        num, ref = num[:, component], ref[:, component]
    linf, l1, l2 = error_norms(num, ref, grid.dx, norm)
    return ErrorReport(n, linf, l1, l2, wall_seconds=rep.wall_seconds,
                       weno_fraction=weno_usage(rep.diagnostics) / 100.0), rep


def convergence_study(problem: Problem, cfg: evolve.HybridConfig, n_list: Sequence[int],
                      t_final: float | None = None, dt_fixed: tuple[float, float] | None = None,
                      layout: str = CELL, norm: str = WEIGHTED, component: int | None = None,
                      reference_n: int | None = None) -> list[ErrorReport]:
    """Error reports over a refinement sequence, with observed orders filled in.

    ``dt_fixed=(c, q)`` overrides the time-step rule of ``cfg`` by dt = c dx^q.
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise ValueError("a convergence study needs at least two mesh sizes")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("mesh sizes must be strictly increasing")
    if dt_fixed is not None:
        cfg = evolve.HybridConfig(**{**cfg.__dict__, "dt_fixed": tuple(dt_fixed)})
    reports = []
    for n in n_list:
        try:
            rep, _ = measure(problem, cfg, n, t_final, layout, norm, component, reference_n)
        except evolve.NumericalError as exc:
            raise evolve.NumericalError(f"N={n}: {exc}", exc.step, exc.time) from None
        reports.append(rep)
    _fill_orders(reports)
    return reports


def weno_usage(diagnostics: Sequence[evolve.StepDiagnostics]) -> float:
    """Time-averaged share of WENO nodes in percent (steps weighted by dt)."""
    if not diagnostics:
        raise ValueError("empty step history")
    dts = np.array([d.dt for d in diagnostics])
    frac = np.array([d.weno_cells / d.total_cells for d in diagnostics])
    return float(100.0 * np.dot(dts, frac) / dts.sum())


def weno_snapshot(diagnostics: Sequence[evolve.StepDiagnostics]) -> float:
    """Share of WENO nodes in percent during the final step."""
    if not diagnostics:
        raise ValueError("empty step history")
    d = diagnostics[-1]
    return 100.0 * d.weno_cells / d.total_cells


# -- timing ------------------------------------------------------------------------

HYBRID_PARTNER = {"hybrid4": "weno3", "hybrid6": "weno5"}


@dataclass
class TimingTable:
    problem: str
    t_final: float
    repetitions: int
    seconds: dict[str, dict[int, float]] = field(default_factory=dict)
    samples: dict[str, dict[int, list[float]]] = field(default_factory=dict)

    @property
    def n_list(self) -> list[int]:
        return sorted({n for row in self.seconds.values() for n in row})

    def ratio(self, hybrid: str, n: int) -> float:
        return self.seconds[hybrid][n] / self.seconds[HYBRID_PARTNER[hybrid]][n]

    def ratio_columns(self) -> list[str]:
        return [h for h, w in HYBRID_PARTNER.items() if h in self.seconds and w in self.seconds]

    def write_csv(self, path) -> None:
        schemes = list(self.seconds)
        ratios = self.ratio_columns()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n"] + schemes + [f"{h}/{HYBRID_PARTNER[h]}" for h in ratios])
            for n in self.n_list:
                w.writerow([n] + [_fmt(self.seconds[s].get(n)) for s in schemes]
                           + [_fmt(self.ratio(h, n)) for h in ratios])


def efficiency_benchmark(problem: Problem, schemes: Sequence[str], n_list: Sequence[int],
                         t_final: float | None = None, repetitions: int = 3,
                         cfl: float | None = None, layout: str = CELL,
                         backend: str | None = None) -> TimingTable:
    """Median wall-clock seconds of the time loop per (scheme, N).

    Every scheme is run once on a small grid first so compilation and cache
    loading stay out of the measurement. Runs are strictly sequential.
    """
    if repetitions < 3:
        raise ValueError("use at least three repetitions")
    t_final = problem.t_final if t_final is None else t_final
    table = TimingTable(problem.name, t_final, repetitions)
    for scheme in schemes:
        cfg = evolve.HybridConfig(scheme, cfl=cfl, backend=backend)
        evolve.run(problem, build_grid(*problem.domain, 32, layout=layout), cfg, t_final / 50)
        table.seconds[scheme] = {}
        table.samples[scheme] = {}
        for n in n_list:
            grid = build_grid(*problem.domain, int(n), layout=layout)
            times = [evolve.run(problem, grid, cfg, t_final)[1].wall_seconds
                     for _ in range(repetitions)]
            table.samples[scheme][int(n)] = times
            table.seconds[scheme][int(n)] = statistics.median(times)
    return table


# -- output ------------------------------------------------------------------------

def _fmt(v, missing: str = "") -> str:
    if v is None:
        return missing
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{v:.9e}"


def write_reports(reports: Sequence[ErrorReport], path, gnuplot: bool = False) -> None:
    """CSV (or whitespace-separated, '#' header, '?' for missing) error table."""
    with open(path, "w", newline="") as fh:
        if gnuplot:
            fh.write("# " + " ".join(CSV_COLUMNS) + "\n")
            for r in reports:
                fh.write(" ".join(_fmt(v, "?") for v in r.row()) + "\n")
            return
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in reports:
            w.writerow([_fmt(v) for v in r.row()])


def read_reports(path) -> list[ErrorReport]:
    """Inverse of :func:`write_reports` for the CSV variant."""
    out = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            def opt(key):
                return float(rec[key]) if rec[key] else None
            out.append(ErrorReport(int(rec["n"]), float(rec["linf"]), float(rec["l1"]),
                                   float(rec["l2"]), opt("order_linf"), opt("order_l1"),
                                   opt("order_l2"), float(rec["seconds"]),
                                   float(rec["weno_pct"]) / 100.0))
    return out


def write_solution_csv(path, problem: Problem, nodes, values) -> None:
    """x followed by the problem's output columns (rho, u, p for Euler)."""
    names, cols = problem.output_columns(np.asarray(values, dtype=float))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("x",) + tuple(names))
        for x, row in zip(nodes, cols):
            w.writerow([_fmt(float(x))] + [_fmt(float(v)) for v in row])


def overshoot(numerical, exact_fine) -> tuple[float, float]:
    """(excursion beyond the exact range, largest jump of the exact profile).

    ``exact_fine`` should sample the exact solution finely enough that its
    largest neighbour difference resolves the biggest discontinuity.
    """
    num = np.asarray(numerical, dtype=float).ravel()
    ref = np.asarray(exact_fine, dtype=float).ravel()
    lo, hi = ref.min(), ref.max()
    excess = max(float(num.max() - hi), float(lo - num.min()), 0.0)
    return excess, float(np.max(np.abs(np.diff(ref))))
