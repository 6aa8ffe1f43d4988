"""Named experiments with every parameter pinned.

Each preset is one of four kinds:

* ``convergence``: error table over a refinement sequence, one per scheme;
* ``snapshot``: single runs compared with the exact or a fine reference solution;
* ``usage``: WENO share of the hybrid over a refinement sequence;
* ``efficiency``: wall-clock table of hybrid against pure WENO.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import evolve, harness
from .grid import CELL, build_grid
from .problems import catalog, reference_solution

CONVERGENCE, SNAPSHOT, USAGE, EFFICIENCY = "convergence", "snapshot", "usage", "efficiency"


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str
    problems: tuple[str, ...]
    schemes: tuple[str, ...]
    n_list: tuple[int, ...]
    t_final: float
    cfl: float | None = None
    dt_fixed: tuple[float, float] | None = None
    norm: str = harness.WEIGHTED
    component: int | None = None
    reference_n: int | None = None
    layout: str = CELL
    note: str = ""


PRESETS = {p.name: p for p in (
    Preset("table2", CONVERGENCE, ("advection_sine",), ("cbsqi",), (20, 40, 80, 160, 320), 1.0,
           dt_fixed=(1.0, 2.0), note="CBSQI on u_t + u_x = 0, sin x, periodic"),
    Preset("table3", CONVERGENCE, ("advection_sine",), ("qnbsqi",), (20, 40, 80, 160, 320), 1.0,
           dt_fixed=(1.0, 2.0), norm=harness.MEAN, note="QnBSQI on the same advection test"),
    Preset("table4", CONVERGENCE, ("burgers_sine",), ("cbsqi",), (40, 80, 160, 320, 640), 0.5,
           dt_fixed=(0.1, 1.5), norm=harness.MEAN, note="CBSQI on Burgers, sin x, before the shock"),
    Preset("table5", CONVERGENCE, ("burgers_sine",), ("qnbsqi",), (40, 80, 160, 320, 640), 0.5,
           dt_fixed=(0.1, 1.5), norm=harness.MEAN, note="QnBSQI on the same Burgers test"),
    Preset("table6", CONVERGENCE, ("burgers_pulse",), ("weno3", "hybrid4"), (50, 100, 150, 200),
           0.5, cfl=0.1, note="L1 of WENO3 and Hybrid4 on the Burgers square pulse"),
    Preset("table7", CONVERGENCE, ("burgers_pulse",), ("weno5", "hybrid6"), (50, 100, 150, 200),
           0.5, cfl=0.1, note="L1 of WENO5 and Hybrid6 on the Burgers square pulse"),
    Preset("fig4d", USAGE, ("burgers_pulse",), ("hybrid6",), (100, 200, 400, 800), 0.5, cfl=0.4,
           note="share of WENO5 nodes in Hybrid6 against N"),
    Preset("sod", SNAPSHOT, ("euler_sod",), ("hybrid6",), (300,), 0.25, cfl=0.3, component=0,
           note="Sod shock tube, density error against the exact Riemann solution"),
    Preset("lax", SNAPSHOT, ("euler_lax",), ("hybrid6",), (500,), 1.3, cfl=0.4, component=0,
           note="Lax shock tube, density error against the exact Riemann solution"),
    Preset("bl", SNAPSHOT, ("buckley_leverett",), ("qnbsqi", "hybrid6"), (800,), 0.21, cfl=0.2,
           reference_n=6400, note="Buckley-Leverett against a fine WENO5 reference"),
    Preset("nonconvex", SNAPSHOT, ("nonconvex_up", "nonconvex_down"), ("hybrid6",), (200,), 1.0,
           cfl=0.2, note="C1 non-convex flux, both step directions, against the exact solution"),
    Preset("efficiency", EFFICIENCY, ("burgers_pulse", "buckley_leverett", "euler_sod"),
           ("hybrid4", "weno3", "hybrid6", "weno5"), (800, 1600, 3200), 0.25,
           note="median wall-clock seconds, hybrid against pure WENO"),
)}


@dataclass
class SnapshotResult:
    problem: str
    scheme: str
    n: int
    error: harness.ErrorReport
    report: evolve.RunReport
    nodes: np.ndarray
    values: np.ndarray
    reference: np.ndarray


@dataclass
class PresetResult:
    preset: Preset
    tables: dict[tuple[str, str], list[harness.ErrorReport]] = field(default_factory=dict)
    snapshots: list[SnapshotResult] = field(default_factory=list)
    usage: dict[int, tuple[float, float]] = field(default_factory=dict)  # n -> (final %, mean %)
    timing: dict[str, harness.TimingTable] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)


def get(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def _snapshot(preset: Preset, pname: str, scheme: str, n: int, backend) -> SnapshotResult:
    problem = catalog(pname)
    cfg = evolve.HybridConfig(scheme, cfl=preset.cfl, dt_fixed=preset.dt_fixed, backend=backend)
    grid = build_grid(*problem.domain, n, layout=preset.layout)
    u, rep = evolve.run(problem, grid, cfg, preset.t_final, record_indicator=True)
    ref = reference_solution(problem, preset.t_final, preset.reference_n or 0, grid.nodes,
                             preset.layout)
    num = u.interior
    ref = np.asarray(ref, dtype=float).reshape(num.shape)
    a, b = num, ref
    if preset.component is not None:
        a, b = a[:, preset.component], b[:, preset.component]
    linf, l1, l2 = harness.error_norms(a, b, grid.dx, preset.norm)
    err = harness.ErrorReport(n, linf, l1, l2, wall_seconds=rep.wall_seconds,
                              weno_fraction=harness.weno_usage(rep.diagnostics) / 100.0)
    return SnapshotResult(pname, scheme, n, err, rep, grid.nodes, num.copy(), ref)


def run_preset(name: str, outdir: str | None = None, backend: str | None = None,
               n_list: tuple[int, ...] | None = None, repetitions: int = 3) -> PresetResult:
    """Run a preset; with ``outdir`` its tables and solutions are written there."""
    preset = get(name)
    ns = tuple(n_list) if n_list else preset.n_list
    result = PresetResult(preset)
    if outdir:
        os.makedirs(outdir, exist_ok=True)

    def out(fname):
        path = os.path.join(outdir, fname)
        result.files.append(path)
        return path

    for pname in preset.problems:
        problem = catalog(pname)
        if preset.kind == CONVERGENCE:
            for scheme in preset.schemes:
                cfg = evolve.HybridConfig(scheme, cfl=preset.cfl, backend=backend)
                reports = harness.convergence_study(problem, cfg, ns, preset.t_final,
                                                    preset.dt_fixed, preset.layout, preset.norm,
                                                    preset.component, preset.reference_n)
                result.tables[pname, scheme] = reports
                if outdir:
                    harness.write_reports(reports, out(f"{name}_{pname}_{scheme}.csv"))
        elif preset.kind == SNAPSHOT:
            for scheme in preset.schemes:
                for n in ns:
                    snap = _snapshot(preset, pname, scheme, n, backend)
                    result.snapshots.append(snap)
                    if outdir:
                        stem = f"{name}_{pname}_{scheme}_{n}"
                        harness.write_solution_csv(out(stem + "_solution.csv"), problem,
                                                   snap.nodes, snap.values)
                        harness.write_solution_csv(out(stem + "_reference.csv"), problem,
                                                   snap.nodes, snap.reference)
                        snap.report.write_indicator_csv(out(stem + "_indicator.csv"))
        elif preset.kind == USAGE:
            for scheme in preset.schemes:
                cfg = evolve.HybridConfig(scheme, cfl=preset.cfl, backend=backend)
                for n in ns:
                    grid = build_grid(*problem.domain, n, layout=preset.layout)
                    _, rep = evolve.run(problem, grid, cfg, preset.t_final)
                    result.usage[n] = (harness.weno_snapshot(rep.diagnostics),
                                       harness.weno_usage(rep.diagnostics))
            if outdir:
                with open(out(f"{name}_{pname}.csv"), "w") as fh:
                    fh.write("n,final_weno_pct,mean_weno_pct\n")
                    for n, (fin, avg) in result.usage.items():
                        fh.write(f"{n},{fin:.9e},{avg:.9e}\n")
        else:
            table = harness.efficiency_benchmark(problem, preset.schemes, ns, preset.t_final,
                                                 repetitions, preset.cfl, preset.layout, backend)
            result.timing[pname] = table
            if outdir:
                table.write_csv(out(f"{name}_{pname}.csv"))
    return result
