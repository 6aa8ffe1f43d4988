"""Command-line front end.

Subcommands::

    run          one integration, writes solution/indicator/diagnostics CSVs and a manifest
    convergence  error table over a list of mesh sizes
    reproduce    a named preset (table2 ... nonconvex, efficiency)
    benchmark    median wall-clock table of hybrid against pure WENO

Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 IO failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import platform
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, _kernels, evolve, harness, presets
from .grid import CELL, VERTEX, build_grid
from .problems import NAMES as PROBLEM_NAMES
from .problems import catalog, load_riemann_config

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

NOTES = (
    "quintic first-derivative stencil uses 2880 in both halves (antisymmetric form)",
    "QnBSQI interface flux carries no extra 1/dx factor",
    "non-convex flux branch for u >= 1/2 is u^2/2 - u/2 + 3/16, the C1 continuation",
    "first step is pure WENO; flags are frozen across the three RK stages",
)


class ConfigError(ValueError):
    """Invalid or conflicting configuration."""


@dataclass
class RunConfig:
    problem: str | None = None
    problem_file: str | None = None
    scheme: str = "hybrid6"
    m: int | None = None
    n: tuple[int, ...] | None = None
    cfl: float | None = None
    t_final: float | None = None
    K: float | None = None
    M: int = 2
    epsilon: float = 1e-6
    dt_rule: str = "cfl"
    layout: str = CELL
    norm: str = harness.WEIGHTED
    backend: str | None = None
    out: str = "out"
    indicator: bool = True
    diagnostics: bool = True
    gnuplot: bool = False

    def dt_fixed(self) -> tuple[float, float] | None:
        return parse_dt_rule(self.dt_rule)

    def lines(self) -> list[str]:
        """``key = value`` lines; unset optional keys are left out."""
        out = []
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if isinstance(v, tuple):
                v = ",".join(str(x) for x in v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = repr(v)
            out.append(f"{f.name} = {v}")
        return out


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def parse_dt_rule(text: str) -> tuple[float, float] | None:
    """``cfl`` -> None; ``fixed:c:q`` -> (c, q) meaning dt = c dx^q."""
    text = text.strip().lower()
    if text == "cfl":
        return None
    parts = text.split(":")
    if len(parts) != 3 or parts[0] != "fixed":
        raise ConfigError(f"dt rule must be 'cfl' or 'fixed:c:q', got {text!r}")
    try:
        c, q = float(parts[1]), float(parts[2])
    except ValueError:
        raise ConfigError(f"bad numbers in dt rule {text!r}") from None
    if c <= 0:
        raise ConfigError("fixed dt coefficient must be positive")
    return c, q


def _coerce(key: str, raw):
    if raw is None:
        return None
    kind = str(_FIELDS[key].type)
    try:
        if "tuple" in kind:
            if isinstance(raw, (list, tuple)):
                return tuple(int(v) for v in raw)
            return tuple(int(v) for v in str(raw).replace(" ", "").split(",") if v)
        if kind.startswith("bool"):
            if isinstance(raw, bool):
                return raw
            low = str(raw).strip().lower()
            if low not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(raw)
            return low in ("true", "1", "yes")
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
        return str(raw).strip()
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def read_config_file(path) -> dict:
    values = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _FIELDS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce(key, val)
    return values


def validate(cfg: RunConfig) -> RunConfig:
    if cfg.problem is None and cfg.problem_file is None:
        raise ConfigError("a problem is required (--problem or --problem-file)")
    if cfg.problem is not None and cfg.problem not in PROBLEM_NAMES:
        raise ConfigError(f"unknown problem {cfg.problem!r}; choose from {', '.join(PROBLEM_NAMES)}")
    if cfg.scheme.lower() not in evolve.PAIRINGS:
        raise ConfigError(f"unknown scheme {cfg.scheme!r}; choose from {', '.join(evolve.PAIRINGS)}")
    if cfg.dt_fixed() is not None and cfg.cfl is not None:
        raise ConfigError("conflicting dt rules: a CFL number and a fixed dt rule were both given")
    for key in ("m", "cfl", "t_final", "epsilon"):
        v = getattr(cfg, key)
        if v is not None and v <= 0:
            raise ConfigError(f"{key} must be positive")
    if cfg.cfl is not None and cfg.cfl > 1:
        raise ConfigError("cfl must lie in (0, 1]")
    if cfg.K is not None and cfg.K < 0:
        raise ConfigError("K must be non-negative")
    if cfg.M < 0:
        raise ConfigError("M must be non-negative")
    if cfg.n is not None and any(v <= 0 for v in cfg.n):
        raise ConfigError("mesh sizes must be positive")
    if cfg.layout not in (CELL, VERTEX):
        raise ConfigError(f"layout must be {CELL!r} or {VERTEX!r}")
    if cfg.norm not in (harness.WEIGHTED, harness.MEAN):
        raise ConfigError(f"norm must be {harness.WEIGHTED!r} or {harness.MEAN!r}")
    if cfg.backend is not None and cfg.backend not in _kernels.available():
        raise ConfigError(f"backend {cfg.backend!r} not available; have {_kernels.available()}")
    return cfg


def parse_config(args: argparse.Namespace) -> RunConfig:
    """Config file values overridden by explicitly given flags."""
    values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in _FIELDS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = _coerce(key, flag)
    return validate(RunConfig(**values))


def _problem(cfg: RunConfig):
    if cfg.problem_file is not None:
        try:
            return load_riemann_config(cfg.problem_file)
        except OSError as exc:
            raise ConfigError(f"cannot read problem file {cfg.problem_file}: {exc.strerror}") from None
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return catalog(cfg.problem)


def _hybrid_config(cfg: RunConfig) -> evolve.HybridConfig:
    try:
        return evolve.HybridConfig(cfg.scheme, K=cfg.K, M=cfg.M, epsilon=cfg.epsilon, cfl=cfg.cfl,
                                   dt_fixed=cfg.dt_fixed(), backend=cfg.backend)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _versions() -> dict:
    out = {"hybrid_bsqi": __version__, "python": platform.python_version(),
           "numpy": np.__version__, "kernels": _kernels.get(None).__name__.rsplit(".", 1)[-1]}
    try:
        import numba
        out["numba"] = numba.__version__
    except ImportError:  # pragma: no cover
        pass
    return out


def run_experiment(cfg: RunConfig) -> list[str]:
    """Integrate once and write the artefacts; returns the written paths."""
    problem = _problem(cfg)
    hc = _hybrid_config(cfg)
    try:
        grid = build_grid(*problem.domain, cfg.m or problem.m, layout=cfg.layout)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    u, rep = evolve.run(problem, grid, hc, cfg.t_final, record_indicator=cfg.indicator)
    os.makedirs(cfg.out, exist_ok=True)
    paths = {"solution": os.path.join(cfg.out, "solution.csv")}
    harness.write_solution_csv(paths["solution"], problem, grid.nodes, u.interior)
    if cfg.indicator:
        paths["indicator"] = os.path.join(cfg.out, "indicator.csv")
        rep.write_indicator_csv(paths["indicator"])
    if cfg.diagnostics:
        paths["diagnostics"] = os.path.join(cfg.out, "diagnostics.csv")
        rep.write_diagnostics_csv(paths["diagnostics"])
    paths["manifest"] = os.path.join(cfg.out, "manifest.json")
    manifest = {
        "config": {k: list(v) if isinstance(v, tuple) else v
                   for k, v in dataclasses.asdict(cfg).items() if v is not None},
        "resolved": {"problem": problem.name, "m": grid.m, "dx": grid.dx,
                     "t_final": rep.t_final, "steps": rep.steps,
                     "final_weno_pct": 100.0 * rep.final_weno_fraction,
                     "mean_weno_pct": harness.weno_usage(rep.diagnostics)},
        "notes": list(NOTES),
        "versions": _versions(),
        "files": {k: os.path.basename(v) for k, v in paths.items()},
    }
    with open(paths["manifest"], "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return list(paths.values())


# -- argument parsing ----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, run_like: bool = True) -> None:
    p.add_argument("--config", help="file of 'key = value' lines; flags override it")
    p.add_argument("--problem", help=f"one of: {', '.join(PROBLEM_NAMES)}")
    p.add_argument("--problem-file", dest="problem_file",
                   help="Riemann problem file (left, right, x0, gamma, a, b, ...)")
    p.add_argument("--scheme", help=f"one of: {', '.join(evolve.PAIRINGS)}")
    p.add_argument("--cfl", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--K", dest="K", type=float, help="indicator constant (default 1/dx)")
    p.add_argument("--M", dest="M", type=int, help="flag dilation width (default 2)")
    p.add_argument("--epsilon", type=float, help="WENO epsilon (default 1e-6)")
    p.add_argument("--dt-rule", dest="dt_rule", help="'cfl' or 'fixed:c:q' for dt = c dx^q")
    p.add_argument("--layout", choices=(CELL, VERTEX))
    p.add_argument("--backend", choices=_kernels.available())
    p.add_argument("--out", help="output directory (run) or file (convergence)")
    p.add_argument("--print-config", action="store_true",
                   help="print the resolved configuration and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hybrid-bsqi", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="integrate one problem")
    _common(p)
    p.add_argument("--m", type=int, help="number of cells")
    p.add_argument("--no-indicator", dest="indicator", action="store_const", const=False)
    p.add_argument("--no-diagnostics", dest="diagnostics", action="store_const", const=False)

    p = sub.add_parser("convergence", help="error table over mesh sizes")
    _common(p)
    p.add_argument("--n", help="comma-separated mesh sizes, e.g. 20,40,80")
    p.add_argument("--norm", choices=(harness.WEIGHTED, harness.MEAN))
    p.add_argument("--gnuplot", action="store_const", const=True,
                   help="whitespace-separated output instead of CSV")

    p = sub.add_parser("reproduce", help="run a named preset")
    p.add_argument("preset", choices=list(presets.PRESETS))
    p.add_argument("--out", default="results", help="output directory")
    p.add_argument("--n", help="override the preset's mesh sizes")
    p.add_argument("--backend", choices=_kernels.available())
    p.add_argument("--repetitions", type=int, default=3)

    p = sub.add_parser("benchmark", help="wall-clock table, hybrid against pure WENO")
    p.add_argument("--problem", action="append", dest="problems",
                   help="repeatable; default burgers_pulse, buckley_leverett, euler_sod")
    p.add_argument("--schemes", default="hybrid4,weno3,hybrid6,weno5")
    p.add_argument("--n", default="800,1600,3200")
    p.add_argument("--t-final", dest="t_final", type=float, default=0.25)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--layout", choices=(CELL, VERTEX), default=CELL)
    p.add_argument("--backend", choices=_kernels.available())
    p.add_argument("--out", help="CSV file (one per problem, suffixed by problem name)")
    return parser


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _cmd_run(args) -> int:
    cfg = parse_config(args)
    if args.print_config:
        print("\n".join(cfg.lines()))
        return EXIT_OK
    for path in run_experiment(cfg):
        print(path)
    return EXIT_OK


def _cmd_convergence(args) -> int:
    cfg = parse_config(args)
    if cfg.n is None or len(cfg.n) < 2:
        raise ConfigError("convergence needs --n with at least two mesh sizes")
    if any(b <= a for a, b in zip(cfg.n, cfg.n[1:])):
        raise ConfigError("mesh sizes must be strictly increasing")
    if args.print_config:
        print("\n".join(cfg.lines()))
        return EXIT_OK
    problem = _problem(cfg)
    reports = harness.convergence_study(problem, _hybrid_config(cfg), cfg.n, cfg.t_final,
                                        layout=cfg.layout, norm=cfg.norm,
                                        reference_n=None if problem.exact else 8 * cfg.n[-1])
    path = cfg.out if cfg.out != "out" else "convergence.csv"
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    harness.write_reports(reports, path, gnuplot=cfg.gnuplot)
    with open(path) as fh:
        sys.stdout.write(fh.read())
    return EXIT_OK


def _cmd_reproduce(args) -> int:
    ns = _ints(args.n) if args.n else None
    result = presets.run_preset(args.preset, args.out, args.backend, ns, args.repetitions)
    for (pname, scheme), reports in result.tables.items():
        print(f"{pname} {scheme}")
        for r in reports:
            order = "" if r.order_linf is None else f"{r.order_linf:.3f}"
            print(f"  N={r.n:<6d} linf={r.linf:.6e} ({order}) l1={r.l1:.6e} l2={r.l2:.6e}")
    for s in result.snapshots:
        print(f"{s.problem} {s.scheme} N={s.n}: l1={s.error.l1:.6e} linf={s.error.linf:.6e}")
    for n, (fin, avg) in result.usage.items():
        print(f"N={n}: final WENO {fin:.2f}%  time-averaged {avg:.2f}%")
    for pname, table in result.timing.items():
        print(pname)
        for n in table.n_list:
            ratios = "  ".join(f"{h}/{harness.HYBRID_PARTNER[h]}={table.ratio(h, n):.3f}"
                               for h in table.ratio_columns())
            print(f"  N={n}: {ratios}")
    for path in result.files:
        print(path)
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    problems = args.problems or ["burgers_pulse", "buckley_leverett", "euler_sod"]
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    for s in schemes:
        if s not in evolve.PAIRINGS:
            raise ConfigError(f"unknown scheme {s!r}")
    for name in problems:
        if name not in PROBLEM_NAMES:
            raise ConfigError(f"unknown problem {name!r}")
    if args.repetitions < 3:
        raise ConfigError("use at least three repetitions")
    for name in problems:
        table = harness.efficiency_benchmark(catalog(name), schemes, _ints(args.n), args.t_final,
                                             args.repetitions, layout=args.layout,
                                             backend=args.backend)
        print(name)
        for n in table.n_list:
            secs = "  ".join(f"{s}={table.seconds[s][n]:.4f}s" for s in schemes)
            ratios = "  ".join(f"{h}/{harness.HYBRID_PARTNER[h]}={table.ratio(h, n):.3f}"
                               for h in table.ratio_columns())
            print(f"  N={n}: {secs}  {ratios}")
        if args.out:
            root, ext = os.path.splitext(args.out)
            path = f"{root}_{name}{ext or '.csv'}"
            parent = os.path.dirname(path)
            if parent:
                os.makedirs(parent, exist_ok=True)
            table.write_csv(path)
            print(path)
    return EXIT_OK


COMMANDS = {"run": _cmd_run, "convergence": _cmd_convergence,
            "reproduce": _cmd_reproduce, "benchmark": _cmd_benchmark}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except evolve.NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        where = f" ({exc.filename})" if exc.filename else ""
        print(f"IO failure{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
