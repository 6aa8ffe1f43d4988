"""Compare the numba and numpy kernel backends.

Times the individual kernels on a Sod-like state and whole runs of a few
problems, then prints per-backend timings and the numpy/numba speed-up.

    python benchmarks/bench_backends.py --n 3200 --repeat 5
"""

import argparse
import statistics
import time

import numpy as np

from hybrid_bsqi import _kernels, evolve
from hybrid_bsqi.grid import build_grid
from hybrid_bsqi.problems import catalog


def best_of(fn, repeat, number):
    fn()  # warm-up: compilation and cache loading
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn()
        times.append((time.perf_counter() - t0) / number)
    return min(times)


def kernel_cases(n):
    problem = catalog("euler_sod")
    grid = build_grid(*problem.domain, n, layout="cell")
    u, _ = evolve.run(problem, grid, evolve.HybridConfig("weno5"), 0.05)
    v = u.values
    f = problem.flux(v)
    g = u.ghost_width
    flags = np.zeros(n, dtype=np.int8)
    flags[n // 3:n // 3 + n // 25] = 1  # about 4% WENO nodes
    ones = np.ones(n, dtype=np.int8)
    L = np.zeros((n, 3))
    out = np.empty_like(v)
    zero = np.zeros(3)
    return {
        "hybrid_rhs bsqi": lambda k: k.hybrid_rhs(v, f, 2.0, flags * 0, grid.dx, 0, 2, 1e-6, g),
        "hybrid_rhs 4%": lambda k: k.hybrid_rhs(v, f, 2.0, flags, grid.dx, 0, 2, 1e-6, g),
        "hybrid_rhs weno3": lambda k: k.hybrid_rhs(v, f, 2.0, ones, grid.dx, 0, 2, 1e-6, g),
        "hybrid_rhs weno5": lambda k: k.hybrid_rhs(v, f, 2.0, ones, grid.dx, 1, 3, 1e-6, g),
        "wlte_flags": lambda k: k.wlte_flags(v, v, f, f, grid.dx, 1e-4, g, 1e-9),
        "rk_stage": lambda k: k.rk_stage(out, v, v, L, 0.75, 0.25, 1e-4, g),
        "euler_flux": lambda k: k.euler_flux(v, 1.4),
        "hybrid_step 4%": lambda k: k.hybrid_step(v, f, 1e-5, flags, 2.0, grid.dx, 0, 2, 1e-6,
                                                  g, 2, zero, zero, 4, 1.4),
    }


def run_cases(n):
    out = {}
    for name, scheme in (("burgers_pulse", "hybrid6"), ("buckley_leverett", "hybrid4"),
                         ("euler_sod", "hybrid6"), ("euler_sod", "weno5")):
        problem = catalog(name)
        grid = build_grid(*problem.domain, n, layout="cell")

        def go(backend, problem=problem, grid=grid, scheme=scheme):
            cfg = evolve.HybridConfig(scheme, backend=backend)
            return evolve.run(problem, grid, cfg, 0.05)[1].wall_seconds

        out[f"run {name} {scheme}"] = go
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--n", type=int, default=3200, help="number of cells")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _kernels.available()
    print(f"n = {args.n}; backends: {', '.join(backends)}")
    print(f"{'case':28s}" + "".join(f"{b:>14s}" for b in backends) + "   speed-up")
    for name, fn in kernel_cases(args.n).items():
        t = {b: best_of(lambda: fn(_kernels.get(b)), args.repeat, 20) for b in backends}
        row = "".join(f"{t[b] * 1e6:11.1f} us" for b in backends)
        ratio = t["numpy"] / t["numba"] if "numba" in t else float("nan")
        print(f"{name:28s}{row}   {ratio:7.1f}x")
    for name, fn in run_cases(args.n).items():
        t = {}
        for b in backends:
            fn(b)
            t[b] = statistics.median(fn(b) for _ in range(3))
        row = "".join(f"{t[b]:12.3f} s" for b in backends)
        ratio = t["numpy"] / t["numba"] if "numba" in t else float("nan")
        print(f"{name:28s}{row}   {ratio:7.1f}x")


if __name__ == "__main__":
    main()
