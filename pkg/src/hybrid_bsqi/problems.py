"""Catalog of test problems: fluxes, initial data, exact and reference solutions."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .grid import BoundaryCondition
from .riemann import (DEFAULT_GAMMA, EulerState, conserved_to_primitive,
                      primitive_to_conserved, sample_primitive)

PULSE_HALF_WIDTH = 1.0 / 3.0
NONCONVEX_X0 = 0.25

NAMES = ("advection_sine", "advection_pulse", "burgers_sine", "burgers_pulse",
         "buckley_leverett", "nonconvex_up", "nonconvex_down", "euler_sod", "euler_lax")


@dataclass(frozen=True)
class Problem:
    """A conservation law u_t + f(u)_x = 0 with its data.

    ``flux`` and ``max_speed`` act on arrays of shape (n, p); ``initial`` and
    ``exact`` map node coordinates to arrays of that shape.
    """

    name: str
    components: int
    flux: Callable[[np.ndarray], np.ndarray]
    max_speed: Callable[[np.ndarray], float]
    initial: Callable[[np.ndarray], np.ndarray]
    bc: BoundaryCondition
    domain: tuple[float, float]
    t_final: float
    m: int
    cfl: float = 0.4
    exact: Callable[[np.ndarray, float], np.ndarray] | None = None
    component_names: tuple[str, ...] = ("u",)
    gamma: float | None = None
    meta: dict = field(default_factory=dict, compare=False)
    # name of a compiled flux the fused stepper may use instead of ``flux``
    flux_kernel: str | None = None

    @property
    def is_system(self) -> bool:
        return self.components > 1

    def output_columns(self, u: np.ndarray) -> tuple[tuple[str, ...], np.ndarray]:
        """Column names and values written to solution files (primitive for Euler)."""
        if self.gamma is not None:
            return ("rho", "u", "p"), conserved_to_primitive(u, self.gamma)
        return self.component_names, u


# -- scalar fluxes --------------------------------------------------------------

def advection_flux(u):
    return u.copy()


def advection_speed(u):
    return 1.0


def burgers_flux(u):
    return _kernels.get().burgers_flux(np.asarray(u, dtype=float))


def burgers_speed(u):
    return float(_kernels.get().burgers_speed(np.asarray(u, dtype=float)))


def bl_flux(u):
    """Buckley-Leverett flux u^2 / (u^2 + (1-u)^2)."""
    return _kernels.get().bl_flux(np.asarray(u, dtype=float))


def bl_derivative(u):
    return _kernels.get().bl_derivative(np.asarray(u, dtype=float))


def bl_speed(u):
    """max |f'(u)| over the data, counting the peak f'(1/2) = 2 when it is crossed."""
    return float(_kernels.get().bl_speed(np.asarray(u, dtype=float)))


def nonconvex_flux(u):
    """C^1 flux, concave for u < 1/2 and convex for u >= 1/2."""
    return np.where(u < 0.5, 0.25 * u * (1.0 - u), 0.5 * u * u - 0.5 * u + 3.0 / 16.0)


def nonconvex_derivative(u):
    return np.where(u < 0.5, 0.25 * (1.0 - 2.0 * u), u - 0.5)


def nonconvex_speed(u):
    return float(np.max(np.abs(nonconvex_derivative(u))))


# -- Euler ----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def euler_flux_factory(gamma: float = DEFAULT_GAMMA):
    """(flux, max_speed) for the Euler equations in conserved variables."""

    def flux(q):
        return _kernels.get().euler_flux(np.asarray(q, dtype=float), gamma)

    def speed(q):
        return float(_kernels.get().euler_speed(np.asarray(q, dtype=float), gamma))

    return flux, speed


# -- exact solutions --------------------------------------------------------------

def _column(v):
    return np.asarray(v, dtype=float).reshape(-1, 1)


def pulse(x):
    x = np.asarray(x, dtype=float)
    return _column(np.where(np.abs(x) <= PULSE_HALF_WIDTH, 1.0, 0.0))


def burgers_sine_exact(x, t, tol=1e-15):
    """Smooth solution u = sin(x - u t) of Burgers' equation, valid for t < 1."""
    if t >= 1.0:
        raise ValueError("the sine solution of Burgers' equation breaks at t = 1")
    x = np.asarray(x, dtype=float)
    u = np.sin(x)
    for _ in range(100):
        g = u - np.sin(x - u * t)
        step = g / (1.0 + t * np.cos(x - u * t))
        u = u - step
        if np.max(np.abs(step)) < tol:
            break
    return _column(u)


def burgers_pulse_exact(x, t):
    """Rarefaction from x = -1/3 and shock from x = 1/3; merged after t = 4/3."""
    x = np.asarray(x, dtype=float)
    h = PULSE_HALF_WIDTH
    if t <= 0:
        return pulse(x)
    out = np.zeros_like(x)
    fan = (x >= -h) & (x < -h + t)
    out[fan] = (x[fan] + h) / t
    if t < 4.0 * h:
        shock = h + 0.5 * t
        out[(x >= -h + t) & (x < shock)] = 1.0
    else:
        shock = -h + math.sqrt(4.0 * h * t)
    out[x >= shock] = 0.0
    return _column(out)


def exact_nonconvex(variant: str, x, t: float):
    """Composite-wave entropy solutions for the C^1 non-convex flux."""
    if t <= 0:
        raise ValueError("exact non-convex solution needs t > 0")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if variant == "up":
        left_edge = ((math.sqrt(6.0) - 2.0) * t + 1.0) / 4.0
        right_edge = (2.0 * t + 1.0) / 4.0
        out = np.where(x < left_edge, 0.0,
                       np.where(x > right_edge, 1.0, (x - 0.25) / t + 0.5))
    elif variant == "down":
        left_edge = ((math.sqrt(3.0) - 1.0) * t + 1.0) / 4.0
        right_edge = (t + 1.0) / 4.0
        out = np.where(x < left_edge, 1.0,
                       np.where(x > right_edge, 0.0, 0.5 * (t - 4.0 * x + 1.0) / t))
    else:
        raise ValueError(f"unknown non-convex variant {variant!r}")
    return float(out[0]) if scalar else out


def _nonconvex_problem(variant):
    left, right = (0.0, 1.0) if variant == "up" else (1.0, 0.0)

    def initial(x):
        x = np.asarray(x, dtype=float)
        return _column(np.where(x <= NONCONVEX_X0, left, right))

    def exact(x, t):
        return initial(x) if t <= 0 else _column(exact_nonconvex(variant, x, t))

    return Problem(f"nonconvex_{variant}", 1, nonconvex_flux, nonconvex_speed, initial,
                   BoundaryCondition.transmissive(), (0.0, 1.0), 1.0, 200, 0.2, exact,
                   flux_kernel="nonconvex")


def riemann_problem(name, left_prim, right_prim, x0, domain, m, t_final, cfl,
                    gamma=DEFAULT_GAMMA) -> Problem:
    left = EulerState(*left_prim, gamma=gamma)
    right = EulerState(*right_prim, gamma=gamma)
    flux, speed = euler_flux_factory(gamma)

    def initial(x):
        x = np.asarray(x, dtype=float)
        w = np.where((x < x0)[:, None], left.primitive, right.primitive)
        return primitive_to_conserved(w, gamma)

    def exact(x, t):
        return primitive_to_conserved(sample_primitive(left, right, x, t, x0), gamma)

    return Problem(name, 3, flux, speed, initial, BoundaryCondition.transmissive(),
                   domain, t_final, m, cfl, exact, ("rho", "rho_u", "e"), gamma,
                   {"left": left, "right": right, "x0": x0}, "euler")


def catalog(name: str) -> Problem:
    trans = BoundaryCondition.transmissive()
    two_pi = 2.0 * math.pi
    if name == "advection_sine":
        return Problem(name, 1, advection_flux, advection_speed,
                       lambda x: _column(np.sin(x)), BoundaryCondition.periodic(),
                       (0.0, two_pi), 1.0, 20, 0.4,
                       lambda x, t: _column(np.sin(np.asarray(x) - t)), flux_kernel="advection")
    if name == "advection_pulse":
        return Problem(name, 1, advection_flux, advection_speed, pulse, trans,
                       (-1.0, 1.0), 0.5, 200, 0.4, lambda x, t: pulse(np.asarray(x) - t),
                       flux_kernel="advection")
    if name == "burgers_sine":
        return Problem(name, 1, burgers_flux, burgers_speed,
                       lambda x: _column(np.sin(x)), BoundaryCondition.periodic(),
                       (0.0, two_pi), 0.5, 40, 0.4, burgers_sine_exact,
                       flux_kernel="burgers")
    if name == "burgers_pulse":
        return Problem(name, 1, burgers_flux, burgers_speed, pulse, trans,
                       (-1.0, 1.0), 0.5, 200, 0.4, burgers_pulse_exact,
                       flux_kernel="burgers")
    if name == "buckley_leverett":
        return Problem(name, 1, bl_flux, bl_speed, pulse, trans, (-1.0, 1.0), 0.21, 800, 0.2,
                       flux_kernel="buckley_leverett")
    if name == "nonconvex_up":
        return _nonconvex_problem("up")
    if name == "nonconvex_down":
        return _nonconvex_problem("down")
    if name == "euler_sod":
        return riemann_problem(name, (1.0, 0.0, 1.0), (0.125, 0.0, 0.1), 0.5,
                               (0.0, 1.0), 300, 0.25, 0.3)
    if name == "euler_lax":
        return riemann_problem(name, (0.445, 0.698, 3.528), (0.5, 0.0, 0.571), 0.0,
                               (-4.0, 4.0), 500, 1.3, 0.4)
    raise ValueError(f"unknown problem {name!r}; choose from {', '.join(NAMES)}")


def load_riemann_config(path) -> Problem:
    """Riemann problem from ``key = value`` lines.

    Required keys: ``left`` and ``right`` (rho, u, p triples) and ``x0``.
    Optional: ``gamma``, ``a``, ``b``, ``m``, ``t_final``, ``cfl``, ``name``.
    """
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            values[key] = val
    known = {"left", "right", "x0", "gamma", "a", "b", "m", "t_final", "cfl", "name"}
    unknown = set(values) - known
    if unknown:
        raise ValueError(f"unknown keys in {path}: {sorted(unknown)}")
    for key in ("left", "right", "x0"):
        if key not in values:
            raise ValueError(f"{path}: missing required key {key!r}")

    def triple(s):
        parts = [float(v) for v in s.replace(",", " ").split()]
        if len(parts) != 3:
            raise ValueError(f"expected three numbers (rho, u, p), got {s!r}")
        return tuple(parts)

    return riemann_problem(values.get("name", "riemann"), triple(values["left"]),
                           triple(values["right"]), float(values["x0"]),
                           (float(values.get("a", 0.0)), float(values.get("b", 1.0))),
                           int(values.get("m", 300)), float(values.get("t_final", 0.2)),
                           float(values.get("cfl", 0.3)), float(values.get("gamma", DEFAULT_GAMMA)))


def reference_solution(problem: Problem, t: float, n_fine: int, x=None,
                       layout: str = "cell") -> np.ndarray:
    """Solution of ``problem`` at time ``t`` sampled at ``x``.

    Uses the exact solution when the problem has one. Otherwise pure WENO5 at
    CFL 0.2 is run on ``n_fine`` cells and linearly interpolated onto ``x``
    (which defaults to the fine nodes themselves).
    """
    if problem.exact is not None and x is not None:
        return np.asarray(problem.exact(np.asarray(x, dtype=float), t), dtype=float)
    from .evolve import HybridConfig, run
    from .grid import build_grid

    fine = build_grid(*problem.domain, int(n_fine), layout=layout)
    if problem.exact is not None:
        return np.asarray(problem.exact(fine.nodes, t), dtype=float)
    u, _ = run(problem, fine, HybridConfig("weno5", cfl=0.2), t)
    values = u.interior
    if x is None:
        return values.copy()
    x = np.asarray(x, dtype=float)
    return np.column_stack([np.interp(x, fine.nodes, values[:, c])
                            for c in range(values.shape[1])])
