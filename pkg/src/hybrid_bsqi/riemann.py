"""Exact Riemann solver for the 1D Euler equations with an ideal-gas EOS.

Follows the classical construction of Toro (Riemann Solvers and Numerical
Methods for Fluid Dynamics, ch. 4): Newton iteration on the star-region
pressure function, then sampling of the self-similar wave fan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DEFAULT_GAMMA = 1.4


class VacuumError(ValueError):
    """The data generate a vacuum; no star region exists."""


@dataclass(frozen=True)
class EulerState:
    rho: float
    u: float
    p: float
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        if not (self.rho > 0 and self.p > 0):
            raise ValueError(f"need positive density and pressure, got rho={self.rho}, p={self.p}")

    @property
    def sound_speed(self) -> float:
        return math.sqrt(self.gamma * self.p / self.rho)

    @property
    def energy(self) -> float:
        return self.p / (self.gamma - 1.0) + 0.5 * self.rho * self.u ** 2

    @property
    def conserved(self) -> np.ndarray:
        return np.array([self.rho, self.rho * self.u, self.energy])

    @property
    def primitive(self) -> np.ndarray:
        return np.array([self.rho, self.u, self.p])

    @classmethod
    def from_conserved(cls, q, gamma: float = DEFAULT_GAMMA) -> "EulerState":
        rho, mom, e = (float(v) for v in q)
        u = mom / rho
        return cls(rho, u, (gamma - 1.0) * (e - 0.5 * rho * u * u), gamma)


def primitive_to_conserved(w: np.ndarray, gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    rho, u, p = w[..., 0], w[..., 1], w[..., 2]
    return np.stack([rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u], axis=-1)


def conserved_to_primitive(q: np.ndarray, gamma: float = DEFAULT_GAMMA) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    rho, mom, e = q[..., 0], q[..., 1], q[..., 2]
    u = mom / rho
    return np.stack([rho, u, (gamma - 1.0) * (e - 0.5 * rho * u * u)], axis=-1)


def pressure_function(p: float, state: EulerState) -> tuple[float, float]:
    """f_K(p) and its derivative for one side of the Riemann problem."""
    g = state.gamma
    rho, pk, c = state.rho, state.p, state.sound_speed
    if p > pk:  # shock
        a = 2.0 / ((g + 1.0) * rho)
        b = (g - 1.0) / (g + 1.0) * pk
        root = math.sqrt(a / (p + b))
        return (p - pk) * root, root * (1.0 - 0.5 * (p - pk) / (b + p))
    # rarefaction
    ratio = p / pk
    f = 2.0 * c / (g - 1.0) * (ratio ** ((g - 1.0) / (2.0 * g)) - 1.0)
    df = ratio ** (-(g + 1.0) / (2.0 * g)) / (rho * c)
    return f, df


def check_vacuum(left: EulerState, right: EulerState) -> None:
    g = left.gamma
    if 2.0 / (g - 1.0) * (left.sound_speed + right.sound_speed) <= right.u - left.u:
        raise VacuumError("pressure positivity condition violated: the data generate vacuum")


def star_state(left: EulerState, right: EulerState, tol: float = 1e-12,
               max_iter: int = 100) -> tuple[float, float]:
    """Star-region pressure and velocity."""
    if left.gamma != right.gamma:
        raise ValueError("left and right states use different gamma")
    check_vacuum(left, right)
    g = left.gamma
    cl, cr = left.sound_speed, right.sound_speed
    du = right.u - left.u
    # two-rarefaction guess
    z = (g - 1.0) / (2.0 * g)
    p = ((cl + cr - 0.5 * (g - 1.0) * du) / (cl / left.p ** z + cr / right.p ** z)) ** (1.0 / z)
    for _ in range(max_iter):
        fl, dfl = pressure_function(p, left)
        fr, dfr = pressure_function(p, right)
        p_new = p - (fl + fr + du) / (dfl + dfr)
        if p_new <= 0.0:
            p_new = 0.5 * p
        change = 2.0 * abs(p_new - p) / (p_new + p)
        p = p_new
        if change < tol:
            break
    else:
        raise RuntimeError("star pressure iteration did not converge")
    fl, _ = pressure_function(p, left)
    fr, _ = pressure_function(p, right)
    return p, 0.5 * (left.u + right.u) + 0.5 * (fr - fl)


def _sample(left: EulerState, right: EulerState, p_star: float, u_star: float, xi: float):
    g = left.gamma
    gm, gp = g - 1.0, g + 1.0
    if xi <= u_star:
        st, sgn = left, 1.0
    else:
        st, sgn = right, -1.0
    # work in the frame where the wave of interest is a left wave
    rho, u, p, c = st.rho, sgn * st.u, st.p, st.sound_speed
    us, s = sgn * u_star, sgn * xi
    if p_star > p:
        shock = u - c * math.sqrt(gp / (2 * g) * p_star / p + gm / (2 * g))
        if s <= shock:
            return rho, st.u, p
        rho_s = rho * (p_star / p + gm / gp) / (gm / gp * p_star / p + 1.0)
        return rho_s, u_star, p_star
    head = u - c
    c_s = c * (p_star / p) ** (gm / (2 * g))
    tail = us - c_s
    if s <= head:
        return rho, st.u, p
    if s >= tail:
        return rho * (p_star / p) ** (1.0 / g), u_star, p_star
    cf = 2.0 / gp * (c + gm / 2.0 * (u - s))
    uf = 2.0 / gp * (c + gm / 2.0 * u + s)
    return rho * (cf / c) ** (2.0 / gm), sgn * uf, p * (cf / c) ** (2.0 * g / gm)


def euler_riemann_exact(left: EulerState, right: EulerState, xi: float) -> EulerState:
    """Exact solution at similarity coordinate xi = (x - x0)/t."""
    if left == right:
        return left
    p_star, u_star = star_state(left, right)
    rho, u, p = _sample(left, right, p_star, u_star, float(xi))
    return EulerState(rho, u, p, left.gamma)


def sample_primitive(left: EulerState, right: EulerState, x, t: float, x0: float) -> np.ndarray:
    """Primitive (rho, u, p) of the exact solution at the points ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((x.shape[0], 3))
    if t <= 0:
        out[x < x0] = left.primitive
        out[x >= x0] = right.primitive
        return out
    if left == right:
        out[:] = left.primitive
        return out
    p_star, u_star = star_state(left, right)
    for k, xk in enumerate(x):
        out[k] = _sample(left, right, p_star, u_star, (xk - x0) / t)
    return out
