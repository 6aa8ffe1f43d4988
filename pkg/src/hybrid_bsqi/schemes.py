"""Numerical fluxes: conservative BSQI fluxes, split WENO3/WENO5 fluxes and
Fourier symbols of the BSQI derivative operators.

The functions here work on a single interface and are written for clarity;
the array kernels in ``hybrid_bsqi._kernels`` are the fast equivalents used
by the solver.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction as Fr

import numpy as np

from . import bsqi


class SchemeKind(enum.IntEnum):
    CBSQI = 0
    QNBSQI = 1
    WENO3 = 2
    WENO5 = 3

    @property
    def half_width(self) -> int:
        return {0: 2, 1: 4, 2: 2, 3: 3}[int(self)]

    @property
    def is_bsqi(self) -> bool:
        return self in (SchemeKind.CBSQI, SchemeKind.QNBSQI)

    @classmethod
    def parse(cls, name) -> "SchemeKind":
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown scheme {name!r}") from None


DEFAULT_EPSILON = 1e-6

# Interface-flux weights over f_{j-1..j+2} and f_{j-3..j+4}.
CBSQI_FLUX = (Fr(-1, 12), Fr(7, 12), Fr(7, 12), Fr(-1, 12))
QNBSQI_FLUX = tuple(Fr(c, 5760) for c in (13, 31, -651, 3487, 3487, -651, 31, 13))


def telescoped_flux_weights(st: bsqi.DerivativeStencil) -> tuple[Fr, ...]:
    """Interface weights c with c_k - c_{k+1} = b_{k,1}, built by cumulative sums.

    Returns weights over offsets -(h-1)..h relative to j for F_{j+1/2}.
    """
    h = st.half_width
    b = dict(zip(range(-bsqi.HALF_WIDTH, bsqi.HALF_WIDTH + 1), st.coefficients))
    c = {h + 1: Fr(0)}
    for k in range(h, -h, -1):
        c[k] = b[k] + c[k + 1]
    return tuple(c[k] for k in range(-h + 1, h + 1))


def split_flux(f_values, u_values, alpha: float):
    """Global Lax-Friedrichs split f = f+ + f-, f+- = (f +- alpha*u)/2."""
    f_values = np.asarray(f_values, dtype=float)
    u_values = np.asarray(u_values, dtype=float)
    if alpha <= 0 and np.ptp(u_values) > 0:
        raise ValueError("alpha must be positive for non-constant data")
    plus = 0.5 * (f_values + alpha * u_values)
    minus = 0.5 * (f_values - alpha * u_values)
    return plus, minus


def _combine(weights, window) -> float:
    window = np.asarray(window, dtype=float)
    if window.shape[0] != len(weights):
        raise ValueError(f"flux window needs {len(weights)} values, got {window.shape[0]}")
    return float(sum(float(w) * v for w, v in zip(weights, window)))


def flux_cbsqi(f_window) -> float:
    """F_{j+1/2} from f_{j-1}, f_j, f_{j+1}, f_{j+2}."""
    return _combine(CBSQI_FLUX, f_window)


def flux_qnbsqi(f_window) -> float:
    """F_{j+1/2} from f_{j-3}..f_{j+4}."""
    return _combine(QNBSQI_FLUX, f_window)


@dataclass
class WenoWorkspace:
    """Per-call scratch for one WENO reconstruction, kept for inspection."""

    order: int = 5
    epsilon: float = DEFAULT_EPSILON
    candidate_values: np.ndarray = field(default=None, repr=False)
    smoothness: np.ndarray = field(default=None, repr=False)
    nonlinear_weights: np.ndarray = field(default=None, repr=False)

    @property
    def linear_weights(self) -> np.ndarray:
        if self.order == 3:
            return np.array([1 / 3, 2 / 3])
        return np.array([0.1, 0.6, 0.3])


@dataclass
class FluxWindow:
    """Split flux values around interface j+1/2 (``center`` = j)."""

    plus: np.ndarray
    minus: np.ndarray
    center: int
    halo: int = 3

    def __post_init__(self):
        self.plus = np.asarray(self.plus, dtype=float)
        self.minus = np.asarray(self.minus, dtype=float)
        if self.plus.shape != self.minus.shape:
            raise ValueError("plus and minus parts differ in shape")


def weno3_upwind(v, ws: WenoWorkspace) -> float:
    """Left-biased WENO3 value at the right face of v[1], from v[0..2]."""
    vm, v0, vp = v
    q = np.array([-0.5 * vm + 1.5 * v0, 0.5 * v0 + 0.5 * vp])
    beta = np.array([(v0 - vm) ** 2, (vp - v0) ** 2])
    a = ws.linear_weights / (ws.epsilon + beta) ** 2
    w = a / a.sum()
    ws.candidate_values, ws.smoothness, ws.nonlinear_weights = q, beta, w
    return float(w @ q)


def weno5_upwind(v, ws: WenoWorkspace) -> float:
    """Left-biased WENO5 value at the right face of v[2], from v[0..4]."""
    vmm, vm, v0, vp, vpp = v
    q = np.array([
        vmm / 3 - 7 * vm / 6 + 11 * v0 / 6,
        -vm / 6 + 5 * v0 / 6 + vp / 3,
        v0 / 3 + 5 * vp / 6 - vpp / 6,
    ])
    beta = np.array([
        13 / 12 * (vmm - 2 * vm + v0) ** 2 + 0.25 * (vmm - 4 * vm + 3 * v0) ** 2,
        13 / 12 * (vm - 2 * v0 + vp) ** 2 + 0.25 * (vm - vp) ** 2,
        13 / 12 * (v0 - 2 * vp + vpp) ** 2 + 0.25 * (3 * v0 - 4 * vp + vpp) ** 2,
    ])
    a = ws.linear_weights / (ws.epsilon + beta) ** 2
    w = a / a.sum()
    ws.candidate_values, ws.smoothness, ws.nonlinear_weights = q, beta, w
    return float(w @ q)


def flux_weno3(window: FluxWindow, ws: WenoWorkspace) -> float:
    j = window.center
    plus = weno3_upwind(window.plus[j - 1:j + 2], ws)
    minus = weno3_upwind(window.minus[j + 2:j - 1 if j > 0 else None:-1], ws)
    return plus + minus


def flux_weno5(window: FluxWindow, ws: WenoWorkspace) -> float:
    j = window.center
    plus = weno5_upwind(window.plus[j - 2:j + 3], ws)
    minus = weno5_upwind(window.minus[j + 3:j - 2 if j > 1 else None:-1], ws)
    return plus + minus


def fourier_symbol(kind, theta):
    """Symbol C(theta) with du_j/dt = -(1/dx) C(theta) u_j for f(u) = u."""
    kind = SchemeKind.parse(kind)
    s = np.sin
    if kind == SchemeKind.CBSQI:
        return 1j / 6 * (8 * s(theta) - s(2 * theta))
    if kind == SchemeKind.QNBSQI:
        return 1j / 6 * (2069 / 240 * s(theta) - 341 / 240 * s(2 * theta)
                         + 3 / 80 * s(3 * theta) + 13 / 480 * s(4 * theta))
    raise ValueError("Fourier symbols are defined for the BSQI schemes only")


def stencil_dft(kind, theta):
    """sum_k b_{k,1} exp(i k theta) of the derivative stencil behind ``kind``."""
    kind = SchemeKind.parse(kind)
    degree = {SchemeKind.CBSQI: bsqi.CUBIC, SchemeKind.QNBSQI: bsqi.QUINTIC}[kind]
    st = bsqi.stencil(degree, 1)
    theta = np.asarray(theta, dtype=float)
    return sum(float(c) * np.exp(1j * k * theta) for k, c in zip(st.offsets, st.coefficients))
