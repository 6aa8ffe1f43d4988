"""Weak local truncation error and the binary smoothness indicator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .grid import BoundaryCondition, SolutionField


@dataclass
class IndicatorField:
    raw: np.ndarray    # E_j, shape (n, p)
    flags: np.ndarray  # 0/1 after dilation
    K: float
    M: int

    @property
    def fraction(self) -> float:
        return float(np.mean(self.flags))


def wlte(u_prev: SolutionField, u_curr: SolutionField, problem, dx: float, dt: float | None = None,
         backend: str | None = None) -> np.ndarray:
    """E_j^n at every node from two consecutive time levels (ghosts filled).

    ``dt`` defaults to the time difference of the two fields.
    """
    if u_prev.values.shape != u_curr.values.shape or u_prev.ghost_width != u_curr.ghost_width:
        raise ValueError("time levels live on different grids")
    if dt is None:
        dt = u_curr.time - u_prev.time
    if dt <= 0:
        raise ValueError("u_prev must be strictly earlier than u_curr")
    if u_curr.ghost_width < 1:
        raise ValueError("WLTE needs at least one ghost cell")
    k = _kernels.get(backend)
    return k.wlte(u_prev.values, u_curr.values, problem.flux(u_prev.values),
                  problem.flux(u_curr.values), dx, dt, u_curr.ghost_width)


def smooth_indicator(E, K: float, dx: float) -> np.ndarray:
    """1 where |E_j| > K dx^4 in any component, else 0."""
    if K < 0:
        raise ValueError("K must be non-negative")
    E = np.asarray(E, dtype=float)
    if E.ndim == 1:
        E = E[:, None]
    return (np.abs(E) > K * dx ** 4).any(axis=1).astype(np.int8)


def dilate(flags, M: int, bc: BoundaryCondition | None = None) -> np.ndarray:
    """Flag every node within M positions of a flagged node (wrapping if periodic)."""
    if M < 0:
        raise ValueError("M must be non-negative")
    flags = np.asarray(flags, dtype=np.int8)
    periodic = bc is not None and bc.is_periodic
    if M == 0:
        return flags.copy()
    return _kernels.get().dilate(flags, int(M), periodic)


def default_K(dx: float, smooth_data: bool = False) -> float:
    """K = 1 for smooth convergence runs, K = 1/dx otherwise."""
    return 1.0 if smooth_data else 1.0 / dx
