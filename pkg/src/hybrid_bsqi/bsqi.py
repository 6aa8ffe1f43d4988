"""B-spline quasi-interpolation of degrees 2 to 5.

Coefficient functionals and the nodal function / first-derivative stencils
of the quasi-interpolant, stored as exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Fr

import numpy as np

QUADRATIC, CUBIC, QUADRIC, QUINTIC = 2, 3, 4, 5
DEGREES = (QUADRATIC, CUBIC, QUADRIC, QUINTIC)
NAMES = {QUADRATIC: "quadratic", CUBIC: "cubic", QUADRIC: "quadric", QUINTIC: "quintic"}

HALF_WIDTH = 4  # all stencils are indexed k = -4..4


def _sym(*right):
    """Symmetric row from (b_0, b_1, ..., b_4)."""
    right = [Fr(v) for v in right] + [Fr(0)] * (5 - len(right))
    return tuple(right[:0:-1]) + tuple(right)


def _antisym(*right):
    """Antisymmetric row from (b_1, ..., b_4); b_0 = 0 and b_{-k} = -b_k."""
    right = [Fr(v) for v in right] + [Fr(0)] * (4 - len(right))
    return tuple(-v for v in right[::-1]) + (Fr(0),) + tuple(right)


# Rows over k = -4..4 for l = 0 (function) and l = 1 (first derivative).
# Quintic rows: the printed table has 13/2880 at k=+4 (l=0) and 2069/2800,
# -341/2800 at k=+1,+2 (l=1); symmetry, moment conditions and the Fourier
# symbol fix them to 13/28800 and 2069/2880, -341/2880.
_ROWS = {
    (QUADRATIC, 0): _sym(Fr(29, 32), Fr(1, 16), Fr(-1, 64)),
    (CUBIC, 0): _sym(Fr(15, 18), Fr(1, 9), Fr(-1, 36)),
    (QUADRIC, 0): _sym(Fr(62543, 73728), Fr(6271, 55296), Fr(-4951, 110592),
                       Fr(131, 18432), Fr(47, 442368)),
    (QUINTIC, 0): _sym(Fr(2311, 2880), Fr(2111, 14400), Fr(-101, 1800),
                       Fr(113, 14400), Fr(13, 28800)),
    (QUADRATIC, 1): _antisym(Fr(5, 8), Fr(-1, 16)),
    (CUBIC, 1): _antisym(Fr(2, 3), Fr(-1, 12)),
    (QUADRIC, 1): _antisym(Fr(20323, 27648), Fr(-3751, 27648), Fr(101, 9216),
                           Fr(47, 55296)),
    (QUINTIC, 1): _antisym(Fr(2069, 2880), Fr(-341, 2880), Fr(1, 320), Fr(13, 5760)),
}

# Centred weights of mu_j over the samples it combines, and the offset of the
# centre sample from j in the usual indexing of each formula.
_MU_WEIGHTS = {
    QUADRATIC: ((Fr(-1, 8), Fr(10, 8), Fr(-1, 8)), 0),
    CUBIC: ((Fr(-1, 6), Fr(8, 6), Fr(-1, 6)), -2),
    QUADRIC: ((Fr(47, 1152), Fr(-107, 288), Fr(319, 192), Fr(-107, 288), Fr(47, 1152)), -2),
    QUINTIC: ((Fr(13, 240), Fr(-7, 15), Fr(73, 40), Fr(-7, 15), Fr(13, 240)), -3),
}

# Valid j for mu_j as (first, offset from m for the last).
_MU_RANGE = {QUADRATIC: (3, 0), CUBIC: (3, 1), QUADRIC: (5, 0), QUINTIC: (5, 0)}


def _check_degree(degree: int) -> int:
    if degree not in DEGREES:
        raise ValueError(f"BSQI degree must be one of {DEGREES}, got {degree}")
    return degree


def sample_nodes(degree: int, knots: np.ndarray) -> np.ndarray:
    """Knots for odd degree, cell midpoints (x_{j-1}+x_j)/2 for even degree."""
    _check_degree(degree)
    knots = np.asarray(knots, dtype=float)
    if degree % 2:
        return knots
    return 0.5 * (knots[:-1] + knots[1:])


def mu_weights(degree: int) -> tuple[Fr, ...]:
    """Centred rational weights of the coefficient functional mu_j."""
    return _MU_WEIGHTS[_check_degree(degree)][0]


def mu_coefficients(degree: int, samples, j: int) -> float:
    """B-spline coefficient mu_j(u) from the samples u_0..u_m.

    For even degrees ``samples[i]`` holds the midpoint value u(xi_i).
    """
    _check_degree(degree)
    samples = np.asarray(samples, dtype=float)
    m = samples.shape[0] - 1
    first, last_off = _MU_RANGE[degree]
    weights, shift = _MU_WEIGHTS[degree]
    half = len(weights) // 2
    centre = j + shift
    if not first <= j <= m + last_off or centre - half < 0 or centre + half > m:
        raise IndexError(f"mu_{j} outside the interior range for degree {degree} (m={m})")
    window = samples[centre - half:centre + half + 1]
    return float(sum(float(w) * v for w, v in zip(weights, window)))


@dataclass(frozen=True)
class DerivativeStencil:
    degree: int
    order: int
    coefficients: tuple[Fr, ...]  # k = -4..4

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-HALF_WIDTH, HALF_WIDTH + 1)

    @property
    def half_width(self) -> int:
        nz = [abs(k) for k, c in zip(self.offsets, self.coefficients) if c != 0]
        return max(nz)

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients])

    def moment(self, q: int) -> Fr:
        return sum((Fr(int(k)) ** q * c for k, c in zip(self.offsets, self.coefficients)), Fr(0))


def stencil(degree: int, order: int) -> DerivativeStencil:
    if order not in (0, 1):
        raise ValueError("only l = 0 and l = 1 stencils are available")
    return DerivativeStencil(_check_degree(degree), order, _ROWS[(degree, order)])


def apply_stencil(st: DerivativeStencil, samples, dx: float = 1.0) -> np.ndarray:
    """(1/dx^l) * sum_k b_{k,l} u_{j+k} at every j whose stencil fits in ``samples``."""
    samples = np.asarray(samples, dtype=float)
    h = st.half_width
    n = samples.shape[0] - 2 * h
    if n < 1:
        raise ValueError(f"need at least {2 * h + 1} samples, got {samples.shape[0]}")
    coef = st.as_array()
    out = np.zeros((n,) + samples.shape[1:])
    for k in range(-h, h + 1):
        c = coef[k + HALF_WIDTH]
        if c != 0.0:
            out += c * samples[h + k:h + k + n]
    return out / dx ** st.order


def qi_derivative(degree: int, samples, dx: float) -> np.ndarray:
    """First derivative of the quasi-interpolant at the inner sample nodes.

    The caller supplies enough exterior samples; the output has
    ``len(samples) - 2*h`` entries, h being the stencil half-width.
    """
    return apply_stencil(stencil(degree, 1), samples, dx)


def qi_value(degree: int, samples) -> np.ndarray:
    return apply_stencil(stencil(degree, 0), samples)
