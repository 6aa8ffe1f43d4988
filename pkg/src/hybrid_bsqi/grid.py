"""Uniform 1D grids, ghost padding and boundary conditions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

PERIODIC = "periodic"
TRANSMISSIVE = "transmissive"
FIXED = "fixed"

VERTEX = "vertex"  # nodes x_j = a + j dx, j = 0..m
CELL = "cell"      # nodes at cell centres a + (j + 1/2) dx, j = 0..m-1

# Widest stencil half-width over all schemes (QnBSQI / split WENO5).
DEFAULT_GHOST_WIDTH = 4


@dataclass(frozen=True)
class Grid:
    """``m`` intervals of width dx on [a, b].

    The vertex layout carries m + 1 nodes including both endpoints; the cell
    layout carries m nodes at the interval midpoints.
    """

    a: float
    b: float
    m: int
    ghost_width: int = DEFAULT_GHOST_WIDTH
    layout: str = VERTEX

    @property
    def dx(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def nodes(self) -> np.ndarray:
        if self.layout == CELL:
            return self.a + (np.arange(self.m) + 0.5) * self.dx
        x = self.a + np.arange(self.m + 1) * self.dx
        x[-1] = self.b
        return x

    @property
    def n_nodes(self) -> int:
        return self.m if self.layout == CELL else self.m + 1

    @property
    def interior(self) -> slice:
        """Slice selecting the non-ghost nodes out of a ghost-padded array."""
        return slice(self.ghost_width, self.ghost_width + self.n_nodes)

    def duplicates_endpoint(self, bc: "BoundaryCondition") -> bool:
        """True when the last node is a periodic copy of the first."""
        return bc.is_periodic and self.layout == VERTEX

    def unique_nodes(self, bc: "BoundaryCondition") -> slice:
        """Slice of the non-ghost rows that excludes a periodic duplicate."""
        stop = self.ghost_width + self.n_nodes - int(self.duplicates_endpoint(bc))
        return slice(self.ghost_width, stop)


def build_grid(a: float, b: float, m: int, ghost_width: int = DEFAULT_GHOST_WIDTH,
               layout: str = VERTEX) -> Grid:
    if layout not in (VERTEX, CELL):
        raise ValueError(f"unknown grid layout {layout!r}")
    if not b > a:
        raise ValueError(f"need b > a, got a={a}, b={b}")
    if ghost_width < 0:
        raise ValueError("ghost_width must be non-negative")
    if int(m) != m or m < 2 * ghost_width + 2:
        raise ValueError(f"m={m} too small for ghost width {ghost_width}")
    return Grid(float(a), float(b), int(m), int(ghost_width), layout)


@dataclass(frozen=True)
class BoundaryCondition:
    kind: str
    left_state: tuple[float, ...] | None = None
    right_state: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in (PERIODIC, TRANSMISSIVE, FIXED):
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if self.kind == FIXED:
            if self.left_state is None or self.right_state is None:
                raise ValueError("fixed boundary needs both states")
            if len(self.left_state) != len(self.right_state):
                raise ValueError("left and right fixed states differ in length")

    @classmethod
    def periodic(cls) -> "BoundaryCondition":
        return cls(PERIODIC)

    @classmethod
    def transmissive(cls) -> "BoundaryCondition":
        return cls(TRANSMISSIVE)

    @classmethod
    def fixed(cls, left, right) -> "BoundaryCondition":
        return cls(FIXED, tuple(float(v) for v in np.atleast_1d(left)),
                   tuple(float(v) for v in np.atleast_1d(right)))

    @property
    def is_periodic(self) -> bool:
        return self.kind == PERIODIC


@dataclass
class SolutionField:
    """Ghost-padded nodal values, shape (n_nodes + 2*ghost_width, p)."""

    values: np.ndarray
    ghost_width: int
    time: float = 0.0
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def components(self) -> int:
        return self.values.shape[1]

    @property
    def interior(self) -> np.ndarray:
        g = self.ghost_width
        return self.values[g:self.values.shape[0] - g]

    @classmethod
    def from_interior(cls, interior, ghost_width: int, time: float = 0.0) -> "SolutionField":
        interior = np.asarray(interior, dtype=float)
        if interior.ndim == 1:
            interior = interior[:, None]
        g = ghost_width
        values = np.zeros((interior.shape[0] + 2 * g, interior.shape[1]))
        values[g:g + interior.shape[0]] = interior
        return cls(values, g, time)

    def copy(self) -> "SolutionField":
        return SolutionField(self.values.copy(), self.ghost_width, self.time)


def apply_bc(values: np.ndarray, g: int, bc: BoundaryCondition, duplicate: bool = True) -> None:
    """Fill the ``g`` ghost rows at each end of ``values`` in place.

    ``duplicate`` states whether the last node repeats the first under
    periodic wrapping (vertex layout); it is ignored for other kinds.
    """
    if g == 0:
        return
    n = values.shape[0]
    last = n - g - 1  # index of the last non-ghost node
    if bc.kind == PERIODIC and duplicate:
        # x_m duplicates x_0, so wrap onto x_{m-g}..x_{m-1} and x_1..x_g
        values[:g] = values[last - g:last]
        values[last + 1:] = values[g + 1:2 * g + 1]
    elif bc.kind == PERIODIC:
        values[:g] = values[last - g + 1:last + 1]
        values[last + 1:] = values[g:2 * g]
    elif bc.kind == TRANSMISSIVE:
        values[:g] = values[g]
        values[last + 1:] = values[last]
    else:
        p = values.shape[1]
        if len(bc.left_state) != p:
            raise ValueError(f"fixed state has {len(bc.left_state)} components, field has {p}")
        values[:g] = bc.left_state
        values[last + 1:] = bc.right_state


def fill_ghosts(field: SolutionField, grid: Grid, bc: BoundaryCondition) -> SolutionField:
    if field.values.shape[0] != grid.n_nodes + 2 * field.ghost_width:
        raise ValueError("field is not sized for this grid")
    apply_bc(field.values, field.ghost_width, bc, grid.duplicates_endpoint(bc))
    return field
