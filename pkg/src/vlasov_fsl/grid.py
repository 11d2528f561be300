"""Phase-space mesh: periodic in x, truncated in v.

The mesh is uniform.  With nx+1 distinct x nodes on a period of length L,
dx = L / (nx + 1) and x_i = i * dx (node nx+1 is identified with node 0).
In velocity, dv = 2 * v_max / nv and v_j = -v_max + j * dv, so v_0 = -v_max
and v_nv = +v_max.  Nodes are always computed multiplicatively from the
index, never by accumulation, so spacings are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


class GridConfigError(ValueError):
    """Invalid mesh parameters (non-positive extent, too few intervals)."""


class OutOfDomainError(ValueError):
    """Velocity coordinate outside [-v_max, v_max]."""


@dataclass(frozen=True)
class PhaseGrid:
    """Uniform Cartesian mesh on [0, L) x [-v_max, v_max]."""

    length: float  # spatial period L
    v_max: float   # velocity half-width
    nx: int        # nx+1 distinct x nodes (and nx+1 cells per period)
    nv: int        # nv velocity intervals, nv+1 nodes

    @property
    def dx(self) -> float:
        return self.length / (self.nx + 1)

    @property
    def dv(self) -> float:
        return 2.0 * self.v_max / self.nv

    @property
    def h(self) -> float:
        return max(self.dx, self.dv)

    @property
    def n_x_nodes(self) -> int:
        return self.nx + 1

    @property
    def n_v_nodes(self) -> int:
        return self.nv + 1

    @cached_property
    def x_nodes(self) -> np.ndarray:
        return np.arange(self.nx + 1) * self.dx

    @cached_property
    def v_nodes(self) -> np.ndarray:
        return -self.v_max + np.arange(self.nv + 1) * self.dv

    @property
    def cell_area(self) -> float:
        return self.dx * self.dv


def build_grid(length: float, v_max: float, nx: int, nv: int) -> PhaseGrid:
    """Build a PhaseGrid, validating extents and counts."""
    if not (length > 0.0) or not (v_max > 0.0):
        raise GridConfigError(
            f"domain extents must be positive, got L={length}, v_max={v_max}"
        )
    if nx < 2 or nv < 2:
        raise GridConfigError(f"need nx >= 2 and nv >= 2, got nx={nx}, nv={nv}")
    return PhaseGrid(float(length), float(v_max), int(nx), int(nv))


def wrap_x(grid: PhaseGrid, x):
    """Reduce x modulo the period into [0, L).  Works on scalars and arrays."""
    length = grid.length
    r = x - length * np.floor(x / length)
    # floating-point guard: floor division can land exactly on L
    r = np.where(r >= length, r - length, r)
    r = np.where(r < 0.0, r + length, r)
    if np.ndim(x) == 0:
        return float(r)
    return r


def locate(grid: PhaseGrid, u, axis: str):
    """Locate u on the given axis: return (cell index p, offset alpha).

    u = node_p + alpha * spacing with alpha in [0, 1].  For axis "x" the
    coordinate is wrapped first; for axis "v" it must lie in
    [-v_max, v_max].  The offset is clipped to [0, 1] so tap weights built
    from it are never negative.
    """
    if axis == "x":
        u = wrap_x(grid, u)
        scaled = np.asarray(u) / grid.dx
        n_cells = grid.nx + 1
    elif axis == "v":
        arr = np.asarray(u, dtype=float)
        if np.any(arr < -grid.v_max) or np.any(arr > grid.v_max):
            raise OutOfDomainError(
                f"velocity outside [-{grid.v_max}, {grid.v_max}]"
            )
        scaled = (arr + grid.v_max) / grid.dv
        n_cells = grid.nv
    else:
        raise ValueError(f"axis must be 'x' or 'v', got {axis!r}")

    p = np.clip(np.floor(scaled), 0, n_cells - 1).astype(np.int64)
    alpha = np.clip(scaled - p, 0.0, 1.0)
    if np.ndim(u) == 0:
        return int(p), float(alpha)
    return p, alpha
