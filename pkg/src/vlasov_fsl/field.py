"""Charge deposition and the two periodic Poisson solvers.

Two field constructions are provided:

* ``green``: the exact integral operator E(x_i) = dx * sum_j K(x_i, x_j)
  rho(x_j) with the periodic Green kernel K(x, y) = y/L - 1 for x < y and
  y/L for y < x.  On the diagonal the mean of the one-sided limits
  (y/L - 1/2) is used; this keeps the node quadrature second order.

* ``staggered_fd``: centered finite differences on a staggered mesh,
  E(x_{k+1/2}) - E(x_{k-1/2}) = dx * rho(x_k), with nodal values obtained
  by two-point averaging.  Paired with linear-spline field evaluation this
  construction makes the discrete momentum bookkeeping of the scheme exact:
  sum_k E_k * rho_k telescopes to zero around the period.

Both solvers return a zero-mean nodal field.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import PhaseGrid, wrap_x
from .splines import SplineKind, tap_offsets, tap_weights

NEUTRALITY_TOL = 1e-10


class NeutralityWarning(UserWarning):
    """Charge density is not discretely neutral (Green solver proceeds)."""


class SolvabilityError(ValueError):
    """No periodic solution: staggered solve needs a neutral density."""


class PoissonMethod(enum.Enum):
    GREEN = "green"
    STAGGERED_FD = "staggered_fd"

    @classmethod
    def parse(cls, name: str) -> "PoissonMethod":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(
                f"unknown poisson method {name!r} (green|staggered_fd)"
            ) from None


@dataclass
class FieldState:
    """Nodal charge density and electric field at one time level."""

    rho: np.ndarray
    e_nodal: np.ndarray
    method: PoissonMethod
    e_half: np.ndarray | None = None  # staggered solver only, at x_{k+1/2}


def _locate_x(grid: PhaseGrid, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cell index and clipped offset for (possibly unwrapped) x positions.

    Shared by deposition and field evaluation so their weights are
    bitwise identical, which the exact-momentum identity depends on.
    """
    s = wrap_x(grid, np.asarray(x, dtype=float)) / grid.dx
    p = np.clip(np.floor(s), 0, grid.nx).astype(np.int64)
    a = np.clip(s - p, 0.0, 1.0)
    return p, a


def deposit_charge(
    grid: PhaseGrid,
    weights: np.ndarray,
    positions: np.ndarray,
    kind: SplineKind = SplineKind.LINEAR,
) -> np.ndarray:
    """Scatter transported weights onto the x grid and subtract background.

    rho(x_i) = dv * sum_{k,l} w_{k,l} S((x_i - X_{k,l}) / dx) - 1
    """
    w = np.asarray(weights, dtype=float).ravel()
    mx = grid.n_x_nodes
    p, a = _locate_x(grid, np.asarray(positions, dtype=float).ravel())
    raw = np.zeros(mx)
    for off, tw in zip(tap_offsets(kind), tap_weights(kind, a)):
        raw += np.bincount((p + off) % mx, weights=w * tw, minlength=mx)
    return grid.dv * raw - 1.0


@lru_cache(maxsize=8)
def _green_kernel_matrix(grid: PhaseGrid) -> np.ndarray:
    col = grid.x_nodes / grid.length
    k = np.tile(col, (grid.n_x_nodes, 1))  # k[i, j] = x_j / L
    i = np.arange(grid.n_x_nodes)
    k[i[None, :] > i[:, None]] -= 1.0      # x < y branch
    np.fill_diagonal(k, col - 0.5)         # mean of the one-sided limits
    return k


def _check_neutrality(grid: PhaseGrid, rho: np.ndarray) -> float:
    total = grid.dx * float(np.sum(rho))
    scale = max(1.0, grid.dx * float(np.sum(np.abs(rho))))
    return total / scale


def solve_green(grid: PhaseGrid, rho: np.ndarray) -> np.ndarray:
    """Nodal field from the Green-kernel quadrature; zero mean enforced."""
    rho = np.asarray(rho, dtype=float)
    if abs(_check_neutrality(grid, rho)) > NEUTRALITY_TOL:
        warnings.warn(
            "charge density not discretely neutral; field may be inconsistent",
            NeutralityWarning,
            stacklevel=2,
        )
    e = grid.dx * (_green_kernel_matrix(grid) @ rho)
    return e - e.mean()


def solve_staggered_fd(grid: PhaseGrid, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Staggered-mesh solve: returns (nodal E, half-node E).

    Half-node values at x_{k+1/2} satisfy E_{k+1/2} - E_{k-1/2} = dx * rho_k
    exactly after projecting rho onto zero mean; nodal values are the
    average of the two adjacent half-node values, shifted to zero mean.
    """
    rho = np.asarray(rho, dtype=float)
    if abs(_check_neutrality(grid, rho)) > NEUTRALITY_TOL:
        raise SolvabilityError(
            "staggered periodic solve requires a discretely neutral density"
        )
    rho_hat = rho - rho.mean()
    e_half = grid.dx * np.cumsum(rho_hat)  # entry k lives at x_{k+1/2}
    e_nodal = 0.5 * (np.roll(e_half, 1) + e_half)
    shift = e_nodal.mean()
    return e_nodal - shift, e_half - shift


def compute_field(grid: PhaseGrid, rho: np.ndarray, method: PoissonMethod) -> FieldState:
    if method is PoissonMethod.GREEN:
        return FieldState(rho=rho, e_nodal=solve_green(grid, rho), method=method)
    e_nodal, e_half = solve_staggered_fd(grid, rho)
    return FieldState(rho=rho, e_nodal=e_nodal, method=method, e_half=e_half)


def eval_field(grid: PhaseGrid, e_nodal: np.ndarray, x):
    """Field between nodes: linear-spline convolution of the nodal values.

    Exact at nodes; at half nodes it returns the two-point average.  The
    same locate/weight path as deposit_charge is used on purpose.
    """
    scalar = np.ndim(x) == 0
    p, a = _locate_x(grid, np.asarray(x, dtype=float))
    out = (1.0 - a) * e_nodal[p] + a * e_nodal[(p + 1) % grid.n_x_nodes]
    if scalar:
        return float(out)
    return out
