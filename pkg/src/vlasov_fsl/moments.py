"""Velocity moments of the spline-represented distribution.

For coefficients w_{k,l} the nodal moments are tensor sums that collapse
to column reductions followed by an x-direction smoothing with the kernel's
node weights (a no-op for linear splines):

    rho(x_i) = dv * sum_{k,l} w_{k,l} S(x_i - x_k) - 1
    J(x_i)   = dv * sum_{k,l} w_{k,l} v_l S(x_i - x_k)
    I2(x_i)  = sum_{k,l} w_{k,l} S(x_i - x_k) * (m2 * dv^3 + dv * v_l^2)
    Jbar     = (dx * dv / L) * sum_{k,l} w_{k,l} v_l

where m2 = integral of u^2 S(u) du is the kernel's second-moment constant
(1/6 for linear, 1/3 for cubic splines).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import PhaseGrid
from .splines import KERNEL_SECOND_MOMENT, NODE_WEIGHTS, SplineKind


@dataclass
class MomentSet:
    """Nodal moments and their centered spatial derivatives."""

    rho: np.ndarray            # charge density, background subtracted
    current: np.ndarray        # J
    second_moment: np.ndarray  # I2
    mean_current: float        # Jbar, (1/L) integral of J
    drho_dx: np.ndarray
    dcurrent_dx: np.ndarray
    dsecond_moment_dx: np.ndarray


def centered_dx(grid: PhaseGrid, g: np.ndarray) -> np.ndarray:
    """Periodic centered difference (g_{i+1} - g_{i-1}) / (2 dx)."""
    g = np.asarray(g, dtype=float)
    if g.shape != (grid.n_x_nodes,):
        raise ValueError(f"expected {grid.n_x_nodes} nodal values, got {g.shape}")
    return (np.roll(g, -1) - np.roll(g, 1)) / (2.0 * grid.dx)


def _smooth_x(g: np.ndarray, kind: SplineKind) -> np.ndarray:
    """Convolve a nodal profile with the kernel's integer-offset weights."""
    if kind is SplineKind.LINEAR:
        return g
    w = NODE_WEIGHTS[kind]
    out = w[1] * g
    out = out + w[0] * np.roll(g, 1) + w[2] * np.roll(g, -1)
    return out


def compute_moments(grid: PhaseGrid, coeffs: np.ndarray, kind: SplineKind) -> MomentSet:
    v = grid.v_nodes
    dv = grid.dv
    g0 = coeffs.sum(axis=1)
    g1 = coeffs @ v
    g2 = coeffs @ (v * v)

    rho = dv * _smooth_x(g0, kind) - 1.0
    current = dv * _smooth_x(g1, kind)
    alpha = KERNEL_SECOND_MOMENT[kind] * dv**3
    second = _smooth_x(alpha * g0 + dv * g2, kind)
    mean_current = grid.dx * dv / grid.length * float(np.sum(g1))

    return MomentSet(
        rho=rho,
        current=current,
        second_moment=second,
        mean_current=mean_current,
        drho_dx=centered_dx(grid, rho),
        dcurrent_dx=centered_dx(grid, current),
        dsecond_moment_dx=centered_dx(grid, second),
    )
