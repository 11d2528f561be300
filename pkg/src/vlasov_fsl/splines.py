"""Centered B-spline kernels (degrees 1 and 3) and tensor coefficient solves.

The normalized kernels take offsets in units of the grid spacing and
integrate to one.  Linear:

    S1(u) = 1 - |u|            for |u| <= 1, else 0.

Cubic (support [-2, 2]):

    S3(u) = 2/3 - u^2 + |u|^3 / 2     for |u| <= 1,
          = (2 - |u|)^3 / 6           for 1 <= |u| <= 2, else 0.

Both satisfy partition of unity over integer shifts; the linear kernel
additionally reproduces first moments exactly, which is what makes the
discrete momentum bookkeeping of the scheme exact.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy.linalg import solve_banded, solve_circulant

from .grid import PhaseGrid


class SplineKind(enum.IntEnum):
    """Spline degree used for interpolation and deposition."""

    LINEAR = 1
    CUBIC = 3

    @property
    def degree(self) -> int:
        return int(self.value)

    @property
    def support_radius(self) -> int:
        # normalized units; weights vanish for |u| >= support_radius
        return 1 if self is SplineKind.LINEAR else 2

    @classmethod
    def parse(cls, name: str) -> "SplineKind":
        table = {"linear": cls.LINEAR, "cubic": cls.CUBIC, "1": cls.LINEAR, "3": cls.CUBIC}
        try:
            return table[str(name).strip().lower()]
        except KeyError:
            raise ValueError(f"unknown spline kind {name!r} (linear|cubic)") from None


# second moment of the normalized kernel, integral of u^2 S(u) du
KERNEL_SECOND_MOMENT = {SplineKind.LINEAR: 1.0 / 6.0, SplineKind.CUBIC: 1.0 / 3.0}

# kernel values at integer offsets (the node-to-node coupling weights)
NODE_WEIGHTS = {
    SplineKind.LINEAR: np.array([1.0]),
    SplineKind.CUBIC: np.array([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]),
}


def eval_kernel(kind: SplineKind, u):
    """Evaluate the normalized kernel at offset u (units of the spacing)."""
    a = np.abs(np.asarray(u, dtype=float))
    if kind is SplineKind.LINEAR:
        out = np.where(a < 1.0, 1.0 - a, 0.0)
    else:
        inner = 2.0 / 3.0 - a * a + 0.5 * a * a * a
        outer = (2.0 - a) ** 3 / 6.0
        out = np.where(a < 1.0, inner, np.where(a < 2.0, outer, 0.0))
    if np.ndim(u) == 0:
        return float(out)
    return out


def tap_offsets(kind: SplineKind) -> tuple[int, ...]:
    """Node offsets (relative to the cell index) receiving deposit weight."""
    if kind is SplineKind.LINEAR:
        return (0, 1)
    return (-1, 0, 1, 2)


def tap_weights(kind: SplineKind, alpha: np.ndarray) -> list[np.ndarray]:
    """Deposit weights for a point at cell offset alpha in [0, 1].

    Returned list is ordered like tap_offsets(kind); the weights sum to one
    identically, which is the partition-of-unity property the conservation
    bookkeeping relies on.
    """
    a = np.asarray(alpha, dtype=float)
    if kind is SplineKind.LINEAR:
        return [1.0 - a, a]
    b = 1.0 - a
    return [
        b * b * b / 6.0,
        2.0 / 3.0 - a * a * (2.0 - a) / 2.0,
        2.0 / 3.0 - b * b * (1.0 + a) / 2.0,
        a * a * a / 6.0,
    ]


def _cubic_x_matrix_first_column(n: int) -> np.ndarray:
    c = np.zeros(n)
    c[0] = 2.0 / 3.0
    c[1] = 1.0 / 6.0
    c[-1] = 1.0 / 6.0
    return c


def _solve_cubic_x(values: np.ndarray) -> np.ndarray:
    """Periodic cubic collocation along axis 0 (circulant system)."""
    c = _cubic_x_matrix_first_column(values.shape[0])
    return solve_circulant(c, values, baxis=0, outaxis=0)


def _solve_cubic_v(values: np.ndarray) -> np.ndarray:
    """Cubic collocation along axis 1 in the folded boundary basis.

    Coefficients are zero outside [0, nv]; the two basis splines centered
    just outside the lattice are aliased onto the cutoff splines (matching
    the deposition fold), which bumps the corner diagonal entries to 5/6.
    Every column of the collocation matrix then sums to one, so the solve
    preserves the total sum of the nodal values exactly.
    """
    n = values.shape[1]
    ab = np.zeros((3, n))
    ab[0, 1:] = 1.0 / 6.0
    ab[1, :] = 2.0 / 3.0
    ab[1, 0] = ab[1, -1] = 2.0 / 3.0 + 1.0 / 6.0
    ab[2, :-1] = 1.0 / 6.0
    return solve_banded((1, 1), ab, values.T).T


def solve_coefficients(grid: PhaseGrid, values: np.ndarray, kind: SplineKind) -> np.ndarray:
    """Spline coefficients reproducing the nodal values.

    Linear splines interpolate trivially (coefficients equal values).  For
    cubic splines the tensor system is solved direction by direction:
    periodic (circulant) in x, tridiagonal in v with the folded boundary
    closure (compact support in velocity, off-lattice splines aliased onto
    the cutoff rows).
    """
    values = np.asarray(values, dtype=float)
    expect = (grid.n_x_nodes, grid.n_v_nodes)
    if values.shape != expect:
        raise ValueError(f"values shape {values.shape} != {expect}")
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite nodal values")
    if kind is SplineKind.LINEAR:
        return values.copy()
    return _solve_cubic_v(_solve_cubic_x(values))


def interpolate(grid: PhaseGrid, coeffs: np.ndarray, kind: SplineKind, x, v):
    """Evaluate the spline surface at (x, v); zero outside the v domain."""
    from .grid import wrap_x  # local import keeps module deps one-way

    scalar = np.ndim(x) == 0 and np.ndim(v) == 0
    xq = np.atleast_1d(np.asarray(x, dtype=float))
    vq = np.atleast_1d(np.asarray(v, dtype=float))
    xq, vq = np.broadcast_arrays(xq, vq)

    mx = grid.n_x_nodes
    sx = wrap_x(grid, xq) / grid.dx
    px = np.clip(np.floor(sx), 0, mx - 1).astype(np.int64)
    ax = np.clip(sx - px, 0.0, 1.0)

    sv = (vq + grid.v_max) / grid.dv
    pv = np.floor(np.clip(sv, -4, grid.nv + 4)).astype(np.int64)
    av = np.clip(sv - pv, 0.0, 1.0)

    wx = tap_weights(kind, ax)
    wv = tap_weights(kind, av)
    offs = tap_offsets(kind)

    inside = (vq >= -grid.v_max) & (vq <= grid.v_max)
    out = np.zeros_like(sx)
    for ox, wxo in zip(offs, wx):
        ix = (px + ox) % mx
        for ov, wvo in zip(offs, wv):
            # fold out-of-lattice v taps onto the cutoff rows, matching
            # the deposition convention (aliased boundary basis)
            jv = np.clip(pv + ov, 0, grid.nv)
            out += coeffs[ix, jv] * wxo * wvo
    out = np.where(inside, out, 0.0)
    if scalar:
        return float(out.reshape(-1)[0])
    return out
