"""One-step characteristic integrators: Verlet and Cauchy-Kovalevsky.

Every grid node (x_k, v_l) is pushed forward by one time step along the
characteristics dX/dt = V, dV/dt = E(t, X).

Verlet is the staggered drift-kick-drift form: half drift, charge
deposition at the half-step positions, Poisson solve, kick with the
linear-spline-regularized field, half drift.

The Cauchy-Kovalevsky integrators replace time derivatives of E in a
Taylor expansion with velocity moments at the current time:

    dE/dt   -> v * rho - J + Jbar
    d2E/dt2 -> d(I2)/dx - E - 2 v dJ/dx + v^2 drho/dx

CK2 keeps terms through dt^2, CK3 through dt^3.  All fields and moments
are evaluated at the current time on the nodes, so no off-grid
regularization is needed.

A prescribed static field (scalar or callable of x) can be supplied to
bypass the Poisson solve in tests; the moment closure terms then vanish
because a static prescribed field has no time derivatives.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .field import PoissonMethod, compute_field, deposit_charge, eval_field
from .grid import PhaseGrid, wrap_x
from .moments import compute_moments
from .splines import SplineKind

FieldHook = float | Callable[[np.ndarray], np.ndarray]


class PusherKind(enum.Enum):
    VERLET = "verlet"
    CK2 = "ck2"
    CK3 = "ck3"

    @classmethod
    def parse(cls, name: str) -> "PusherKind":
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown pusher {name!r} (verlet|ck2|ck3)") from None


@dataclass
class Endpoints:
    """Characteristic endpoints after one step, x wrapped to [0, L)."""

    x: np.ndarray
    v: np.ndarray
    dt: float


def _hook_values(hook: FieldHook, x: np.ndarray) -> np.ndarray:
    if callable(hook):
        return np.broadcast_to(np.asarray(hook(x), dtype=float), x.shape).copy()
    return np.full_like(x, float(hook))


def verlet_step(
    grid: PhaseGrid,
    coeffs: np.ndarray,
    dt: float,
    kind: SplineKind = SplineKind.LINEAR,
    poisson: PoissonMethod = PoissonMethod.STAGGERED_FD,
    prescribed_field: FieldHook | None = None,
) -> Endpoints:
    x = grid.x_nodes[:, None]
    v = grid.v_nodes[None, :]

    x_half = wrap_x(grid, x + 0.5 * dt * v)
    if prescribed_field is not None:
        e_at = _hook_values(prescribed_field, x_half)
    else:
        rho = deposit_charge(grid, coeffs, x_half, kind)
        state = compute_field(grid, rho, poisson)
        e_at = eval_field(grid, state.e_nodal, x_half)

    v_new = v + dt * e_at
    x_new = wrap_x(grid, x_half + 0.5 * dt * v_new)
    return Endpoints(x=x_new, v=v_new, dt=dt)


def _ck_step(
    grid: PhaseGrid,
    coeffs: np.ndarray,
    dt: float,
    order: int,
    kind: SplineKind,
    poisson: PoissonMethod,
    prescribed_field: FieldHook | None,
) -> Endpoints:
    x = grid.x_nodes
    v = grid.v_nodes

    if prescribed_field is not None:
        e = _hook_values(prescribed_field, x)
        phi = np.zeros((grid.n_x_nodes, grid.n_v_nodes))
        varphi = phi
    else:
        m = compute_moments(grid, coeffs, kind)
        e = compute_field(grid, m.rho, poisson).e_nodal
        phi = v[None, :] * m.rho[:, None] - m.current[:, None] + m.mean_current
        if order >= 3:
            varphi = (
                m.dsecond_moment_dx[:, None]
                - e[:, None]
                - 2.0 * v[None, :] * m.dcurrent_dx[:, None]
                + (v * v)[None, :] * m.drho_dx[:, None]
            )
        else:
            varphi = None

    x_new = x[:, None] + dt * v[None, :] + 0.5 * dt * dt * e[:, None]
    v_new = v[None, :] + dt * e[:, None] + 0.5 * dt * dt * phi
    if order >= 3:
        cube = dt * dt * dt / 6.0
        x_new = x_new + cube * phi
        v_new = v_new + cube * varphi

    return Endpoints(x=wrap_x(grid, x_new), v=v_new, dt=dt)


def ck2_step(grid, coeffs, dt, kind=SplineKind.LINEAR,
             poisson=PoissonMethod.STAGGERED_FD, prescribed_field=None) -> Endpoints:
    return _ck_step(grid, coeffs, dt, 2, kind, poisson, prescribed_field)


def ck3_step(grid, coeffs, dt, kind=SplineKind.LINEAR,
             poisson=PoissonMethod.STAGGERED_FD, prescribed_field=None) -> Endpoints:
    return _ck_step(grid, coeffs, dt, 3, kind, poisson, prescribed_field)


_PUSHERS = {
    PusherKind.VERLET: verlet_step,
    PusherKind.CK2: ck2_step,
    PusherKind.CK3: ck3_step,
}


def push(
    grid: PhaseGrid,
    coeffs: np.ndarray,
    dt: float,
    pusher: PusherKind,
    kind: SplineKind = SplineKind.LINEAR,
    poisson: PoissonMethod = PoissonMethod.STAGGERED_FD,
    prescribed_field: FieldHook | None = None,
) -> Endpoints:
    """Advance all grid nodes one step with the selected integrator."""
    return _PUSHERS[pusher](grid, coeffs, dt, kind, poisson, prescribed_field)
