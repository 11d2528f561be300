"""Forward semi-Lagrangian time loop.

One step: push every grid node along the characteristics, scatter the
transported coefficients back onto the fixed grid with tensor spline
weights, re-solve the spline coefficients, advance diagnostics.

Deposition is periodic in x.  In v the lattice is truncated: weight taps
falling outside [0, nv] are folded onto the nearest cutoff row, so the
deposition operator preserves total mass exactly (the partition-of-unity
identity) for every endpoint within kernel reach of the lattice.  An
endpoint whose entire stencil misses the v grid is dropped and counted in
the mass-loss diagnostic.  The benchmarks choose the velocity cutoff large
enough that the folded weight stays at the noise level.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import diagnostics
from .field import PoissonMethod, compute_field
from .grid import PhaseGrid, wrap_x
from .moments import compute_moments
from .pushers import Endpoints, FieldHook, PusherKind, push
from .splines import SplineKind, solve_coefficients, tap_offsets, tap_weights


class NumericalAbortError(RuntimeError):
    """Non-finite state detected; carries the failing step index."""

    def __init__(self, step_index: int, t: float):
        super().__init__(f"non-finite state at step {step_index} (t={t:g})")
        self.step_index = step_index
        self.t = t


@dataclass
class DistributionState:
    """Nodal values, spline coefficients, and time bookkeeping."""

    values: np.ndarray
    coeffs: np.ndarray
    t: float
    step_index: int
    mass_lost: float


def make_state(grid: PhaseGrid, values: np.ndarray, kind: SplineKind) -> DistributionState:
    values = np.asarray(values, dtype=float)
    return DistributionState(
        values=values,
        coeffs=solve_coefficients(grid, values, kind),
        t=0.0,
        step_index=0,
        mass_lost=0.0,
    )


def deposit_distribution(
    grid: PhaseGrid,
    coeffs: np.ndarray,
    endpoints: Endpoints,
    kind: SplineKind,
) -> tuple[np.ndarray, float]:
    """Scatter coefficients to the endpoint neighborhoods.

    Returns (nodal values at the new time, mass lost to full v exits).
    """
    mx = grid.n_x_nodes
    mv = grid.n_v_nodes
    w = np.asarray(coeffs, dtype=float).ravel()

    sx = wrap_x(grid, np.asarray(endpoints.x, dtype=float).ravel()) / grid.dx
    px = np.clip(np.floor(sx), 0, mx - 1).astype(np.int64)
    ax = np.clip(sx - px, 0.0, 1.0)

    sv = (np.asarray(endpoints.v, dtype=float).ravel() + grid.v_max) / grid.dv
    margin = kind.support_radius + 1
    pv = np.floor(np.clip(sv, -margin, grid.nv + margin)).astype(np.int64)
    av = np.clip(sv - pv, 0.0, 1.0)

    offs = tap_offsets(kind)
    wxs = tap_weights(kind, ax)
    wvs = tap_weights(kind, av)

    full_exit = (pv + offs[-1] < 0) | (pv + offs[0] > grid.nv)
    lost = 0.0
    if full_exit.any():
        lost = grid.cell_area * float(np.sum(w[full_exit]))
        w = np.where(full_exit, 0.0, w)

    out = np.zeros(mx * mv)
    for ox, wx in zip(offs, wxs):
        base = ((px + ox) % mx) * mv
        for ov, wv in zip(offs, wvs):
            jv = np.clip(pv + ov, 0, grid.nv)  # fold onto the cutoff rows
            out += np.bincount(base + jv, weights=w * wx * wv, minlength=mx * mv)
    return out.reshape(mx, mv), lost


def step(
    grid: PhaseGrid,
    state: DistributionState,
    dt: float,
    pusher: PusherKind,
    kind: SplineKind,
    poisson: PoissonMethod,
    prescribed_field: FieldHook | None = None,
) -> DistributionState:
    ends = push(grid, state.coeffs, dt, pusher, kind, poisson, prescribed_field)
    if not (np.all(np.isfinite(ends.x)) and np.all(np.isfinite(ends.v))):
        raise NumericalAbortError(state.step_index + 1, state.t + dt)
    values, lost = deposit_distribution(grid, state.coeffs, ends, kind)
    if not np.all(np.isfinite(values)):
        raise NumericalAbortError(state.step_index + 1, state.t + dt)
    return DistributionState(
        values=values,
        coeffs=solve_coefficients(grid, values, kind),
        t=state.t + dt,
        step_index=state.step_index + 1,
        mass_lost=state.mass_lost + lost,
    )


def field_at(
    grid: PhaseGrid,
    state: DistributionState,
    kind: SplineKind,
    poisson: PoissonMethod,
    prescribed_field: FieldHook | None = None,
) -> np.ndarray:
    """Nodal electric field of the current state (for diagnostics)."""
    if prescribed_field is not None:
        if callable(prescribed_field):
            return np.broadcast_to(
                np.asarray(prescribed_field(grid.x_nodes), dtype=float),
                (grid.n_x_nodes,),
            ).copy()
        return np.full(grid.n_x_nodes, float(prescribed_field))
    m = compute_moments(grid, state.coeffs, kind)
    return compute_field(grid, m.rho, poisson).e_nodal


@dataclass
class RunResult:
    records: list
    snapshots: dict
    final_state: DistributionState


def run(
    grid: PhaseGrid,
    initial_values: np.ndarray,
    dt: float,
    n_steps: int,
    pusher: PusherKind,
    kind: SplineKind,
    poisson: PoissonMethod,
    prescribed_field: FieldHook | None = None,
    diag_stride: int = 1,
    snapshot_times: tuple[float, ...] = (),
) -> RunResult:
    """Run n_steps of the scheme, collecting diagnostics every diag_stride.

    Snapshot times are matched to the nearest step time (within dt/2),
    each firing at most once.  Raises NumericalAbortError if the state
    stops being finite.
    """
    if dt <= 0.0:
        raise ValueError("run requires dt > 0")
    state = make_state(grid, initial_values, kind)

    def record(st):
        e = field_at(grid, st, kind, poisson, prescribed_field)
        return diagnostics.make_record(grid, st.t, st.values, st.coeffs, e, st.mass_lost)

    pending = sorted(float(s) for s in snapshot_times)
    snapshots: dict[float, np.ndarray] = {}

    def maybe_snapshot(st):
        while pending and abs(pending[0] - st.t) <= 0.5 * dt:
            snapshots[pending.pop(0)] = st.values.copy()

    records = [record(state)]
    maybe_snapshot(state)
    for n in range(1, n_steps + 1):
        state = step(grid, state, dt, pusher, kind, poisson, prescribed_field)
        if n % diag_stride == 0 or n == n_steps:
            records.append(record(state))
        maybe_snapshot(state)
    return RunResult(records=records, snapshots=snapshots, final_state=state)


def write_snapshot(path, grid: PhaseGrid, t: float, values: np.ndarray) -> None:
    """One snapshot file: header, then nv+1 rows of nx+1 nodal values."""
    with open(path, "w") as fh:
        fh.write(f"# t={t:.17g} Nx={grid.nx} Nv={grid.nv} "
                 f"L={grid.length:.17g} R={grid.v_max:.17g}\n")
        for j in range(grid.n_v_nodes):
            fh.write(" ".join(f"{values[i, j]:.17g}" for i in range(grid.n_x_nodes)))
            fh.write("\n")


def read_snapshot(path):
    """Read a snapshot file back: returns (t, meta dict, values array)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("# "):
            raise ValueError("missing snapshot header")
        meta = dict(tok.split("=") for tok in header[2:].split())
        rows = [np.array(line.split(), dtype=float) for line in fh if line.strip()]
    values = np.array(rows).T  # rows are fixed v_j
    return float(meta["t"]), meta, values
