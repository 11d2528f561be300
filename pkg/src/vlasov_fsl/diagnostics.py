"""Conserved quantities, discrete norms, and the diagnostics CSV format.

All quantities are rectangle-rule sums over the nodes, matching the
discrete norms the scheme is analyzed in:

    mass      = dx dv sum w_{i,j}
    momentum  = dx dv sum v_j f_{i,j}
    L2 norm   = (dx dv sum f_{i,j}^2)^(1/2)
    kinetic   = dx dv sum v_j^2 f_{i,j} / 2
    electric  = dx sum E_i^2 / 2
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .grid import PhaseGrid

CSV_COLUMNS = (
    "t",
    "mass",
    "momentum",
    "l2_norm",
    "kinetic_energy",
    "electric_energy",
    "total_energy",
    "mass_lost",
)


@dataclass
class DiagnosticsRecord:
    t: float
    mass: float
    momentum: float
    l2_norm: float
    kinetic_energy: float
    electric_energy: float
    total_energy: float
    mass_lost: float


def mass(grid: PhaseGrid, coeffs: np.ndarray) -> float:
    return grid.cell_area * float(np.sum(coeffs))


def momentum(grid: PhaseGrid, values: np.ndarray) -> float:
    return grid.cell_area * float(np.sum(np.asarray(values) @ grid.v_nodes))


def energies(grid: PhaseGrid, values: np.ndarray, e_nodal: np.ndarray) -> tuple[float, float]:
    v2 = grid.v_nodes**2
    kinetic = 0.5 * grid.cell_area * float(np.sum(values @ v2))
    electric = 0.5 * grid.dx * float(np.sum(np.asarray(e_nodal) ** 2))
    return kinetic, electric


def l2_norm(grid: PhaseGrid, values: np.ndarray) -> float:
    return float(np.sqrt(grid.cell_area * np.sum(np.asarray(values) ** 2)))


def l1_error(grid: PhaseGrid, f_a: np.ndarray, f_b: np.ndarray) -> float:
    a = np.asarray(f_a)
    b = np.asarray(f_b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return grid.cell_area * float(np.sum(np.abs(a - b)))


def make_record(
    grid: PhaseGrid,
    t: float,
    values: np.ndarray,
    coeffs: np.ndarray,
    e_nodal: np.ndarray,
    mass_lost: float,
) -> DiagnosticsRecord:
    kin, ele = energies(grid, values, e_nodal)
    return DiagnosticsRecord(
        t=t,
        mass=mass(grid, coeffs),
        momentum=momentum(grid, values),
        l2_norm=l2_norm(grid, values),
        kinetic_energy=kin,
        electric_energy=ele,
        total_energy=kin + ele,
        mass_lost=mass_lost,
    )


def write_csv(path, records) -> None:
    """Write records at full double precision (17 significant digits)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(f"{getattr(rec, name):.17g}" for name in CSV_COLUMNS)


def read_csv(path) -> list[DiagnosticsRecord]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected diagnostics header: {header}")
        out = []
        for row in reader:
            vals = {name: float(tok) for name, tok in zip(CSV_COLUMNS, row)}
            out.append(DiagnosticsRecord(**vals))
        return out
