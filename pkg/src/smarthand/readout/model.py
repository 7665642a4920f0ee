"""Electrical models for the resistive crossbar: force law, grid, ADC."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NegativeForce, OutOfRange
from ..core.frames import GRID_COLS, GRID_ROWS, _frozen


@dataclass(frozen=True)
class FsrLaw:
    """Saturating force-to-resistance curve for the piezoresistive film.

    R(f) = r_min + (r_open - r_min) / (1 + f / f0): equals r_open with no
    force, strictly decreasing, approaching r_min under saturation.
    Defaults span typical piezoresistive composite ranges; override via
    scenario files when characterizing a specific material.
    """

    r_open_ohm: float = 50_000.0
    r_min_ohm: float = 500.0
    f0_newton: float = 1.0

    def __post_init__(self):
        if not (0 < self.r_min_ohm < self.r_open_ohm < float("inf")):
            raise OutOfRange("need 0 < r_min < r_open, both finite")
        if not 0 < self.f0_newton < float("inf"):
            raise OutOfRange("f0 must be positive and finite")


def resistance_from_force(law: FsrLaw, force_newton: float) -> float:
    if force_newton < 0:
        raise NegativeForce(f"force {force_newton} N")
    return law.r_min_ohm + (law.r_open_ohm - law.r_min_ohm) / (1.0 + force_newton / law.f0_newton)


@dataclass(frozen=True)
class AdcModel:
    """12-bit converter sampling the divider formed with r_ref."""

    r_ref_ohm: float = 10_000.0
    bits: int = 12

    def __post_init__(self):
        if not 0 < self.r_ref_ohm < float("inf"):
            raise OutOfRange("r_ref must be positive and finite")
        if self.bits != 12:
            raise OutOfRange("only the 12-bit converter is modeled")

    @property
    def full_scale(self) -> int:
        return (1 << self.bits) - 1


@dataclass(frozen=True)
class ResistorGrid:
    """Crossing resistances of the 32x32 electrode matrix."""

    resistance_ohm: np.ndarray      # (32, 32) positive floats
    r_open_ohm: float

    def __post_init__(self):
        r = np.asarray(self.resistance_ohm, dtype=np.float64)
        if r.shape != (GRID_ROWS, GRID_COLS):
            raise OutOfRange(f"grid shape {r.shape}, expected {(GRID_ROWS, GRID_COLS)}")
        if not np.all(np.isfinite(r)) or np.any(r <= 0):
            raise OutOfRange("all crossing resistances must be positive and finite")
        object.__setattr__(self, "resistance_ohm", _frozen(r))


def uniform_grid(law: FsrLaw) -> ResistorGrid:
    return ResistorGrid(
        resistance_ohm=np.full((GRID_ROWS, GRID_COLS), law.r_open_ohm),
        r_open_ohm=law.r_open_ohm,
    )


def frame_from_press_map(
    presses: list[tuple[int, int, float]], law: FsrLaw
) -> ResistorGrid:
    """Grid with pressed crossings at R(force), everything else at r_open.

    Duplicate coordinates have their forces summed before the law is
    applied.
    """
    total_force: dict[tuple[int, int], float] = {}
    for row, col, force in presses:
        if not (0 <= row < GRID_ROWS and 0 <= col < GRID_COLS):
            raise OutOfRange(f"press at ({row}, {col}) outside the grid")
        if force < 0:
            raise NegativeForce(f"force {force} N at ({row}, {col})")
        total_force[(row, col)] = total_force.get((row, col), 0.0) + force
    r = np.full((GRID_ROWS, GRID_COLS), law.r_open_ohm)
    for (row, col), force in total_force.items():
        r[row, col] = resistance_from_force(law, force)
    return ResistorGrid(resistance_ohm=r, r_open_ohm=law.r_open_ohm)
