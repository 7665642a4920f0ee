"""Crossbar scanning: isolated single-path readout vs the full sneak-path
network.

Isolated mode models the readout circuit that holds every unselected
electrode at ground, so each crossing is a clean voltage divider against
the sense resistor. Non-isolated mode leaves unselected electrodes
floating and solves the complete 64-node resistor network per crossing,
which is what makes phantom readings appear at untouched taxels.
"""
from __future__ import annotations

import numpy as np

from ..core.frames import GRID_COLS, GRID_ROWS, HandMask, TactileFrame
from ..errors import OutOfRange, SingularNetwork
from .model import AdcModel, ResistorGrid

SCAN_MODES = ("isolated", "nonisolated")
_NODES = GRID_ROWS + GRID_COLS
RESIDUAL_TOL = 1e-9


def _codes_from_voltage(v: np.ndarray, full_scale: int) -> np.ndarray:
    return np.clip(np.rint(full_scale * v), 0, full_scale).astype(np.uint16)


def isolated_codes(grid: ResistorGrid, adc: AdcModel) -> np.ndarray:
    v = adc.r_ref_ohm / (adc.r_ref_ohm + grid.resistance_ohm)
    return _codes_from_voltage(v, adc.full_scale)


def _base_laplacian(grid: ResistorGrid) -> np.ndarray:
    g = 1.0 / grid.resistance_ohm
    lap = np.zeros((_NODES, _NODES))
    row_sum = g.sum(axis=1)
    col_sum = g.sum(axis=0)
    lap[np.arange(GRID_ROWS), np.arange(GRID_ROWS)] = row_sum
    lap[GRID_ROWS + np.arange(GRID_COLS), GRID_ROWS + np.arange(GRID_COLS)] = col_sum
    lap[:GRID_ROWS, GRID_ROWS:] = -g
    lap[GRID_ROWS:, :GRID_ROWS] = -g.T
    return lap


def solve_crossing_voltage(grid: ResistorGrid, adc: AdcModel, row: int, col: int,
                           lap: np.ndarray | None = None) -> float:
    """Sense-node voltage (drive = 1.0) for one non-isolated measurement.

    The selected row electrode is driven, the selected column is tied to
    ground through r_ref, every other electrode floats. Dense LU solve of
    the nodal system; the 63-node systems are tiny, so robustness wins
    over speed.
    """
    if not (0 <= row < GRID_ROWS and 0 <= col < GRID_COLS):
        raise OutOfRange(f"crossing ({row}, {col}) outside the grid")
    if lap is None:
        lap = _base_laplacian(grid)
    g = lap.copy()
    sense = GRID_ROWS + col
    g[sense, sense] += 1.0 / adc.r_ref_ohm
    keep = np.arange(_NODES) != row
    a = g[np.ix_(keep, keep)]
    b = -g[keep, row]            # driven node at 1.0 moved to the RHS
    try:
        v = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as e:
        raise SingularNetwork(f"nodal system singular at ({row}, {col})") from e
    residual = np.abs(a @ v - b).max()
    scale = np.abs(b).max()
    if not np.isfinite(residual) or residual > RESIDUAL_TOL * scale:
        raise SingularNetwork(
            f"nodal solve at ({row}, {col}) left residual {residual:.3e}")
    return float(v[sense - 1])   # the dropped (driven) row node precedes every column node


def nonisolated_codes(grid: ResistorGrid, adc: AdcModel) -> np.ndarray:
    lap = _base_laplacian(grid)
    v = np.empty((GRID_ROWS, GRID_COLS))
    for row in range(GRID_ROWS):
        for col in range(GRID_COLS):
            v[row, col] = solve_crossing_voltage(grid, adc, row, col, lap)
    return _codes_from_voltage(v, adc.full_scale)


def scan(grid: ResistorGrid, adc: AdcModel, mode: str,
         seq: int = 0, timestamp_us: int = 0) -> TactileFrame:
    """Read the whole grid in the given mode and quantize to 12-bit codes."""
    if mode not in SCAN_MODES:
        raise OutOfRange(f"mode must be one of {SCAN_MODES}, got {mode!r}")
    codes = isolated_codes(grid, adc) if mode == "isolated" else nonisolated_codes(grid, adc)
    return TactileFrame(values=codes, seq=seq, timestamp_us=timestamp_us)


def code_to_resistance(code: int, adc: AdcModel) -> float:
    """Invert the isolated divider; code 0 maps to an open circuit."""
    if not 0 <= code <= adc.full_scale:
        raise OutOfRange(f"code {code} outside 0..{adc.full_scale}")
    if code == 0:
        return float("inf")
    return adc.r_ref_ohm * (adc.full_scale - code) / code


def ghost_error(reference: TactileFrame, measured: TactileFrame, mask: HandMask) -> float:
    """Mean absolute code difference over the masked taxels."""
    diff = np.abs(reference.values.astype(np.int32) - measured.values.astype(np.int32))
    return float(diff[mask.active].mean())
