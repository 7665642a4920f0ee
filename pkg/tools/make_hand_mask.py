#!/usr/bin/env python3
"""Generate the canonical hand-shaped mask data file.

Paints a left-hand silhouette (palm ellipse, four finger capsules, thumb
capsule) as a distance field on the 32x32 grid, then keeps exactly the
548 closest cells so the shipped file always has the required count.

Usage: python3 tools/make_hand_mask.py [out.shmk]
"""
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from smarthand.core.files import save_hand_mask  # noqa: E402
from smarthand.core.frames import GRID_COLS, GRID_ROWS, HAND_CROSSINGS, HandMask  # noqa: E402


def capsule_field(r, c, p0, p1, radius):
    """Distance to a segment, normalized by the capsule radius."""
    p0 = np.asarray(p0, dtype=float)
    d = np.asarray(p1, dtype=float) - p0
    t = ((r - p0[0]) * d[0] + (c - p0[1]) * d[1]) / max((d * d).sum(), 1e-9)
    t = np.clip(t, 0.0, 1.0)
    pr = p0[0] + t * d[0]
    pc = p0[1] + t * d[1]
    return np.hypot(r - pr, c - pc) / radius


def ellipse_field(r, c, center, radii):
    return np.hypot((r - center[0]) / radii[0], (c - center[1]) / radii[1])


def build_mask() -> HandMask:
    r, c = np.mgrid[0:GRID_ROWS, 0:GRID_COLS].astype(float)
    # left hand, palm up: index on the left edge, thumb off to the right
    parts = [
        ellipse_field(r, c, center=(19.5, 10.5), radii=(8.0, 10.2)),  # palm
        capsule_field(r, c, (13.0, 2.5), (2.2, 2.5), 2.0),            # index
        capsule_field(r, c, (13.0, 7.5), (0.8, 7.5), 2.0),            # middle
        capsule_field(r, c, (13.0, 12.5), (1.8, 12.5), 2.0),          # ring
        capsule_field(r, c, (13.0, 17.5), (4.5, 17.5), 1.9),          # little
        capsule_field(r, c, (15.5, 18.0), (10.0, 24.5), 2.5),         # thumb
        capsule_field(r, c, (26.0, 10.5), (31.0, 10.5), 5.0),         # wrist
    ]
    field = np.minimum.reduce(parts)
    # keep exactly the 548 best cells; ties broken by (row, col)
    order = np.lexsort((c.ravel(), r.ravel(), field.ravel()))
    active = np.zeros(GRID_ROWS * GRID_COLS, dtype=bool)
    active[order[:HAND_CROSSINGS]] = True
    return HandMask(active=active.reshape(GRID_ROWS, GRID_COLS))


def main():
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parents[1] / "src" / "smarthand" / "data" / "hand_mask.shmk")
    mask = build_mask()
    # the fingertip cells exercised by the readout demo must be sensing cells
    for probe in [(2, 3), (2, 7), (5, 3), (5, 7)]:
        assert mask.active[probe], f"probe taxel {probe} fell outside the mask"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_hand_mask(mask, out)
    print(f"wrote {out} ({int(mask.active.sum())} active)")
    for row in mask.active:
        print("".join("#" if x else "." for x in row))


if __name__ == "__main__":
    main()
