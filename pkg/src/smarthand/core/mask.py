"""Canonical hand-shaped mask.

The mask ships as a data file rather than code so alternate sensor
shapes can be dropped in without touching the package.
"""
from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .files import load_hand_mask
from .frames import HandMask


@lru_cache(maxsize=1)
def canonical_hand_mask() -> HandMask:
    """The packaged 548-crossing hand silhouette."""
    ref = resources.files("smarthand.data").joinpath("hand_mask.shmk")
    with resources.as_file(ref) as path:
        return load_hand_mask(path)
