"""Empty-hand calibration and valid-frame detection.

A taxel's threshold is the highest code it ever produced across the
empty-hand frames, so a frame shows real contact only where codes rise
strictly above threshold.
"""
from __future__ import annotations

from collections.abc import Iterable

import numpy as np

from ..errors import EmptyInput, OutOfRange
from .frames import CalibrationMap, TactileFrame


def compute_thresholds(empty_frames: Iterable[TactileFrame]) -> CalibrationMap:
    """Per-taxel maxima over empty-hand frames.

    Merging more frames can only raise thresholds, so calibrations built
    from concatenated recordings equal the elementwise max of the parts.
    """
    frames = list(empty_frames)
    if not frames:
        raise EmptyInput("compute_thresholds needs at least one frame")
    stack = np.stack([f.values for f in frames])
    return CalibrationMap(thresholds=stack.max(axis=0), source_frame_count=len(frames))


def merge_calibrations(a: CalibrationMap, b: CalibrationMap) -> CalibrationMap:
    return CalibrationMap(
        thresholds=np.maximum(a.thresholds, b.thresholds),
        source_frame_count=a.source_frame_count + b.source_frame_count,
    )


def supra_threshold_count(frame: TactileFrame, calib: CalibrationMap) -> int:
    """Number of taxels strictly above their empty-hand threshold."""
    return int(np.count_nonzero(frame.values > calib.thresholds))


def is_valid_frame(frame: TactileFrame, calib: CalibrationMap, k: int = 1) -> bool:
    """True when at least k taxels read strictly above threshold.

    Strict: a taxel sitting exactly at its threshold is indistinguishable
    from no contact, since thresholds are maxima of touchless data.
    """
    if k < 1:
        raise OutOfRange("k must be >= 1")
    return supra_threshold_count(frame, calib) >= k
