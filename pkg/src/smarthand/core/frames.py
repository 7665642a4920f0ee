"""Frame, mask, calibration and recording value types.

All types are immutable value objects once constructed: arrays are stored
with the writeable flag cleared, so instances can be shared freely across
threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import MaskCountMismatch, OutOfRange

GRID_ROWS = 32
GRID_COLS = 32
TAXELS = GRID_ROWS * GRID_COLS
ADC_FULL_SCALE = 4095          # 12-bit converter
HAND_CROSSINGS = 548           # physical electrode crossings of the hand shape
CLASS_COUNT = 17               # 16 objects + empty hand
EMPTY_HAND_CLASS = 16
SESSION_COUNT = 5


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TactileFrame:
    """One 32x32 grid of 12-bit taxel codes plus acquisition metadata."""

    values: np.ndarray          # (32, 32) uint16, each <= 4095
    seq: int = 0
    timestamp_us: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.uint16)
        if v.shape != (GRID_ROWS, GRID_COLS):
            raise OutOfRange(f"frame shape {v.shape}, expected {(GRID_ROWS, GRID_COLS)}")
        if v.max(initial=0) > ADC_FULL_SCALE:
            raise OutOfRange(f"taxel code {int(v.max())} exceeds {ADC_FULL_SCALE}")
        if not 0 <= self.seq < 2 ** 32:
            raise OutOfRange(f"seq {self.seq} outside u32")
        if not 0 <= self.timestamp_us < 2 ** 64:
            raise OutOfRange(f"timestamp_us {self.timestamp_us} outside u64")
        object.__setattr__(self, "values", _frozen(v))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TactileFrame):
            return NotImplemented
        return (
            self.seq == other.seq
            and self.timestamp_us == other.timestamp_us
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.seq, self.timestamp_us, self.values.tobytes()))


@dataclass(frozen=True)
class HandMask:
    """Boolean 32x32 mask of the electrically real hand-shaped crossings."""

    active: np.ndarray          # (32, 32) bool, exactly 548 True

    def __post_init__(self):
        a = np.asarray(self.active, dtype=bool)
        if a.shape != (GRID_ROWS, GRID_COLS):
            raise OutOfRange(f"mask shape {a.shape}, expected {(GRID_ROWS, GRID_COLS)}")
        count = int(a.sum())
        if count != HAND_CROSSINGS:
            raise MaskCountMismatch(count)
        object.__setattr__(self, "active", _frozen(a))

    @property
    def count(self) -> int:
        return HAND_CROSSINGS

    def __eq__(self, other) -> bool:
        if not isinstance(other, HandMask):
            return NotImplemented
        return np.array_equal(self.active, other.active)

    def __hash__(self):
        return hash(self.active.tobytes())


@dataclass(frozen=True)
class CalibrationMap:
    """Per-taxel empty-hand thresholds (the max code seen without contact)."""

    thresholds: np.ndarray      # (32, 32) uint16
    source_frame_count: int

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=np.uint16)
        if t.shape != (GRID_ROWS, GRID_COLS):
            raise OutOfRange(f"threshold shape {t.shape}, expected {(GRID_ROWS, GRID_COLS)}")
        if t.max(initial=0) > ADC_FULL_SCALE:
            raise OutOfRange("threshold exceeds ADC range")
        if self.source_frame_count < 0:
            raise OutOfRange("source_frame_count must be >= 0")
        object.__setattr__(self, "thresholds", _frozen(t))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CalibrationMap):
            return NotImplemented
        return (
            self.source_frame_count == other.source_frame_count
            and np.array_equal(self.thresholds, other.thresholds)
        )

    def __hash__(self):
        return hash((self.source_frame_count, self.thresholds.tobytes()))


_I16_MIN, _I16_MAX = -(2 ** 15), 2 ** 15 - 1


@dataclass(frozen=True)
class ImuSample:
    """Raw 16-bit accelerometer and gyroscope counts at one instant."""

    accel: tuple[int, int, int]
    gyro: tuple[int, int, int]
    timestamp_us: int = 0

    def __post_init__(self):
        accel = tuple(int(x) for x in self.accel)
        gyro = tuple(int(x) for x in self.gyro)
        for v in (*accel, *gyro):
            if not _I16_MIN <= v <= _I16_MAX:
                raise OutOfRange(f"IMU count {v} outside signed 16-bit range")
        if len(accel) != 3 or len(gyro) != 3:
            raise OutOfRange("accel and gyro must have 3 axes each")
        if not 0 <= self.timestamp_us < 2 ** 64:
            raise OutOfRange("timestamp_us outside u64")
        object.__setattr__(self, "accel", accel)
        object.__setattr__(self, "gyro", gyro)


@dataclass(frozen=True)
class Recording:
    """An ordered capture of tactile frames (and optionally IMU samples)."""

    label_id: int               # 0..15 objects, 16 empty hand
    session_id: int             # 0..4
    rate_hz: int
    frames: tuple[TactileFrame, ...]
    imu: tuple[ImuSample, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not 0 <= self.label_id < CLASS_COUNT:
            raise OutOfRange(f"label_id {self.label_id} outside 0..{CLASS_COUNT - 1}")
        if not 0 <= self.session_id < SESSION_COUNT:
            raise OutOfRange(f"session_id {self.session_id} outside 0..{SESSION_COUNT - 1}")
        if not 0 < self.rate_hz < 2 ** 16:
            raise OutOfRange("rate_hz must fit u16 and be positive")
        frames = tuple(self.frames)
        imu = tuple(self.imu)
        seqs = [f.seq for f in frames]
        if any(b <= a for a, b in zip(seqs, seqs[1:])):
            raise OutOfRange("frame sequence numbers must be strictly increasing")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "imu", imu)

    def __len__(self) -> int:
        return len(self.frames)


@dataclass(frozen=True)
class SelectionConfig:
    """How many frames to pick per input sample and by what strategy."""

    n: int
    strategy: str = "random"    # "random" | "cluster"
    seed: int = 0
    min_supra_taxels: int = 1   # k taxels above threshold for a frame to count

    def __post_init__(self):
        if self.n < 1:
            raise OutOfRange("n must be >= 1")
        if self.strategy not in ("random", "cluster"):
            raise OutOfRange(f"unknown strategy {self.strategy!r}")
        if self.min_supra_taxels < 1:
            raise OutOfRange("min_supra_taxels must be >= 1")


def normalize_frame(frame: TactileFrame, baseline: CalibrationMap | None = None) -> np.ndarray:
    """Map taxel codes to [0, 1] floats for network input.

    Default is a plain division by the ADC full scale. Passing a
    calibration map switches to baseline subtraction: codes at or below
    their empty-hand threshold map to 0.
    """
    v = frame.values.astype(np.float32)
    if baseline is not None:
        v = np.maximum(v - baseline.thresholds.astype(np.float32), 0.0)
    return v / ADC_FULL_SCALE
