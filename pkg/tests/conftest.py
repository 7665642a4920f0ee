import numpy as np
import pytest

from smarthand.core.frames import (
    GRID_COLS,
    GRID_ROWS,
    CalibrationMap,
    ImuSample,
    Recording,
    TactileFrame,
)


def frame_of(value: int, seq: int = 0, ts: int = 0) -> TactileFrame:
    return TactileFrame(values=np.full((GRID_ROWS, GRID_COLS), value, dtype=np.uint16),
                        seq=seq, timestamp_us=ts)


def random_frame(rng: np.random.Generator, seq: int = 0, ts: int = 0,
                 high: int = 4096) -> TactileFrame:
    return TactileFrame(values=rng.integers(0, high, size=(GRID_ROWS, GRID_COLS),
                                            dtype=np.uint16),
                        seq=seq, timestamp_us=ts)


def random_recording(rng: np.random.Generator, n_frames: int = 8, n_imu: int = 0,
                     label: int = 0, session: int = 0, rate: int = 100) -> Recording:
    frames = tuple(random_frame(rng, seq=i, ts=i * 10_000) for i in range(n_frames))
    imu = tuple(
        ImuSample(accel=tuple(int(x) for x in rng.integers(-32768, 32768, 3)),
                  gyro=tuple(int(x) for x in rng.integers(-32768, 32768, 3)),
                  timestamp_us=i * 10_000)
        for i in range(n_imu))
    return Recording(label_id=label, session_id=session, rate_hz=rate,
                     frames=frames, imu=imu)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xC0FFEE)


def zero_calibration() -> CalibrationMap:
    return CalibrationMap(thresholds=np.zeros((GRID_ROWS, GRID_COLS), dtype=np.uint16),
                          source_frame_count=1)
