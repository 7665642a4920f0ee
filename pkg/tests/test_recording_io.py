import struct
import zlib

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from smarthand.core.files import (
    load_calibration,
    load_hand_mask,
    load_recording,
    save_calibration,
    save_hand_mask,
    save_recording,
)
from smarthand.core.frames import (
    CalibrationMap,
    HandMask,
    ImuSample,
    Recording,
    TactileFrame,
)
from smarthand.errors import ChecksumMismatch, FileFormatError, MaskCountMismatch

from conftest import random_frame, random_recording


def test_single_frame_round_trip(tmp_path, rng):
    rec = random_recording(rng, n_frames=1)
    p = tmp_path / "one.shrc"
    save_recording(rec, p)
    assert load_recording(p) == rec


def test_full_capacity_round_trip_with_imu(tmp_path, rng):
    rec = random_recording(rng, n_frames=4096, n_imu=4096, label=16, session=4,
                           rate=100)
    p = tmp_path / "big.shrc"
    save_recording(rec, p)
    back = load_recording(p)
    assert back == rec
    assert len(back.frames) == 4096


def test_truncated_recording_fails_closed(tmp_path, rng):
    rec = random_recording(rng, n_frames=3)
    p = tmp_path / "t.shrc"
    save_recording(rec, p)
    blob = p.read_bytes()
    for cut in (len(blob) - 1, len(blob) // 2, 10, 3):
        p.write_bytes(blob[:cut])
        with pytest.raises((FileFormatError, ChecksumMismatch)):
            load_recording(p)


def test_corrupted_byte_raises_checksum_error(tmp_path, rng):
    rec = random_recording(rng, n_frames=2)
    p = tmp_path / "c.shrc"
    save_recording(rec, p)
    blob = bytearray(p.read_bytes())
    blob[30] ^= 0xFF
    p.write_bytes(bytes(blob))
    with pytest.raises(ChecksumMismatch):
        load_recording(p)


frames_strategy = st.lists(
    st.tuples(st.integers(0, 4095), st.integers(0, 2**32 - 1), st.integers(0, 2**40)),
    min_size=0, max_size=5,
)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(
    label=st.integers(0, 16),
    session=st.integers(0, 4),
    rate=st.integers(1, 65535),
    seed=st.integers(0, 2**31),
    n_frames=st.integers(0, 6),
    n_imu=st.integers(0, 4),
)
def test_recording_round_trip_property(tmp_path_factory, label, session, rate, seed,
                                       n_frames, n_imu):
    rng = np.random.default_rng(seed)
    rec = random_recording(rng, n_frames=n_frames, n_imu=n_imu, label=label,
                           session=session, rate=rate)
    p = tmp_path_factory.mktemp("rt") / "r.shrc"
    save_recording(rec, p)
    assert load_recording(p) == rec


def test_calibration_round_trip(tmp_path, rng):
    calib = CalibrationMap(
        thresholds=rng.integers(0, 4096, (32, 32), dtype=np.uint16),
        source_frame_count=12345,
    )
    p = tmp_path / "c.shca"
    save_calibration(calib, p)
    assert load_calibration(p) == calib


def test_calibration_bad_magic(tmp_path):
    body = b"NOPE" + struct.pack("<HI", 1, 0) + bytes(2048)
    p = tmp_path / "bad.shca"
    p.write_bytes(body + struct.pack("<I", zlib.crc32(body)))
    with pytest.raises(FileFormatError):
        load_calibration(p)


def test_mask_round_trip(tmp_path):
    active = np.zeros(1024, dtype=bool)
    active[:548] = True
    mask = HandMask(active=active.reshape(32, 32))
    p = tmp_path / "m.shmk"
    save_hand_mask(mask, p)
    assert load_hand_mask(p) == mask


def _write_raw_mask(path, flags: np.ndarray):
    body = b"SHMK" + flags.astype(np.uint8).tobytes()
    path.write_bytes(body + struct.pack("<I", zlib.crc32(body)))


def test_all_true_mask_rejected(tmp_path):
    p = tmp_path / "full.shmk"
    _write_raw_mask(p, np.ones(1024))
    with pytest.raises(MaskCountMismatch) as err:
        load_hand_mask(p)
    assert err.value.actual == 1024


def test_all_false_mask_rejected(tmp_path):
    p = tmp_path / "none.shmk"
    _write_raw_mask(p, np.zeros(1024))
    with pytest.raises(MaskCountMismatch) as err:
        load_hand_mask(p)
    assert err.value.actual == 0


def test_mask_with_other_values_rejected(tmp_path):
    flags = np.zeros(1024)
    flags[:548] = 1
    flags[600] = 7
    p = tmp_path / "odd.shmk"
    _write_raw_mask(p, flags)
    with pytest.raises(FileFormatError):
        load_hand_mask(p)
