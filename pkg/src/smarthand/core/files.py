"""Binary file formats for recordings, calibration maps and hand masks.

All integers are little-endian. Every file ends with a CRC-32 (IEEE
polynomial, as in zlib) computed over all preceding bytes, so a load
either returns a complete object or raises; there are no partial reads.

    SHRC  recording    magic "SHRC", version u16=1,
                       header {rows u8, cols u8, label u8, session u8,
                               rate_hz u16, frame_count u32, imu_count u32},
                       frames {seq u32, ts_us u64, 1024 x u16},
                       imu    {ts_us u64, 6 x i16}, crc u32
    SHCA  calibration  magic "SHCA", version u16=1, source_frame_count u32,
                       1024 x u16, crc u32
    SHMK  hand mask    magic "SHMK", 1024 x u8 (0/1), crc u32
"""
from __future__ import annotations

import struct
import zlib
from pathlib import Path

import numpy as np

from ..errors import ChecksumMismatch, FileFormatError
from .frames import (
    GRID_COLS,
    GRID_ROWS,
    TAXELS,
    CalibrationMap,
    HandMask,
    ImuSample,
    Recording,
    TactileFrame,
)

RECORDING_MAGIC = b"SHRC"
CALIBRATION_MAGIC = b"SHCA"
MASK_MAGIC = b"SHMK"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<BBBBHII")        # rows cols label session rate frames imu
_FRAME_META = struct.Struct("<IQ")         # seq, ts_us
_IMU_REC = struct.Struct("<Qhhhhhh")       # ts_us, accel xyz, gyro xyz


def _check_crc(blob: bytes, what: str) -> bytes:
    if len(blob) < 4:
        raise FileFormatError(f"{what}: file shorter than its checksum")
    body, (stored,) = blob[:-4], struct.unpack("<I", blob[-4:])
    actual = zlib.crc32(body)
    if stored != actual:
        raise ChecksumMismatch(stored, actual)
    return body


class _Reader:
    """Cursor over a byte body that fails closed on truncation."""

    def __init__(self, body: bytes, what: str):
        self.body = body
        self.pos = 0
        self.what = what

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.body):
            raise FileFormatError(f"{self.what}: truncated (needed {n} bytes at offset {self.pos})")
        out = self.body[self.pos:self.pos + n]
        self.pos += n
        return out

    def unpack(self, st: struct.Struct) -> tuple:
        return st.unpack(self.take(st.size))

    def expect_end(self):
        if self.pos != len(self.body):
            raise FileFormatError(f"{self.what}: {len(self.body) - self.pos} trailing bytes")


def save_recording(rec: Recording, path: str | Path) -> None:
    parts = [RECORDING_MAGIC, struct.pack("<H", FORMAT_VERSION)]
    parts.append(_HEADER.pack(GRID_ROWS, GRID_COLS, rec.label_id, rec.session_id,
                              rec.rate_hz, len(rec.frames), len(rec.imu)))
    for f in rec.frames:
        parts.append(_FRAME_META.pack(f.seq, f.timestamp_us))
        parts.append(f.values.astype("<u2").tobytes())
    for s in rec.imu:
        parts.append(_IMU_REC.pack(s.timestamp_us, *s.accel, *s.gyro))
    body = b"".join(parts)
    Path(path).write_bytes(body + struct.pack("<I", zlib.crc32(body)))


def load_recording(path: str | Path) -> Recording:
    body = _check_crc(Path(path).read_bytes(), "recording")
    r = _Reader(body, "recording")
    if r.take(4) != RECORDING_MAGIC:
        raise FileFormatError("recording: bad magic")
    (version,) = r.unpack(struct.Struct("<H"))
    if version != FORMAT_VERSION:
        raise FileFormatError(f"recording: unsupported version {version}")
    rows, cols, label, session, rate_hz, n_frames, n_imu = r.unpack(_HEADER)
    if (rows, cols) != (GRID_ROWS, GRID_COLS):
        raise FileFormatError(f"recording: grid {rows}x{cols} unsupported")
    frames = []
    for _ in range(n_frames):
        seq, ts = r.unpack(_FRAME_META)
        values = np.frombuffer(r.take(TAXELS * 2), dtype="<u2").reshape(GRID_ROWS, GRID_COLS)
        frames.append(TactileFrame(values=values, seq=seq, timestamp_us=ts))
    imu = []
    for _ in range(n_imu):
        ts, ax, ay, az, gx, gy, gz = r.unpack(_IMU_REC)
        imu.append(ImuSample(accel=(ax, ay, az), gyro=(gx, gy, gz), timestamp_us=ts))
    r.expect_end()
    return Recording(label_id=label, session_id=session, rate_hz=rate_hz,
                     frames=tuple(frames), imu=tuple(imu))


def save_calibration(calib: CalibrationMap, path: str | Path) -> None:
    body = (CALIBRATION_MAGIC + struct.pack("<HI", FORMAT_VERSION, calib.source_frame_count)
            + calib.thresholds.astype("<u2").tobytes())
    Path(path).write_bytes(body + struct.pack("<I", zlib.crc32(body)))


def load_calibration(path: str | Path) -> CalibrationMap:
    body = _check_crc(Path(path).read_bytes(), "calibration")
    r = _Reader(body, "calibration")
    if r.take(4) != CALIBRATION_MAGIC:
        raise FileFormatError("calibration: bad magic")
    version, count = r.unpack(struct.Struct("<HI"))
    if version != FORMAT_VERSION:
        raise FileFormatError(f"calibration: unsupported version {version}")
    thresholds = np.frombuffer(r.take(TAXELS * 2), dtype="<u2").reshape(GRID_ROWS, GRID_COLS)
    r.expect_end()
    return CalibrationMap(thresholds=thresholds, source_frame_count=count)


def save_hand_mask(mask: HandMask, path: str | Path) -> None:
    body = MASK_MAGIC + mask.active.astype(np.uint8).tobytes()
    Path(path).write_bytes(body + struct.pack("<I", zlib.crc32(body)))


def load_hand_mask(path: str | Path) -> HandMask:
    """Load a SHMK mask file; raises MaskCountMismatch unless exactly 548 taxels are active."""
    body = _check_crc(Path(path).read_bytes(), "mask")
    r = _Reader(body, "mask")
    if r.take(4) != MASK_MAGIC:
        raise FileFormatError("mask: bad magic")
    flags = np.frombuffer(r.take(TAXELS), dtype=np.uint8)
    r.expect_end()
    if not np.all((flags == 0) | (flags == 1)):
        raise FileFormatError("mask: cells must be 0 or 1")
    return HandMask(active=flags.reshape(GRID_ROWS, GRID_COLS).astype(bool))
