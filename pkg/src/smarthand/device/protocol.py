"""Wire protocol between the simulated device and a host.

Packet layout (all integers little-endian):

    sync     2 B   0xAA 0x55
    kind     1 B   0 Frame, 1 Imu, 2 Inference, 3 Ack, 4 Dump
    seq      4 B   per-packet wire counter
    payload  fixed length per kind (see PAYLOAD_LEN)
    crc      2 B   CRC-16/CCITT-FALSE over kind..payload

Payloads:

    Frame / Dump   frame_seq u32, ts_us u64, 1024 x u16   (2060 B)
    Imu            ts_us u64, accel 3 x i16, gyro 3 x i16 (20 B)
    Inference      ts_us u64, class u8, 3 x {class u8, prob f32} (24 B)
    Ack            the accepted command byte              (1 B)

A decoder resynchronizes by scanning forward for the next sync marker,
so a stream can be picked up mid-flight and survives corrupt packets.
"""
from __future__ import annotations

import binascii
import struct
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..core.frames import GRID_COLS, GRID_ROWS, TAXELS, ImuSample, TactileFrame
from ..errors import CrcMismatch, OutOfRange, Truncated

SYNC = b"\xaa\x55"

KIND_FRAME = 0
KIND_IMU = 1
KIND_INFERENCE = 2
KIND_ACK = 3
KIND_DUMP = 4

PAYLOAD_LEN = {
    KIND_FRAME: 4 + 8 + TAXELS * 2,
    KIND_IMU: 8 + 6 * 2,
    KIND_INFERENCE: 8 + 1 + 3 * 5,
    KIND_ACK: 1,
    KIND_DUMP: 4 + 8 + TAXELS * 2,
}

_HEAD = struct.Struct("<BI")        # kind, seq


def crc16_ccitt(data: bytes, init: int = 0xFFFF) -> int:
    """CRC-16/CCITT-FALSE (poly 0x1021, MSB-first); crc_hqx is this exact CRC."""
    return binascii.crc_hqx(data, init)


class InferenceOutcome(NamedTuple):
    """Classifier verdict carried by an Inference packet."""

    class_id: int
    top3: tuple[tuple[int, float], ...]


@dataclass(frozen=True)
class DevicePacket:
    kind: int
    seq: int
    payload: bytes

    def __post_init__(self):
        if self.kind not in PAYLOAD_LEN:
            raise OutOfRange(f"unknown packet kind {self.kind}")
        if len(self.payload) != PAYLOAD_LEN[self.kind]:
            raise OutOfRange(
                f"kind {self.kind} payload must be {PAYLOAD_LEN[self.kind]} bytes, "
                f"got {len(self.payload)}")
        if not 0 <= self.seq < 2 ** 32:
            raise OutOfRange("packet seq outside u32")


def frame_packet(seq: int, frame: TactileFrame, dump: bool = False) -> DevicePacket:
    payload = struct.pack("<IQ", frame.seq, frame.timestamp_us) + frame.values.astype("<u2").tobytes()
    return DevicePacket(kind=KIND_DUMP if dump else KIND_FRAME, seq=seq, payload=payload)


def imu_packet(seq: int, sample: ImuSample) -> DevicePacket:
    payload = struct.pack("<Qhhhhhh", sample.timestamp_us, *sample.accel, *sample.gyro)
    return DevicePacket(kind=KIND_IMU, seq=seq, payload=payload)


def inference_packet(seq: int, ts_us: int, outcome: InferenceOutcome) -> DevicePacket:
    if len(outcome.top3) != 3:
        raise OutOfRange("inference packets carry exactly the top-3 classes")
    parts = [struct.pack("<QB", ts_us, outcome.class_id)]
    for cls, prob in outcome.top3:
        parts.append(struct.pack("<Bf", cls, prob))
    return DevicePacket(kind=KIND_INFERENCE, seq=seq, payload=b"".join(parts))


def ack_packet(seq: int, command: int) -> DevicePacket:
    return DevicePacket(kind=KIND_ACK, seq=seq, payload=bytes([command]))


def frame_from_packet(p: DevicePacket) -> TactileFrame:
    if p.kind not in (KIND_FRAME, KIND_DUMP):
        raise OutOfRange(f"packet kind {p.kind} carries no frame")
    frame_seq, ts = struct.unpack_from("<IQ", p.payload)
    values = np.frombuffer(p.payload, dtype="<u2", offset=12).reshape(GRID_ROWS, GRID_COLS)
    return TactileFrame(values=values, seq=frame_seq, timestamp_us=ts)


def imu_from_packet(p: DevicePacket) -> ImuSample:
    if p.kind != KIND_IMU:
        raise OutOfRange(f"packet kind {p.kind} carries no IMU sample")
    ts, ax, ay, az, gx, gy, gz = struct.unpack("<Qhhhhhh", p.payload)
    return ImuSample(accel=(ax, ay, az), gyro=(gx, gy, gz), timestamp_us=ts)


def inference_from_packet(p: DevicePacket) -> tuple[int, InferenceOutcome]:
    if p.kind != KIND_INFERENCE:
        raise OutOfRange(f"packet kind {p.kind} carries no inference")
    ts, cls = struct.unpack_from("<QB", p.payload)
    top3 = []
    for i in range(3):
        c, prob = struct.unpack_from("<Bf", p.payload, 9 + 5 * i)
        top3.append((c, prob))
    return ts, InferenceOutcome(class_id=cls, top3=tuple(top3))


def encode_packet(p: DevicePacket) -> bytes:
    body = _HEAD.pack(p.kind, p.seq) + p.payload
    return SYNC + body + struct.pack("<H", crc16_ccitt(body))


def decode_packet(stream: bytes, start: int = 0) -> tuple[DevicePacket, int]:
    """Decode the first packet at or after `start`.

    Returns (packet, consumed) where consumed counts bytes from `start`
    through the end of the packet, including any skipped garbage.
    Raises Truncated when more bytes are needed, CrcMismatch (with
    .resume_at set) when a framed packet fails its checksum.
    """
    idx = stream.find(SYNC, start)
    if idx < 0:
        raise Truncated("no sync marker in stream")
    head_end = idx + 2 + _HEAD.size
    if head_end > len(stream):
        raise Truncated("header incomplete")
    kind, seq = _HEAD.unpack(stream[idx + 2:head_end])
    if kind not in PAYLOAD_LEN:
        err = CrcMismatch(f"unknown kind {kind} after sync at {idx}")
        err.resume_at = idx + 2
        raise err
    end = head_end + PAYLOAD_LEN[kind] + 2
    if end > len(stream):
        raise Truncated(f"packet needs {end - len(stream)} more bytes")
    body = stream[idx + 2:end - 2]
    (stored,) = struct.unpack("<H", stream[end - 2:end])
    actual = crc16_ccitt(body)
    if stored != actual:
        err = CrcMismatch(f"crc {stored:#06x} != {actual:#06x} at offset {idx}")
        err.resume_at = idx + 2
        raise err
    packet = DevicePacket(kind=kind, seq=seq, payload=stream[head_end:end - 2])
    return packet, end - start


class PacketDecoder:
    """Incremental decoder; chunking of the input never changes the output."""

    def __init__(self):
        self._buf = bytearray()
        self.crc_errors = 0

    def feed(self, data: bytes) -> list[DevicePacket]:
        self._buf.extend(data)
        out = []
        pos = 0
        while True:
            try:
                packet, consumed = decode_packet(bytes(self._buf), pos)
            except Truncated:
                break
            except CrcMismatch as e:
                self.crc_errors += 1
                pos = e.resume_at
                continue
            out.append(packet)
            pos += consumed
        # drop fully handled bytes but keep a possible partial packet;
        # nothing before the next sync candidate can ever decode
        tail = bytes(self._buf[pos:])
        keep = tail.find(SYNC)
        if keep < 0:
            keep = len(tail) - 1 if tail.endswith(SYNC[:1]) else len(tail)
        del self._buf[:pos + keep]
        return out
