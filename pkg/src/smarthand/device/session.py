"""Scripted device sessions producing a deterministic transcript."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core.frames import Recording, TactileFrame
from ..errors import OutOfRange
from . import protocol
from .machine import Device, DeviceState
from .protocol import DevicePacket, KIND_DUMP


@dataclass(frozen=True)
class TranscriptEntry:
    t_us: int
    event: str                  # "cmd" | "state" | "packet"
    detail: str
    packet: DevicePacket | None = None


@dataclass
class Transcript:
    entries: list[TranscriptEntry] = field(default_factory=list)

    @property
    def packets(self) -> list[DevicePacket]:
        return [e.packet for e in self.entries if e.packet is not None]

    def packets_of_kind(self, kind: int) -> list[DevicePacket]:
        return [p for p in self.packets if p.kind == kind]

    @property
    def final_state(self) -> str:
        states = [e.detail for e in self.entries if e.event == "state"]
        return states[-1] if states else DeviceState.IDLE.value

    def wire_bytes(self) -> bytes:
        return b"".join(protocol.encode_packet(p) for p in self.packets)


def run_session(device: Device, script: list[tuple[int, int]], duration_us: int) -> Transcript:
    """Drive the device with (t_us, command_byte) events until duration_us.

    Commands are applied before any timer expiry sharing their timestamp;
    emissions happen at t_start + k/rate for k = 0, 1, ..., so a span of
    one second at 10 Hz yields exactly 10 packets.
    """
    times = [t for t, _ in script]
    if any(b < a for a, b in zip(times, times[1:])):
        raise OutOfRange("script timestamps must be monotone")
    if any(t < 0 or t > duration_us for t in times):
        raise OutOfRange("script timestamps must lie within the session")

    transcript = Transcript()

    def note_packets(t_us: int, packets: list[DevicePacket]):
        for p in packets:
            transcript.entries.append(
                TranscriptEntry(t_us=t_us, event="packet", detail=f"kind={p.kind}", packet=p))

    for t_us, byte in script:
        prior = device.state
        note_packets(t_us, device.tick_until(t_us))
        transcript.entries.append(
            TranscriptEntry(t_us=t_us, event="cmd", detail=f"0x{byte:02x}"))
        note_packets(t_us, device.command(byte, t_us))
        if device.state is not prior:
            transcript.entries.append(
                TranscriptEntry(t_us=t_us, event="state", detail=device.state.value))
    prior = device.state
    note_packets(duration_us, device.tick_until(duration_us))
    if device.state is not prior:
        transcript.entries.append(
            TranscriptEntry(t_us=duration_us, event="state", detail=device.state.value))
    return transcript


def recording_from_dump(transcript: Transcript, label_id: int = 0, session_id: int = 0,
                        rate_hz: int = 100) -> Recording:
    """Rebuild the collected recording from a transcript's dump packets."""
    frames: list[TactileFrame] = []
    for p in transcript.packets_of_kind(KIND_DUMP):
        frames.append(protocol.frame_from_packet(p))
    imu = [protocol.imu_from_packet(p)
           for p in transcript.packets_of_kind(protocol.KIND_IMU)]
    return Recording(label_id=label_id, session_id=session_id, rate_hz=rate_hz,
                     frames=tuple(frames), imu=tuple(imu))
