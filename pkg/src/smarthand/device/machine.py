"""Deterministic tick-driven simulation of the device firmware.

The device is clocked by a virtual microsecond clock supplied by the
caller; nothing reads wall time. One configured active mode is entered
on 'r' and left on 'p' (or automatically when a collection completes),
mirroring a firmware whose button and serial command share semantics.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Protocol

from ..core.frames import ImuSample, Recording, TactileFrame
from ..errors import FrameSourceExhausted, OutOfRange
from . import protocol
from .protocol import DevicePacket, InferenceOutcome

CMD_START = 0x72    # 'r'
CMD_STOP = 0x70     # 'p'

SDRAM_FRAME_CAPACITY = 4096


class DeviceState(enum.Enum):
    IDLE = "idle"
    COLLECTING = "collecting"
    VISUALIZING = "visualizing"
    INFERRING = "inferring"


ACTIVE_STATES = (DeviceState.COLLECTING, DeviceState.VISUALIZING, DeviceState.INFERRING)


def handle_command(state: DeviceState, byte: int, configured_mode: DeviceState) -> DeviceState:
    """Pure transition function: 'r' starts the configured mode from idle,
    'p' stops any active mode, everything else is ignored."""
    if byte == CMD_START and state is DeviceState.IDLE:
        if configured_mode not in ACTIVE_STATES:
            raise OutOfRange(f"{configured_mode} is not an active mode")
        return configured_mode
    if byte == CMD_STOP and state in ACTIVE_STATES:
        return DeviceState.IDLE
    return state


@dataclass(frozen=True)
class TimerConfig:
    collect_hz: int = 100
    viz_hz: int = 10
    infer_hz: int = 8

    def __post_init__(self):
        for rate in (self.collect_hz, self.viz_hz, self.infer_hz):
            if rate <= 0:
                raise OutOfRange("timer rates must be positive")

    def period_us(self, state: DeviceState) -> int:
        rate = {
            DeviceState.COLLECTING: self.collect_hz,
            DeviceState.VISUALIZING: self.viz_hz,
            DeviceState.INFERRING: self.infer_hz,
        }[state]
        return round(1_000_000 / rate)


class SdramBuffer:
    """Bounded intermediate frame storage, capacity 4096 frames."""

    def __init__(self, capacity: int = SDRAM_FRAME_CAPACITY):
        self.capacity = capacity
        self._frames: list[TactileFrame] = []

    def append(self, frame: TactileFrame) -> None:
        if len(self._frames) >= self.capacity:
            raise OutOfRange("SDRAM buffer full")
        self._frames.append(frame)

    def drain(self) -> list[TactileFrame]:
        out, self._frames = self._frames, []
        return out

    @property
    def used(self) -> int:
        return len(self._frames)


class FrameSource(Protocol):
    def next_frame(self, now_us: int) -> TactileFrame: ...
    def next_imu(self, now_us: int) -> Optional[ImuSample]: ...


class GridScanSource:
    """Replays the readout of a static resistor grid; codes computed once."""

    def __init__(self, grid, adc, mode: str = "isolated"):
        from ..readout.scan import scan
        self._codes = scan(grid, adc, mode).values
        self._seq = 0

    def next_frame(self, now_us: int) -> TactileFrame:
        frame = TactileFrame(values=self._codes, seq=self._seq, timestamp_us=now_us)
        self._seq += 1
        return frame

    def next_imu(self, now_us: int) -> Optional[ImuSample]:
        return ImuSample(accel=(0, 0, 16384), gyro=(0, 0, 0), timestamp_us=now_us)


class RecordingSource:
    """Replays a stored recording frame by frame."""

    def __init__(self, recording: Recording):
        self._frames = list(recording.frames)
        self._imu = list(recording.imu)
        self._fpos = 0
        self._ipos = 0
        self._seq = 0

    def next_frame(self, now_us: int) -> TactileFrame:
        if self._fpos >= len(self._frames):
            raise FrameSourceExhausted(f"recording exhausted after {self._fpos} frames")
        src = self._frames[self._fpos]
        self._fpos += 1
        frame = TactileFrame(values=src.values, seq=self._seq, timestamp_us=now_us)
        self._seq += 1
        return frame

    def next_imu(self, now_us: int) -> Optional[ImuSample]:
        if self._ipos >= len(self._imu):
            return None
        src = self._imu[self._ipos]
        self._ipos += 1
        return ImuSample(accel=src.accel, gyro=src.gyro, timestamp_us=now_us)


@dataclass
class Device:
    """One simulated unit: state machine, timers, SDRAM and packet output."""

    source: FrameSource
    mode: DeviceState = DeviceState.COLLECTING
    timers: TimerConfig = field(default_factory=TimerConfig)
    collect_target: int = SDRAM_FRAME_CAPACITY
    infer_fn: Optional[Callable[[TactileFrame], InferenceOutcome]] = None

    def __post_init__(self):
        if self.mode not in ACTIVE_STATES:
            raise OutOfRange("device mode must be an active mode")
        # collections stop at the SDRAM limit no matter what was asked for
        self.collect_target = min(self.collect_target, SDRAM_FRAME_CAPACITY)
        if self.collect_target < 1:
            raise OutOfRange("collect_target must be >= 1")
        if self.mode is DeviceState.INFERRING and self.infer_fn is None:
            raise OutOfRange("inferring mode needs an infer_fn")
        self.state = DeviceState.IDLE
        self.sdram = SdramBuffer()
        self._wire_seq = 0
        self._next_due_us: Optional[int] = None

    # -- packet helpers -----------------------------------------------------

    def _next_seq(self) -> int:
        seq = self._wire_seq
        self._wire_seq += 1
        return seq

    # -- command handling -----------------------------------------------------

    def command(self, byte: int, now_us: int) -> list[DevicePacket]:
        """Apply one command byte; returns packets emitted as a consequence."""
        new_state = handle_command(self.state, byte, self.mode)
        out: list[DevicePacket] = []
        if new_state is self.state:
            return out
        out.append(protocol.ack_packet(self._next_seq(), byte))
        if new_state in ACTIVE_STATES:
            self._next_due_us = now_us
        else:
            # stopping a collection flushes whatever was buffered
            if self.state is DeviceState.COLLECTING and self.sdram.used:
                out.extend(self._dump())
            self._next_due_us = None
        self.state = new_state
        return out

    def _dump(self) -> list[DevicePacket]:
        return [protocol.frame_packet(self._next_seq(), f, dump=True)
                for f in self.sdram.drain()]

    # -- clocking -------------------------------------------------------------

    def tick_until(self, t_exclusive_us: int) -> list[DevicePacket]:
        """Run every timer expiry strictly before t_exclusive_us."""
        out: list[DevicePacket] = []
        while (self.state in ACTIVE_STATES
               and self._next_due_us is not None
               and self._next_due_us < t_exclusive_us):
            due = self._next_due_us
            self._next_due_us = due + self.timers.period_us(self.state)
            out.extend(self._expire(due))
        return out

    def tick(self, now_us: int) -> list[DevicePacket]:
        """Run every timer expiry due at or before now_us."""
        return self.tick_until(now_us + 1)

    def _expire(self, now_us: int) -> list[DevicePacket]:
        out: list[DevicePacket] = []
        if self.state is DeviceState.COLLECTING:
            frame = self.source.next_frame(now_us)
            self.sdram.append(frame)
            imu = self.source.next_imu(now_us)
            if imu is not None:
                # IMU data goes straight out; tactile frames stay buffered
                out.append(protocol.imu_packet(self._next_seq(), imu))
            if self.sdram.used >= self.collect_target:
                out.extend(self._dump())
                self.state = DeviceState.IDLE
                self._next_due_us = None
        elif self.state is DeviceState.VISUALIZING:
            frame = self.source.next_frame(now_us)
            out.append(protocol.frame_packet(self._next_seq(), frame))
        elif self.state is DeviceState.INFERRING:
            frame = self.source.next_frame(now_us)
            out.append(protocol.frame_packet(self._next_seq(), frame))
            outcome = self.infer_fn(frame)
            out.append(protocol.inference_packet(self._next_seq(), now_us, outcome))
        return out
