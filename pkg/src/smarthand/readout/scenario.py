"""Line-oriented scenario files describing press maps and circuit parameters.

    # comment
    law <r_open_ohm> <r_min_ohm> <f0_newton>
    adc <r_ref_ohm>
    press <row> <col> <force_newton>

Missing `law`/`adc` lines fall back to the model defaults.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..errors import FileFormatError
from .model import AdcModel, FsrLaw, ResistorGrid, frame_from_press_map


@dataclass(frozen=True)
class Scenario:
    law: FsrLaw = field(default_factory=FsrLaw)
    adc: AdcModel = field(default_factory=AdcModel)
    presses: tuple[tuple[int, int, float], ...] = ()

    def build_grid(self) -> ResistorGrid:
        return frame_from_press_map(list(self.presses), self.law)


def parse_scenario(text: str) -> Scenario:
    law = FsrLaw()
    adc = AdcModel()
    presses: list[tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "law" and len(tokens) == 4:
                law = FsrLaw(r_open_ohm=float(tokens[1]), r_min_ohm=float(tokens[2]),
                             f0_newton=float(tokens[3]))
            elif tokens[0] == "adc" and len(tokens) == 2:
                adc = AdcModel(r_ref_ohm=float(tokens[1]))
            elif tokens[0] == "press" and len(tokens) == 4:
                presses.append((int(tokens[1]), int(tokens[2]), float(tokens[3])))
            else:
                raise FileFormatError(f"scenario line {lineno}: unrecognized {line!r}")
        except ValueError as e:
            raise FileFormatError(f"scenario line {lineno}: {e}") from e
    return Scenario(law=law, adc=adc, presses=tuple(presses))


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text())
