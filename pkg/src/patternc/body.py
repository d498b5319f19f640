"""Body measurements used to denormalize garment parameters.

All lengths are centimeters. The default model is an average adult
figure; any measurement can be overridden from a JSON file. Vertical
landmark lines (shoulder/waist/hip/knee height) are derived as fixed
fractions of total height and are used only for 3D placement hints, not
for panel geometry itself.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

# landmark heights as fractions of body height, floor = 0
SHOULDER_LINE_FRAC = 0.82
WAIST_LINE_FRAC = 0.615
HIP_LINE_FRAC = 0.50
KNEE_LINE_FRAC = 0.28


@dataclasses.dataclass(frozen=True)
class BodyModel:
    """Named measurements (cm) that field anchors may reference."""

    height: float = 170.0
    waist: float = 74.0
    hips: float = 96.0
    bust: float = 90.0
    shoulder_width: float = 38.0
    arm_length: float = 55.0
    leg_length: float = 80.0
    torso_length: float = 44.0
    neck: float = 37.0
    arm_circumference: float = 28.0

    def measurement(self, name: str) -> float:
        if not hasattr(self, name):
            raise KeyError(f"unknown body measurement: {name!r}")
        return float(getattr(self, name))

    # vertical landmarks (cm above floor)
    @property
    def shoulder_line(self) -> float:
        return SHOULDER_LINE_FRAC * self.height

    @property
    def waist_line(self) -> float:
        return WAIST_LINE_FRAC * self.height

    @property
    def hip_line(self) -> float:
        return HIP_LINE_FRAC * self.height

    @property
    def knee_line(self) -> float:
        return KNEE_LINE_FRAC * self.height

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "BodyModel":
        known = {f.name for f in dataclasses.fields(cls)}
        bad = sorted(set(d) - known)
        if bad:
            raise KeyError(f"unknown body measurements: {bad}")
        vals = {k: float(v) for k, v in d.items()}
        for k, v in vals.items():
            if v <= 0:
                raise ValueError(f"body measurement {k} must be positive, got {v}")
        return cls(**vals)

    @classmethod
    def from_json(cls, path: str | Path) -> "BodyModel":
        return cls.from_dict(json.loads(Path(path).read_text()))


DEFAULT_BODY = BodyModel()
