"""Rule-based mapping from material descriptors to simulator parameters.

A material request resolves in two stages: match a named class from the
shipped registry (base parameters plus canonical 1..10 descriptor
scores), then nudge each parameter by the score difference between the
target and the base. Stretching and bending stiffness move on a log10
scale, density and thickness linearly.

Two update forms ship. The default IDENTITY_PRESERVING form,
log p = (1 + alpha*delta) * log p_base (linear parameters:
p = (1 + alpha*delta) * p_base), returns the base exactly at zero
delta. The LITERAL form drops the leading 1 and is kept for
comparison; at zero delta it collapses stiffnesses to 1 and linear
parameters to 0, which is rejected as NONPOSITIVE_RESULT.

Descriptor-to-parameter routing is also configurable: PROSE_PAIRING
(default) sends smooth to bendE and light to density, the physically
natural reading; EQUATION_PAIRING swaps the two.
"""

from __future__ import annotations

import dataclasses
import functools
import json
import math
from pathlib import Path

from .errors import MaterialError

__all__ = [
    "AlphaCoeffs",
    "DescriptorScores",
    "EQUATION_PAIRING",
    "IDENTITY_PRESERVING",
    "LITERAL",
    "MaterialParams",
    "PROSE_PAIRING",
    "lookup_base",
    "map_material",
    "map_scores",
    "material_names",
]

_MATERIALS_PATH = Path(__file__).parent / "data" / "materials.json"

IDENTITY_PRESERVING = "IDENTITY_PRESERVING"
LITERAL = "LITERAL"
PROSE_PAIRING = "prose"
EQUATION_PAIRING = "equations"


@dataclasses.dataclass(frozen=True)
class MaterialParams:
    """Simulator cloth parameters; thickness is in meters."""

    membE: float
    bendE: float
    density: float
    thickness: float

    def __post_init__(self):
        for name in ("membE", "bendE", "density", "thickness"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value}")

    def to_dict(self) -> dict:
        return {"membE": self.membE, "bendE": self.bendE,
                "density": self.density, "thickness": self.thickness}


@dataclasses.dataclass(frozen=True)
class DescriptorScores:
    """High-level material feel on 1..10 integer scales."""

    soft: int
    light: int
    smooth: int
    thickness_score: int

    def __post_init__(self):
        for name in ("soft", "light", "smooth", "thickness_score"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            if not 1 <= value <= 10:
                raise ValueError(f"{name} must be in 1..10, got {value}")

    def to_dict(self) -> dict:
        return {"soft": self.soft, "light": self.light,
                "smooth": self.smooth, "thickness": self.thickness_score}

    @classmethod
    def from_dict(cls, d: dict) -> "DescriptorScores":
        return cls(soft=d["soft"], light=d["light"], smooth=d["smooth"],
                   thickness_score=d.get("thickness", d.get("thickness_score")))


@dataclasses.dataclass(frozen=True)
class AlphaCoeffs:
    """Per-parameter step sizes for score differences."""

    alpha_m: float = 0.1
    alpha_b: float = 0.1
    alpha_d: float = 0.1
    alpha_t: float = 0.1

    def __post_init__(self):
        for name in ("alpha_m", "alpha_b", "alpha_d", "alpha_t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@functools.lru_cache(maxsize=1)
def _registry() -> dict:
    doc = json.loads(_MATERIALS_PATH.read_text())
    out = {}
    for name, row in doc.items():
        out[name] = (MaterialParams(**row["params"]),
                     DescriptorScores.from_dict(row["scores"]))
    return out


def material_names() -> list[str]:
    return sorted(_registry())


def lookup_base(name: str) -> tuple[MaterialParams, DescriptorScores]:
    """Base parameters and canonical scores for a material class."""
    key = name.strip().lower()
    row = _registry().get(key)
    if row is None:
        raise MaterialError(
            f"unknown material {name!r}; known: {', '.join(material_names())}",
            code="UNKNOWN_MATERIAL")
    return row


def _scaled(base_value: float, factor: float, log_form: bool) -> float:
    # factor 1.0 must return the base bit-for-bit, not via exp(log(x))
    if factor == 1.0:
        return base_value
    if log_form:
        return 10.0 ** (factor * math.log10(base_value))
    return factor * base_value


def map_scores(base: MaterialParams, base_scores: DescriptorScores,
               target_scores: DescriptorScores, a: AlphaCoeffs = AlphaCoeffs(),
               mode: str = IDENTITY_PRESERVING,
               pairing: str = PROSE_PAIRING) -> MaterialParams:
    """Adjust base parameters by descriptor score differences."""
    if mode not in (IDENTITY_PRESERVING, LITERAL):
        raise ValueError(f"unknown mode {mode!r}")
    if pairing not in (PROSE_PAIRING, EQUATION_PAIRING):
        raise ValueError(f"unknown pairing {pairing!r}")

    d_soft = target_scores.soft - base_scores.soft
    d_light = target_scores.light - base_scores.light
    d_smooth = target_scores.smooth - base_scores.smooth
    d_thick = target_scores.thickness_score - base_scores.thickness_score
    if pairing == PROSE_PAIRING:
        d_bend, d_density = d_smooth, d_light
    else:
        d_bend, d_density = d_light, d_smooth

    offset = 1.0 if mode == IDENTITY_PRESERVING else 0.0
    raw = {
        "membE": _scaled(base.membE, offset + a.alpha_m * d_soft, log_form=True),
        "bendE": _scaled(base.bendE, offset + a.alpha_b * d_bend, log_form=True),
        "density": _scaled(base.density, offset + a.alpha_d * d_density, log_form=False),
        "thickness": _scaled(base.thickness, offset + a.alpha_t * d_thick, log_form=False),
    }
    bad = [name for name, value in raw.items() if not (value > 0 and math.isfinite(value))]
    if bad:
        raise MaterialError(
            f"mapping produced non-positive {', '.join(bad)} "
            f"(mode={mode}, deltas soft={d_soft} bend={d_bend} "
            f"density={d_density} thickness={d_thick})",
            code="NONPOSITIVE_RESULT")
    return MaterialParams(**raw)


def map_material(name: str, target_scores: DescriptorScores | None,
                 a: AlphaCoeffs = AlphaCoeffs(),
                 mode: str = IDENTITY_PRESERVING,
                 pairing: str = PROSE_PAIRING) -> tuple[MaterialParams, DescriptorScores]:
    """Lookup plus mapping; returns (params, the base's canonical scores).

    With target_scores None the base parameters pass through untouched.
    """
    base, base_scores = lookup_base(name)
    if target_scores is None:
        return base, base_scores
    return map_scores(base, base_scores, target_scores, a, mode, pairing), base_scores
