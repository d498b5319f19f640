"""Declarative field registry for the garment configuration language.

Every leaf parameter a config may carry is described here once: its
dotted path, kind, valid range, the anchor that turns a normalized value
back into centimeters/degrees, and an applicability predicate over the
``meta`` block. Pruning, validation, normalization, the 76-float codec
and the schema endpoint are all driven from this table, so adding a
field in one place propagates everywhere.

Normalized floats live in [0, 1] and map affinely onto [lo, hi] in
anchor units. Anchors are either absolute ("cm", "deg") or a multiple
of a body measurement ("body:<name>"), e.g. raw pants length =
(lo + x * (hi - lo)) * body.leg_length.
"""

from __future__ import annotations

import dataclasses
import json
import os
from pathlib import Path

from .body import BodyModel

REGISTRY_VERSION = "patternc-registry/1"
FLOAT_SLOTS = 76
REGISTRY_ENV_VAR = "PATTERNC_REGISTRY"

# field kinds
ENUM = "ENUM"
NORMALIZED_FLOAT = "NORMALIZED_FLOAT"
RAW_INT = "RAW_INT"
FLAG = "FLAG"

# ---------------------------------------------------------------------------
# applicability predicates: tiny JSON-expressible language over meta keys

ALWAYS = {"always": True}


def _eq(key: str, value: str) -> dict:
    return {"eq": [key, value]}


def _ne(key: str, value: str) -> dict:
    return {"ne": [key, value]}


def _and(*preds: dict) -> dict:
    return {"and": list(preds)}


def eval_predicate(pred: dict, meta: dict) -> bool:
    """Evaluate an applicability predicate against a meta block.

    Missing meta keys evaluate as "None" (the disabled state).
    """
    if "always" in pred:
        return bool(pred["always"])
    if "eq" in pred:
        key, value = pred["eq"]
        return str(meta.get(key, "None")) == value
    if "ne" in pred:
        key, value = pred["ne"]
        return str(meta.get(key, "None")) != value
    if "and" in pred:
        return all(eval_predicate(p, meta) for p in pred["and"])
    if "or" in pred:
        return any(eval_predicate(p, meta) for p in pred["or"])
    raise ValueError(f"bad predicate: {pred!r}")


_UPPER = _ne("upper", "None")
_WB = _and(_ne("wb", "None"), _ne("bottom", "None"))
_PANTS = _eq("bottom", "Pants")
_PENCIL = _eq("bottom", "PencilSkirt")
_FLARED = _eq("bottom", "FlaredSkirt")
_WHOLE = _and(_ne("upper", "None"), _ne("bottom", "None"))


@dataclasses.dataclass(frozen=True)
class FieldDescriptor:
    """One leaf parameter.

    vector_slot is None except for NORMALIZED_FLOAT fields, which get
    consecutive slots 0..75 in registry order.
    """

    path: str
    kind: str
    default: object
    applicable: dict
    doc: str = ""
    enum_values: tuple | None = None  # ENUM
    lo: float | None = None  # NORMALIZED_FLOAT / RAW_INT bounds
    hi: float | None = None
    anchor: tuple | None = None  # ("cm"|"deg"|"body", ref)
    vector_slot: int | None = None

    def __post_init__(self):
        if self.kind == ENUM:
            assert self.enum_values, self.path
            assert self.default in self.enum_values, self.path
        elif self.kind == NORMALIZED_FLOAT:
            assert self.lo is not None and self.hi is not None and self.lo < self.hi, self.path
            assert self.anchor is not None, self.path
            assert 0.0 <= float(self.default) <= 1.0, self.path
        elif self.kind == RAW_INT:
            assert self.lo is not None and self.hi is not None and self.lo < self.hi, self.path
            assert self.lo <= self.default <= self.hi, self.path
        elif self.kind == FLAG:
            assert isinstance(self.default, bool), self.path
        else:
            raise ValueError(f"bad field kind {self.kind!r} at {self.path}")

    def denormalize(self, x: float, body: BodyModel) -> float:
        """Map x in [0,1] to raw anchor units (cm or deg)."""
        raw = self.lo + float(x) * (self.hi - self.lo)
        akind, ref = self.anchor
        if akind == "body":
            return raw * body.measurement(ref)
        return raw

    def normalize_raw(self, value: float, body: BodyModel) -> float:
        """Inverse of denormalize; value is in anchor units."""
        akind, ref = self.anchor
        v = float(value)
        if akind == "body":
            v = v / body.measurement(ref)
        return (v - self.lo) / (self.hi - self.lo)


def _fields() -> list[FieldDescriptor]:
    F = FieldDescriptor
    cm = ("cm", None)
    deg = ("deg", None)

    def body(name):
        return ("body", name)

    return [
        # --- meta -----------------------------------------------------
        F("meta.upper", ENUM, "None", ALWAYS, "upper-body garment family",
          enum_values=("None", "Shirt", "FittedShirt")),
        F("meta.wb", ENUM, "None", ALWAYS, "waistband style",
          enum_values=("None", "StraightWB", "FittedWB")),
        F("meta.bottom", ENUM, "None", ALWAYS, "lower-body garment family",
          enum_values=("None", "Pants", "PencilSkirt", "FlaredSkirt")),
        # --- shirt (bodice) -------------------------------------------
        F("shirt.length", NORMALIZED_FLOAT, 0.5, _UPPER,
          "bodice length below the shoulder line, torso-length multiple",
          lo=0.4, hi=1.6, anchor=body("torso_length")),
        F("shirt.width", NORMALIZED_FLOAT, 0.35, _UPPER,
          "bust-line circumference ease, bust multiple",
          lo=1.05, hi=1.8, anchor=body("bust")),
        F("shirt.flare", NORMALIZED_FLOAT, 0.3, _UPPER,
          "hem circumference, bust multiple",
          lo=0.9, hi=1.9, anchor=body("bust")),
        F("shirt.shoulder_ease", NORMALIZED_FLOAT, 0.2, _UPPER,
          "shoulder span, shoulder-width multiple",
          lo=1.0, hi=1.3, anchor=body("shoulder_width")),
        F("shirt.armhole_depth", NORMALIZED_FLOAT, 0.45, _UPPER,
          "armhole depth below shoulder, torso-length multiple",
          lo=0.25, hi=0.5, anchor=body("torso_length")),
        F("shirt.armhole_width", NORMALIZED_FLOAT, 0.4, _UPPER,
          "horizontal bite of the armhole curve",
          lo=1.0, hi=8.0, anchor=cm),
        F("shirt.shoulder_slope", NORMALIZED_FLOAT, 0.4, _UPPER,
          "shoulder seam slope from horizontal",
          lo=0.0, hi=25.0, anchor=deg),
        F("shirt.hem_curve", NORMALIZED_FLOAT, 0.2, _UPPER,
          "hem curve control-point depth",
          lo=0.0, hi=6.0, anchor=cm),
        F("shirt.front_length_diff", NORMALIZED_FLOAT, 0.5, _UPPER,
          "front hem drop relative to back (signed)",
          lo=-6.0, hi=6.0, anchor=cm),
        F("shirt.open_gap", NORMALIZED_FLOAT, 0.3, _UPPER,
          "center-front gap width when open_front is set",
          lo=0.0, hi=10.0, anchor=cm),
        F("shirt.side_curve", NORMALIZED_FLOAT, 0.2, _UPPER,
          "waist shaping bow of the side seams",
          lo=0.0, hi=5.0, anchor=cm),
        F("shirt.asym_tilt", NORMALIZED_FLOAT, 0.35, _UPPER,
          "hem tilt when asymmetric is set",
          lo=0.0, hi=12.0, anchor=deg),
        F("shirt.open_front", FLAG, False, _UPPER,
          "split the front bodice at center front (jacket)"),
        F("shirt.asymmetric", FLAG, False, _UPPER,
          "tilt the hem by asym_tilt"),
        # --- collar ----------------------------------------------------
        F("collar.style", ENUM, "crew", _UPPER, "neckline style",
          enum_values=("crew", "v", "turtle", "collarless")),
        F("collar.width", NORMALIZED_FLOAT, 0.45, _UPPER,
          "neck opening width, neck-girth multiple",
          lo=0.28, hi=0.58, anchor=body("neck")),
        F("collar.depth_front", NORMALIZED_FLOAT, 0.35, _UPPER,
          "front neckline drop below the shoulder line",
          lo=2.0, hi=16.0, anchor=cm),
        F("collar.depth_back", NORMALIZED_FLOAT, 0.25, _UPPER,
          "back neckline drop",
          lo=0.5, hi=6.0, anchor=cm),
        F("collar.band_height", NORMALIZED_FLOAT, 0.4, _UPPER,
          "turtle band height",
          lo=1.5, hi=8.0, anchor=cm),
        F("collar.band_ease", NORMALIZED_FLOAT, 0.3, _UPPER,
          "turtle band length ease, neck multiple",
          lo=1.0, hi=1.35, anchor=body("neck")),
        F("collar.curve", NORMALIZED_FLOAT, 0.5, _UPPER,
          "neckline curve shaping depth",
          lo=0.0, hi=5.0, anchor=cm),
        # --- sleeve ----------------------------------------------------
        F("sleeve.sleeveless", FLAG, False, _UPPER,
          "omit sleeve panels, keep the armhole interfaces"),
        F("sleeve.asymmetric", FLAG, False, _UPPER,
          "shorten the left sleeve by asym_diff"),
        F("sleeve.length", NORMALIZED_FLOAT, 0.5, _UPPER,
          "sleeve length along the arm, arm-length multiple",
          lo=0.15, hi=1.05, anchor=body("arm_length")),
        F("sleeve.connecting_width", NORMALIZED_FLOAT, 0.3, _UPPER,
          "bicep-line width, arm-circumference multiple (standalone builds)",
          lo=1.1, hi=2.2, anchor=body("arm_circumference")),
        F("sleeve.end_width", NORMALIZED_FLOAT, 0.3, _UPPER,
          "opening width, arm-circumference multiple",
          lo=0.7, hi=2.0, anchor=body("arm_circumference")),
        F("sleeve.angle", NORMALIZED_FLOAT, 0.5, _UPPER,
          "sleeve slant from vertical (placement hint)",
          lo=5.0, hi=60.0, anchor=deg),
        F("sleeve.cap_height", NORMALIZED_FLOAT, 0.4, _UPPER,
          "sleeve cap rise above the bicep line",
          lo=3.0, hi=14.0, anchor=cm),
        F("sleeve.underarm_curve", NORMALIZED_FLOAT, 0.3, _UPPER,
          "underarm shaping bow",
          lo=0.0, hi=5.0, anchor=cm),
        F("sleeve.taper_start", NORMALIZED_FLOAT, 0.5, _UPPER,
          "where tapering begins, fraction of arm length",
          lo=0.25, hi=0.85, anchor=body("arm_length")),
        F("sleeve.mid_width", NORMALIZED_FLOAT, 0.35, _UPPER,
          "width at the taper start, arm-circumference multiple",
          lo=0.75, hi=1.9, anchor=body("arm_circumference")),
        F("sleeve.opening_dip", NORMALIZED_FLOAT, 0.2, _UPPER,
          "hem curve dip at the opening",
          lo=0.0, hi=6.0, anchor=cm),
        F("sleeve.puff", NORMALIZED_FLOAT, 0.15, _UPPER,
          "extra cap fullness",
          lo=0.0, hi=8.0, anchor=cm),
        F("sleeve.wrist_curve", NORMALIZED_FLOAT, 0.2, _UPPER,
          "wrist-edge curve depth",
          lo=0.0, hi=3.0, anchor=cm),
        F("sleeve.shoulder_ease", NORMALIZED_FLOAT, 0.25, _UPPER,
          "cap length ease folded into the cap curve",
          lo=0.0, hi=4.0, anchor=cm),
        F("sleeve.underarm_drop", NORMALIZED_FLOAT, 0.3, _UPPER,
          "underarm point drop below the bicep line",
          lo=0.0, hi=6.0, anchor=cm),
        F("sleeve.asym_diff", NORMALIZED_FLOAT, 0.3, _UPPER,
          "left-sleeve shortening when asymmetric, arm-length multiple",
          lo=0.0, hi=0.35, anchor=body("arm_length")),
        F("sleeve.cuff.type", ENUM, "None", _UPPER, "sleeve cuff style",
          enum_values=("None", "Band", "Ruffle")),
        F("sleeve.cuff.height", NORMALIZED_FLOAT, 0.35, _UPPER,
          "cuff band height",
          lo=2.0, hi=12.0, anchor=cm),
        F("sleeve.cuff.bottom_width", NORMALIZED_FLOAT, 0.3, _UPPER,
          "cuff bottom width, arm-circumference multiple",
          lo=0.6, hi=1.9, anchor=body("arm_circumference")),
        F("sleeve.cuff.ruffle_depth", NORMALIZED_FLOAT, 0.4, _UPPER,
          "ruffle wave depth (Ruffle cuffs)",
          lo=0.5, hi=4.0, anchor=cm),
        F("sleeve.cuff.skew", NORMALIZED_FLOAT, 0.2, _UPPER,
          "cuff bottom skew",
          lo=0.0, hi=15.0, anchor=deg),
        F("sleeve.cuff.curve", NORMALIZED_FLOAT, 0.2, _UPPER,
          "cuff bottom curve depth",
          lo=0.0, hi=3.0, anchor=cm),
        F("sleeve.cuff.flare_ext", NORMALIZED_FLOAT, 0.25, _UPPER,
          "cuff side flare extension",
          lo=0.0, hi=5.0, anchor=cm),
        # --- waistband ---------------------------------------------------
        F("waistband.waist", NORMALIZED_FLOAT, 0.5, _WB,
          "band circumference, waist multiple",
          lo=0.9, hi=1.4, anchor=body("waist")),
        F("waistband.width", NORMALIZED_FLOAT, 0.4, _WB,
          "band height, torso-length multiple",
          lo=0.05, hi=0.2, anchor=body("torso_length")),
        F("waistband.height", RAW_INT, 5, _WB,
          "fold-over allowance in half-centimeter steps, added to the band height",
          lo=0, hi=10),
        F("waistband.rise", NORMALIZED_FLOAT, 0.5, _WB,
          "band bottom offset from the natural waist line (signed; 0.5 is neutral)",
          lo=-6.0, hi=6.0, anchor=cm),
        # --- pants -------------------------------------------------------
        F("pants.length", NORMALIZED_FLOAT, 0.8, _PANTS,
          "leg length below the crotch-line origin, leg-length multiple",
          lo=0.2, hi=1.05, anchor=body("leg_length")),
        F("pants.width", NORMALIZED_FLOAT, 0.35, _PANTS,
          "hip-line circumference ease, hips multiple",
          lo=1.0, hi=1.6, anchor=body("hips")),
        F("pants.flare", NORMALIZED_FLOAT, 0.5, _PANTS,
          "full ankle circumference, hips multiple",
          lo=0.1, hi=0.9, anchor=body("hips")),
        F("pants.rise", NORMALIZED_FLOAT, 0.8, _PANTS,
          "waist height above the hip line, torso-length multiple",
          lo=0.0, hi=0.2, anchor=body("torso_length")),
        F("pants.knee_width", NORMALIZED_FLOAT, 0.5, _PANTS,
          "full knee circumference, hips multiple",
          lo=0.2, hi=0.7, anchor=body("hips")),
        F("pants.crotch_curve", NORMALIZED_FLOAT, 0.4, _PANTS,
          "crotch curve control depth",
          lo=2.0, hi=10.0, anchor=cm),
        F("pants.back_rise_extra", NORMALIZED_FLOAT, 0.4, _PANTS,
          "extra back crotch-curve depth",
          lo=0.0, hi=6.0, anchor=cm),
        F("pants.waist_dip", NORMALIZED_FLOAT, 0.3, _PANTS,
          "waist edge dip at center",
          lo=0.0, hi=4.0, anchor=cm),
        F("pants.hem_curve", NORMALIZED_FLOAT, 0.2, _PANTS,
          "hem curve depth",
          lo=0.0, hi=4.0, anchor=cm),
        F("pants.cuff.type", ENUM, "None", _PANTS, "pant cuff style",
          enum_values=("None", "Band", "Ruffle")),
        F("pants.cuff.height", NORMALIZED_FLOAT, 0.35, _PANTS,
          "cuff band height",
          lo=2.0, hi=14.0, anchor=cm),
        F("pants.cuff.bottom_width", NORMALIZED_FLOAT, 0.4, _PANTS,
          "cuff bottom width per leg, hips multiple",
          lo=0.12, hi=0.5, anchor=body("hips")),
        F("pants.cuff.ruffle_depth", NORMALIZED_FLOAT, 0.4, _PANTS,
          "ruffle wave depth (Ruffle cuffs)",
          lo=0.5, hi=4.0, anchor=cm),
        F("pants.cuff.skew", NORMALIZED_FLOAT, 0.2, _PANTS,
          "cuff bottom skew",
          lo=0.0, hi=12.0, anchor=deg),
        F("pants.cuff.curve", NORMALIZED_FLOAT, 0.2, _PANTS,
          "cuff bottom curve depth",
          lo=0.0, hi=3.0, anchor=cm),
        # --- pencil skirt --------------------------------------------------
        F("pencil_skirt.length", NORMALIZED_FLOAT, 0.4, _PENCIL,
          "skirt length from the waist seam",
          lo=30.0, hi=105.0, anchor=cm),
        F("pencil_skirt.rise", NORMALIZED_FLOAT, 0.5, _PENCIL,
          "waist seam height above the hip line, torso-length multiple",
          lo=0.0, hi=0.3, anchor=body("torso_length")),
        F("pencil_skirt.flare", NORMALIZED_FLOAT, 0.5, _PENCIL,
          "hem circumference, hips multiple",
          lo=0.7, hi=1.1, anchor=body("hips")),
        F("pencil_skirt.low_angle", RAW_INT, 5, _PENCIL,
          "hem tilt in whole degrees",
          lo=0, hi=15),
        F("pencil_skirt.front_slit", NORMALIZED_FLOAT, 0.0, _PENCIL,
          "front center slit depth",
          lo=0.0, hi=35.0, anchor=cm),
        F("pencil_skirt.back_slit", NORMALIZED_FLOAT, 0.0, _PENCIL,
          "back center slit depth",
          lo=0.0, hi=35.0, anchor=cm),
        F("pencil_skirt.left_slit", NORMALIZED_FLOAT, 0.0, _PENCIL,
          "left side slit depth",
          lo=0.0, hi=35.0, anchor=cm),
        F("pencil_skirt.right_slit", NORMALIZED_FLOAT, 0.0, _PENCIL,
          "right side slit depth",
          lo=0.0, hi=35.0, anchor=cm),
        F("pencil_skirt.style_side_cut", ENUM, "None", _PENCIL,
          "decorative side-seam profile",
          enum_values=("None", "Sun", "Wave")),
        F("pencil_skirt.hip_ease", NORMALIZED_FLOAT, 0.15, _PENCIL,
          "hip-line circumference ease, hips multiple",
          lo=1.0, hi=1.3, anchor=body("hips")),
        F("pencil_skirt.hem_curve", NORMALIZED_FLOAT, 0.2, _PENCIL,
          "hem curve depth",
          lo=0.0, hi=5.0, anchor=cm),
        F("pencil_skirt.dart_depth", NORMALIZED_FLOAT, 0.35, _PENCIL,
          "waist dart intake folded into the waist curve",
          lo=0.0, hi=8.0, anchor=cm),
        # --- flared skirt ---------------------------------------------------
        F("flared_skirt.length", NORMALIZED_FLOAT, 0.6, _FLARED,
          "skirt length from the waist seam, leg-length multiple",
          lo=0.2, hi=1.05, anchor=body("leg_length")),
        F("flared_skirt.flare", NORMALIZED_FLOAT, 0.5, _FLARED,
          "hem widening: hem = waist arc * (1 + flare)",
          lo=0.2, hi=2.5, anchor=body("waist")),
        F("flared_skirt.hem_curve", NORMALIZED_FLOAT, 0.3, _FLARED,
          "hem curve depth",
          lo=0.0, hi=8.0, anchor=cm),
        F("flared_skirt.tilt", NORMALIZED_FLOAT, 0.0, _FLARED,
          "hem tilt",
          lo=0.0, hi=12.0, anchor=deg),
        F("flared_skirt.waist_ease", NORMALIZED_FLOAT, 0.2, _FLARED,
          "waist seam ease, waist multiple",
          lo=1.0, hi=1.25, anchor=body("waist")),
        F("flared_skirt.rise", NORMALIZED_FLOAT, 0.5, _FLARED,
          "waist seam height above the hip line, height multiple",
          lo=0.0, hi=0.12, anchor=body("height")),
        # --- wholebody couplers ---------------------------------------------
        F("wholebody.waist_drop", NORMALIZED_FLOAT, 0.5, _WHOLE,
          "join-line shift from the natural waist; lengthens/shortens the bodice",
          lo=-8.0, hi=8.0, anchor=cm),
        F("wholebody.seam_ease", NORMALIZED_FLOAT, 0.25, _WHOLE,
          "bottom waist target as a multiple of the bodice hem arc",
          lo=0.95, hi=1.3, anchor=body("waist")),
        F("wholebody.balance", NORMALIZED_FLOAT, 0.5, _WHOLE,
          "arc length moved from the back join target to the front (signed)",
          lo=-5.0, hi=5.0, anchor=cm),
        F("wholebody.overlap", NORMALIZED_FLOAT, 0.3, _WHOLE,
          "curve depth boost on the bottom's waist edge at the join",
          lo=0.0, hi=6.0, anchor=cm),
        F("wholebody.rotation_spread", NORMALIZED_FLOAT, 0.3, _WHOLE,
          "placement rotation fan of the bottom panels",
          lo=0.0, hi=10.0, anchor=deg),
    ]


# sections checked for presence/applicability; tag -> (root path, predicate)
SECTIONS: dict[str, tuple[str, dict]] = {
    "meta": ("meta", ALWAYS),
    "shirt": ("shirt", _UPPER),
    "collar": ("collar", _UPPER),
    "sleeve": ("sleeve", _UPPER),
    "sleeve_cuff": ("sleeve.cuff", _UPPER),
    "waistband": ("waistband", _WB),
    "pants": ("pants", _PANTS),
    "pant_cuff": ("pants.cuff", _PANTS),
    "pencil_skirt": ("pencil_skirt", _PENCIL),
    "flared_skirt": ("flared_skirt", _FLARED),
    "wholebody": ("wholebody", _WHOLE),
}


class FieldRegistry:
    """Ordered collection of FieldDescriptors with slot bookkeeping."""

    def __init__(self, fields: list[FieldDescriptor], version: str = REGISTRY_VERSION):
        self.version = version
        entries = []
        slot = 0
        for f in fields:
            if f.kind == NORMALIZED_FLOAT:
                entries.append(dataclasses.replace(f, vector_slot=slot))
                slot += 1
            else:
                entries.append(dataclasses.replace(f, vector_slot=None))
        self.fields: tuple[FieldDescriptor, ...] = tuple(entries)
        self.by_path: dict[str, FieldDescriptor] = {f.path: f for f in self.fields}
        self.float_fields: tuple[FieldDescriptor, ...] = tuple(
            f for f in self.fields if f.kind == NORMALIZED_FLOAT
        )
        if len(self.by_path) != len(self.fields):
            raise ValueError("duplicate field paths in registry")
        if len(self.float_fields) != FLOAT_SLOTS:
            raise ValueError(
                f"registry must define exactly {FLOAT_SLOTS} float slots, "
                f"got {len(self.float_fields)}"
            )

    def field(self, path: str) -> FieldDescriptor:
        return self.by_path[path]

    def applicable_fields(self, meta: dict) -> list[FieldDescriptor]:
        return [f for f in self.fields if eval_predicate(f.applicable, meta)]

    def applicable_sections(self, meta: dict) -> list[str]:
        return [tag for tag, (_, pred) in SECTIONS.items() if eval_predicate(pred, meta)]

    def section_fields(self, root: str) -> list[FieldDescriptor]:
        """Fields directly inside a section root, nested cuffs excluded."""
        prefix = root + "."
        out = []
        for f in self.fields:
            if not f.path.startswith(prefix):
                continue
            rest = f.path[len(prefix):]
            if "." in rest:
                continue
            out.append(f)
        return out

    # --- serialization -------------------------------------------------
    def to_dict(self) -> dict:
        fields = []
        for f in self.fields:
            d = {"path": f.path, "kind": f.kind, "default": f.default,
                 "applicable": f.applicable, "doc": f.doc}
            if f.kind == ENUM:
                d["enum_values"] = list(f.enum_values)
            if f.lo is not None:
                d["lo"] = f.lo
                d["hi"] = f.hi
            if f.anchor is not None:
                d["anchor"] = {"kind": f.anchor[0], "ref": f.anchor[1]}
            if f.vector_slot is not None:
                d["vector_slot"] = f.vector_slot
            fields.append(d)
        return {"version": self.version, "float_slots": FLOAT_SLOTS, "fields": fields}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldRegistry":
        if d.get("version") != REGISTRY_VERSION:
            raise ValueError(f"unsupported registry version: {d.get('version')!r}")
        fields = []
        for fd in d["fields"]:
            anchor = None
            if "anchor" in fd:
                anchor = (fd["anchor"]["kind"], fd["anchor"]["ref"])
            fields.append(FieldDescriptor(
                path=fd["path"], kind=fd["kind"], default=fd["default"],
                applicable=fd["applicable"], doc=fd.get("doc", ""),
                enum_values=tuple(fd["enum_values"]) if "enum_values" in fd else None,
                lo=fd.get("lo"), hi=fd.get("hi"), anchor=anchor,
            ))
        reg = cls(fields, version=d["version"])
        # declared slots, if present, must match positional assignment
        for fd, f in zip(d["fields"], reg.fields):
            if "vector_slot" in fd and fd["vector_slot"] != f.vector_slot:
                raise ValueError(f"vector_slot mismatch at {f.path}")
        return reg

    @classmethod
    def from_json(cls, path: str | Path) -> "FieldRegistry":
        return cls.from_dict(json.loads(Path(path).read_text()))


def default_registry() -> FieldRegistry:
    return FieldRegistry(_fields())


def load_registry(path: str | Path | None = None) -> FieldRegistry:
    """Load a registry: explicit path, else $PATTERNC_REGISTRY, else built-in."""
    if path is None:
        path = os.environ.get(REGISTRY_ENV_VAR) or None
    if path is None:
        return default_registry()
    return FieldRegistry.from_json(path)
