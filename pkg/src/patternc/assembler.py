"""Pattern assembly: build every applicable part, wire the stitch graph,
check validity, and serialize to versioned JSON and SVG.

Join rules are fixed: waistband bottom meets the lower garment's waist,
bodice side/shoulder seams close the torso, sleeve caps meet armholes,
cuffs meet their openings, and a bodice hem meets the waistband (or the
lower garment directly) on wholebody garments. Arc-length targets flow
down the chain so every stitched pair matches by construction.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math

from .body import BodyModel, DEFAULT_BODY
from .components import PanelSet, build_part
from .config import (
    GarmentConfig,
    OutfitConfig,
    ValidationReport,
    canonical_serialize,
    complete_config,
    prune_config,
    section_params,
    validate_config,
)
from .errors import CompositionError, PatterncError
from .geometry import Edge, Panel, check_panel, edge_length
from .registry import FieldRegistry, default_registry

PATTERN_VERSION = "patternc/1"

# stitched edges may differ by at most this relative length
STITCH_TOLERANCE = 0.02


@dataclasses.dataclass(frozen=True)
class Stitch:
    """A sewing correspondence between two panel edges.

    ``reversed`` records whether the edges run in opposite directions
    along the seam.
    """

    a: tuple  # (panel name, edge index)
    b: tuple
    reversed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", (self.a[0], int(self.a[1])))
        object.__setattr__(self, "b", (self.b[0], int(self.b[1])))
        if self.a == self.b:
            raise CompositionError("stitch joins an edge to itself")

    def to_dict(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "reversed": self.reversed}

    @classmethod
    def from_dict(cls, d: dict) -> "Stitch":
        return cls(a=(d["a"][0], int(d["a"][1])), b=(d["b"][0], int(d["b"][1])),
                   reversed=bool(d.get("reversed", False)))


@dataclasses.dataclass
class PatternValidity:
    ok: bool
    failures: list

    def to_dict(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


@dataclasses.dataclass
class Pattern:
    """Flat panels plus the stitch graph and placement hints."""

    panels: list
    stitches: list
    interfaces: dict = dataclasses.field(default_factory=dict)
    source_hash: str = ""
    body: BodyModel = DEFAULT_BODY

    def __post_init__(self):
        names = [p.name for p in self.panels]
        if len(set(names)) != len(names):
            raise CompositionError("duplicate panel names in pattern")

    def panel(self, name: str) -> Panel:
        for p in self.panels:
            if p.name == name:
                return p
        raise KeyError(name)

    def panel_names(self) -> list:
        return [p.name for p in self.panels]


# ---------------------------------------------------------------------------
# assembly


class _Assembly:
    """Accumulates panel sets and stitches while enforcing invariants."""

    def __init__(self):
        self.panels: list = []
        self.interfaces: dict = {}
        self.stitches: list = []
        self._used_edges: set = set()
        self._sets: dict = {}

    def add_part(self, tag: str, ps: PanelSet) -> None:
        existing = {p.name for p in self.panels}
        for p in ps.panels:
            if p.name in existing:
                raise CompositionError(f"panel name collision: {p.name}")
            self.panels.append(p)
        for key, refs in ps.interfaces.items():
            self.interfaces[f"{tag}.{key}"] = list(refs)
        self._sets[tag] = ps

    def refs(self, qualified: str) -> list:
        if qualified not in self.interfaces:
            raise CompositionError(f"required interface missing: {qualified}")
        return self.interfaces[qualified]

    def join(self, qual_a: str, qual_b: str) -> None:
        """Stitch two interfaces piece by piece."""
        self.join_refs(qual_a, self.refs(qual_a), qual_b, self.refs(qual_b))

    def join_refs(self, label_a: str, a: list, label_b: str, b: list) -> None:
        if len(a) != len(b):
            raise CompositionError(
                f"{label_a} has {len(a)} pieces but {label_b} has {len(b)}")
        for ra, rb in zip(a, b):
            self._stitch(ra, rb)

    def close(self, qualified: str) -> None:
        """Stitch a two-ref interface onto itself (seam closure)."""
        refs = self.refs(qualified)
        if len(refs) != 2:
            raise CompositionError(
                f"{qualified} must have exactly 2 pieces to close, has {len(refs)}")
        self._stitch(refs[0], refs[1])

    def _stitch(self, ra: tuple, rb: tuple) -> None:
        a = (ra[0], ra[1])
        b = (rb[0], rb[1])
        if a == b:
            raise CompositionError(f"stitch joins an edge to itself: {a}")
        for key in (a, b):
            if key in self._used_edges:
                raise CompositionError(f"edge stitched twice: {key}")
            self._used_edges.add(key)
        self.stitches.append(Stitch(a=a, b=b, reversed=ra[2] != rb[2]))


def _world_y(ps: PanelSet, ref: tuple) -> float:
    panel = ps.panel(ref[0])
    return panel.translation[1] + panel.edges[ref[1]].start[1]


def assemble_garment(cfg: GarmentConfig, body: BodyModel = DEFAULT_BODY,
                     registry: FieldRegistry | None = None) -> Pattern:
    """Compile one validated config into a Pattern.

    The config may be sparse; applicable defaults are filled and float
    leaves are denormalized against the body internally.
    """
    reg = registry or default_registry()
    pruned = prune_config(cfg, reg)
    complete = complete_config(pruned, reg)
    meta = complete.meta
    upper, wb, bottom = meta["upper"], meta["wb"], meta["bottom"]
    wholebody = upper != "None" and bottom != "None"

    asm = _Assembly()
    whole_raw = (section_params(complete, reg, "wholebody", body)
                 if wholebody else {})

    shirt_ps = None
    if upper != "None":
        shirt_raw = section_params(complete, reg, "shirt", body)
        collar_raw = section_params(complete, reg, "collar", body)
        sleeve_raw = section_params(complete, reg, "sleeve", body)
        scuff_raw = section_params(complete, reg, "sleeve.cuff", body)

        hem_splits = 2 if (wholebody and bottom == "Pants" and wb == "None") else 1
        shirt_ps = build_part("shirt", shirt_raw, body, {
            "collar": collar_raw,
            "upper_style": upper,
            "hem_splits": hem_splits,
            "place_y": body.shoulder_line,
            "length_extra": whole_raw.get("waist_drop", 0.0),
            "suppress_open_front": wholebody,
            **({"hem_half_width": whole_raw["seam_ease"] / 4.0,
                "hem_balance": whole_raw["balance"],
                "flat_hem": wb != "None"} if wholebody else {}),
        })
        asm.add_part("shirt", shirt_ps)
        asm.close("shirt.side_l")
        asm.close("shirt.side_r")
        asm.close("shirt.shoulder_l")
        asm.close("shirt.shoulder_r")

        collar_ps = build_part("collar", collar_raw, body, {
            "neckline_targets": {
                "front": shirt_ps.arcs("neckline_front"),
                "back": shirt_ps.arcs("neckline_back"),
            },
        })
        asm.add_part("collar", collar_ps)
        if collar_ps.panels:
            asm.join_refs("collar.neckline", asm.refs("collar.neckline"),
                          "shirt.neckline", (asm.refs("shirt.neckline_front")
                                             + asm.refs("shirt.neckline_back")))
            asm.close("collar.sides_l")
            asm.close("collar.sides_r")

        sleeve_ps = build_part("sleeve", sleeve_raw, body, {
            "armhole_targets": (shirt_ps.arc(shirt_ps.interfaces["armhole_l_front"][0]),
                                shirt_ps.arc(shirt_ps.interfaces["armhole_l_back"][0])),
            "place_y": body.shoulder_line,
        })
        asm.add_part("sleeve", sleeve_ps)
        if sleeve_ps.panels:
            asm.join("sleeve.cap_front_l", "shirt.armhole_l_front")
            asm.join("sleeve.cap_back_l", "shirt.armhole_l_back")
            asm.join("sleeve.cap_front_r", "shirt.armhole_r_front")
            asm.join("sleeve.cap_back_r", "shirt.armhole_r_back")
            asm.join("sleeve.side_front_l", "sleeve.side_back_l")
            asm.join("sleeve.side_front_r", "sleeve.side_back_r")

        scuff_openings = {}
        if sleeve_ps.panels and scuff_raw.get("type", "None") != "None":
            scuff_openings = {"l": sleeve_ps.arcs("hem_l"),
                              "r": sleeve_ps.arcs("hem_r")}
        scuff_ps = build_part("sleeve_cuff", scuff_raw, body, {
            "opening_targets": scuff_openings,
            "place_y": (_world_y(sleeve_ps, sleeve_ps.interfaces["hem_l"][0])
                        if scuff_openings else 0.0),
        })
        asm.add_part("sleeve_cuff", scuff_ps)
        if scuff_ps.panels:
            asm.join("sleeve_cuff.top_l", "sleeve.hem_l")
            asm.join("sleeve_cuff.top_r", "sleeve.hem_r")
            asm.close("sleeve_cuff.sides_l")
            asm.close("sleeve_cuff.sides_r")

    if bottom != "None":
        bottom_targets = None
        bottom_place = None
        if wholebody and shirt_ps is not None:
            # seam ease and balance already shaped the bodice hem; the
            # bottom solves to those arcs exactly so the seam lies flat
            hem_refs = shirt_ps.interfaces["hem"]
            bottom_targets = [shirt_ps.arc(r) for r in hem_refs]
            bottom_place = _world_y(shirt_ps, hem_refs[0])

        if wb != "None":
            wb_raw = section_params(complete, reg, "waistband", body)
            wb_ctx = {
                "wb_style": wb,
                "bottom_splits": 2 if bottom == "Pants" else 1,
            }
            if wholebody:
                wb_ctx["top_targets"] = bottom_targets
                wb_ctx["place_y_top"] = bottom_place
            wb_ps = build_part("waistband", wb_raw, body, wb_ctx)
            asm.add_part("waistband", wb_ps)
            asm.close("waistband.side_l")
            asm.close("waistband.side_r")
            if wholebody:
                asm.join("shirt.hem", "waistband.waist_top")
            bottom_targets = wb_ps.arcs("waist_bottom")
            bottom_place = wb_ps.panel("wb_front").translation[1]

        kind = {"Pants": "pants", "PencilSkirt": "pencil_skirt",
                "FlaredSkirt": "flared_skirt"}[bottom]
        root = kind if kind != "pants" else "pants"
        bottom_raw = section_params(complete, reg, root, body)
        bottom_ps = build_part(kind, bottom_raw, body, {
            "waist_targets": bottom_targets,
            "place_y": bottom_place,
            "join_curve_boost": whole_raw.get("overlap", 0.0) if wb == "None" else 0.0,
            "rotation_spread": whole_raw.get("rotation_spread", 0.0),
        })
        asm.add_part(kind, bottom_ps)

        if wb != "None":
            asm.join("waistband.waist_bottom", f"{kind}.waist_top")
        elif wholebody:
            asm.join("shirt.hem", f"{kind}.waist_top")

        if kind == "pants":
            asm.close("pants.outseam_l")
            asm.close("pants.outseam_r")
            asm.close("pants.inseam_lower_l")
            asm.close("pants.inseam_lower_r")
            if asm.refs("pants.inseam_upper_l"):
                asm.close("pants.inseam_upper_l")
                asm.close("pants.inseam_upper_r")
            asm.close("pants.crotch_front")
            asm.close("pants.crotch_back")

            pcuff_raw = section_params(complete, reg, "pants.cuff", body)
            pcuff_openings = {}
            if pcuff_raw.get("type", "None") != "None":
                pcuff_openings = {"l": bottom_ps.arcs("leg_end_l"),
                                  "r": bottom_ps.arcs("leg_end_r")}
            pcuff_ps = build_part("pant_cuff", pcuff_raw, body, {
                "opening_targets": pcuff_openings,
                "place_y": (_world_y(bottom_ps, bottom_ps.interfaces["leg_end_l"][0])
                            if pcuff_openings else 0.0),
            })
            asm.add_part("pant_cuff", pcuff_ps)
            if pcuff_ps.panels:
                asm.join("pant_cuff.top_l", "pants.leg_end_l")
                asm.join("pant_cuff.top_r", "pants.leg_end_r")
                asm.close("pant_cuff.sides_l")
                asm.close("pant_cuff.sides_r")
        else:
            asm.close(f"{kind}.side_l")
            asm.close(f"{kind}.side_r")

    source = canonical_serialize(pruned, reg)
    return Pattern(
        panels=asm.panels,
        stitches=asm.stitches,
        interfaces=asm.interfaces,
        source_hash=hashlib.sha256(source.encode("utf-8")).hexdigest(),
        body=body,
    )


def assemble_outfit(outfit: OutfitConfig, body: BodyModel = DEFAULT_BODY,
                    registry: FieldRegistry | None = None) -> list:
    """One Pattern per wrapped garment (wholebody yields one)."""
    reg = registry or default_registry()
    return [assemble_garment(cfg, body, reg)
            for _, cfg in outfit.slots()]


# ---------------------------------------------------------------------------
# validity


def check_pattern(pattern: Pattern) -> PatternValidity:
    """Panel integrity plus stitch length compatibility."""
    failures: list = []
    by_name = {p.name: p for p in pattern.panels}

    for panel in pattern.panels:
        failures.extend(check_panel(panel))

    def edge_exists(panel_name: str, idx: int) -> bool:
        p = by_name.get(panel_name)
        return p is not None and 0 <= idx < len(p.edges)

    for st in pattern.stitches:
        missing = [side for side in (st.a, st.b)
                   if not edge_exists(side[0], side[1])]
        if missing:
            failures.append({
                "code": "DANGLING_INTERFACE",
                "detail": f"stitch references missing edge {missing[0]}",
            })
            continue
        la = edge_length(by_name[st.a[0]].edges[st.a[1]])
        lb = edge_length(by_name[st.b[0]].edges[st.b[1]])
        rel = abs(la - lb) / max(la, lb, 1e-12)
        if rel > STITCH_TOLERANCE:
            failures.append({
                "code": "STITCH_LENGTH_MISMATCH",
                "detail": (f"{st.a} is {la:.3f} cm but {st.b} is {lb:.3f} cm "
                           f"({100 * rel:.1f}% > {100 * STITCH_TOLERANCE:.0f}%)"),
                "stitch": [list(st.a), list(st.b)],
            })

    for key, refs in pattern.interfaces.items():
        for ref in refs:
            if not edge_exists(ref[0], ref[1]):
                failures.append({
                    "code": "DANGLING_INTERFACE",
                    "detail": f"interface {key} references missing edge "
                              f"({ref[0]}, {ref[1]})",
                })

    return PatternValidity(ok=not failures, failures=failures)


# ---------------------------------------------------------------------------
# compile pipeline


@dataclasses.dataclass
class CompileResult:
    ok: bool
    report: ValidationReport | None
    pattern: Pattern | None
    validity: PatternValidity | None


def compile_garment(cfg: GarmentConfig, body: BodyModel = DEFAULT_BODY,
                    registry: FieldRegistry | None = None) -> CompileResult:
    """validate -> assemble -> check, collecting failures instead of raising."""
    reg = registry or default_registry()
    report = validate_config(cfg, reg)
    if not report.ok:
        return CompileResult(False, report, None, None)
    try:
        pattern = assemble_garment(cfg, body, reg)
    except PatterncError as exc:
        return CompileResult(False, report, None,
                             PatternValidity(False, [exc.to_dict()]))
    validity = check_pattern(pattern)
    return CompileResult(validity.ok, report, pattern, validity)


# ---------------------------------------------------------------------------
# serialization


def serialize_pattern(pattern: Pattern) -> str:
    doc = {
        "version": PATTERN_VERSION,
        "source_hash": pattern.source_hash,
        "body": {name: getattr(pattern.body, name)
                 for name in ("height", "waist", "hips", "bust", "shoulder_width",
                              "arm_length", "leg_length", "torso_length", "neck",
                              "arm_circumference")},
        "panels": [p.to_dict() for p in pattern.panels],
        "stitches": [s.to_dict() for s in pattern.stitches],
        "interfaces": {k: [list(r) for r in refs]
                       for k, refs in pattern.interfaces.items()},
    }
    return json.dumps(doc, indent=2)


def parse_pattern(text: str) -> Pattern:
    doc = json.loads(text)
    if doc.get("version") != PATTERN_VERSION:
        raise CompositionError(
            f"unsupported pattern version {doc.get('version')!r}")
    body = BodyModel(**doc["body"]) if "body" in doc else DEFAULT_BODY
    return Pattern(
        panels=[Panel.from_dict(d) for d in doc["panels"]],
        stitches=[Stitch.from_dict(d) for d in doc["stitches"]],
        interfaces={k: [tuple(r) for r in refs]
                    for k, refs in doc.get("interfaces", {}).items()},
        source_hash=doc.get("source_hash", ""),
        body=body,
    )


# ---------------------------------------------------------------------------
# SVG export

# 1 user unit = 1 mm
_CM = 10.0
_GUTTER_MM = 50.0

_STITCH_COLORS = (
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0",
    "#f032e6", "#bcf60c", "#008080", "#9a6324", "#800000", "#808000",
)


def _edge_svg_points(edge: Edge):
    if edge.kind == "QBEZIER":
        return [edge.start, edge.control, edge.end]
    return [edge.start, edge.end]


def _panel_bbox(panel: Panel):
    xs, ys = [], []
    for e in panel.edges:
        for x, y in _edge_svg_points(e):
            xs.append(x * _CM)
            ys.append(-y * _CM)  # svg y grows downward
    return min(xs), min(ys), max(xs), max(ys)


def _path_d(panel: Panel, dx: float, dy: float) -> str:
    def pt(p):
        return f"{p[0] * _CM + dx:.2f} {-p[1] * _CM + dy:.2f}"

    parts = [f"M {pt(panel.edges[0].start)}"]
    for e in panel.edges:
        if e.kind == "QBEZIER":
            parts.append(f"Q {pt(e.control)} {pt(e.end)}")
        else:
            parts.append(f"L {pt(e.end)}")
    parts.append("Z")
    return " ".join(parts)


def _edge_d(edge: Edge, dx: float, dy: float) -> str:
    def pt(p):
        return f"{p[0] * _CM + dx:.2f} {-p[1] * _CM + dy:.2f}"

    if edge.kind == "QBEZIER":
        return f"M {pt(edge.start)} Q {pt(edge.control)} {pt(edge.end)}"
    return f"M {pt(edge.start)} L {pt(edge.end)}"


def export_svg(pattern: Pattern) -> str:
    """Panels on a non-overlapping grid; stitched edge pairs share a color."""
    n = len(pattern.panels)
    stitch_color: dict = {}
    for i, st in enumerate(pattern.stitches):
        color = _STITCH_COLORS[i % len(_STITCH_COLORS)]
        stitch_color[st.a] = color
        stitch_color[st.b] = color

    groups = []
    cols = max(1, math.ceil(math.sqrt(n))) if n else 1
    offsets = []
    boxes = [_panel_bbox(p) for p in pattern.panels]
    x_cursor, y_cursor, row_h = _GUTTER_MM, _GUTTER_MM, 0.0
    max_w = 0.0
    for i, (x0, y0, x1, y1) in enumerate(boxes):
        if i and i % cols == 0:
            x_cursor = _GUTTER_MM
            y_cursor += row_h + _GUTTER_MM
            row_h = 0.0
        offsets.append((x_cursor - x0, y_cursor - y0))
        x_cursor += (x1 - x0) + _GUTTER_MM
        row_h = max(row_h, y1 - y0)
        max_w = max(max_w, x_cursor)
    total_h = y_cursor + row_h + _GUTTER_MM if n else 2 * _GUTTER_MM
    total_w = max_w if n else 2 * _GUTTER_MM

    for panel, (dx, dy), (x0, y0, x1, y1) in zip(pattern.panels, offsets, boxes):
        body = [
            f'<path d="{_path_d(panel, dx, dy)}" fill="#f7f3ea" '
            f'stroke="#333333" stroke-width="1.5"/>'
        ]
        for idx, edge in enumerate(panel.edges):
            color = stitch_color.get((panel.name, idx))
            if color:
                body.append(
                    f'<path d="{_edge_d(edge, dx, dy)}" fill="none" '
                    f'stroke="{color}" stroke-width="3"/>')
        label_x = (x0 + x1) / 2 + dx
        label_y = y0 + dy - 8.0
        body.append(
            f'<text x="{label_x:.2f}" y="{label_y:.2f}" font-size="24" '
            f'text-anchor="middle" fill="#555555">{panel.name}</text>')
        groups.append(
            f'<g id="panel-{panel.name}">' + "".join(body) + "</g>")

    return (
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{total_w:.0f}mm" height="{total_h:.0f}mm" '
        f'viewBox="0 0 {total_w:.2f} {total_h:.2f}">'
        + "".join(groups)
        + "</svg>"
    )
