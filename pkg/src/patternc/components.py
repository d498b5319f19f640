"""Panel builders for every garment part.

Each builder turns one denormalized section dict (raw cm/deg values)
plus a body model into a PanelSet: panels in local frames and named
interfaces pointing at boundary edges. The assembler wires interfaces
together into stitches, so any two edges that will be stitched must
come out the same length. That is arranged by passing target arc
lengths down through the optional ``context`` argument:

- shirt:    hem_splits, collar (section dict), upper_style, place_y
- collar:   neckline_targets (front_arc, back_arc)
- sleeve:   armhole_targets (front_arc, back_arc)
- waistband: wb_style, top_targets, bottom_splits, place_y
- pants / skirts: waist_targets (front pieces then back pieces),
            place_y, join_curve_boost, rotation_spread
- cuffs:    opening_targets {"l": [...], "r": [...]}, parent ("sleeve"
            or "pants"), place_y

Standalone builds (no context) fall back to the section's own
parameters everywhere. Interface values are ordered lists of
(panel_name, edge_index, direction) refs; multi-piece interfaces list
front pieces left-to-right, then back pieces.
"""

from __future__ import annotations

import dataclasses
import math

from .body import BodyModel
from .errors import BuildError
from .geometry import (
    Edge,
    Panel,
    curved_edge,
    edge_length,
    line,
    mirror_edges_x,
    qbezier,
    solve_edge_for_length,
    split_qbezier,
)

# slit depths below this many cm are treated as noise and produce no notch
# (0.02 of the registry's 35 cm slit range)
SLIT_THRESHOLD_CM = 0.7

# minimum edge length a builder may emit
MIN_EDGE_CM = 0.1

# panel depth offsets for placement hints
FRONT_Z = 8.0
BACK_Z = -8.0

PART_KINDS = (
    "shirt", "collar", "sleeve", "sleeve_cuff", "waistband",
    "pants", "pant_cuff", "pencil_skirt", "flared_skirt",
)


@dataclasses.dataclass
class PanelSet:
    """Panels plus named interfaces into their boundary edges."""

    panels: list
    interfaces: dict

    def panel(self, name: str) -> Panel:
        for p in self.panels:
            if p.name == name:
                return p
        raise KeyError(name)

    def arc(self, ref: tuple) -> float:
        name, idx, _ = ref
        return edge_length(self.panel(name).edges[idx])

    def arcs(self, interface: str) -> list:
        return [self.arc(r) for r in self.interfaces[interface]]


_PART_INTERFACES = {
    "shirt": ["hem", "side_l", "side_r", "shoulder_l", "shoulder_r",
              "armhole_l_front", "armhole_l_back", "armhole_r_front",
              "armhole_r_back", "neckline_front", "neckline_back"],
    "collar": ["neckline", "sides_l", "sides_r"],
    "sleeve": ["cap_front_l", "cap_back_l", "cap_front_r", "cap_back_r",
               "hem_l", "hem_r", "side_front_l", "side_back_l",
               "side_front_r", "side_back_r"],
    "sleeve_cuff": ["top_l", "top_r", "sides_l", "sides_r"],
    "waistband": ["waist_top", "waist_bottom", "side_l", "side_r"],
    "pants": ["waist_top", "leg_end_l", "leg_end_r", "outseam_l", "outseam_r",
              "inseam_lower_l", "inseam_lower_r", "inseam_upper_l",
              "inseam_upper_r", "crotch_front", "crotch_back"],
    "pant_cuff": ["top_l", "top_r", "sides_l", "sides_r"],
    "pencil_skirt": ["waist_top", "side_l", "side_r", "hem"],
    "flared_skirt": ["waist_top", "side_l", "side_r", "hem"],
}


def part_interfaces(kind: str) -> list:
    """Interface names every build of this part kind provides."""
    if kind not in _PART_INTERFACES:
        raise BuildError(f"unknown part kind {kind!r}", code="UNSUPPORTED_KIND")
    return list(_PART_INTERFACES[kind])


def build_part(kind: str, section: dict, body: BodyModel,
               context: dict | None = None) -> PanelSet:
    """Build one part from its raw section parameters."""
    builders = {
        "shirt": build_shirt,
        "collar": build_collar,
        "sleeve": build_sleeve,
        "sleeve_cuff": build_cuff_for_sleeve,
        "waistband": build_waistband,
        "pants": build_pants,
        "pant_cuff": build_cuff_for_pants,
        "pencil_skirt": build_pencil_skirt,
        "flared_skirt": build_flared_skirt,
    }
    if kind not in builders:
        raise BuildError(f"unknown part kind {kind!r}", code="UNSUPPORTED_KIND")
    return builders[kind](section, body, context or {})


# ---------------------------------------------------------------------------
# helpers


def _clamp(x, lo, hi):
    return max(lo, min(hi, x))


def _bulge_clamp(depth: float, p0, p1, frac: float = 0.45) -> float:
    chord = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
    return _clamp(depth, -frac * chord, frac * chord)


def _shaped_edge(p0, p1, depth: float) -> Edge:
    """Curved edge with the control depth clamped against the chord."""
    return curved_edge(p0, p1, _bulge_clamp(depth, p0, p1))


def _check_min_edges(edges, what: str) -> None:
    for e in edges:
        if edge_length(e) < MIN_EDGE_CM:
            raise BuildError(f"{what}: edge shorter than {MIN_EDGE_CM} cm",
                             code="DEGENERATE_GEOMETRY")


def _mirrored_panel(panel: Panel, name: str, *, translation=None) -> tuple:
    """Mirror about x=0; returns (panel, index_map old->new).

    Mirroring reverses the loop, so edge i maps to n-1-i with its
    direction flipped.
    """
    n = len(panel.edges)
    mirrored = Panel(
        name=name,
        edges=mirror_edges_x(panel.edges),
        role=panel.role,
        translation=translation if translation is not None else panel.translation,
        rotation=panel.rotation,
    )
    index_map = {i: n - 1 - i for i in range(n)}
    return mirrored, index_map


def _solve_or_shape(p0, p1, target: float | None, natural_depth: float,
                    *, side: float = 1.0) -> Edge:
    """Edge matched to a target arc, or naturally shaped when untargeted."""
    if target is None:
        return _shaped_edge(p0, p1, natural_depth * side)
    return solve_edge_for_length(p0, p1, target, side=side)


def _split_chord(p0, p1, n: int) -> list:
    """n collinear waypoints pairs along a chord."""
    pts = [(p0[0] + (p1[0] - p0[0]) * i / n, p0[1] + (p1[1] - p0[1]) * i / n)
           for i in range(n + 1)]
    return list(zip(pts[:-1], pts[1:]))


# ---------------------------------------------------------------------------
# waistband


def build_waistband(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """Two band panels (front/back), optionally split edges for joins.

    Band circumference comes from the waist parameter, or from
    top_targets when a bodice hem dictates it. The fold-over height
    field adds half-centimeter steps to the band height.
    """
    style = context.get("wb_style", "StraightWB")
    top_targets = context.get("top_targets")  # [front, back] arcs or None
    bottom_splits = int(context.get("bottom_splits", 1))
    place_y = context.get("place_y")

    band_h = section["width"] + 0.5 * int(section.get("height", 0))
    band_h = max(band_h, 1.0)
    # the top chord must sit barely under the smallest solved arc: a band
    # is too shallow to absorb real slack in its top curve
    if top_targets is not None:
        tw = 0.9999 * min(top_targets)
    else:
        tw = section["waist"] / 2.0
    if tw < 10.0:
        raise BuildError("waistband circumference too small", code="DEGENERATE_GEOMETRY")

    # the fitted style narrows the bottom edge; whatever hangs from it
    # is tall enough to ease into the reduced width
    w = tw * (0.94 if style == "FittedWB" else 1.0)

    rise = section.get("rise", 0.0)
    if context.get("place_y_top") is not None:
        # attach by the band top (worn under a bodice)
        place_y = context["place_y_top"] - band_h
    elif place_y is None:
        place_y = body.waist_line + rise

    panels = []
    interfaces = {"waist_top": [], "waist_bottom": [], "side_l": [], "side_r": []}

    for tag, z, target in (("front", FRONT_Z, None if top_targets is None else top_targets[0]),
                           ("back", BACK_Z, None if top_targets is None else top_targets[1])):
        name = f"wb_{tag}"
        edges = []
        # bottom, left to right, split for the garment below
        for a, b in _split_chord((-w / 2, 0.0), (w / 2, 0.0), bottom_splits):
            edges.append(line(a, b))
        bottom_idx = list(range(len(edges)))
        edges.append(line((w / 2, 0.0), (tw / 2, band_h)))
        side_r_idx = len(edges) - 1
        top_edge = _solve_or_shape((tw / 2, band_h), (-tw / 2, band_h), target, 0.0)
        edges.append(top_edge)
        top_idx = len(edges) - 1
        edges.append(line((-tw / 2, band_h), (-w / 2, 0.0)))
        side_l_idx = len(edges) - 1
        _check_min_edges(edges, name)

        panels.append(Panel(name, edges, role=f"waistband_{tag}",
                            translation=(0.0, place_y, z)))
        interfaces["waist_top"].append((name, top_idx, -1))
        interfaces["waist_bottom"].extend((name, i, 1) for i in bottom_idx)
        interfaces["side_l"].append((name, side_l_idx, 1))
        interfaces["side_r"].append((name, side_r_idx, 1))

    return PanelSet(panels, interfaces)


# ---------------------------------------------------------------------------
# skirts


def _hem_with_notches(left, right, curve_depth: float, notches: list,
                      panel_h: float) -> list:
    """Hem edges left->right with V notches cut upward into the panel.

    notches: list of (position_fraction, depth_cm). Overlapping or
    edge-hugging notches are dropped in list order. A curved hem is only
    used when no notch survives.
    """
    span = right[0] - left[0]
    usable = []
    taken = []  # (start_frac, end_frac)
    for frac, depth in notches:
        # deep cuts near the hem corners would run into the slanted or
        # style-curved side seams, so stay under half the panel height
        depth = _clamp(depth, 0.0, 0.45 * panel_h)
        if depth < SLIT_THRESHOLD_CM:
            continue
        width = max(0.6, 0.08 * depth)
        half = width / span / 2.0
        lo, hi = frac - half, frac + half
        if lo < 0.02 or hi > 0.98:
            continue
        if any(not (hi < s - 0.01 or lo > e + 0.01) for s, e in taken):
            continue
        taken.append((lo, hi))
        usable.append((frac, depth, width))

    def at(frac):
        return (left[0] + span * frac, left[1] + (right[1] - left[1]) * frac)

    if not usable:
        return [_shaped_edge(left, right, -abs(curve_depth))]

    usable.sort(key=lambda t: t[0])
    edges = []
    cursor = left
    for frac, depth, width in usable:
        half = width / span / 2.0
        a = at(frac - half)
        b = at(frac + half)
        apex = (at(frac)[0], at(frac)[1] + depth)
        edges.append(line(cursor, a))
        edges.append(line(a, apex))
        edges.append(line(apex, b))
        cursor = b
    edges.append(line(cursor, right))
    return edges


def _skirt_panel(name: str, role: str, *, waist_chord: float, hem_w: float,
                 height: float, tilt_deg: float, hem_curve: float,
                 notches: list, side_style: str, waist_target: float | None,
                 waist_depth: float, place_y: float, z: float,
                 rotation: tuple = (0.0, 0.0, 0.0)) -> tuple:
    """Trapezoid skirt panel; returns (panel, interface refs dict)."""
    tilt = math.tan(math.radians(tilt_deg)) * hem_w / 2.0
    tilt = _clamp(tilt, -0.4 * height, 0.4 * height)
    bl = (-hem_w / 2.0, tilt)
    br = (hem_w / 2.0, -tilt)
    tr = (waist_chord / 2.0, height)
    tl = (-waist_chord / 2.0, height)

    # proportional depth keeps the builders scale-homogeneous in (params, body)
    side_depth = 0.0
    if side_style == "Sun":
        side_depth = 0.07 * min(hem_w, waist_chord)
    elif side_style == "Wave":
        side_depth = -0.07 * min(hem_w, waist_chord)

    edges = _hem_with_notches(bl, br, hem_curve, notches, height)
    hem_idx = list(range(len(edges)))
    # right side, traversing upward: positive bulge bends into the panel
    edges.append(_shaped_edge(br, tr, side_depth))
    side_r_idx = len(edges) - 1
    # waist, right to left: positive bulge dips into the panel (dart fullness)
    edges.append(_solve_or_shape(tr, tl, waist_target, waist_depth))
    waist_idx = len(edges) - 1
    edges.append(_shaped_edge(tl, bl, side_depth))
    side_l_idx = len(edges) - 1
    _check_min_edges(edges, name)

    panel = Panel(name, edges, role=role,
                  translation=(0.0, place_y - height, z), rotation=rotation)
    refs = {
        "waist": (name, waist_idx, -1),
        "side_l": (name, side_l_idx, -1),
        "side_r": (name, side_r_idx, 1),
        "hem": [(name, i, 1) for i in hem_idx],
    }
    return panel, refs


def build_pencil_skirt(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """Fitted skirt: front/back trapezoids, hem slits, styled side seams."""
    height = section["length"]
    targets = context.get("waist_targets")  # [front, back] or None
    place_y = context.get("place_y")
    boost = context.get("join_curve_boost", 0.0)
    spread = context.get("rotation_spread", 0.0)

    rise = section.get("rise", 0.0)
    if place_y is None:
        place_y = body.hip_line + rise

    hem_w = section["flare"] / 2.0
    hip_w = section.get("hip_ease", 1.1 * body.hips) / 2.0
    # waist chord slides from hip width to natural waist as the seam rises
    rise_frac = _clamp(rise / (0.3 * body.torso_length), 0.0, 1.0)
    natural = (hip_w + (1.05 * body.waist / 2.0 - hip_w) * rise_frac)
    chord = natural
    if targets is not None:
        chord = min(chord, 0.985 * min(targets))
    chord = max(chord, 6.0)

    waist_depth = _clamp(section.get("dart_depth", 0.0) + boost, 0.0, 0.4 * chord)
    tilt_deg = float(section.get("low_angle", 0))
    style = section.get("style_side_cut", "None")

    front, f = _skirt_panel(
        "skirt_front", "skirt_front", waist_chord=chord, hem_w=hem_w,
        height=height, tilt_deg=tilt_deg, hem_curve=section.get("hem_curve", 0.0),
        notches=[(0.5, section.get("front_slit", 0.0)),
                 (0.18, section.get("left_slit", 0.0)),
                 (0.82, section.get("right_slit", 0.0))],
        side_style=style, waist_target=None if targets is None else targets[0],
        waist_depth=waist_depth, place_y=place_y, z=FRONT_Z,
        rotation=(0.0, 0.0, spread))
    back, b = _skirt_panel(
        "skirt_back", "skirt_back", waist_chord=chord, hem_w=hem_w,
        height=height, tilt_deg=tilt_deg, hem_curve=section.get("hem_curve", 0.0),
        notches=[(0.5, section.get("back_slit", 0.0)),
                 (0.18, section.get("left_slit", 0.0)),
                 (0.82, section.get("right_slit", 0.0))],
        side_style=style, waist_target=None if targets is None else targets[1],
        waist_depth=waist_depth, place_y=place_y, z=BACK_Z,
        rotation=(0.0, 0.0, -spread))

    return PanelSet([front, back], {
        "waist_top": [f["waist"], b["waist"]],
        "side_l": [f["side_l"], b["side_l"]],
        "side_r": [f["side_r"], b["side_r"]],
        "hem": f["hem"] + b["hem"],
    })


def build_flared_skirt(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """A-line skirt: hem = waist arc * (1 + flare)."""
    height = section["length"]
    targets = context.get("waist_targets")
    place_y = context.get("place_y")
    boost = context.get("join_curve_boost", 0.0)
    spread = context.get("rotation_spread", 0.0)

    rise = section.get("rise", 0.0)
    if place_y is None:
        place_y = body.hip_line + rise

    flare_mult = section["flare"] / body.waist  # dimensionless widening
    waist_nat = section.get("waist_ease", 1.05 * body.waist) / 2.0
    hem_w = waist_nat * (1.0 + flare_mult)
    chord = waist_nat
    if targets is not None:
        chord = min(chord, 0.985 * min(targets))
    chord = max(chord, 6.0)

    waist_depth = _clamp(boost, 0.0, 0.4 * chord)

    front, f = _skirt_panel(
        "skirt_front", "skirt_front", waist_chord=chord, hem_w=hem_w,
        height=height, tilt_deg=section.get("tilt", 0.0),
        hem_curve=section.get("hem_curve", 0.0), notches=[],
        side_style="None", waist_target=None if targets is None else targets[0],
        waist_depth=waist_depth, place_y=place_y, z=FRONT_Z,
        rotation=(0.0, 0.0, spread))
    back, b = _skirt_panel(
        "skirt_back", "skirt_back", waist_chord=chord, hem_w=hem_w,
        height=height, tilt_deg=section.get("tilt", 0.0),
        hem_curve=section.get("hem_curve", 0.0), notches=[],
        side_style="None", waist_target=None if targets is None else targets[1],
        waist_depth=waist_depth, place_y=place_y, z=BACK_Z,
        rotation=(0.0, 0.0, -spread))

    return PanelSet([front, back], {
        "waist_top": [f["waist"], b["waist"]],
        "side_l": [f["side_l"], b["side_l"]],
        "side_r": [f["side_r"], b["side_r"]],
        "hem": f["hem"] + b["hem"],
    })


# ---------------------------------------------------------------------------
# pants


def build_pants(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """Four leg panels. Front and back share inseam/outseam profiles so
    those seams match exactly; back fullness lives in the crotch curve.

    Local frame: crotch line at y=0, waist above, hem below. The left
    leg's panels put the outseam at x=0 and extend toward the body
    center (+x); right-leg panels are mirrored.
    """
    targets = context.get("waist_targets")  # [fl, fr, bl, br] or None
    place_y = context.get("place_y")
    boost = context.get("join_curve_boost", 0.0)
    spread = context.get("rotation_spread", 0.0)

    leg_len = max(section["length"], 10.0)
    hip_panel = section["width"] / 4.0  # per-panel hip width
    knee = section["knee_width"] / 4.0
    ankle = section["flare"] / 4.0
    rise = section["rise"]
    y_waist = rise + 0.12 * body.height  # crotch sits below the hip line
    y_hem = -leg_len
    # knee is a body landmark: legs ending above it get no knee vertex
    y_knee = -0.45 * body.leg_length
    ext = 0.22 * hip_panel  # crotch extension, shared by front and back

    waist_chord = min(1.08 * body.waist, 0.98 * section["width"]) / 4.0
    if targets is not None:
        waist_chord = min(waist_chord, 0.985 * min(targets))
    waist_chord = max(waist_chord, 4.0)

    knee = max(knee, 2.0)
    ankle = max(ankle, 2.0)
    hip_panel = max(hip_panel, waist_chord, 4.0)

    use_knee = y_hem < y_knee - 2.0

    dip = _clamp(section.get("waist_dip", 0.0) + boost, 0.0, 0.45 * waist_chord)
    hem_curve = section.get("hem_curve", 0.0)

    crotch_pt = (hip_panel + ext, 0.0)

    def leg_panel(name: str, role: str, back: bool, target: float | None,
                  z: float) -> tuple:
        edges = []
        # hem, outseam side to inseam side
        edges.append(_shaped_edge((0.0, y_hem), (ankle, y_hem), -abs(hem_curve)))
        hem_idx = 0
        if use_knee:
            edges.append(line((ankle, y_hem), (knee, y_knee)))
            inseam_lower_idx = 1
            edges.append(line((knee, y_knee), crotch_pt))
            inseam_upper_idx = 2
        else:
            edges.append(line((ankle, y_hem), crotch_pt))
            inseam_lower_idx = 1
            inseam_upper_idx = None
        # crotch curve up to the waist inner corner; the control point starts
        # on the chord and scoops into the panel, deeper curve = longer seam
        curve = _clamp(section.get("crotch_curve", 4.0), 0.0, 16.0)
        if back:
            curve += section.get("back_rise_extra", 0.0)
        t_c = 0.35
        chord_x = crotch_pt[0] + (waist_chord - crotch_pt[0]) * t_c
        scoop = _clamp(0.55 * curve, 0.0, 0.45 * waist_chord)
        ctrl = (max(chord_x - scoop, 0.2 * waist_chord), t_c * y_waist)
        edges.append(qbezier(crotch_pt, ctrl, (waist_chord, y_waist)))
        crotch_idx = len(edges) - 1
        # waist, inner to outer: positive bulge dips into the panel
        edges.append(_solve_or_shape((waist_chord, y_waist), (0.0, y_waist),
                                     target, dip))
        waist_idx = len(edges) - 1
        edges.append(line((0.0, y_waist), (0.0, y_hem)))
        outseam_idx = len(edges) - 1
        _check_min_edges(edges, name)
        panel = Panel(name, edges, role=role, translation=(0.0, 0.0, z))
        refs = {"hem": hem_idx, "inseam_lower": inseam_lower_idx,
                "inseam_upper": inseam_upper_idx, "crotch": crotch_idx,
                "waist": waist_idx, "outseam": outseam_idx}
        return panel, refs

    t_fl, t_fr, t_bl, t_br = (targets if targets is not None else (None,) * 4)
    front_l, fl = leg_panel("pants_front_l", "pants_front", False, t_fl, FRONT_Z)
    back_l, bl = leg_panel("pants_back_l", "pants_back", True, t_bl, BACK_Z)
    front_r_src, fr = leg_panel("pants_front_r", "pants_front", False, t_fr, FRONT_Z)
    back_r_src, br = leg_panel("pants_back_r", "pants_back", True, t_br, BACK_Z)

    leg_dx = body.hips / 4.0 + 2.0
    # place_y is the waist seam's world height; local waist sits at y_waist
    if place_y is None:
        place_y = body.hip_line + rise
    base_y = place_y - y_waist
    rot_l, rot_r = (0.0, 0.0, spread), (0.0, 0.0, -spread)
    front_l = dataclasses.replace(front_l, translation=(-leg_dx, base_y, FRONT_Z),
                                  rotation=rot_l)
    back_l = dataclasses.replace(back_l, translation=(-leg_dx, base_y, BACK_Z),
                                 rotation=rot_l)
    front_r, fmap = _mirrored_panel(front_r_src, "pants_front_r",
                                    translation=(leg_dx, base_y, FRONT_Z))
    back_r, bmap = _mirrored_panel(back_r_src, "pants_back_r",
                                   translation=(leg_dx, base_y, BACK_Z))
    front_r = dataclasses.replace(front_r, rotation=rot_r)
    back_r = dataclasses.replace(back_r, rotation=rot_r)

    def mref(refs, index_map, key, name):
        idx = refs[key]
        if idx is None:
            return None
        return (name, index_map[idx], -1)

    iface = {
        "waist_top": [
            ("pants_front_l", fl["waist"], 1),
            mref(fr, fmap, "waist", "pants_front_r"),
            ("pants_back_l", bl["waist"], 1),
            mref(br, bmap, "waist", "pants_back_r"),
        ],
        "leg_end_l": [("pants_front_l", fl["hem"], 1), ("pants_back_l", bl["hem"], 1)],
        "leg_end_r": [mref(fr, fmap, "hem", "pants_front_r"),
                      mref(br, bmap, "hem", "pants_back_r")],
        "outseam_l": [("pants_front_l", fl["outseam"], 1),
                      ("pants_back_l", bl["outseam"], 1)],
        "outseam_r": [mref(fr, fmap, "outseam", "pants_front_r"),
                      mref(br, bmap, "outseam", "pants_back_r")],
        "inseam_lower_l": [("pants_front_l", fl["inseam_lower"], 1),
                           ("pants_back_l", bl["inseam_lower"], 1)],
        "inseam_lower_r": [mref(fr, fmap, "inseam_lower", "pants_front_r"),
                           mref(br, bmap, "inseam_lower", "pants_back_r")],
        "crotch_front": [("pants_front_l", fl["crotch"], 1),
                         mref(fr, fmap, "crotch", "pants_front_r")],
        "crotch_back": [("pants_back_l", bl["crotch"], 1),
                        mref(br, bmap, "crotch", "pants_back_r")],
    }
    if use_knee:
        iface["inseam_upper_l"] = [("pants_front_l", fl["inseam_upper"], 1),
                                   ("pants_back_l", bl["inseam_upper"], 1)]
        iface["inseam_upper_r"] = [mref(fr, fmap, "inseam_upper", "pants_front_r"),
                                   mref(br, bmap, "inseam_upper", "pants_back_r")]
    else:
        iface["inseam_upper_l"] = []
        iface["inseam_upper_r"] = []

    return PanelSet([front_l, front_r, back_l, back_r], iface)


# ---------------------------------------------------------------------------
# cuffs


def _build_cuff(section: dict, body: BodyModel, context: dict,
                *, parent: str) -> PanelSet:
    """Band cuffs closing around an opening (sleeve hem or pant leg hem).

    One panel per side; the top edge is split to match the opening's
    pieces exactly. Ruffle cuffs get a scalloped bottom and extra
    width. Skew tilts the placement only, keeping the side seams equal
    so the band can close on itself.
    """
    style = section.get("type", "None")
    openings = context.get("opening_targets") or {}
    place_y = context.get("place_y", 0.0)

    interfaces = {"top_l": [], "top_r": [], "sides_l": [], "sides_r": []}
    if style == "None" or not openings:
        return PanelSet([], interfaces)

    panels = []
    h = max(section.get("height", 4.0), 1.0)
    for side in ("l", "r"):
        targets = openings.get(side)
        if not targets:
            continue
        name = f"{'sleeve' if parent == 'sleeve' else 'leg'}_cuff_{side}"
        tw = sum(targets)
        # bottom_width is a circumference; the flat band spans half of it
        bw = section.get("bottom_width", 2.0 * tw) / 2.0
        bw += 2.0 * section.get("flare_ext", 0.0)
        if style == "Ruffle":
            bw = max(bw, 1.35 * tw)
        bw = _clamp(bw, 0.35 * tw, 2.4 * tw)

        bl, br = (-bw / 2.0, 0.0), (bw / 2.0, 0.0)
        tr, tl = (tw / 2.0, h), (-tw / 2.0, h)
        edges = []
        if style == "Ruffle":
            depth = _clamp(section.get("ruffle_depth", 2.0), 0.3, 0.45 * bw / 3.0)
            for a, b in _split_chord(bl, br, 3):
                edges.append(_shaped_edge(a, b, -depth))
        else:
            edges.append(_shaped_edge(bl, br, -abs(section.get("curve", 0.0))))
        edges.append(line(br, tr))
        side_b_idx = len(edges) - 1
        top_start = len(edges)
        # top, right to left; pieces are listed back to list order left->right
        cursor = tr
        for piece in reversed(targets):
            nxt = (cursor[0] - piece, h)
            edges.append(line(cursor, nxt))
            cursor = nxt
        if abs(cursor[0] - tl[0]) > 1e-6:
            raise BuildError("cuff top pieces do not span the band",
                             code="DEGENERATE_GEOMETRY")
        top_idx = list(range(top_start, len(edges)))
        edges.append(line(tl, bl))
        side_a_idx = len(edges) - 1
        _check_min_edges(edges, name)

        # place_y is the opening seam's world height; the band hangs below it
        panel = Panel(name, edges, role=f"{parent}_cuff",
                      translation=(-body.hips / 4.0 - 2.0 if side == "l"
                                   else body.hips / 4.0 + 2.0, place_y - h, FRONT_Z),
                      rotation=(0.0, 0.0, section.get("skew", 0.0)))
        panels.append(panel)
        interfaces[f"top_{side}"] = [(name, i, -1) for i in reversed(top_idx)]
        interfaces[f"sides_{side}"] = [(name, side_a_idx, -1), (name, side_b_idx, 1)]

    return PanelSet(panels, interfaces)


def build_cuff_for_sleeve(section: dict, body: BodyModel, context: dict) -> PanelSet:
    return _build_cuff(section, body, context, parent="sleeve")


def build_cuff_for_pants(section: dict, body: BodyModel, context: dict) -> PanelSet:
    return _build_cuff(section, body, context, parent="pants")


# ---------------------------------------------------------------------------
# bodice


def _neckline_depth(style: str, depth_front: float, curve: float) -> float:
    eff = depth_front + 0.3 * curve
    if style == "v":
        return 1.2 * eff
    if style == "collarless":
        return max(1.5, 0.35 * eff)
    if style == "turtle":
        return 0.8 * eff
    return eff  # crew


def build_shirt(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """Bodice front/back. FittedShirt narrows the ease; open_front splits
    the front at center into two half panels with an unstitched
    center-front pair; asymmetric tilts the hem the same way on both
    panels so side seams keep matching.
    """
    collar = context.get("collar", {})
    upper_style = context.get("upper_style", "Shirt")
    hem_splits = int(context.get("hem_splits", 1))
    place_y = context.get("place_y", body.shoulder_line)
    length_extra = context.get("length_extra", 0.0)

    fitted = 0.94 if upper_style == "FittedShirt" else 1.0
    width = section["width"] * fitted
    flare = section["flare"] * fitted
    w2 = width / 4.0
    hw = flare / 4.0
    if "hem_half_width" in context:
        # hem doubles as a waist seam: its circumference ease sets the width
        hw = max(float(context["hem_half_width"]), 4.0)
    ss = section["shoulder_ease"] / 2.0
    nw = min(collar.get("width", 0.42 * body.neck) / 2.0, 0.8 * ss)
    ad = section["armhole_depth"]
    length = max(section["length"] + length_extra, ad + 4.0)
    drop = math.tan(math.radians(section.get("shoulder_slope", 0.0))) * max(ss - nw, 0.0)
    # on cropped bodices the hem sits close under the armpit; scale the
    # armhole scoop, side bow and hem tilt to that clearance so the side
    # seam never collapses into the armhole curve
    clearance = length - ad
    bite = min(section.get("armhole_width", 3.0), 1.0 + 0.3 * clearance)
    side_curve = min(section.get("side_curve", 0.0), 0.3 * clearance)
    hem_curve = section.get("hem_curve", 0.0)
    diff = section.get("front_length_diff", 0.0)

    open_front = bool(section.get("open_front", False)) and not context.get(
        "suppress_open_front", False)
    asym = bool(section.get("asymmetric", False))
    tilt = math.tan(math.radians(section.get("asym_tilt", 0.0))) * hw if asym else 0.0
    tilt_cap = min(0.35 * length, 0.45 * (clearance - 1.0))
    tilt = _clamp(tilt, -tilt_cap, tilt_cap)

    style = collar.get("style", "crew")
    d_front = _neckline_depth(style, collar.get("depth_front", 7.0),
                              collar.get("curve", 0.0))
    d_front = min(d_front, ad - 1.0, length - 2.0)
    d_back = min(collar.get("depth_back", 2.0), ad - 1.0)

    def bodice_panel(tag: str, d_neck: float, hem_dip: float, z: float,
                     splits: int):
        """One full-width bodice panel.

        hem_dip deepens the hem curve only; panel corners stay put so
        front and back side seams always match.
        """
        name = f"bodice_{tag}"

        def hem_y(x):
            return -length - tilt * x / max(hw, 1e-9)

        hcl, hcr = (-hw, hem_y(-hw)), (hw, hem_y(hw))
        ul, ur = (-w2, -ad), (w2, -ad)
        pshl, pshr = (-ss, -drop), (ss, -drop)
        nl, nr = (-nw, 0.0), (nw, 0.0)

        edges = []
        pts = [(-hw + 2 * hw * i / splits) for i in range(splits + 1)]
        depth = -(abs(hem_curve) + hem_dip) / splits
        for a, b in zip(pts[:-1], pts[1:]):
            edges.append(_shaped_edge((a, hem_y(a)), (b, hem_y(b)), depth))
        hem_idx = list(range(len(edges)))
        edges.append(_shaped_edge(hcr, ur, side_curve))  # right side, bulge inward
        side_r_idx = len(edges) - 1
        edges.append(_shaped_edge(ur, pshr, bite))  # armhole scoops into the panel
        armhole_r_idx = len(edges) - 1
        edges.append(line(pshr, nr))
        shoulder_r_idx = len(edges) - 1
        edges.append(qbezier(nr, (0.0, -2.0 * d_neck), nl))
        neck_idx = len(edges) - 1
        edges.append(line(nl, pshl))
        shoulder_l_idx = len(edges) - 1
        edges.append(_shaped_edge(pshl, ul, bite))
        armhole_l_idx = len(edges) - 1
        edges.append(_shaped_edge(ul, hcl, side_curve))
        side_l_idx = len(edges) - 1
        _check_min_edges(edges, name)
        panel = Panel(name, edges, role=name,
                      translation=(0.0, place_y, z))
        refs = {"hem": hem_idx, "side_r": side_r_idx, "armhole_r": armhole_r_idx,
                "shoulder_r": shoulder_r_idx, "neck": neck_idx,
                "shoulder_l": shoulder_l_idx, "armhole_l": armhole_l_idx,
                "side_l": side_l_idx}
        return panel, refs

    # high-low hem: positive values deepen the front hem curve only, so
    # the corners (and with them the side seams) stay put
    front_dip = diff + float(context.get("hem_balance", 0.0))
    if context.get("flat_hem"):
        # hem disappears into a band seam; shallow bands cannot absorb
        # front/back arc differences, so keep both hems straight
        hem_curve = 0.0
        front_dip = 0.0
    back_panel, bref = bodice_panel("back", d_back, 0.0, BACK_Z, hem_splits)

    interfaces = {key: [] for key in _PART_INTERFACES["shirt"]}
    panels = [back_panel]

    if not open_front:
        front_panel, fref = bodice_panel("front", d_front, front_dip,
                                         FRONT_Z, hem_splits)
        panels.insert(0, front_panel)
        interfaces["hem"] = ([("bodice_front", i, 1) for i in fref["hem"]]
                             + [("bodice_back", i, 1) for i in bref["hem"]])
        interfaces["side_l"] = [("bodice_front", fref["side_l"], -1),
                                ("bodice_back", bref["side_l"], -1)]
        interfaces["side_r"] = [("bodice_front", fref["side_r"], 1),
                                ("bodice_back", bref["side_r"], 1)]
        interfaces["shoulder_l"] = [("bodice_front", fref["shoulder_l"], 1),
                                    ("bodice_back", bref["shoulder_l"], 1)]
        interfaces["shoulder_r"] = [("bodice_front", fref["shoulder_r"], 1),
                                    ("bodice_back", bref["shoulder_r"], 1)]
        interfaces["armhole_l_front"] = [("bodice_front", fref["armhole_l"], 1)]
        interfaces["armhole_r_front"] = [("bodice_front", fref["armhole_r"], 1)]
        interfaces["neckline_front"] = [("bodice_front", fref["neck"], 1)]
    else:
        half_panels, half_refs = _open_front_halves(
            length=length, front_dip=front_dip, tilt=tilt, hw=hw, w2=w2,
            ss=ss, nw=nw, ad=ad, drop=drop, bite=bite, side_curve=side_curve,
            hem_curve=hem_curve, d_neck=d_front, place_y=place_y,
            gap=section.get("open_gap", 0.0))
        panels = half_panels + panels
        interfaces["hem"] = (half_refs["hem"]
                             + [("bodice_back", i, 1) for i in bref["hem"]])
        interfaces["side_l"] = [half_refs["side_l"], ("bodice_back", bref["side_l"], -1)]
        interfaces["side_r"] = [half_refs["side_r"], ("bodice_back", bref["side_r"], 1)]
        interfaces["shoulder_l"] = [half_refs["shoulder_l"],
                                    ("bodice_back", bref["shoulder_l"], 1)]
        interfaces["shoulder_r"] = [half_refs["shoulder_r"],
                                    ("bodice_back", bref["shoulder_r"], 1)]
        interfaces["armhole_l_front"] = [half_refs["armhole_l"]]
        interfaces["armhole_r_front"] = [half_refs["armhole_r"]]
        interfaces["neckline_front"] = half_refs["neckline"]
        interfaces["center_front"] = half_refs["center_front"]

    interfaces["armhole_l_back"] = [("bodice_back", bref["armhole_l"], 1)]
    interfaces["armhole_r_back"] = [("bodice_back", bref["armhole_r"], 1)]
    interfaces["neckline_back"] = [("bodice_back", bref["neck"], 1)]

    return PanelSet(panels, interfaces)


def _open_front_halves(*, length, front_dip, tilt, hw, w2, ss, nw, ad, drop,
                       bite, side_curve, hem_curve, d_neck, place_y, gap):
    """Two half panels for an open-front bodice, split at center front."""
    def hem_y(x):
        return -length - tilt * x / max(hw, 1e-9)

    half_dip = (abs(hem_curve) + front_dip) / 2.0

    neck_full = qbezier((nw, 0.0), (0.0, -2.0 * d_neck), (-nw, 0.0))
    (r0, rc, r1), (l0, lc, l1) = split_qbezier(neck_full.start, neck_full.control,
                                               neck_full.end, 0.5)
    apex = r1  # (0, -d_neck)

    # right half: hem from center to the right corner, up and around
    hcr = (hw, hem_y(hw))
    center_hem_r = (0.0, hem_y(0.0))
    edges_r = [
        _shaped_edge(center_hem_r, hcr, -half_dip),
        _shaped_edge(hcr, (w2, -ad), side_curve),
        _shaped_edge((w2, -ad), (ss, -drop), bite),
        line((ss, -drop), (nw, 0.0)),
        qbezier(r0, rc, r1),
        line(apex, center_hem_r),
    ]
    _check_min_edges(edges_r, "bodice_front_r")
    panel_r = Panel("bodice_front_r", edges_r, role="bodice_front",
                    translation=(gap / 2.0, place_y, FRONT_Z))

    hcl = (-hw, hem_y(-hw))
    center_hem_l = (0.0, hem_y(0.0))
    edges_l = [
        _shaped_edge(hcl, center_hem_l, -half_dip),
        line(center_hem_l, apex),
        qbezier(l0, lc, l1),
        line((-nw, 0.0), (-ss, -drop)),
        _shaped_edge((-ss, -drop), (-w2, -ad), bite),
        _shaped_edge((-w2, -ad), hcl, side_curve),
    ]
    _check_min_edges(edges_l, "bodice_front_l")
    panel_l = Panel("bodice_front_l", edges_l, role="bodice_front",
                    translation=(-gap / 2.0, place_y, FRONT_Z))

    refs = {
        "hem": [("bodice_front_l", 0, 1), ("bodice_front_r", 0, 1)],
        "side_l": ("bodice_front_l", 5, -1),
        "side_r": ("bodice_front_r", 1, 1),
        "shoulder_l": ("bodice_front_l", 3, -1),
        "shoulder_r": ("bodice_front_r", 3, 1),
        "armhole_l": ("bodice_front_l", 4, -1),
        "armhole_r": ("bodice_front_r", 2, 1),
        "neckline": [("bodice_front_r", 4, 1), ("bodice_front_l", 2, 1)],
        "center_front": [("bodice_front_l", 1, 1), ("bodice_front_r", 5, 1)],
    }
    return [panel_l, panel_r], refs


# ---------------------------------------------------------------------------
# collar


def build_collar(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """Turtle style adds band panels matched to the neckline arcs; other
    styles shape the bodice neckline only and contribute no panels.

    neckline_targets: {"front": [arc, ...], "back": [arc]}. The front
    list has two entries on open-front bodices; the band bottom edge is
    split to match piece for piece.
    """
    interfaces = {"neckline": [], "sides_l": [], "sides_r": []}
    if section.get("style", "crew") != "turtle":
        return PanelSet([], interfaces)
    targets = context.get("neckline_targets")
    if not targets:
        return PanelSet([], interfaces)

    h = max(section.get("band_height", 4.0), 1.0)
    ease = section.get("band_ease", 1.05 * body.neck) / body.neck
    ext = max(ease - 1.0, 0.0) * body.neck / 4.0  # same on both panels

    panels = []
    for tag, arcs, z in (("front", list(targets["front"]), FRONT_Z * 0.75),
                         ("back", list(targets["back"]), BACK_Z * 0.75)):
        name = f"collar_band_{tag}"
        bottom_w = sum(arcs)
        top_w = bottom_w + 2.0 * ext
        edges = []
        cursor = (-bottom_w / 2.0, 0.0)
        for arc in arcs:
            nxt = (cursor[0] + arc, 0.0)
            edges.append(line(cursor, nxt))
            cursor = nxt
        bottom_idx = list(range(len(edges)))
        edges.append(line((bottom_w / 2.0, 0.0), (top_w / 2.0, h)))
        side_r_idx = len(edges) - 1
        edges.append(line((top_w / 2.0, h), (-top_w / 2.0, h)))
        edges.append(line((-top_w / 2.0, h), (-bottom_w / 2.0, 0.0)))
        side_l_idx = len(edges) - 1
        _check_min_edges(edges, name)
        panels.append(Panel(name, edges, role="collar_band",
                            translation=(0.0, body.shoulder_line + 1.0, z)))
        interfaces["neckline"].extend((name, i, 1) for i in bottom_idx)
        interfaces["sides_l"].append((name, side_l_idx, -1))
        interfaces["sides_r"].append((name, side_r_idx, 1))
    return PanelSet(panels, interfaces)


# ---------------------------------------------------------------------------
# sleeve


def build_sleeve(section: dict, body: BodyModel, context: dict) -> PanelSet:
    """Two sleeve panels with cap arcs solved against the armholes.

    The bicep width follows connecting_width standalone; under assembly
    the cap chord is derived from the armhole targets instead so the
    solved arcs always fit.
    """
    interfaces = {key: [] for key in _PART_INTERFACES["sleeve"]}
    if section.get("sleeveless", False):
        return PanelSet([], interfaces)

    targets = context.get("armhole_targets")  # (front_arc, back_arc)
    place = context.get("place_y", body.shoulder_line)

    sl = max(section["length"], 6.0)
    drop = _clamp(section.get("underarm_drop", 0.0), 0.0, 6.0)
    ch = max(section.get("cap_height", 8.0) + 0.5 * section.get("puff", 0.0), 2.0)

    if targets is not None:
        t_front, t_back = targets
        chord_budget = 0.96 * min(t_front, t_back)
        # the cap spans from the underarm at -drop up to the apex at +ch;
        # cap that rise so the chord always equals the budget exactly
        v_max = 0.95 * math.sqrt(max(chord_budget ** 2 - 9.0, 0.01))
        drop = min(drop, max(v_max - 1.0, 0.0))
        ch = _clamp(ch, 1.0, max(v_max - drop, 1.0))
        bw2 = math.sqrt(max(chord_budget ** 2 - (ch + drop) ** 2, 1.0))
    else:
        t_front = t_back = None
        # circumference parameter; the flat panel spans half of it
        bw2 = max(section["connecting_width"] / 4.0, 3.0)

    ew2 = max(section["end_width"] / 4.0, 2.0)
    mw2 = max(section.get("mid_width", section["end_width"]) / 4.0, 2.0)

    y_hem = -max(sl - ch, 0.15 * sl)
    y_hem = min(y_hem, -drop - 2.0)
    t_frac = _clamp(section.get("taper_start", 0.5 * body.arm_length)
                    / body.arm_length, 0.25, 0.85)
    y_mid = -t_frac * abs(y_hem)
    use_mid = (y_mid < -drop - 1.0) and (y_mid > y_hem + 1.0)

    ease = section.get("shoulder_ease", 0.0)
    puff = section.get("puff", 0.0)
    # both side seams bow into the panel: cap them against its half-width
    under_curve = min(section.get("underarm_curve", 0.0),
                      0.4 * min(ew2, mw2, bw2))
    hem_depth = -(section.get("opening_dip", 0.0) + 0.5 * section.get("wrist_curve", 0.0))

    asym = bool(section.get("asymmetric", False))
    shorten = section.get("asym_diff", 0.0) if asym else 0.0

    def sleeve_panel(side: str):
        name = f"sleeve_{side}"
        y_hem_s = y_hem
        if side == "l" and shorten > 0.0:
            y_hem_s = min(y_hem + shorten, -drop - 2.0)
        y_mid_s = y_mid
        mid_ok = use_mid and (y_mid_s < -drop - 1.0) and (y_mid_s > y_hem_s + 1.0)

        under_f = (bw2, -drop)
        under_b = (-bw2, -drop)
        apex = (0.0, ch)

        edges = [_shaped_edge((-ew2, y_hem_s), (ew2, y_hem_s), hem_depth)]
        hem_idx = 0
        front_side_idx = []  # hem-to-underarm order
        # the underarm bow only hugs a tapering seam; on a flared sleeve
        # its inward side flips outward and would cross the hem
        if mid_ok:
            edges.append(line((ew2, y_hem_s), (mw2, y_mid_s)))
            front_side_idx.append(len(edges) - 1)
            upper_bow = under_curve if bw2 >= mw2 else 0.0
            edges.append(_shaped_edge((mw2, y_mid_s), under_f, upper_bow))
            front_side_idx.append(len(edges) - 1)
        else:
            bow = under_curve if bw2 >= ew2 else 0.0
            edges.append(_shaped_edge((ew2, y_hem_s), under_f, bow))
            front_side_idx.append(len(edges) - 1)
        # caps bulge outward (away from the panel) like a rounded sleeve head
        if t_front is None:
            edges.append(qbezier(under_f, (bw2 * 0.55, ch + 0.6 * ease + 0.6 * puff),
                                 apex))
        else:
            edges.append(solve_edge_for_length(under_f, apex, t_front, side=-1.0))
        cap_front_idx = len(edges) - 1
        if t_back is None:
            edges.append(qbezier(apex, (-bw2 * 0.55, ch + 0.6 * ease + 0.6 * puff),
                                 under_b))
        else:
            edges.append(solve_edge_for_length(apex, under_b, t_back, side=-1.0))
        cap_back_idx = len(edges) - 1
        back_side_idx = []  # hem-to-underarm order, matching the front list
        if mid_ok:
            upper_bow = under_curve if bw2 >= mw2 else 0.0
            edges.append(_shaped_edge(under_b, (-mw2, y_mid_s), upper_bow))
            upper = len(edges) - 1
            edges.append(line((-mw2, y_mid_s), (-ew2, y_hem_s)))
            back_side_idx = [len(edges) - 1, upper]
        else:
            bow = under_curve if bw2 >= ew2 else 0.0
            edges.append(_shaped_edge(under_b, (-ew2, y_hem_s), bow))
            back_side_idx = [len(edges) - 1]
        _check_min_edges(edges, name)

        dx = (body.shoulder_width / 2.0 + 6.0)
        rot = 90.0 - section.get("angle", 30.0)
        panel = Panel(name, edges, role="sleeve",
                      translation=(-dx if side == "l" else dx, place - ch, FRONT_Z / 2),
                      rotation=(0.0, 0.0, rot if side == "l" else -rot))
        return panel, {"hem": hem_idx, "cap_front": cap_front_idx,
                       "cap_back": cap_back_idx, "front_side": front_side_idx,
                       "back_side": back_side_idx}

    left, lref = sleeve_panel("l")
    right, rref = sleeve_panel("r")

    interfaces["cap_front_l"] = [("sleeve_l", lref["cap_front"], 1)]
    interfaces["cap_back_l"] = [("sleeve_l", lref["cap_back"], 1)]
    interfaces["cap_front_r"] = [("sleeve_r", rref["cap_front"], 1)]
    interfaces["cap_back_r"] = [("sleeve_r", rref["cap_back"], 1)]
    interfaces["hem_l"] = [("sleeve_l", lref["hem"], 1)]
    interfaces["hem_r"] = [("sleeve_r", rref["hem"], 1)]
    interfaces["side_front_l"] = [("sleeve_l", i, 1) for i in lref["front_side"]]
    interfaces["side_back_l"] = [("sleeve_l", i, -1) for i in lref["back_side"]]
    interfaces["side_front_r"] = [("sleeve_r", i, 1) for i in rref["front_side"]]
    interfaces["side_back_r"] = [("sleeve_r", i, -1) for i in rref["back_side"]]
    return PanelSet([left, right], interfaces)
