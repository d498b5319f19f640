"""2D panel geometry: edges, panels, lengths, sampling, simplicity.

Panels live in local frames with units of centimeters. An edge is a
straight segment or a quadratic Bezier arc; a panel is a closed
counterclockwise loop of edges plus a 3D placement hint (translation in
cm, rotation in degrees) that downstream consumers may use to drape the
panel around a body. All pattern math happens in 2D.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import BuildError

LINE = "LINE"
QBEZIER = "QBEZIER"

# closure tolerance for panel loops, cm
LOOP_EPS = 1e-6
# samples per edge used by the simplicity check
SIMPLICITY_SAMPLES = 32


@dataclasses.dataclass(frozen=True)
class Edge:
    """One boundary piece, traversed start -> end."""

    kind: str
    start: tuple
    end: tuple
    control: tuple | None = None

    def __post_init__(self):
        if self.kind not in (LINE, QBEZIER):
            raise BuildError(f"unsupported edge kind {self.kind!r}", code="UNSUPPORTED_KIND")
        if self.kind == QBEZIER and self.control is None:
            raise BuildError("QBEZIER edge needs a control point", code="UNSUPPORTED_KIND")
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))
        object.__setattr__(self, "end", (float(self.end[0]), float(self.end[1])))
        if self.control is not None:
            object.__setattr__(self, "control", (float(self.control[0]), float(self.control[1])))

    def reversed(self) -> "Edge":
        return Edge(self.kind, self.end, self.start, self.control)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "start": list(self.start), "end": list(self.end)}
        if self.kind == QBEZIER:
            d["control"] = list(self.control)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Edge":
        control = d.get("control")
        return cls(d["kind"], tuple(d["start"]), tuple(d["end"]),
                   tuple(control) if control is not None else None)


def line(start, end) -> Edge:
    return Edge(LINE, start, end)


def qbezier(start, control, end) -> Edge:
    return Edge(QBEZIER, start, end, control)


# ---------------------------------------------------------------------------
# lengths


def edge_length(edge: Edge) -> float:
    """Exact arc length; closed form for both edge kinds."""
    if edge.kind == LINE:
        return math.hypot(edge.end[0] - edge.start[0], edge.end[1] - edge.start[1])
    return _qbezier_length(edge.start, edge.control, edge.end)


def _qbezier_length(p0, c, p1) -> float:
    # B'(t) = 2(At + B) with A = P0 - 2C + P1, B = C - P0, so the length
    # is 2 * integral of sqrt(a t^2 + b t + cc) with the coefficients below.
    ax, ay = p0[0] - 2.0 * c[0] + p1[0], p0[1] - 2.0 * c[1] + p1[1]
    bx, by = c[0] - p0[0], c[1] - p0[1]
    a = ax * ax + ay * ay
    b = 2.0 * (ax * bx + ay * by)
    cc = bx * bx + by * by
    scale = max(a, cc, 1e-30)
    if a <= 1e-14 * scale:
        # control at the chord midpoint: the curve is the straight chord
        return 2.0 * math.sqrt(cc)
    disc = 4.0 * a * cc - b * b  # >= 0 by Cauchy-Schwarz
    sa = math.sqrt(a)
    if disc <= 1e-14 * scale * scale:
        # collinear control point: |B'(t)|/2 = sa * |t - t0|
        t0 = -b / (2.0 * a)

        def ramp(t):
            return (t - t0) * abs(t - t0) / 2.0

        return 2.0 * sa * (ramp(1.0) - ramp(0.0))

    def antiderivative(t):
        s = math.sqrt(a * t * t + b * t + cc)
        term1 = (2.0 * a * t + b) * s / (4.0 * a)
        term2 = disc / (8.0 * a * sa) * math.log(2.0 * a * t + b + 2.0 * sa * s)
        return term1 + term2

    return 2.0 * (antiderivative(1.0) - antiderivative(0.0))


def polyline_length(points: np.ndarray) -> float:
    pts = np.asarray(points, dtype=float)
    return float(np.sum(np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))))


# ---------------------------------------------------------------------------
# sampling and curve helpers


def bezier_point(p0, c, p1, t: float) -> tuple:
    u = 1.0 - t
    return (u * u * p0[0] + 2.0 * u * t * c[0] + t * t * p1[0],
            u * u * p0[1] + 2.0 * u * t * c[1] + t * t * p1[1])


def sample_edge(edge: Edge, n: int) -> np.ndarray:
    """n points at uniform parameter values t = i/(n-1), shape (n, 2)."""
    if n < 2:
        raise ValueError("need at least 2 samples")
    t = np.linspace(0.0, 1.0, n)
    p0 = np.asarray(edge.start)
    p1 = np.asarray(edge.end)
    if edge.kind == LINE:
        return p0[None, :] + t[:, None] * (p1 - p0)[None, :]
    c = np.asarray(edge.control)
    u = (1.0 - t)[:, None]
    tt = t[:, None]
    return u * u * p0[None, :] + 2.0 * u * tt * c[None, :] + tt * tt * p1[None, :]


def split_qbezier(p0, c, p1, t: float):
    """De Casteljau split into two quadratic pieces at parameter t."""
    a = (p0[0] + t * (c[0] - p0[0]), p0[1] + t * (c[1] - p0[1]))
    b = (c[0] + t * (p1[0] - c[0]), c[1] + t * (p1[1] - c[1]))
    m = (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
    return (p0, a, m), (m, b, p1)


def control_for_bulge(p0, p1, depth: float) -> tuple:
    """Control point displaced `depth` cm from the chord midpoint.

    Positive depth pushes to the left of the p0->p1 direction. The curve
    passes depth/2 from the chord at its apex.
    """
    mx, my = (p0[0] + p1[0]) / 2.0, (p0[1] + p1[1]) / 2.0
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    norm = math.hypot(dx, dy)
    if norm < 1e-12:
        raise BuildError("degenerate chord for curved edge", code="DEGENERATE_GEOMETRY")
    return (mx - dy / norm * depth, my + dx / norm * depth)


def curved_edge(p0, p1, depth: float) -> Edge:
    """LINE when depth is ~0, else the bulged QBEZIER."""
    if abs(depth) < 1e-9:
        return line(p0, p1)
    return qbezier(p0, control_for_bulge(p0, p1, depth), p1)


def solve_edge_for_length(p0, p1, target: float, *, side: float = 1.0,
                          tol: float = 1e-9) -> Edge:
    """Edge from p0 to p1 whose arc length equals `target`.

    Straight if the target equals the chord; otherwise a QBEZIER bulged
    to `side` (+1 left of travel) found by bisection on the control
    offset. Arc length grows monotonically with the offset.
    """
    chord = math.hypot(p1[0] - p0[0], p1[1] - p0[1])
    if chord < 1e-12:
        raise BuildError("degenerate chord in length solve", code="DEGENERATE_GEOMETRY")
    if target < chord - 1e-9:
        raise BuildError(
            f"cannot fit arc of length {target:.3f} on a chord of {chord:.3f}",
            code="SOLVE_FAILED")
    if target <= chord + 1e-12:
        return line(p0, p1)
    lo, hi = 0.0, max(chord, target)
    while _qbezier_length(p0, control_for_bulge(p0, p1, side * hi), p1) < target:
        hi *= 2.0
        if hi > 1e6:
            raise BuildError("length solve diverged", code="SOLVE_FAILED")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _qbezier_length(p0, control_for_bulge(p0, p1, side * mid), p1) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return qbezier(p0, control_for_bulge(p0, p1, side * 0.5 * (lo + hi)), p1)


# ---------------------------------------------------------------------------
# panels


@dataclasses.dataclass
class Panel:
    """Closed CCW loop of edges with a placement hint.

    role groups panels that play the same part across patterns (e.g.
    both sleeves have role "sleeve"); name is unique within a pattern.
    """

    name: str
    edges: list
    role: str = ""
    translation: tuple = (0.0, 0.0, 0.0)
    rotation: tuple = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.role:
            self.role = self.name

    def closure_error(self) -> float:
        worst = 0.0
        for prev, nxt in zip(self.edges, self.edges[1:] + self.edges[:1]):
            worst = max(worst, math.hypot(prev.end[0] - nxt.start[0],
                                          prev.end[1] - nxt.start[1]))
        return worst

    def is_closed(self, eps: float = LOOP_EPS) -> bool:
        return bool(self.edges) and self.closure_error() <= eps

    def sampled_loop(self, samples_per_edge: int = SIMPLICITY_SAMPLES) -> np.ndarray:
        """Boundary polyline; duplicate joint points dropped.

        Straight edges contribute a single segment: subdividing them
        only creates exactly-collinear sample pairs that the
        intersection test must then special-case.
        """
        chunks = [sample_edge(e, 2 if e.kind == LINE else samples_per_edge)[:-1]
                  for e in self.edges]
        return np.concatenate(chunks, axis=0)

    def signed_area(self, samples_per_edge: int = SIMPLICITY_SAMPLES) -> float:
        pts = self.sampled_loop(samples_per_edge)
        x, y = pts[:, 0], pts[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def is_ccw(self) -> bool:
        return self.signed_area() > 0.0

    def perimeter(self) -> float:
        return sum(edge_length(e) for e in self.edges)

    def translated(self, dx: float, dy: float) -> "Panel":
        def mv(p):
            return (p[0] + dx, p[1] + dy)

        edges = [Edge(e.kind, mv(e.start), mv(e.end),
                      mv(e.control) if e.control else None) for e in self.edges]
        return dataclasses.replace(self, edges=edges)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "role": self.role,
            "edges": [e.to_dict() for e in self.edges],
            "translation": list(self.translation),
            "rotation": list(self.rotation),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Panel":
        return cls(
            name=d["name"],
            edges=[Edge.from_dict(e) for e in d["edges"]],
            role=d.get("role", ""),
            translation=tuple(d.get("translation", (0.0, 0.0, 0.0))),
            rotation=tuple(d.get("rotation", (0.0, 0.0, 0.0))),
        )


def mirror_edges_x(edges: list) -> list:
    """Mirror a closed edge loop about x=0, preserving CCW orientation.

    Mirroring alone flips orientation, so the loop is also reversed.
    """
    def mx(p):
        return (-p[0], p[1])

    flipped = [Edge(e.kind, mx(e.end), mx(e.start),
                    mx(e.control) if e.control else None) for e in edges]
    return list(reversed(flipped))


def panel_is_simple(panel: Panel, samples_per_edge: int = SIMPLICITY_SAMPLES) -> bool:
    """True iff the sampled boundary has no non-adjacent self-intersection.

    Each edge contributes `samples_per_edge` uniform samples; the
    resulting closed polyline is tested pairwise with adjacent segments
    (sharing an endpoint in the chain) excluded.
    """
    pts = panel.sampled_loop(samples_per_edge)
    return not _polyline_self_intersects(pts)


def _polyline_self_intersects(pts: np.ndarray) -> bool:
    """Vectorized pairwise proper/touching intersection over a closed loop."""
    m = len(pts)
    if m < 4:
        return False
    a = pts
    b = np.roll(pts, -1, axis=0)
    scale = max(float(np.ptp(pts[:, 0])), float(np.ptp(pts[:, 1])), 1.0)
    eps = 1e-9 * scale * scale

    idx_i, idx_j = np.triu_indices(m, k=2)
    # wrap-around: segment m-1 and segment 0 are adjacent
    keep = ~((idx_i == 0) & (idx_j == m - 1))
    idx_i, idx_j = idx_i[keep], idx_j[keep]

    p1, p2 = a[idx_i], b[idx_i]
    q1, q2 = a[idx_j], b[idx_j]

    def cross(o, u, v):
        return ((u[:, 0] - o[:, 0]) * (v[:, 1] - o[:, 1])
                - (u[:, 1] - o[:, 1]) * (v[:, 0] - o[:, 0]))

    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)

    proper = (d1 * d2 < -eps) & (d3 * d4 < -eps)
    if bool(np.any(proper)):
        return True

    # touching / collinear-overlap cases
    sus = (np.abs(d1) <= eps) | (np.abs(d2) <= eps) | (np.abs(d3) <= eps) | (np.abs(d4) <= eps)
    if not bool(np.any(sus)):
        return False
    si = np.nonzero(sus)[0]
    for k in si:
        if _segments_touch(p1[k], p2[k], q1[k], q2[k], eps):
            return True
    return False


def _segments_touch(p1, p2, q1, q2, eps: float) -> bool:
    def cross2(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])

    def on_seg(a, b, p):
        return (min(a[0], b[0]) - eps <= p[0] <= max(a[0], b[0]) + eps
                and min(a[1], b[1]) - eps <= p[1] <= max(a[1], b[1]) + eps)

    d1 = cross2(q1, q2, p1)
    d2 = cross2(q1, q2, p2)
    d3 = cross2(p1, p2, q1)
    d4 = cross2(p1, p2, q2)
    if abs(d1) <= eps and on_seg(q1, q2, p1):
        return True
    if abs(d2) <= eps and on_seg(q1, q2, p2):
        return True
    if abs(d3) <= eps and on_seg(p1, p2, q1):
        return True
    if abs(d4) <= eps and on_seg(p1, p2, q2):
        return True
    return False


def check_panel(panel: Panel) -> list:
    """Structural problems with one panel: OPEN_LOOP, NON_SIMPLE_PANEL.

    Clockwise orientation is reported under NON_SIMPLE_PANEL with a
    distinguishing detail string.
    """
    problems = []
    if not panel.is_closed():
        problems.append({
            "code": "OPEN_LOOP", "panel": panel.name,
            "detail": f"loop closure error {panel.closure_error():.4g} cm"})
        return problems
    if not panel_is_simple(panel):
        problems.append({
            "code": "NON_SIMPLE_PANEL", "panel": panel.name,
            "detail": "boundary self-intersects"})
    elif not panel.is_ccw():
        problems.append({
            "code": "NON_SIMPLE_PANEL", "panel": panel.name,
            "detail": "boundary is clockwise"})
    return problems
