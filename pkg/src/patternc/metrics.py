"""Compare two compiled patterns: panel chamfer distance and F-score.

Panels pair by role tag, so renaming a panel does not register as a shape
change. Each panel boundary is sampled into a point cloud in local
coordinates, centered on its centroid, and rotated onto its principal
axis before comparison; layout placement and panel-local rigid motion
therefore score as identical. Roles present on only one side contribute
a fixed penalty per panel.
"""

from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np
from scipy.spatial import cKDTree

from .errors import MetricsError
from .geometry import Panel, sample_edge

# per-panel charge for a role with no counterpart; large against typical
# aligned-panel distances (fractions of a cm) without drowning the mean
UNMATCHED_PENALTY_CM = 10.0

DEFAULT_TAU_CM = 1.0
DEFAULT_SAMPLES_PER_EDGE = 40


@dataclasses.dataclass
class MetricReport:
    """Aggregate and per-panel comparison scores."""

    chamfer_cm: float
    fscore: float
    per_panel: list
    tau_cm: float

    def __post_init__(self):
        if self.chamfer_cm < 0.0 or not math.isfinite(self.chamfer_cm):
            raise MetricsError(f"chamfer_cm must be >= 0, got {self.chamfer_cm}")
        if not 0.0 <= self.fscore <= 1.0:
            raise MetricsError(f"fscore must lie in [0, 1], got {self.fscore}")
        if self.tau_cm <= 0.0:
            raise MetricsError(f"tau_cm must be positive, got {self.tau_cm}")

    def to_dict(self) -> dict:
        return {
            "chamfer_cm": self.chamfer_cm,
            "fscore": self.fscore,
            "per_panel": [dict(entry) for entry in self.per_panel],
            "tau_cm": self.tau_cm,
        }


# ---------------------------------------------------------------------------
# point clouds


def _cloud(panel: Panel, samples_per_edge: int) -> np.ndarray:
    # trailing sample of each edge coincides with the next edge's start
    return np.concatenate(
        [sample_edge(e, samples_per_edge)[:-1] for e in panel.edges])


def _canonical(cloud: np.ndarray) -> np.ndarray:
    """Centroid at the origin, principal axis along x, fixed handedness.

    The principal direction is only defined modulo pi; the residual flip
    is resolved by the sign of the third moment along x (falling back to
    y), which is stable for the lopsided outlines garment panels have.
    Fully point-symmetric outlines keep whichever orientation they came
    in with, which is itself symmetric, so nothing is lost.
    """
    c = cloud - cloud.mean(axis=0)
    mxx = float((c[:, 0] ** 2).mean())
    myy = float((c[:, 1] ** 2).mean())
    mxy = float((c[:, 0] * c[:, 1]).mean())
    theta = 0.5 * math.atan2(2.0 * mxy, mxx - myy)
    ct, st = math.cos(theta), math.sin(theta)
    r = np.column_stack([c[:, 0] * ct + c[:, 1] * st,
                         -c[:, 0] * st + c[:, 1] * ct])
    sx = float((r[:, 0] ** 3).sum())
    sy = float((r[:, 1] ** 3).sum())
    tol = 1e-9 * float(((r ** 2).sum(axis=1) ** 1.5).sum())
    if sx < -tol or (abs(sx) <= tol and sy < -tol):
        r = -r
    return r


def _pair_scores(ca: np.ndarray, cb: np.ndarray, tau_cm: float) -> tuple:
    ab = cKDTree(cb).query(ca)[0]
    ba = cKDTree(ca).query(cb)[0]
    chamfer = 0.5 * (float(ab.mean()) + float(ba.mean()))
    precision = float((ab <= tau_cm).mean())
    recall = float((ba <= tau_cm).mean())
    if precision + recall == 0.0:
        return chamfer, 0.0
    return chamfer, 2.0 * precision * recall / (precision + recall)


# ---------------------------------------------------------------------------
# role matching


def _group_by_role(panels: list) -> dict:
    groups: dict = {}
    for p in sorted(panels, key=lambda p: p.name):
        groups.setdefault(p.role, []).append(p)
    return groups


def _best_assignment(cost: list, n_a: int, n_b: int) -> list:
    """Index pairs (i, j) minimizing total cost; exhaustive over the
    larger side, which also chooses who goes unmatched. Ties resolve to
    the lexicographically first candidate."""
    k = min(n_a, n_b)
    best, best_total = None, math.inf
    if n_a <= n_b:
        candidates = ([(i, js[i]) for i in range(k)]
                      for js in itertools.permutations(range(n_b), k))
    else:
        candidates = ([(ids[j], j) for j in range(k)]
                      for ids in itertools.permutations(range(n_a), k))
    for pairs in candidates:
        total = sum(cost[i][j] for i, j in pairs)
        if total < best_total:
            best, best_total = pairs, total
    return best


def _penalty_entry(role: str, a_name, b_name) -> dict:
    return {"role": role, "a": a_name, "b": b_name,
            "chamfer_cm": UNMATCHED_PENALTY_CM, "fscore": 0.0,
            "matched": False}


# ---------------------------------------------------------------------------
# public entry points


def pattern_chamfer(a, b, samples_per_edge: int = DEFAULT_SAMPLES_PER_EDGE,
                    tau_cm: float = DEFAULT_TAU_CM) -> MetricReport:
    """Symmetric chamfer distance and F-score between two patterns.

    Per matched panel pair, chamfer is the mean nearest-neighbor
    distance averaged over both directions; F-score is the harmonic
    mean of the fractions of points landing within tau_cm of the other
    boundary. The report averages over all panel slots, penalized ones
    included.
    """
    if samples_per_edge < 2:
        raise ValueError("samples_per_edge must be at least 2")
    if tau_cm <= 0.0:
        raise ValueError("tau_cm must be positive")
    if not a.panels or not b.panels:
        raise MetricsError("cannot compare a pattern with no panels",
                           code="EMPTY_PATTERN")

    groups_a = _group_by_role(a.panels)
    groups_b = _group_by_role(b.panels)
    entries = []
    for role in sorted(set(groups_a) | set(groups_b)):
        pa = groups_a.get(role, [])
        pb = groups_b.get(role, [])
        ca = [_canonical(_cloud(p, samples_per_edge)) for p in pa]
        cb = [_canonical(_cloud(p, samples_per_edge)) for p in pb]
        scores = [[_pair_scores(x, y, tau_cm) for y in cb] for x in ca]
        paired_a, paired_b = set(), set()
        if pa and pb:
            cost = [[s[0] for s in row] for row in scores]
            for i, j in _best_assignment(cost, len(pa), len(pb)):
                chamfer, fscore = scores[i][j]
                entries.append({"role": role, "a": pa[i].name, "b": pb[j].name,
                                "chamfer_cm": chamfer, "fscore": fscore,
                                "matched": True})
                paired_a.add(i)
                paired_b.add(j)
        entries.extend(_penalty_entry(role, p.name, None)
                       for i, p in enumerate(pa) if i not in paired_a)
        entries.extend(_penalty_entry(role, None, p.name)
                       for j, p in enumerate(pb) if j not in paired_b)

    entries.sort(key=lambda e: (e["role"], e["a"] or "", e["b"] or ""))
    chamfer = sum(e["chamfer_cm"] for e in entries) / len(entries)
    fscore = sum(e["fscore"] for e in entries) / len(entries)
    return MetricReport(chamfer_cm=chamfer, fscore=fscore,
                        per_panel=entries, tau_cm=tau_cm)


def pattern_fscore(a, b, tau_cm: float = DEFAULT_TAU_CM,
                   samples_per_edge: int = DEFAULT_SAMPLES_PER_EDGE) -> float:
    """F-score at tau_cm; shares matching and sampling with pattern_chamfer."""
    return pattern_chamfer(a, b, samples_per_edge, tau_cm).fscore
