"""End-to-end acceptance suite.

One test per headline guarantee, each printing a PASS/FAIL line with the
measured value at its stated tolerance. Lines are written with capture
disabled so they appear in plain `pytest -v` output.
"""

import json
import math
import random
import sys
import time
from pathlib import Path

import numpy as np

from patternc.assembler import check_pattern, compile_garment, parse_pattern
from patternc.body import DEFAULT_BODY
from patternc.codec import (
    LossConfig,
    decode_merge,
    encode_vector,
    make_skeleton,
    masked_l1,
    numeric_loss,
)
from patternc.config import (
    default_config,
    denormalize_config,
    normalize_config,
    parse_config,
    token_ratio,
)
from patternc.geometry import (
    Panel,
    edge_length,
    line,
    panel_is_simple,
    qbezier,
    sample_edge,
)
from patternc.metrics import pattern_chamfer, pattern_fscore
from patternc.registry import NORMALIZED_FLOAT, default_registry
from patternc.sampler import run_pipeline, sample_config
from patternc.simparams import (
    EQUATION_PAIRING,
    LITERAL,
    lookup_base,
    map_scores,
    material_names,
)

DATA = Path(__file__).parent / "data"
REG = default_registry()
LISTINGS = [DATA / "listing1.json", DATA / "listing2.json"]


def _report(capsys, name: str, ok: bool, detail: str) -> None:
    with capsys.disabled():
        sys.stdout.write(f"{'PASS' if ok else 'FAIL'} {name}: {detail}\n")
        sys.stdout.flush()
    assert ok, f"{name}: {detail}"


# ---------------------------------------------------------------------------
# reference configs compile


def test_reference_listings_compile(capsys):
    compile_garment(parse_config(LISTINGS[0].read_text()), registry=REG)  # warm caches
    worst_ms, panel_counts = 0.0, []
    for path in LISTINGS:
        cfg = parse_config(path.read_text())
        t0 = time.perf_counter()
        result = compile_garment(cfg, registry=REG)
        worst_ms = max(worst_ms, (time.perf_counter() - t0) * 1e3)
        assert result.ok and result.report.ok and result.validity.ok
        assert not result.validity.failures
        panel_counts.append(len(result.pattern.panels))
    ok = panel_counts == [4, 4] and worst_ms < 50.0
    _report(capsys, "listings-compile", ok,
            f"panels={panel_counts}, worst compile {worst_ms:.1f} ms (< 50)")


# ---------------------------------------------------------------------------
# pruning keeps serializations small


def test_pruned_serialization_token_ratio(capsys):
    t0 = time.perf_counter()
    ratios = [token_ratio(sample_config(123000 + i, registry=REG), REG)
              for i in range(100)]
    elapsed = time.perf_counter() - t0
    mean = sum(ratios) / len(ratios)
    ok = 0.30 <= mean <= 0.55 and elapsed < 5.0
    _report(capsys, "token-ratio", ok,
            f"mean {mean:.3f} in [0.30, 0.55], {elapsed:.2f} s (< 5)")


# ---------------------------------------------------------------------------
# sampling pipeline: acceptance rate, zero stitching failures, determinism


def test_pipeline_thousand_samples(tmp_path, capsys):
    t0 = time.perf_counter()
    first = run_pipeline(1000, 7, out_dir=tmp_path / "a", registry=REG)
    second = run_pipeline(1000, 7, out_dir=tmp_path / "b", registry=REG)
    stitch_failures = 0
    for record in first.records:
        pattern = parse_pattern((tmp_path / "a" / record["pattern"]).read_text())
        if not check_pattern(pattern).ok:
            stitch_failures += 1
    elapsed = time.perf_counter() - t0
    rate = first.n_accepted / first.n_requested
    identical = ((tmp_path / "a" / "manifest.json").read_bytes()
                 == (tmp_path / "b" / "manifest.json").read_bytes())
    ok = (stitch_failures == 0 and rate >= 0.90 and identical
          and elapsed < 60.0)
    _report(capsys, "pipeline", ok,
            f"accepted {first.n_accepted}/1000, stitching failures "
            f"{stitch_failures}, reruns identical={identical}, "
            f"{elapsed:.1f} s (< 60)")


# ---------------------------------------------------------------------------
# codec round-trip and loss


def test_codec_round_trip_and_loss(capsys):
    failures = 0
    vectors = []
    for i in range(1000):
        cfg = sample_config(9_000_000 + i, registry=REG)
        values, mask = encode_vector(cfg, REG)
        merged = decode_merge(make_skeleton(cfg, REG), values, mask, REG)
        if merged.to_dict() != cfg.to_dict():
            failures += 1
        if i < 40:
            vectors.append((values, mask))

    # pseudometric: identity, symmetry, triangle inequality, nonnegativity
    props = True
    for (va, ma), (vb, _), (vc, _) in zip(vectors, vectors[1:], vectors[2:]):
        props &= masked_l1(va, va, ma) == 0.0
        props &= masked_l1(va, vb, ma) == masked_l1(vb, va, ma)
        props &= masked_l1(va, vb, ma) >= 0.0
        props &= (masked_l1(va, vc, ma)
                  <= masked_l1(va, vb, ma) + masked_l1(vb, vc, ma) + 1e-12)

    pred = [0.7, 0.2] + [0.0] * 74
    target = [0.45, 0.05] + [0.0] * 74
    mask = [1, 1] + [0] * 74
    lam_err = abs(numeric_loss(pred, target, mask,
                               LossConfig(lambda_n=0.1)) - 0.04)
    ok = failures == 0 and props and lam_err <= 1e-12
    _report(capsys, "codec", ok,
            f"round-trip failures {failures}/1000, pseudometric={props}, "
            f"lambda-term error {lam_err:.1e} (<= 1e-12)")


# ---------------------------------------------------------------------------
# normalization is invertible and the registry has exactly 76 float slots


def test_normalization_inverse_and_slot_count(capsys):
    slots = sum(1 for f in REG.fields if f.kind == NORMALIZED_FLOAT)
    assert slots == 76 and REG.to_dict()["float_slots"] == 76
    worst = 0.0
    for i in range(1000):
        raw = denormalize_config(sample_config(5_000_000 + i, registry=REG),
                                 REG, DEFAULT_BODY)
        back = denormalize_config(normalize_config(raw, REG, DEFAULT_BODY),
                                  REG, DEFAULT_BODY)
        for (pa, va), (pb, vb) in zip(sorted(raw.leaves()),
                                      sorted(back.leaves())):
            assert pa == pb
            if isinstance(va, float):
                worst = max(worst, abs(va - vb))
    ok = worst <= 1e-9
    _report(capsys, "normalization", ok,
            f"76 float slots, worst round-trip error {worst:.2e} (<= 1e-9)")


# ---------------------------------------------------------------------------
# geometry kernel vs dense oracles


def _oracle_arc_length(p0, c, p1, segments=100_000):
    t = np.linspace(0.0, 1.0, segments + 1)[:, None]
    pts = ((1 - t) ** 2 * np.asarray(p0) + 2 * (1 - t) * t * np.asarray(c)
           + t ** 2 * np.asarray(p1))
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=1).sum())


def _random_star_panel(rng):
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(rng.randint(4, 8)))
    pts = [(r * math.cos(t), r * math.sin(t))
           for t, r in ((t, rng.uniform(3, 20)) for t in angles)]
    edges = []
    for a, b in zip(pts, pts[1:] + pts[:1]):
        if rng.random() < 0.4:
            mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
            nx, ny = b[1] - a[1], a[0] - b[0]
            depth = rng.uniform(-0.8, 0.8)
            edges.append(qbezier(a, (mx + nx * depth, my + ny * depth), b))
        else:
            edges.append(line(a, b))
    return Panel("rand", edges)


def _oracle_is_simple(panel, samples_per_edge=32):
    pts = []
    for e in panel.edges:
        pts.extend(tuple(p) for p in sample_edge(e, samples_per_edge)[:-1])
    m = len(pts)
    span = max(max(p[0] for p in pts) - min(p[0] for p in pts),
               max(p[1] for p in pts) - min(p[1] for p in pts), 1.0)
    eps = 1e-9 * span * span

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def hit(a1, a2, b1, b2):
        d1, d2 = cross(b1, b2, a1), cross(b1, b2, a2)
        d3, d4 = cross(a1, a2, b1), cross(a1, a2, b2)
        return d1 * d2 < -eps and d3 * d4 < -eps

    for i in range(m):
        a1, a2 = pts[i], pts[(i + 1) % m]
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if hit(a1, a2, pts[j], pts[(j + 1) % m]):
                return False
    return True


def test_geometry_matches_dense_oracles(capsys):
    rng = random.Random(414243)
    worst = 0.0
    for _ in range(100):
        p0 = (rng.uniform(-50, 50), rng.uniform(-50, 50))
        c = (rng.uniform(-80, 80), rng.uniform(-80, 80))
        p1 = (rng.uniform(-50, 50), rng.uniform(-50, 50))
        err = abs(edge_length(qbezier(p0, c, p1)) - _oracle_arc_length(p0, c, p1))
        worst = max(worst, err)

    disagreements, simple_seen, crossing_seen = 0, 0, 0
    for _ in range(100):
        panel = _random_star_panel(rng)
        want = _oracle_is_simple(panel)
        if panel_is_simple(panel) != want:
            disagreements += 1
        simple_seen += want
        crossing_seen += not want
    ok = (worst <= 1e-3 and disagreements == 0
          and simple_seen >= 5 and crossing_seen >= 5)
    _report(capsys, "geometry", ok,
            f"arc-length worst error {worst:.2e} cm (<= 1e-3), simplicity "
            f"disagreements {disagreements}/100 "
            f"({simple_seen} simple / {crossing_seen} crossing)")


# ---------------------------------------------------------------------------
# material parameter mapping


def test_simparams_identity_literal_monotone(capsys):
    identity_exact = True
    for name in material_names():
        base, scores = lookup_base(name)
        identity_exact &= map_scores(base, scores, scores) == base

    # literal affine form, equation pairing, against hand-computed values
    base, scores = lookup_base("cotton")  # membE 1e4, bendE 1e-4,
    # density 0.15, thickness 5e-4; scores soft 6, light 6, smooth 6, thick 4
    got = map_scores(base, scores, type(scores)(8, 9, 8, 8),
                     mode=LITERAL, pairing=EQUATION_PAIRING)
    hand = {
        "membE": 10.0 ** (0.1 * 2 * math.log10(1e4)),
        "bendE": 10.0 ** (0.1 * 3 * math.log10(1e-4)),
        "density": 0.1 * 2 * 0.15,
        "thickness": 0.1 * 4 * 5e-4,
    }
    literal_err = max(abs(getattr(got, k) - v) / v for k, v in hand.items())

    monotone = True
    for name in material_names():
        base, scores = lookup_base(name)
        for t in range(1, 11):
            prev_memb = None
            for s in range(1, 11):
                p = map_scores(base, scores,
                               type(scores)(s, scores.light, scores.smooth, t))
                if prev_memb is not None:
                    monotone &= p.membE > prev_memb
                prev_memb = p.membE
        for s in range(1, 11):
            prev_thick = None
            for t in range(1, 11):
                p = map_scores(base, scores,
                               type(scores)(s, scores.light, scores.smooth, t))
                if prev_thick is not None:
                    monotone &= p.thickness > prev_thick
                prev_thick = p.thickness

    ok = identity_exact and literal_err <= 1e-12 and monotone
    _report(capsys, "simparams", ok,
            f"identity exact={identity_exact}, literal rel error "
            f"{literal_err:.1e} (<= 1e-12), 10x10 grid monotone={monotone}")


# ---------------------------------------------------------------------------
# pattern metrics vs brute force


def _aligned_cloud(panel, n):
    cloud = np.concatenate([sample_edge(e, n)[:-1] for e in panel.edges])
    c = cloud - cloud.mean(axis=0)
    mxx, myy = float((c[:, 0] ** 2).mean()), float((c[:, 1] ** 2).mean())
    mxy = float((c[:, 0] * c[:, 1]).mean())
    theta = 0.5 * math.atan2(2 * mxy, mxx - myy)
    ct, st = math.cos(theta), math.sin(theta)
    r = np.column_stack([c[:, 0] * ct + c[:, 1] * st,
                         -c[:, 0] * st + c[:, 1] * ct])
    sx, sy = float((r[:, 0] ** 3).sum()), float((r[:, 1] ** 3).sum())
    tol = 1e-9 * float(((r ** 2).sum(axis=1) ** 1.5).sum())
    if sx < -tol or (abs(sx) <= tol and sy < -tol):
        r = -r
    return r


def test_metrics_match_bruteforce(capsys):
    self_ok = True
    for path in LISTINGS:
        pattern = compile_garment(parse_config(path.read_text()),
                                  registry=REG).pattern
        self_ok &= pattern_chamfer(pattern, pattern).chamfer_cm == 0.0
        self_ok &= pattern_fscore(pattern, pattern) == 1.0

    from patternc.assembler import Pattern
    rng = np.random.default_rng(31415)
    a_panels, b_panels = [], []
    for i, base in enumerate([
        [(0.0, 0.0), (12.0, 0.0), (11.0, 6.0), (1.0, 4.0)],
        [(0.0, 0.0), (8.0, 1.0), (9.0, 9.0), (-1.0, 7.0)],
        [(0.0, 0.0), (20.0, 0.0), (18.0, 3.0), (2.0, 5.0)],
    ]):
        moved = [(x + dx, y + dy) for (x, y), (dx, dy)
                 in zip(base, rng.normal(0.0, 0.2, (4, 2)))]
        mk = lambda name, pts: Panel(name, [
            line(pts[k], pts[(k + 1) % 4]) for k in range(4)], role=f"r{i}")
        a_panels.append(mk(f"a{i}", base))
        b_panels.append(mk(f"b{i}", moved))
    a = Pattern(panels=a_panels, stitches=[])
    b = Pattern(panels=b_panels, stitches=[])

    report = pattern_chamfer(a, b, samples_per_edge=40, tau_cm=1.0)
    chs, fs = [], []
    for pa, pb in zip(a_panels, b_panels):
        ca, cb = _aligned_cloud(pa, 40), _aligned_cloud(pb, 40)
        d = np.linalg.norm(ca[:, None, :] - cb[None, :, :], axis=2)
        ab, ba = d.min(axis=1), d.min(axis=0)
        chs.append(0.5 * (float(ab.mean()) + float(ba.mean())))
        prec, rec = float((ab <= 1.0).mean()), float((ba <= 1.0).mean())
        fs.append(0.0 if prec + rec == 0 else 2 * prec * rec / (prec + rec))
    ch_err = abs(report.chamfer_cm - sum(chs) / 3)
    f_err = abs(report.fscore - sum(fs) / 3)
    ok = self_ok and ch_err <= 1e-6 and f_err <= 1e-6
    _report(capsys, "metrics", ok,
            f"self-comparison exact={self_ok}, toy oracle errors "
            f"chamfer {ch_err:.1e} / F {f_err:.1e} (<= 1e-6)")


# ---------------------------------------------------------------------------
# garment-language extensions, asserted geometrically


def _world_y(pattern, ref):
    panel = pattern.panel(ref[0])
    return panel.translation[1] + panel.edges[ref[1]].start[1]


def _width_at(panel, y, band=0.4):
    cloud = np.concatenate([sample_edge(e, 64) for e in panel.edges])
    rows = cloud[np.abs(cloud[:, 1] - y) <= band]
    return float(rows[:, 0].max() - rows[:, 0].min())


def test_garment_language_extensions(capsys):
    # open front: the center-front edge pair stays unstitched
    cfg = default_config(REG, {"upper": "Shirt", "wb": "None", "bottom": "None"})
    cfg.set("shirt.open_front", True)
    result = compile_garment(cfg, registry=REG)
    assert result.ok
    center = result.pattern.interfaces["shirt.center_front"]
    used = {(s.a[0], s.a[1]) for s in result.pattern.stitches}
    used |= {(s.b[0], s.b[1]) for s in result.pattern.stitches}
    open_ok = (len(center) == 2
               and all((name, idx) not in used for name, idx, _ in center))

    # waistband rise strictly lifts the skirt waist line
    tops = []
    for rise in (0.2, 0.5, 0.8):
        cfg = default_config(REG, {"upper": "None", "wb": "StraightWB",
                                   "bottom": "PencilSkirt"})
        cfg.set("waistband.rise", rise)
        result = compile_garment(cfg, registry=REG)
        assert result.ok
        tops.append(_world_y(result.pattern,
                             result.pattern.interfaces["pencil_skirt.waist_top"][0]))
    rise_ok = tops[0] < tops[1] < tops[2]

    # low flare: ankle strictly narrower than the knee
    flare_ok = True
    for flare in (0.15, 0.25, 0.35):
        cfg = default_config(REG, {"upper": "None", "wb": "None",
                                   "bottom": "Pants"})
        cfg.set("pants.flare", flare)
        result = compile_garment(cfg, registry=REG)
        assert result.ok
        front = result.pattern.panel("pants_front_l")
        hem_y = min(min(e.start[1], e.end[1]) for e in front.edges)
        knee_y = front.edges[1].end[1]
        flare_ok &= _width_at(front, hem_y) < _width_at(front, knee_y)

    ok = open_ok and rise_ok and flare_ok
    _report(capsys, "extensions", ok,
            f"open-front unstitched={open_ok}, waist tops {tops[0]:.1f} < "
            f"{tops[1]:.1f} < {tops[2]:.1f} cm, fitted ankle<knee={flare_ok}")
