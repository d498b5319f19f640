"""Seeded garment sampling, the dataset pipeline, and edit-pair records.

Sampling is driven by a weights table (enum value weights, flag
probabilities, outfit-shape split) so that rare features like ruffled
cuffs or asymmetric bodices stay rare. Every random decision consumes
exactly one uniform from a per-index RNG, which makes two properties
cheap to guarantee: runs are reproducible from (master_seed, index)
alone, and raising one value's weight can only grow the set of draws
that pick it.
"""

from __future__ import annotations

import dataclasses
import functools
import hashlib
import json
import random
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .assembler import compile_garment, export_svg, serialize_pattern
from .body import BodyModel, DEFAULT_BODY
from .config import GarmentConfig
from .errors import EditPairError
from .registry import (
    ENUM,
    FLAG,
    RAW_INT,
    SECTIONS,
    FieldRegistry,
    default_registry,
)

__all__ = [
    "DatasetManifest",
    "EditRecord",
    "SamplingWeights",
    "default_weights",
    "load_weights",
    "make_edit_pair",
    "run_pipeline",
    "sample_config",
    "stable_hash",
]

_WEIGHTS_PATH = Path(__file__).parent / "data" / "default_weights.json"

_MASK64 = (1 << 64) - 1


def stable_hash(master_seed: int, index: int) -> int:
    """Element `index` of the splitmix64 stream seeded with master_seed.

    splitmix64 (Steele, Lea & Flood): advance the state by the 64-bit
    golden ratio, then finalize with two xor-shift-multiply rounds. Pure
    integer arithmetic, so manifests reproduce across platforms.
    """
    x = (master_seed + (index + 1) * 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


# ---------------------------------------------------------------------------
# weights


_SHAPES = ("upper", "lower", "wholebody")


@dataclasses.dataclass(frozen=True)
class SamplingWeights:
    """Relative weights steering sample_config.

    outfit_shape picks which meta slots are non-None; enums maps a field
    path to per-value weights (unlisted values weigh 1.0); flags maps a
    flag path to its true-probability (unlisted flags are 0.5).
    """

    outfit_shape: dict
    enums: dict
    flags: dict

    def enum_weight(self, path: str, value: str) -> float:
        return self.enums.get(path, {}).get(value, 1.0)

    def flag_p(self, path: str) -> float:
        return self.flags.get(path, 0.5)

    def to_dict(self) -> dict:
        return json.loads(json.dumps({
            "outfit_shape": self.outfit_shape,
            "enums": self.enums,
            "flags": self.flags,
        }))

    @classmethod
    def from_dict(cls, d: dict, registry: FieldRegistry | None = None) -> "SamplingWeights":
        reg = registry or default_registry()
        w = cls(outfit_shape=dict(d.get("outfit_shape", {})),
                enums={k: dict(v) for k, v in d.get("enums", {}).items()},
                flags=dict(d.get("flags", {})))
        w._validate(reg)
        return w

    def _validate(self, reg: FieldRegistry) -> None:
        extra = set(self.outfit_shape) - set(_SHAPES)
        if extra:
            raise ValueError(f"unknown outfit shapes: {sorted(extra)}")
        if any(p < 0 for p in self.outfit_shape.values()):
            raise ValueError("outfit shape weights must be non-negative")
        if sum(self.outfit_shape.values()) <= 0:
            raise ValueError("outfit shape weights must not all be zero")
        for path, table in self.enums.items():
            field = reg.by_path.get(path)
            if field is None or field.kind != ENUM:
                raise ValueError(f"{path} is not an enum field")
            for value, weight in table.items():
                if value not in field.enum_values:
                    raise ValueError(f"{path} has no value {value!r}")
                if weight < 0:
                    raise ValueError(f"negative weight for {path}={value}")
            if sum(self.enum_weight(path, v) for v in _candidates(field)) <= 0:
                raise ValueError(f"weights for {path} select nothing")
        for path, p in self.flags.items():
            field = reg.by_path.get(path)
            if field is None or field.kind != FLAG:
                raise ValueError(f"{path} is not a flag field")
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"flag probability for {path} must be in [0, 1]")


def _candidates(field) -> tuple:
    """Values an enum draw chooses among.

    meta.upper / meta.bottom exclude "None": garment presence is decided
    by the outfit shape, not by the per-family weights.
    """
    if field.path in ("meta.upper", "meta.bottom"):
        return tuple(v for v in field.enum_values if v != "None")
    return field.enum_values


@functools.lru_cache(maxsize=1)
def _default_weights_doc() -> str:
    return _WEIGHTS_PATH.read_text()


def default_weights(registry: FieldRegistry | None = None) -> SamplingWeights:
    return SamplingWeights.from_dict(json.loads(_default_weights_doc()), registry)


def load_weights(path: str | Path | None,
                 registry: FieldRegistry | None = None) -> SamplingWeights:
    if path is None:
        return default_weights(registry)
    return SamplingWeights.from_dict(json.loads(Path(path).read_text()), registry)


# ---------------------------------------------------------------------------
# sampling


def _weighted_choice(rng: random.Random, values, weight_of):
    """One-uniform cumulative draw in fixed value order."""
    weights = [weight_of(v) for v in values]
    total = sum(weights)
    if total <= 0:
        raise ValueError("weights select nothing")
    u = rng.random() * total
    cum = 0.0
    for value, weight in zip(values, weights):
        cum += weight
        if u < cum:
            return value
    return values[-1]


def sample_config(seed: int, weights: SamplingWeights | None = None,
                  registry: FieldRegistry | None = None) -> GarmentConfig:
    """A complete, valid, normalized config drawn deterministically from seed."""
    reg = registry or default_registry()
    w = weights or default_weights(reg)
    rng = random.Random(seed)

    shape = _weighted_choice(rng, _SHAPES, lambda s: w.outfit_shape.get(s, 0.0))
    meta = {"upper": "None", "wb": "None", "bottom": "None"}
    if shape != "lower":
        field = reg.field("meta.upper")
        meta["upper"] = _weighted_choice(
            rng, _candidates(field), lambda v: w.enum_weight(field.path, v))
    if shape != "upper":
        field = reg.field("meta.bottom")
        meta["bottom"] = _weighted_choice(
            rng, _candidates(field), lambda v: w.enum_weight(field.path, v))
        field = reg.field("meta.wb")
        meta["wb"] = _weighted_choice(
            rng, _candidates(field), lambda v: w.enum_weight(field.path, v))

    cfg = GarmentConfig({"meta": meta})
    for f in reg.applicable_fields(meta):
        if f.path.startswith("meta."):
            continue
        if f.kind == ENUM:
            value = _weighted_choice(rng, f.enum_values,
                                     lambda v, path=f.path: w.enum_weight(path, v))
        elif f.kind == FLAG:
            value = rng.random() < w.flag_p(f.path)
        elif f.kind == RAW_INT:
            span = int(f.hi) - int(f.lo) + 1
            value = min(int(f.hi), int(f.lo) + int(rng.random() * span))
        else:
            value = round(rng.random(), 3)
        cfg.set(f.path, value)
    return cfg


# ---------------------------------------------------------------------------
# dataset pipeline


@dataclasses.dataclass
class DatasetManifest:
    seed: int
    n_requested: int
    n_accepted: int
    rejections: dict
    records: list
    incomplete: bool = False

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_requested": self.n_requested,
            "n_accepted": self.n_accepted,
            "rejections": self.rejections,
            "records": self.records,
            "incomplete": self.incomplete,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _write_text(path: Path, text: str) -> None:
    path.write_text(text)


def _build_record(args):
    i, master_seed, w, body, reg = args
    seed_i = stable_hash(master_seed, i)
    cfg = sample_config(seed_i, w, reg)
    result = compile_garment(cfg, body, reg)
    if result.ok:
        return i, seed_i, cfg, serialize_pattern(result.pattern), export_svg(result.pattern), None
    if result.report is not None and not result.report.ok:
        code = result.report.issues[0].code
    else:
        code = result.validity.failures[0]["code"]
    return i, seed_i, cfg, None, None, code


def run_pipeline(n: int, master_seed: int,
                 weights: SamplingWeights | None = None,
                 out_dir: str | Path = "dataset",
                 body: BodyModel = DEFAULT_BODY,
                 registry: FieldRegistry | None = None,
                 workers: int = 1) -> DatasetManifest:
    """Sample n configs, compile each, write the accepted ones to disk.

    Per-index seeds come from stable_hash, so output is independent of
    worker count and execution order. On an IO error the manifest
    written so far is flagged incomplete and the error propagates.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    reg = registry or default_registry()
    w = weights or default_weights(reg)
    out = Path(out_dir)
    for sub in ("configs", "patterns", "svg"):
        (out / sub).mkdir(parents=True, exist_ok=True)

    jobs = [(i, master_seed, w, body, reg) for i in range(n)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_build_record, jobs))
    else:
        results = [_build_record(job) for job in jobs]

    rejections: dict[str, int] = {}
    records: list[dict] = []
    try:
        for i, seed_i, cfg, pattern_text, svg_text, code in results:
            if code is not None:
                rejections[code] = rejections.get(code, 0) + 1
                continue
            name = f"{i:05d}"
            config_text = json.dumps(cfg.tree, indent=2) + "\n"
            _write_text(out / "configs" / f"{name}.json", config_text)
            _write_text(out / "patterns" / f"{name}.json", pattern_text)
            _write_text(out / "svg" / f"{name}.svg", svg_text)
            records.append({
                "index": i,
                "seed": seed_i,
                "config": f"configs/{name}.json",
                "pattern": f"patterns/{name}.json",
                "svg": f"svg/{name}.svg",
                "hash": hashlib.sha256(pattern_text.encode()).hexdigest(),
            })
    except OSError:
        partial = DatasetManifest(master_seed, n, len(records),
                                  dict(sorted(rejections.items())), records,
                                  incomplete=True)
        _write_text(out / "manifest.json", partial.to_json())
        raise

    manifest = DatasetManifest(master_seed, n, len(records),
                               dict(sorted(rejections.items())), records)
    _write_text(out / "manifest.json", manifest.to_json())
    return manifest


# ---------------------------------------------------------------------------
# edit pairs


EDIT_TEMPLATE_HEAD = "Change the garment sewing pattern by modifying "
EDIT_TEMPLATE_TAIL = "while keeping other parts unchanged."


@dataclasses.dataclass
class EditRecord:
    """Source/target configs plus the instruction describing their diff."""

    source: GarmentConfig
    target: GarmentConfig
    changed_parts: list
    prompt: str

    def to_dict(self) -> dict:
        return {
            "source": self.source.tree,
            "target": self.target.tree,
            "changed_parts": list(self.changed_parts),
            "prompt": self.prompt,
        }


def _fmt_leaf(value) -> str:
    if value is None:
        return "unset"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


def make_edit_pair(a: GarmentConfig, b: GarmentConfig,
                   registry: FieldRegistry | None = None) -> EditRecord:
    """Describe how to turn config a into config b, one part at a time.

    Parts are the registry sections whose leaves differ; each part's
    description is a mechanical old -> new leaf diff in registry order.
    """
    reg = registry or default_registry()
    parts: list[str] = []
    items: list[str] = []
    for tag, (root, _pred) in SECTIONS.items():
        diffs = []
        for f in reg.section_fields(root):
            av, bv = a.get(f.path), b.get(f.path)
            if av != bv:
                local = f.path[len(root) + 1:]
                diffs.append(f"{local} {_fmt_leaf(av)} -> {_fmt_leaf(bv)}")
        if diffs:
            parts.append(tag)
            display = tag.replace("_", " ")
            items.append(f"{display} to {'; '.join(diffs)}")
    if not parts:
        raise EditPairError("the two configs have identical parts",
                            code="NO_DIFFERENCE")
    prompt = f"{EDIT_TEMPLATE_HEAD}{', '.join(items)}, {EDIT_TEMPLATE_TAIL}"
    return EditRecord(a, b, parts, prompt)
