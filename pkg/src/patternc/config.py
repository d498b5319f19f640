"""Garment configuration trees and the operations defined over them.

A config is a nested JSON object: a ``meta`` block naming the garment
families plus one block per applicable part. This module implements
parsing, pruning (dropping inapplicable blocks), validation against the
field registry, normalization to/from [0,1], canonical serialization
with fixed key order and 3-decimal floats, and the whitespace-free
token count used to measure how much shorter pruned configs are.
"""

from __future__ import annotations

import dataclasses
import json
import re
from pathlib import Path

from .body import BodyModel
from .errors import ConfigSyntaxError, RangeError
from .registry import (
    ENUM,
    FLAG,
    NORMALIZED_FLOAT,
    RAW_INT,
    SECTIONS,
    FieldRegistry,
    eval_predicate,
)

# accepted spelling variants for top-level section names
_SECTION_ALIASES = {
    "pencil-skirt": "pencil_skirt",
    "flared-skirt": "flared_skirt",
}
# flat cuff blocks fold into their parent part
_FOLDED_SECTIONS = {
    "pant_cuff": ("pants", "cuff"),
    "sleeve_cuff": ("sleeve", "cuff"),
}

UPPER_KEY = "upperbody_garment"
LOWER_KEY = "lowerbody_garment"
WHOLE_KEY = "wholebody_garment"


@dataclasses.dataclass
class GarmentConfig:
    """A single garment's parameter tree."""

    tree: dict

    @property
    def meta(self) -> dict:
        return self.tree.get("meta", {})

    def get(self, path: str, default=None):
        node = self.tree
        for part in path.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node

    def set(self, path: str, value) -> None:
        parts = path.split(".")
        node = self.tree
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value

    def delete(self, path: str) -> None:
        parts = path.split(".")
        node = self.tree
        for part in parts[:-1]:
            node = node.get(part)
            if not isinstance(node, dict):
                return
        node.pop(parts[-1], None)

    def leaves(self):
        """Yield (dotted_path, value) for every non-dict leaf."""
        yield from _iter_leaves(self.tree, "")

    def copy(self) -> "GarmentConfig":
        return GarmentConfig(json.loads(json.dumps(self.tree)))

    def to_dict(self) -> dict:
        return self.tree

    def __eq__(self, other) -> bool:
        return isinstance(other, GarmentConfig) and self.tree == other.tree


@dataclasses.dataclass
class OutfitConfig:
    """One or two garments grouped under outfit slots."""

    upper: GarmentConfig | None = None
    lower: GarmentConfig | None = None
    whole: GarmentConfig | None = None

    def slots(self) -> list[tuple[str, GarmentConfig]]:
        out = []
        if self.whole is not None:
            out.append((WHOLE_KEY, self.whole))
        if self.upper is not None:
            out.append((UPPER_KEY, self.upper))
        if self.lower is not None:
            out.append((LOWER_KEY, self.lower))
        return out

    def to_dict(self) -> dict:
        return {key: cfg.to_dict() for key, cfg in self.slots()}


def _iter_leaves(node: dict, prefix: str):
    for key, value in node.items():
        path = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _iter_leaves(value, path + ".")
        else:
            yield path, value


# ---------------------------------------------------------------------------
# parsing


def _canonicalize(tree: dict) -> dict:
    out = {}
    for key, value in tree.items():
        name = _SECTION_ALIASES.get(key, key)
        if name in _FOLDED_SECTIONS and isinstance(value, dict):
            parent, sub = _FOLDED_SECTIONS[name]
            out.setdefault(parent, {})[sub] = value
            continue
        if name in out and isinstance(out[name], dict) and isinstance(value, dict):
            merged = dict(value)
            merged.update(out[name])  # folded cuff written first wins its slot
            out[name] = merged
        else:
            out[name] = value
    return out


def parse_config(text: str | dict) -> GarmentConfig:
    """Parse config JSON text (or an already-decoded dict).

    Known section-name spelling variants are canonicalized; flat cuff
    blocks are folded under their parent part.
    """
    if isinstance(text, dict):
        tree = text
    else:
        try:
            tree = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(tree, dict):
        raise ConfigSyntaxError("config root must be a JSON object")
    return GarmentConfig(_canonicalize(tree))


def parse_outfit(text: str | dict) -> OutfitConfig:
    """Parse an outfit wrapper; a bare garment config is classified by meta."""
    if isinstance(text, dict):
        tree = text
    else:
        try:
            tree = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(tree, dict):
        raise ConfigSyntaxError("outfit root must be a JSON object")

    wrapper_keys = {UPPER_KEY, LOWER_KEY, WHOLE_KEY}
    if wrapper_keys & set(tree):
        extra = set(tree) - wrapper_keys
        if extra:
            raise ConfigSyntaxError(f"unexpected outfit keys: {sorted(extra)}")
        if WHOLE_KEY in tree and len(tree) > 1:
            raise ConfigSyntaxError("wholebody_garment cannot be combined with other slots")
        return OutfitConfig(
            upper=parse_config(tree[UPPER_KEY]) if UPPER_KEY in tree else None,
            lower=parse_config(tree[LOWER_KEY]) if LOWER_KEY in tree else None,
            whole=parse_config(tree[WHOLE_KEY]) if WHOLE_KEY in tree else None,
        )

    cfg = parse_config(tree)
    meta = cfg.meta
    has_upper = str(meta.get("upper", "None")) != "None"
    has_bottom = str(meta.get("bottom", "None")) != "None"
    if has_upper and has_bottom:
        return OutfitConfig(whole=cfg)
    if has_upper:
        return OutfitConfig(upper=cfg)
    return OutfitConfig(lower=cfg)


# ---------------------------------------------------------------------------
# validation


@dataclasses.dataclass
class Issue:
    code: str
    path: str
    message: str

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class ValidationReport:
    ok: bool
    issues: list

    def to_dict(self) -> dict:
        return {"ok": self.ok, "issues": [i.to_dict() for i in self.issues]}


def _section_paths(registry: FieldRegistry) -> list[tuple[str, str, dict]]:
    return [(tag, root, pred) for tag, (root, pred) in SECTIONS.items()]


def validate_config(cfg: GarmentConfig, registry: FieldRegistry) -> ValidationReport:
    """Check a config (normalized form) against the registry.

    Reported codes: MISSING_SECTION, EXTRA_SECTION, OUT_OF_RANGE,
    BAD_ENUM, BAD_TYPE. Missing individual leaves are fine; defaults
    apply at compile time.
    """
    issues: list[Issue] = []
    meta = cfg.meta
    if "meta" not in cfg.tree:
        issues.append(Issue("MISSING_SECTION", "meta", "config has no meta block"))
    elif not isinstance(cfg.tree["meta"], dict):
        issues.append(Issue("BAD_TYPE", "meta", "meta must be an object"))

    known_roots = {root for _, root, _ in _section_paths(registry)}
    for tag, root, pred in _section_paths(registry):
        if tag == "meta":
            continue
        applicable = eval_predicate(pred, meta)
        raw = cfg.get(root)
        if raw is not None and not isinstance(raw, dict):
            issues.append(Issue("BAD_TYPE", root, f"section {root} must be an object"))
            continue
        present = isinstance(raw, dict)
        if applicable and not present:
            # a folded subsection is only required once its parent exists
            parent = root.split(".")[0]
            if "." in root and not isinstance(cfg.get(parent), dict):
                continue
            issues.append(Issue("MISSING_SECTION", root, f"required section {root} is missing"))
        elif present and not applicable:
            issues.append(Issue("EXTRA_SECTION", root,
                                f"section {root} does not apply to this meta"))

    for key in cfg.tree:
        if key != "meta" and key not in known_roots:
            issues.append(Issue("EXTRA_SECTION", key, f"unknown section {key}"))

    for path, value in cfg.leaves():
        if path in known_roots:
            continue  # non-dict section, already reported
        field = registry.by_path.get(path)
        if field is None:
            root = path.split(".")[0]
            if root in known_roots or root == "meta":
                issues.append(Issue("EXTRA_SECTION", path, f"unknown field {path}"))
            continue
        if field.kind == ENUM:
            if not isinstance(value, str):
                issues.append(Issue("BAD_TYPE", path, f"{path} must be a string"))
            elif value not in field.enum_values:
                issues.append(Issue(
                    "BAD_ENUM", path,
                    f"{path} must be one of {list(field.enum_values)}, got {value!r}"))
        elif field.kind == NORMALIZED_FLOAT:
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                issues.append(Issue("BAD_TYPE", path, f"{path} must be a number"))
            elif not (0.0 <= float(value) <= 1.0):
                issues.append(Issue("OUT_OF_RANGE", path,
                                    f"{path} must lie in [0, 1], got {value}"))
        elif field.kind == RAW_INT:
            if isinstance(value, bool) or not isinstance(value, int):
                issues.append(Issue("BAD_TYPE", path, f"{path} must be an integer"))
            elif not (field.lo <= value <= field.hi):
                issues.append(Issue(
                    "OUT_OF_RANGE", path,
                    f"{path} must lie in [{field.lo:g}, {field.hi:g}], got {value}"))
        elif field.kind == FLAG:
            if not isinstance(value, bool):
                issues.append(Issue("BAD_TYPE", path, f"{path} must be a boolean"))

    return ValidationReport(ok=not issues, issues=issues)


# ---------------------------------------------------------------------------
# pruning and completion


def prune_config(cfg: GarmentConfig, registry: FieldRegistry) -> GarmentConfig:
    """Drop inapplicable sections and unknown keys; idempotent.

    Known leaves inside applicable sections are kept as-is (no default
    filling), so sparse configs stay sparse.
    """
    meta = cfg.meta
    out: dict = {}
    meta_in = cfg.tree.get("meta")
    if isinstance(meta_in, dict):
        kept = {}
        for f in registry.section_fields("meta"):
            key = f.path.split(".", 1)[1]
            if key in meta_in:
                kept[key] = meta_in[key]
        out["meta"] = kept

    applicable = {f.path for f in registry.applicable_fields(meta)}
    for path, value in cfg.leaves():
        if path.startswith("meta."):
            continue
        if path in applicable:
            _set_nested(out, path, value)
    return GarmentConfig(out)


def complete_config(cfg: GarmentConfig, registry: FieldRegistry) -> GarmentConfig:
    """Fill every applicable missing leaf with its registry default."""
    pruned = prune_config(cfg, registry)
    out = pruned.copy()
    meta = out.tree.setdefault("meta", {})
    for f in registry.section_fields("meta"):
        key = f.path.split(".", 1)[1]
        meta.setdefault(key, f.default)
    for f in registry.applicable_fields(out.tree["meta"]):
        if f.path.startswith("meta."):
            continue
        if out.get(f.path) is None:
            out.set(f.path, f.default)
    return _reorder(out, registry)


def default_config(registry: FieldRegistry, meta: dict) -> GarmentConfig:
    """A fully-populated config for the given meta, all defaults."""
    return complete_config(GarmentConfig({"meta": dict(meta)}), registry)


def full_schema_config(cfg: GarmentConfig, registry: FieldRegistry) -> GarmentConfig:
    """The unpruned form: every registry field present regardless of meta.

    Values come from cfg where present, registry defaults elsewhere.
    This reconstructs the fixed-layout file an unpruned pipeline would
    carry around, for token-count comparison.
    """
    out: dict = {}
    for f in registry.fields:
        value = cfg.get(f.path)
        _set_nested(out, f.path, f.default if value is None else value)
    return GarmentConfig(out)


def _set_nested(tree: dict, path: str, value) -> None:
    parts = path.split(".")
    node = tree
    for part in parts[:-1]:
        node = node.setdefault(part, {})
    node[parts[-1]] = value


def _reorder(cfg: GarmentConfig, registry: FieldRegistry) -> GarmentConfig:
    """Rebuild the tree in registry field order (drops nothing known)."""
    out: dict = {}
    for f in registry.fields:
        value = cfg.get(f.path)
        if value is not None:
            _set_nested(out, f.path, value)
    return GarmentConfig(out)


# ---------------------------------------------------------------------------
# normalization


def normalize_config(cfg: GarmentConfig, registry: FieldRegistry,
                     body: BodyModel) -> GarmentConfig:
    """Map raw float leaves (cm/deg/body multiples) to [0, 1]."""
    out = cfg.copy()
    for path, value in cfg.leaves():
        field = registry.by_path.get(path)
        if field is None or field.kind != NORMALIZED_FLOAT:
            continue
        x = field.normalize_raw(value, body)
        if not (-1e-9 <= x <= 1.0 + 1e-9):
            raise RangeError(
                f"{path}={value} is outside the registry range "
                f"[{field.lo:g}, {field.hi:g}] ({field.anchor[0]} anchor)", path=path)
        out.set(path, min(1.0, max(0.0, x)))
    return out


def denormalize_config(cfg: GarmentConfig, registry: FieldRegistry,
                       body: BodyModel) -> GarmentConfig:
    """Inverse of normalize_config; floats become anchor units."""
    out = cfg.copy()
    for path, value in cfg.leaves():
        field = registry.by_path.get(path)
        if field is None or field.kind != NORMALIZED_FLOAT:
            continue
        out.set(path, field.denormalize(value, body))
    return out


def section_params(cfg: GarmentConfig, registry: FieldRegistry, root: str,
                   body: BodyModel) -> dict:
    """Raw (denormalized) parameter dict for one section, defaults filled.

    Keys are section-local; the nested cuff is not included (it is its
    own section).
    """
    out = {}
    prefix = root + "."
    for f in registry.fields:
        if not f.path.startswith(prefix) or "." in f.path[len(prefix):]:
            continue
        key = f.path[len(prefix):]
        value = cfg.get(f.path)
        if value is None:
            value = f.default
        if f.kind == NORMALIZED_FLOAT:
            value = f.denormalize(value, body)
        out[key] = value
    return out


# ---------------------------------------------------------------------------
# canonical serialization and tokens

_PUNCT_RE = re.compile(r'[{}\[\]:,"]|[^\s{}\[\]:,"]+')


def token_count(text: str) -> int:
    """Whitespace-insensitive token count.

    Splits on whitespace, then counts each of ``{ } [ ] : , "`` as one
    token; runs of anything else are one token each.
    """
    return len(_PUNCT_RE.findall(text))


def canonical_serialize(cfg: GarmentConfig, registry: FieldRegistry) -> str:
    """Serialize with registry key order and 3-decimal floats.

    Floats are formatted with round-half-even; equal trees give
    byte-identical text. Unknown keys are rejected: prune first.
    """
    for path, _ in cfg.leaves():
        if path not in registry.by_path:
            raise ValueError(f"cannot canonically serialize unknown field {path}")

    lines: list[str] = []

    def emit(node: dict, fields: list, indent: int) -> None:
        pad = " " * (indent * 4)
        lines.append("{")
        entries = []
        for key, sub_fields, leaf in fields:
            if key not in node:
                continue
            entries.append((key, sub_fields, leaf))
        for i, (key, sub_fields, leaf) in enumerate(entries):
            comma = "," if i + 1 < len(entries) else ""
            if leaf is None:
                prefix_len = len(lines)
                lines.append(f'{pad}    "{key}": ')
                emit(node[key], sub_fields, indent + 1)
                lines[-1] += comma
                # fold the opening brace onto the key line
                lines[prefix_len] += lines.pop(prefix_len + 1)
            else:
                lines.append(f'{pad}    "{key}": {_format_leaf(node[key], leaf)}{comma}')
        lines.append(pad + "}")

    plan = _layout_plan(registry)
    emit(cfg.tree, plan, 0)
    return "\n".join(lines) + "\n"


def _format_leaf(value, field) -> str:
    if field.kind == NORMALIZED_FLOAT:
        return format(float(value), ".3f")
    if field.kind == RAW_INT:
        return str(int(value))
    if field.kind == FLAG:
        return "true" if value else "false"
    return json.dumps(value)


def _layout_plan(registry: FieldRegistry):
    """Nested (key, children, field) layout in registry order."""
    root: list = []
    index: dict = {}

    def ensure_group(parts: tuple) -> list:
        if parts in index:
            return index[parts]
        parent = ensure_group(parts[:-1]) if len(parts) > 1 else root
        children: list = []
        parent.append((parts[-1], children, None))
        index[parts] = children
        return children

    for f in registry.fields:
        *groups, leaf = f.path.split(".")
        parent = ensure_group(tuple(groups)) if groups else root
        parent.append((leaf, None, f))
    return root


def token_ratio(cfg: GarmentConfig, registry: FieldRegistry) -> float:
    """tokens(pruned canonical form) / tokens(full-schema form)."""
    pruned = prune_config(cfg, registry)
    full = full_schema_config(cfg, registry)
    return token_count(canonical_serialize(pruned, registry)) / token_count(
        canonical_serialize(full, registry))


def diff_leaves(a: GarmentConfig, b: GarmentConfig) -> list[tuple[str, object, object]]:
    """Leaf-level differences (path, value_a, value_b); None marks absence."""
    paths = {p for p, _ in a.leaves()} | {p for p, _ in b.leaves()}
    out = []
    for path in sorted(paths):
        va, vb = a.get(path), b.get(path)
        if isinstance(va, float) or isinstance(vb, float):
            if va is not None and vb is not None and abs(va - vb) < 1e-12:
                continue
        if va != vb:
            out.append((path, va, vb))
    return out


def load_config(path: str | Path) -> GarmentConfig:
    return parse_config(Path(path).read_text())
