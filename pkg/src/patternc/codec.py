"""Split a config into a text skeleton and a 76-float vector, and back.

A normalized config factors into two channels: the *skeleton* (the tree
with every float leaf zeroed, keeping structure, enums, flags, and
integers readable as text) and a fixed-width vector of the float values
plus a presence mask. ``decode_merge`` recombines the channels, so a
numeric regressor only ever has to produce the vector.

The mask makes the float channel total: slot i is meaningful only when
bit i is set, and ``masked_l1`` scores predictions on exactly those
coordinates.
"""

from __future__ import annotations

import dataclasses
import json

from .config import GarmentConfig
from .errors import CodecError
from .registry import FLOAT_SLOTS, NORMALIZED_FLOAT, FieldRegistry, default_registry

__all__ = [
    "LossConfig",
    "decode_merge",
    "encode_vector",
    "make_skeleton",
    "masked_l1",
    "numeric_loss",
    "parse_vector",
    "serialize_vector",
]


def _check_shape(name: str, seq, *, bits: bool = False) -> None:
    try:
        n = len(seq)
    except TypeError:
        raise CodecError(f"{name} must be a sequence of length {FLOAT_SLOTS}",
                         code="BAD_VECTOR_SHAPE") from None
    if n != FLOAT_SLOTS:
        raise CodecError(f"{name} has length {n}, expected {FLOAT_SLOTS}",
                         code="BAD_VECTOR_SHAPE")
    if bits and any(b not in (0, 1, False, True) for b in seq):
        raise CodecError(f"{name} entries must be 0 or 1", code="BAD_VECTOR_SHAPE")


def make_skeleton(cfg: GarmentConfig, registry: FieldRegistry | None = None) -> GarmentConfig:
    """Zero every float leaf, leaving structure and discrete leaves intact."""
    reg = registry or default_registry()
    out = cfg.copy()
    for path, _ in cfg.leaves():
        f = reg.by_path.get(path)
        if f is not None and f.kind == NORMALIZED_FLOAT:
            out.set(path, 0)
    return out


def encode_vector(cfg: GarmentConfig,
                  registry: FieldRegistry | None = None) -> tuple[list[float], list[int]]:
    """Dense float vector and presence mask for a pruned, normalized config.

    Slot i carries the value of float field i when that leaf is present,
    0.0 otherwise; the mask records which slots are live.
    """
    reg = registry or default_registry()
    values = [0.0] * FLOAT_SLOTS
    mask = [0] * FLOAT_SLOTS
    for f in reg.float_fields:
        value = cfg.get(f.path)
        if value is None:
            continue
        values[f.vector_slot] = float(value)
        mask[f.vector_slot] = 1
    return values, mask


def decode_merge(skeleton: GarmentConfig, values, mask,
                 registry: FieldRegistry | None = None) -> GarmentConfig:
    """Write masked-in vector values into a skeleton's float leaves.

    Values are clamped to [0, 1] so that imperfect regressor output
    still merges into a valid config. A mask bit whose leaf does not
    exist in the skeleton is a contract violation
    (MASK_SKELETON_MISMATCH), not something to silently skip.
    """
    reg = registry or default_registry()
    _check_shape("values", values)
    _check_shape("mask", mask, bits=True)
    out = skeleton.copy()
    for f in reg.float_fields:
        if not mask[f.vector_slot]:
            continue
        if skeleton.get(f.path) is None:
            raise CodecError(
                f"mask selects slot {f.vector_slot} ({f.path}) "
                f"but the skeleton has no such leaf",
                code="MASK_SKELETON_MISMATCH")
        out.set(f.path, min(1.0, max(0.0, float(values[f.vector_slot]))))
    return out


def masked_l1(pred, target, mask) -> float:
    """Sum of |pred - target| over masked-in slots."""
    _check_shape("pred", pred)
    _check_shape("target", target)
    _check_shape("mask", mask, bits=True)
    return sum(abs(float(p) - float(t)) for p, t, m in zip(pred, target, mask) if m)


@dataclasses.dataclass(frozen=True)
class LossConfig:
    """Weight of the numeric term in the combined training loss."""

    lambda_n: float = 0.1

    def __post_init__(self):
        if self.lambda_n < 0:
            raise ValueError("lambda_n must be non-negative")


def numeric_loss(pred, target, mask, loss: LossConfig | None = None) -> float:
    """The weighted numeric loss term: lambda_n * masked_l1.

    The unweighted distance is a plain sum of absolute differences; a
    mean convention is recoverable by folding 1/popcount(mask) into
    lambda_n.
    """
    cfg = loss or LossConfig()
    return cfg.lambda_n * masked_l1(pred, target, mask)


# ---------------------------------------------------------------------------
# exchange format


def serialize_vector(values, mask) -> str:
    """JSON document {"values": [...], "mask": [...]} with 76 entries each."""
    _check_shape("values", values)
    _check_shape("mask", mask, bits=True)
    doc = {"values": [float(v) for v in values], "mask": [int(b) for b in mask]}
    return json.dumps(doc, indent=2) + "\n"


def parse_vector(text: str | dict) -> tuple[list[float], list[int]]:
    """Inverse of serialize_vector; accepts raw JSON text or a parsed dict."""
    doc = json.loads(text) if isinstance(text, str) else text
    if not isinstance(doc, dict) or set(doc) - {"values", "mask"}:
        raise CodecError("vector document must contain only values and mask",
                         code="BAD_VECTOR_SHAPE")
    if "values" not in doc or "mask" not in doc:
        raise CodecError("vector document needs both values and mask",
                         code="BAD_VECTOR_SHAPE")
    _check_shape("values", doc["values"])
    _check_shape("mask", doc["mask"], bits=True)
    values = [float(v) for v in doc["values"]]
    mask = [int(b) for b in doc["mask"]]
    return values, mask
