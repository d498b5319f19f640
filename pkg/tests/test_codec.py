from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from patternc.body import BodyModel
from patternc.codec import (
    LossConfig,
    decode_merge,
    encode_vector,
    make_skeleton,
    masked_l1,
    numeric_loss,
    parse_vector,
    serialize_vector,
)
from patternc.config import (
    GarmentConfig,
    complete_config,
    default_config,
    parse_config,
    prune_config,
    validate_config,
)
from patternc.errors import CodecError
from patternc.registry import ENUM, FLAG, NORMALIZED_FLOAT, RAW_INT, default_registry, eval_predicate

REG = default_registry()
BODY = BodyModel()

META_KEYS = ("upper", "wb", "bottom")


def _random_config(rng: random.Random) -> GarmentConfig:
    """A sparse, valid, normalized config with 3-decimal float leaves."""
    meta = {k: rng.choice(REG.field("meta." + k).enum_values) for k in META_KEYS}
    cfg = default_config(REG, meta)
    for f in REG.applicable_fields(meta):
        if f.path.startswith("meta."):
            continue
        if f.kind == ENUM:
            cfg.set(f.path, rng.choice(f.enum_values))
        elif f.kind == FLAG:
            cfg.set(f.path, rng.random() < 0.5)
        elif f.kind == RAW_INT:
            cfg.set(f.path, rng.randint(int(f.lo), int(f.hi)))
        elif f.kind == NORMALIZED_FLOAT:
            cfg.set(f.path, round(rng.random(), 3))
    cfg = prune_config(cfg, REG)
    # drop a few float leaves so presence and applicability differ
    for f in REG.float_fields:
        if cfg.get(f.path) is not None and rng.random() < 0.2:
            cfg.delete(f.path)
    return cfg


# ---------------------------------------------------------------------------
# skeleton


def test_skeleton_zeroes_floats_and_keeps_everything_else(listing2):
    sk = make_skeleton(listing2, REG)
    assert sk.get("pants.length") == 0
    assert sk.get("pants.width") == 0
    assert sk.get("pants.flare") == 0
    assert sk.get("pants.rise") == 0
    assert sk.get("pants.cuff.type") == "None"
    assert sk.meta == listing2.meta


def test_skeleton_preserves_non_float_leaves(listing1):
    sk = make_skeleton(listing1, REG)
    for path, value in listing1.leaves():
        f = REG.by_path.get(path)
        if f is not None and f.kind == NORMALIZED_FLOAT:
            assert sk.get(path) == 0
        else:
            assert sk.get(path) == value


def test_skeleton_is_idempotent(listing1, listing2):
    for cfg in (listing1, listing2):
        once = make_skeleton(cfg, REG)
        twice = make_skeleton(once, REG)
        assert once.tree == twice.tree


def test_skeleton_of_floatless_config_is_unchanged():
    cfg = parse_config({"meta": {"upper": "None", "wb": "None", "bottom": "None"}})
    sk = make_skeleton(cfg, REG)
    assert sk.tree == cfg.tree


def test_skeleton_does_not_mutate_its_input(listing2):
    before = listing2.copy()
    make_skeleton(listing2, REG)
    assert listing2.tree == before.tree


# ---------------------------------------------------------------------------
# encoding


def test_encode_shapes(listing2):
    v, m = encode_vector(listing2, REG)
    assert len(v) == 76
    assert len(m) == 76
    assert all(isinstance(b, int) and b in (0, 1) for b in m)
    assert all(0.0 <= x <= 1.0 for x, b in zip(v, m) if b)


def test_encode_listing2_values_and_mask(listing2):
    # the fixture carries exactly four float leaves, all under pants
    v, m = encode_vector(listing2, REG)
    assert v[REG.field("pants.length").vector_slot] == 0.203
    assert v[REG.field("pants.width").vector_slot] == 0.062
    assert v[REG.field("pants.flare").vector_slot] == 0.516
    assert v[REG.field("pants.rise").vector_slot] == 0.816
    set_slots = [i for i, b in enumerate(m) if b]
    assert len(set_slots) == 4
    for f in REG.float_fields:
        if f.vector_slot in set_slots:
            assert f.path.startswith("pants.")
    assert all(x == 0.0 for i, x in enumerate(v) if i not in set_slots)


def test_encode_empty_config_is_all_zero():
    cfg = parse_config({"meta": {"upper": "None", "wb": "None", "bottom": "None"}})
    v, m = encode_vector(cfg, REG)
    assert v == [0.0] * 76
    assert m == [0] * 76


def test_mask_matches_applicability_on_complete_configs():
    metas = [
        {"upper": "Shirt", "wb": "None", "bottom": "None"},
        {"upper": "None", "wb": "FittedWB", "bottom": "PencilSkirt"},
        {"upper": "FittedShirt", "wb": "StraightWB", "bottom": "Pants"},
        {"upper": "Shirt", "wb": "None", "bottom": "FlaredSkirt"},
        {"upper": "None", "wb": "None", "bottom": "None"},
    ]
    for meta in metas:
        cfg = default_config(REG, meta)
        _, m = encode_vector(cfg, REG)
        for f in REG.float_fields:
            assert m[f.vector_slot] == int(eval_predicate(f.applicable, meta)), f.path


# ---------------------------------------------------------------------------
# merging


def test_round_trip_listing1(listing1):
    v, m = encode_vector(listing1, REG)
    merged = decode_merge(make_skeleton(listing1, REG), v, m, REG)
    assert merged.tree == listing1.tree


def test_round_trip_seeded_random_configs():
    rng = random.Random(20260814)
    for _ in range(1000):
        cfg = _random_config(rng)
        assert validate_config(cfg, REG).ok
        v, m = encode_vector(cfg, REG)
        merged = decode_merge(make_skeleton(cfg, REG), v, m, REG)
        assert merged.tree == cfg.tree


def test_merge_clamps_out_of_range_values(listing2):
    sk = make_skeleton(listing2, REG)
    v, m = encode_vector(listing2, REG)
    v[REG.field("pants.length").vector_slot] = 1.7
    v[REG.field("pants.flare").vector_slot] = -0.4
    merged = decode_merge(sk, v, m, REG)
    assert merged.get("pants.length") == 1.0
    assert merged.get("pants.flare") == 0.0
    assert validate_config(merged, REG).ok


def test_merge_leaves_skeleton_alone_under_empty_mask(listing2):
    sk = make_skeleton(listing2, REG)
    merged = decode_merge(sk, [0.9] * 76, [0] * 76, REG)
    assert merged.tree == sk.tree


def test_merge_rejects_mask_bit_for_inapplicable_field(listing2):
    sk = make_skeleton(listing2, REG)
    v, m = encode_vector(listing2, REG)
    m[REG.field("shirt.length").vector_slot] = 1
    with pytest.raises(CodecError) as err:
        decode_merge(sk, v, m, REG)
    assert err.value.code == "MASK_SKELETON_MISMATCH"
    assert "shirt.length" in str(err.value)


def test_merge_rejects_mask_bit_for_missing_leaf(listing2):
    sk = make_skeleton(listing2, REG)
    sk.delete("pants.flare")
    v, m = encode_vector(listing2, REG)
    with pytest.raises(CodecError) as err:
        decode_merge(sk, v, m, REG)
    assert err.value.code == "MASK_SKELETON_MISMATCH"


def test_merge_rejects_bad_shapes(listing2):
    sk = make_skeleton(listing2, REG)
    with pytest.raises(CodecError) as err:
        decode_merge(sk, [0.0] * 75, [0] * 76, REG)
    assert err.value.code == "BAD_VECTOR_SHAPE"
    with pytest.raises(CodecError) as err:
        decode_merge(sk, [0.0] * 76, [0] * 77, REG)
    assert err.value.code == "BAD_VECTOR_SHAPE"


def test_merge_does_not_mutate_skeleton(listing2):
    sk = make_skeleton(listing2, REG)
    before = sk.copy()
    v, m = encode_vector(listing2, REG)
    decode_merge(sk, v, m, REG)
    assert sk.tree == before.tree


# ---------------------------------------------------------------------------
# loss


def _padded(*head: float) -> list[float]:
    return list(head) + [0.0] * (76 - len(head))


def test_masked_l1_zero_on_identical_vectors():
    v = [i / 100.0 for i in range(76)]
    assert masked_l1(v, v, [1] * 76) == 0.0


def test_masked_l1_hand_example():
    pred = _padded(0.5, 0.2)
    target = _padded(0.4, 0.9)
    mask = [1, 0] + [0] * 74
    assert masked_l1(pred, target, mask) == pytest.approx(0.1, abs=1e-12)
    # opening the second bit adds |0.2 - 0.9|
    mask2 = [1, 1] + [0] * 74
    assert masked_l1(pred, target, mask2) == pytest.approx(0.8, abs=1e-12)


def test_masked_l1_is_a_sum_not_a_mean():
    pred = _padded(*([0.3] * 10))
    target = _padded(*([0.1] * 10))
    mask = [1] * 10 + [0] * 66
    assert masked_l1(pred, target, mask) == pytest.approx(2.0, abs=1e-12)


def test_masked_l1_rejects_bad_shapes():
    with pytest.raises(CodecError) as err:
        masked_l1([0.0] * 76, [0.0] * 76, [1] * 75)
    assert err.value.code == "BAD_VECTOR_SHAPE"


def test_numeric_loss_weighting():
    pred = _padded(0.5, 0.2)
    target = _padded(0.4, 0.9)
    mask = [1, 0] + [0] * 74
    assert LossConfig().lambda_n == 0.1
    assert numeric_loss(pred, target, mask) == pytest.approx(0.01, abs=1e-12)
    assert numeric_loss(pred, target, mask, LossConfig(lambda_n=2.0)) == pytest.approx(0.2, abs=1e-12)
    with pytest.raises(ValueError):
        LossConfig(lambda_n=-0.1)


_vec = st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=76, max_size=76)
_mask = st.lists(st.integers(0, 1), min_size=76, max_size=76)


@settings(max_examples=60, deadline=None)
@given(a=_vec, b=_vec, c=_vec, m=_mask)
def test_masked_l1_is_a_pseudometric(a, b, c, m):
    dab = masked_l1(a, b, m)
    assert dab >= 0.0
    assert dab == masked_l1(b, a, m)
    assert masked_l1(a, b, m) + masked_l1(b, c, m) >= masked_l1(a, c, m) - 1e-9
    same = [bi if mi else ai for ai, bi, mi in zip(a, b, m)]
    assert masked_l1(same, b, m) == 0.0


# ---------------------------------------------------------------------------
# exchange format


def test_vector_json_round_trip(listing1):
    v, m = encode_vector(listing1, REG)
    text = serialize_vector(v, m)
    doc = json.loads(text)
    assert set(doc) == {"values", "mask"}
    assert len(doc["values"]) == 76
    assert len(doc["mask"]) == 76
    assert all(b in (0, 1) for b in doc["mask"])
    v2, m2 = parse_vector(text)
    assert v2 == v
    assert m2 == m


def test_parse_vector_accepts_dicts(listing2):
    v, m = encode_vector(listing2, REG)
    v2, m2 = parse_vector({"values": v, "mask": m})
    assert (v2, m2) == (v, m)


def test_parse_vector_rejects_malformed_documents():
    with pytest.raises(CodecError) as err:
        parse_vector({"values": [0.0] * 75, "mask": [0] * 76})
    assert err.value.code == "BAD_VECTOR_SHAPE"
    with pytest.raises(CodecError) as err:
        parse_vector({"values": [0.0] * 76})
    assert err.value.code == "BAD_VECTOR_SHAPE"
    with pytest.raises(CodecError) as err:
        parse_vector({"values": [0.0] * 76, "mask": [2] * 76})
    assert err.value.code == "BAD_VECTOR_SHAPE"
