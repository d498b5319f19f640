"""Command-line interface tests.

Most tests drive main() in-process for speed; a few spawn real
subprocesses to check the installed entry points. Exit codes: 0 success,
1 validation/domain failure, 2 usage error.
"""

import hashlib
import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from patternc.assembler import parse_pattern
from patternc.cli import main
from patternc.config import parse_config
from patternc.registry import default_registry
from patternc.simparams import lookup_base

DATA = Path(__file__).parent / "data"
LISTING1 = str(DATA / "listing1.json")
LISTING2 = str(DATA / "listing2.json")


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _variant(tmp_path, name, path_value):
    cfg = parse_config(Path(LISTING1).read_text())
    for leaf_path, value in path_value.items():
        cfg.set(leaf_path, value)
    path = tmp_path / name
    path.write_text(json.dumps(cfg.to_dict()))
    return str(path)


def _bad_config(tmp_path):
    # normalized floats live in [0, 1]
    return _variant(tmp_path, "bad.json", {"pencil_skirt.length": 1.5})


# ---------------------------------------------------------------------------
# compile


def test_compile_writes_requested_files(tmp_path, capsys):
    pat = tmp_path / "out.pattern.json"
    svg = tmp_path / "out.svg"
    code, out, _ = _run(capsys, "compile", LISTING1,
                        "--pattern", str(pat), "--svg", str(svg))
    assert code == 0
    pattern = parse_pattern(pat.read_text())
    assert len(pattern.panels) == 4
    assert "<svg" in svg.read_text()


def test_compile_prints_pattern_without_output_flags(capsys):
    code, out, _ = _run(capsys, "compile", LISTING2)
    assert code == 0
    assert len(parse_pattern(out).panels) == 4


def test_compile_invalid_config_exits_1(tmp_path, capsys):
    code, out, _ = _run(capsys, "compile", _bad_config(tmp_path))
    assert code == 1
    report = json.loads(out)
    assert report["ok"] is False
    assert "OUT_OF_RANGE" in {i["code"] for i in report["report"]["issues"]}


# ---------------------------------------------------------------------------
# validate


def test_validate_ok(capsys):
    code, out, _ = _run(capsys, "validate", LISTING1)
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_validate_bad_reports_issue(tmp_path, capsys):
    code, out, _ = _run(capsys, "validate", _bad_config(tmp_path))
    assert code == 1
    report = json.loads(out)
    assert report["ok"] is False
    assert any(i["code"] == "OUT_OF_RANGE" for i in report["issues"])


def test_validate_output_is_deterministic(capsys):
    _, out1, _ = _run(capsys, "validate", LISTING1)
    _, out2, _ = _run(capsys, "validate", LISTING1)
    assert out1 == out2


# ---------------------------------------------------------------------------
# exit codes for broken invocations


def test_missing_file_is_a_usage_error(capsys):
    code, _, err = _run(capsys, "validate", "/nonexistent/nope.json")
    assert code == 2
    assert err.strip()


def test_unknown_subcommand_is_a_usage_error(capsys):
    code, _, err = _run(capsys, "frobnicate")
    assert code == 2
    assert "usage" in err.lower()


def test_no_arguments_prints_synopsis(capsys):
    code, _, err = _run(capsys)
    assert code == 2
    assert "usage" in err.lower()


# ---------------------------------------------------------------------------
# normalize / denormalize / skeleton


def test_denormalize_then_normalize_round_trips(tmp_path, capsys):
    code, raw_text, _ = _run(capsys, "denormalize", LISTING1)
    assert code == 0
    raw_path = tmp_path / "raw.json"
    raw_path.write_text(raw_text)
    code, norm_text, _ = _run(capsys, "normalize", str(raw_path))
    assert code == 0
    original = parse_config(Path(LISTING1).read_text())
    restored = parse_config(norm_text)
    for (pa, va), (pb, vb) in zip(sorted(original.leaves()),
                                  sorted(restored.leaves())):
        assert pa == pb
        if isinstance(va, float):
            assert vb == pytest.approx(va, abs=1e-9)
        else:
            assert va == vb


def test_skeleton_zeroes_every_float(capsys):
    code, out, _ = _run(capsys, "skeleton", LISTING2)
    assert code == 0
    cfg = parse_config(out)
    reg = default_registry()
    for path, value in cfg.leaves():
        field = reg.by_path.get(path)
        if field is not None and field.kind == "NORMALIZED_FLOAT":
            assert value == 0.0


# ---------------------------------------------------------------------------
# encode / decode


def test_encode_decode_round_trip(tmp_path, capsys):
    code, vec_text, _ = _run(capsys, "encode", LISTING2)
    assert code == 0
    vec = json.loads(vec_text)
    assert len(vec["values"]) == 76 and len(vec["mask"]) == 76

    code, skel_text, _ = _run(capsys, "skeleton", LISTING2)
    assert code == 0
    vec_path = tmp_path / "vec.json"
    vec_path.write_text(vec_text)
    skel_path = tmp_path / "skel.json"
    skel_path.write_text(skel_text)

    code, merged_text, _ = _run(capsys, "decode", str(skel_path), str(vec_path))
    assert code == 0
    assert parse_config(merged_text).to_dict() == \
        parse_config(Path(LISTING2).read_text()).to_dict()


# ---------------------------------------------------------------------------
# sample


def test_sample_is_deterministic(tmp_path, capsys):
    digests = []
    for name in ("d1", "d2"):
        out_dir = tmp_path / name
        code, out, _ = _run(capsys, "sample", "--n", "8", "--seed", "7",
                            "--out", str(out_dir))
        assert code == 0
        summary = json.loads(out)
        rejected = sum(summary["rejections"].values())
        assert summary["n_accepted"] + rejected == 8
        digests.append(hashlib.sha256(
            (out_dir / "manifest.json").read_bytes()).hexdigest())
    assert digests[0] == digests[1]


# ---------------------------------------------------------------------------
# editpair


def test_editpair_names_changed_part(tmp_path, capsys):
    variant = _variant(tmp_path, "variant.json", {"pencil_skirt.length": 0.9})
    code, out, _ = _run(capsys, "editpair", LISTING1, variant)
    assert code == 0
    record = json.loads(out)
    assert record["changed_parts"] == ["pencil_skirt"]
    assert "pencil skirt" in record["prompt"]
    assert record["prompt"].endswith("while keeping other parts unchanged.")


def test_editpair_identical_configs_exit_1(capsys):
    code, out, _ = _run(capsys, "editpair", LISTING1, LISTING1)
    assert code == 1
    assert json.loads(out)["code"] == "NO_DIFFERENCE"


# ---------------------------------------------------------------------------
# simparams


def test_simparams_identity_returns_base_values(capsys):
    code, out, _ = _run(capsys, "simparams", "cotton")
    assert code == 0
    doc = json.loads(out)
    base, _ = lookup_base("cotton")
    assert doc["params"] == base.to_dict()


def test_simparams_with_target_scores(capsys):
    code, out, _ = _run(capsys, "simparams", "denim",
                        "--soft", "9", "--light", "8",
                        "--smooth", "7", "--thickness", "2")
    assert code == 0
    doc = json.loads(out)
    assert all(v > 0 for v in doc["params"].values())
    assert doc["target_scores"] == {"soft": 9, "light": 8,
                                    "smooth": 7, "thickness": 2}


def test_simparams_unknown_material_exits_1(capsys):
    code, out, _ = _run(capsys, "simparams", "velour")
    assert code == 1
    assert json.loads(out)["code"] == "UNKNOWN_MATERIAL"


# ---------------------------------------------------------------------------
# diffpattern


def test_diffpattern_self_is_zero(tmp_path, capsys):
    pat = tmp_path / "l1.json"
    _run(capsys, "compile", LISTING1, "--pattern", str(pat))
    code, out, _ = _run(capsys, "diffpattern", str(pat), str(pat))
    assert code == 0
    report = json.loads(out)
    assert report["chamfer_cm"] == 0.0
    assert report["fscore"] == 1.0
    assert report["tau_cm"] == 1.0


def test_diffpattern_tau_flag(tmp_path, capsys):
    pat1 = tmp_path / "l1.json"
    pat2 = tmp_path / "l2.json"
    _run(capsys, "compile", LISTING1, "--pattern", str(pat1))
    _run(capsys, "compile", LISTING2, "--pattern", str(pat2))
    code, out, _ = _run(capsys, "diffpattern", str(pat1), str(pat2),
                        "--tau", "2.5")
    assert code == 0
    report = json.loads(out)
    assert report["tau_cm"] == 2.5
    assert report["fscore"] == 0.0  # disjoint roles


# ---------------------------------------------------------------------------
# registry override


def test_registry_env_override(tmp_path, capsys, monkeypatch):
    reg_path = tmp_path / "registry.json"
    reg_path.write_text(json.dumps(default_registry().to_dict()))
    monkeypatch.setenv("PATTERNC_REGISTRY", str(reg_path))
    code, out, _ = _run(capsys, "validate", LISTING1)
    assert code == 0
    assert json.loads(out)["ok"] is True


# ---------------------------------------------------------------------------
# real entry points


def test_module_entrypoint():
    proc = subprocess.run([sys.executable, "-m", "patternc",
                           "validate", LISTING1],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["ok"] is True


@pytest.mark.skipif(shutil.which("patternc") is None,
                    reason="console script not on PATH")
def test_console_script():
    proc = subprocess.run(["patternc", "compile", LISTING2],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert len(parse_pattern(proc.stdout).panels) == 4
