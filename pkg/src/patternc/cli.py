"""Command-line interface.

Every subcommand prints JSON to standard output (configs in canonical
form, so outputs feed back into other subcommands). Exit codes: 0 on
success, 1 when validation or a domain rule fails (the report or error
object still goes to standard output), 2 for usage errors, which print
the synopsis to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assembler import compile_garment, export_svg, parse_pattern, serialize_pattern
from .body import BodyModel, DEFAULT_BODY
from .codec import decode_merge, encode_vector, make_skeleton, parse_vector, serialize_vector
from .config import (
    canonical_serialize,
    denormalize_config,
    load_config,
    normalize_config,
    validate_config,
)
from .errors import PatterncError
from .metrics import DEFAULT_SAMPLES_PER_EDGE, DEFAULT_TAU_CM, pattern_chamfer
from .registry import load_registry
from .sampler import make_edit_pair, run_pipeline
from .simparams import (
    DescriptorScores,
    IDENTITY_PRESERVING,
    LITERAL,
    lookup_base,
    map_material,
)

_MODES = {"identity": IDENTITY_PRESERVING, "literal": LITERAL}


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _registry(args):
    return load_registry(getattr(args, "registry", None))


def _body(args) -> BodyModel:
    path = getattr(args, "body", None)
    if path is None:
        return DEFAULT_BODY
    return BodyModel.from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_compile(args) -> int:
    result = compile_garment(load_config(args.config), _body(args),
                             registry=_registry(args))
    if not result.ok:
        _emit({"ok": False,
               "report": result.report.to_dict() if result.report else None,
               "validity": result.validity.to_dict() if result.validity else None})
        return 1
    text = serialize_pattern(result.pattern)
    wrote = False
    if args.pattern:
        Path(args.pattern).write_text(text + "\n")
        wrote = True
    if args.svg:
        Path(args.svg).write_text(export_svg(result.pattern))
        wrote = True
    if not wrote:
        sys.stdout.write(text + "\n")
    return 0


def _cmd_validate(args) -> int:
    report = validate_config(load_config(args.config), _registry(args))
    _emit(report.to_dict())
    return 0 if report.ok else 1


def _cmd_normalize(args) -> int:
    reg = _registry(args)
    cfg = normalize_config(load_config(args.config), reg, _body(args))
    sys.stdout.write(canonical_serialize(cfg, reg))
    return 0


def _cmd_denormalize(args) -> int:
    reg = _registry(args)
    cfg = denormalize_config(load_config(args.config), reg, _body(args))
    sys.stdout.write(canonical_serialize(cfg, reg))
    return 0


def _cmd_skeleton(args) -> int:
    reg = _registry(args)
    cfg = make_skeleton(load_config(args.config), reg)
    sys.stdout.write(canonical_serialize(cfg, reg))
    return 0


def _cmd_encode(args) -> int:
    values, mask = encode_vector(load_config(args.config), _registry(args))
    sys.stdout.write(serialize_vector(values, mask))
    return 0


def _cmd_decode(args) -> int:
    reg = _registry(args)
    skeleton = load_config(args.skeleton)
    values, mask = parse_vector(Path(args.vector).read_text())
    merged = decode_merge(skeleton, values, mask, reg)
    sys.stdout.write(canonical_serialize(merged, reg))
    return 0


def _cmd_sample(args) -> int:
    manifest = run_pipeline(args.n, args.seed, out_dir=args.out,
                            body=_body(args), registry=_registry(args),
                            workers=args.workers)
    _emit({
        "out": str(args.out),
        "manifest": str(Path(args.out) / "manifest.json"),
        "n_requested": manifest.n_requested,
        "n_accepted": manifest.n_accepted,
        "rejections": manifest.rejections,
    })
    return 0


def _cmd_editpair(args) -> int:
    record = make_edit_pair(load_config(args.source), load_config(args.target),
                            _registry(args))
    _emit(record.to_dict())
    return 0


def _cmd_simparams(args) -> int:
    scores = (args.soft, args.light, args.smooth, args.thickness)
    if any(s is not None for s in scores) and None in scores:
        raise PatterncError(
            "give all four of --soft/--light/--smooth/--thickness or none",
            code="BAD_SCORES")
    target = None
    if None not in scores:
        target = DescriptorScores(*scores)
    params, base = map_material(args.material, target,
                                mode=_MODES[args.mode], pairing=args.pairing)
    _emit({
        "material": args.material.strip().lower(),
        "mode": args.mode,
        "pairing": args.pairing,
        "base_scores": base.to_dict(),
        "target_scores": (target or base).to_dict(),
        "params": params.to_dict(),
    })
    return 0


def _cmd_diffpattern(args) -> int:
    a = parse_pattern(Path(args.a).read_text())
    b = parse_pattern(Path(args.b).read_text())
    report = pattern_chamfer(a, b, samples_per_edge=args.samples,
                             tau_cm=args.tau)
    _emit(report.to_dict())
    return 0


def _cmd_serve(args) -> int:
    from .service import ServiceConfig, run_service
    run_service(ServiceConfig(port=args.port, host=args.host,
                              registry_path=args.registry,
                              body_path=args.body,
                              static_dir=args.static))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--registry", metavar="PATH",
                        help="field registry JSON "
                             "(default: $PATTERNC_REGISTRY, else built-in)")
    common.add_argument("--body", metavar="PATH",
                        help="body measurements JSON (default: built-in)")

    parser = argparse.ArgumentParser(
        prog="patternc",
        description="Compile garment configs into validated sewing patterns.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", parents=[common],
                       help="config -> pattern JSON and/or SVG")
    p.add_argument("config")
    p.add_argument("--pattern", metavar="PATH", help="write pattern JSON here")
    p.add_argument("--svg", metavar="PATH", help="write SVG layout here")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("validate", parents=[common],
                       help="print a validation report")
    p.add_argument("config")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("normalize", parents=[common],
                       help="raw units -> [0, 1] floats")
    p.add_argument("config")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("denormalize", parents=[common],
                       help="[0, 1] floats -> raw units")
    p.add_argument("config")
    p.set_defaults(func=_cmd_denormalize)

    p = sub.add_parser("skeleton", parents=[common],
                       help="zero out every float leaf")
    p.add_argument("config")
    p.set_defaults(func=_cmd_skeleton)

    p = sub.add_parser("encode", parents=[common],
                       help="config -> 76-float vector and mask")
    p.add_argument("config")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", parents=[common],
                       help="skeleton + vector -> config")
    p.add_argument("skeleton")
    p.add_argument("vector")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("sample", parents=[common],
                       help="seeded dataset of sampled garments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("editpair", parents=[common],
                       help="edit instruction describing a config diff")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=_cmd_editpair)

    p = sub.add_parser("simparams",
                       help="simulation material parameters from scores")
    p.add_argument("material")
    for flag in ("--soft", "--light", "--smooth", "--thickness"):
        p.add_argument(flag, type=int, metavar="1..10")
    p.add_argument("--mode", choices=sorted(_MODES), default="identity")
    p.add_argument("--pairing", choices=("prose", "equations"),
                   default="prose")
    p.set_defaults(func=_cmd_simparams)

    p = sub.add_parser("diffpattern",
                       help="chamfer/F-score report for two patterns")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU_CM,
                   help="match threshold in cm")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES_PER_EDGE,
                   help="boundary samples per edge")
    p.set_defaults(func=_cmd_diffpattern)

    p = sub.add_parser("serve", parents=[common],
                       help="run the HTTP service")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", metavar="DIR",
                   help="also serve these files (editor bundle)")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the synopsis
        return int(exc.code or 0)
    try:
        return args.func(args)
    except PatterncError as exc:
        _emit(exc.to_dict())
        return 1
    except OSError as exc:
        print(f"patternc: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
