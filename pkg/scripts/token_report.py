"""Measure how much pruning shrinks serialized configs.

Samples garments, serializes each both pruned and in the fixed
full-schema layout, and reports token statistics
(whitespace-insensitive tokens: punctuation and atoms).

Example:
    python3 scripts/token_report.py --n 500 --seed 123000
"""

import argparse
import statistics

from patternc.config import (
    canonical_serialize,
    full_schema_config,
    prune_config,
    token_count,
)
from patternc.registry import load_registry
from patternc.sampler import sample_config


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--seed", type=int, default=123000)
    ap.add_argument("--registry", default=None)
    args = ap.parse_args()

    registry = load_registry(args.registry)
    pruned, full, ratios = [], [], []
    for i in range(args.n):
        cfg = sample_config(args.seed + i, registry=registry)
        np = token_count(canonical_serialize(prune_config(cfg, registry), registry))
        nf = token_count(canonical_serialize(full_schema_config(cfg, registry), registry))
        pruned.append(np)
        full.append(nf)
        ratios.append(np / nf)

    def line(name, xs):
        print(f"{name:8s} mean {statistics.mean(xs):8.2f}   "
              f"min {min(xs):7.2f}   max {max(xs):7.2f}")

    line("full", full)
    line("pruned", pruned)
    line("ratio", ratios)


if __name__ == "__main__":
    main()
