"""Compile-latency distribution over sampled garments.

Example:
    python3 scripts/bench_compile.py --n 200 --seed 99
"""

import argparse
import statistics
import time

from patternc.assembler import compile_garment
from patternc.registry import load_registry
from patternc.sampler import sample_config


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--seed", type=int, default=99)
    ap.add_argument("--registry", default=None)
    args = ap.parse_args()

    registry = load_registry(args.registry)
    configs = [sample_config(args.seed + i, registry=registry)
               for i in range(args.n)]
    compile_garment(configs[0], registry=registry)  # warm caches

    times, panels = [], []
    for cfg in configs:
        t0 = time.perf_counter()
        result = compile_garment(cfg, registry=registry)
        times.append((time.perf_counter() - t0) * 1e3)
        panels.append(len(result.pattern.panels) if result.ok else 0)

    times.sort()
    q = lambda p: times[min(len(times) - 1, int(p * len(times)))]
    print(f"n          {len(times)}")
    print(f"panels     mean {statistics.mean(panels):.1f}   max {max(panels)}")
    print(f"latency ms mean {statistics.mean(times):.2f}   p50 {q(0.50):.2f}   "
          f"p90 {q(0.90):.2f}   p99 {q(0.99):.2f}   max {times[-1]:.2f}")


if __name__ == "__main__":
    main()
