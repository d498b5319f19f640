"""Generate a garment dataset and print an acceptance summary.

Example:
    python3 scripts/build_dataset.py --n 20000 --seed 7 --out dataset/ --workers 8
"""

import argparse
import time

from patternc.registry import load_registry
from patternc.sampler import load_weights, run_pipeline


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="dataset")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--registry", default=None)
    ap.add_argument("--weights", default=None,
                    help="sampling weights JSON (asymmetric styles are rarer by default)")
    args = ap.parse_args()

    registry = load_registry(args.registry)
    t0 = time.perf_counter()
    manifest = run_pipeline(args.n, args.seed,
                            weights=load_weights(args.weights, registry),
                            out_dir=args.out, registry=registry,
                            workers=args.workers)
    dt = time.perf_counter() - t0

    print(f"requested  {manifest.n_requested}")
    print(f"accepted   {manifest.n_accepted} "
          f"({manifest.n_accepted / manifest.n_requested:.1%})")
    for reason, count in sorted(manifest.rejections.items()):
        print(f"rejected   {count:6d}  {reason}")
    print(f"elapsed    {dt:.1f} s ({manifest.n_requested / dt:.0f} configs/s)")
    print(f"manifest   {args.out}/manifest.json")


if __name__ == "__main__":
    main()
