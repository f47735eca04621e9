#!/usr/bin/env python3
"""How often the independent-leaf necessary condition alpha(G) >= (2k-d)n/2k holds, and whether
every decomposable sample satisfies it."""

import argparse
from pathlib import Path

from kstar.experiments import run_leaf_condition, write_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=5)
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--n", type=int, nargs="+", default=[16, 24, 32, 40])
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for n in args.n:
        res = run_leaf_condition(args.d, args.k, n, args.trials, args.seed, workers=args.workers)
        stem = args.out_dir / f"leaf_d{args.d}_k{args.k}_n{n}_s{args.seed}"
        write_text(stem.with_suffix(".csv"), res.csv())
        write_text(stem.with_suffix(".json"), res.json())
        lo, hi = res.condition_interval
        print(f"n={n:>3} condition={res.condition_freq:.3f} [{lo:.3f},{hi:.3f}] "
              f"found={res.found_freq:.3f} implication_holds={res.implication_holds}")


if __name__ == "__main__":
    main()
