#!/usr/bin/env python3
"""Monte Carlo frequency of k-star decompositions in random d-regular graphs."""

import argparse
from pathlib import Path

from kstar.decompose import SolveOptions
from kstar.experiments import TrialConfig, run_existence, write_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--n", default="6,12,18,24,30", help="comma-separated vertex counts")
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--time-limit", type=float, default=60.0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    cfg = TrialConfig(d=args.d, k=args.k, n_list=[int(x) for x in args.n.split(",")], trials=args.trials,
                      seed=args.seed, solver=SolveOptions(time_limit=args.time_limit), workers=args.workers)
    res = run_existence(cfg)
    stem = args.out_dir / f"existence_d{args.d}_k{args.k}_s{args.seed}"
    write_text(stem.with_suffix(".csv"), res.csv())
    write_text(stem.with_suffix(".json"), res.json())
    for n, s in res.summary.items():
        print(f"n={n:>4} found={s['found']:>4}/{s['trials']} freq={s['frequency']:.3f} "
              f"wilson=[{s['wilson_lo']:.3f},{s['wilson_hi']:.3f}] none={s['proven_none']} unknown={s['unknown']}")


if __name__ == "__main__":
    main()
