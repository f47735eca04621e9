#!/usr/bin/env python3
"""Export f-hat curves (the threshold figure) for d=20, k in {11, 12, 13}."""

import argparse
from pathlib import Path

from kstar.thresholds import check_P1_detail, check_P2, default_grid, fhat_csv, plot_fhat, sign_changes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=20)
    ap.add_argument("--k", type=int, nargs="+", default=[11, 12, 13])
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    for k in args.k:
        dk = (args.d, k)
        series = plot_fhat(dk, default_grid(dk, args.points))
        path = args.out_dir / f"fhat_d{args.d}_k{k}.csv"
        path.write_text(fhat_csv(series))
        p2 = check_P2(dk)
        survivors = len(check_P1_detail(dk).surviving) if p2 else "-"
        print(f"{path}: P2={p2} sign_changes={len(sign_changes(series))} surviving_roots={survivors}")


if __name__ == "__main__":
    main()
