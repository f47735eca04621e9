#!/usr/bin/env python3
"""Check the second-moment landscape: b*, det(-H*), and a multistart search for the maximum."""

import argparse
import json
from pathlib import Path

from kstar import laplace as lp

DEFAULT = [(7, 4), (9, 6), (16, 10), (20, 12)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", nargs="*", default=[f"{d},{k}" for d, k in DEFAULT], help="d,k pairs")
    ap.add_argument("--starts", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out-dir", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    summary = []
    for text in args.pairs:
        d, k = map(int, text.split(","))
        res = lp.maximize_phi(d, k, lp.MaximizeOptions(starts=args.starts, seed=args.seed))
        (args.out_dir / f"landscape_runs_d{d}_k{k}.csv").write_text(lp.runs_csv(res))
        row = {
            "d": d, "k": k,
            "phi_bstar": float(lp.phi_bstar_closed(d, k)),
            "phi_boundary": float(lp.phi_boundary_closed(d, k)),
            "det_negH": float(lp.det_negH_closed(d, k)),
            "negH_pd": bool(lp.negH_is_positive_definite(d, k)),
            "max_value": float(res.value),
            "max_distance": float(res.distance),
            "matches_bstar": bool(res.matches_bstar),
        }
        summary.append(row)
        print(json.dumps(row))
    (args.out_dir / "landscape.json").write_text(json.dumps(summary, indent=2) + "\n")


if __name__ == "__main__":
    main()
