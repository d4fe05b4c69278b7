#!/usr/bin/env python3
"""Run all three experiments into one directory and print a method comparison.

Desk scale by default; --paper-scale switches to the full-size setup
(100x2000, c in 1000..3000, 1000 trials, 50000 histogram runs — expect a
long wait at that size).
"""

import argparse
from pathlib import Path

import numpy as np

from partsketch import ExperimentConfig, paper_scale, run_fig1, run_fig2, run_table1


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--strategy", default="enhanced",
                        choices=("enhanced", "random", "balanced", "simple"))
    parser.add_argument("--paper-scale", action="store_true")
    parser.add_argument("--out-dir", default="out")
    return parser.parse_args()


def main():
    args = parse_args()
    cfg = ExperimentConfig(seed=args.seed, strategy=args.strategy)
    if args.paper_scale:
        cfg = paper_scale(cfg)
    out = Path(args.out_dir)

    table = run_table1(cfg, out)
    print(f"probability stats -> {out / 'table1.json'}")
    for name, stats in table.items():
        print(f"  {name:8s} max={stats['max']:.5f} mean={stats['mean']:.5f} min={stats['min']:.5f}")

    rows = run_fig1(cfg, out)
    print(f"\nerror curves ({cfg.trials} trials each) -> {out / 'fig1.csv'}")
    print(f"  {'c':>6s} {'finest':>10s} {'pairwise':>10s}")
    by_c = {}
    for r in rows:
        by_c.setdefault(r["c"], {})[r["method"]] = r["mean_rel_frob_err"]
    for c, errs in sorted(by_c.items()):
        pairwise = next(v for k, v in errs.items() if k != "finest")
        print(f"  {c:6d} {errs['finest']:10.5f} {pairwise:10.5f}")

    runs = run_fig2(cfg, out)
    print(f"\nspectral error samples ({cfg.runs} runs per method and c) -> {out / 'fig2.csv'}")
    means = {}
    for r in runs:
        means.setdefault((r["method"], r["c"]), []).append(r["rel_2norm_err"])
    for (method, c), vals in sorted(means.items()):
        print(f"  {method:20s} c={c:<6d} mean={np.mean(vals):.5f} median={np.median(vals):.5f}")


if __name__ == "__main__":
    main()
