#!/usr/bin/env python3
"""Sampled first-level-leaf histogram vs the exact limiting law and its
Gamma(2,1/2) n -> infinity limit.

Usage: python scripts/leaf_histogram.py [--n 100] [--m 2000] [--trials 2000] [--seed 1]
"""

import argparse

from andortrees.analytic import first_level_leaf_law
from andortrees.sampler import gamma_two_half_cdf, ks_critical, monte_carlo


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--m", type=int, default=2000)
    parser.add_argument("--trials", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    report = monte_carlo(
        args.m, args.n, args.trials, args.seed, ["first_level_leaf_histogram"]
    )
    extra = report.stats["first_level_leaf_histogram"].extra
    hist = extra["histogram"]
    law = first_level_leaf_law(args.n, max(hist) + 10)
    scale = extra["scale"]

    print(f"# n={args.n} m={args.m} trials={args.trials} seed={args.seed}")
    print(f"# sampled mean {extra['mean']:.4f}, exact limit mean {sum(j*p for j,p in enumerate(law)):.4f}")
    print(f"# KS vs Gamma(2,1/2): {extra['ks_statistic']:.4f} "
          f"(1% critical at N={args.trials}: {ks_critical(0.01, args.trials):.4f})")
    print(f"{'j':>4} {'sampled':>10} {'exact law':>10} {'gamma bin':>10}")
    for j in range(0, max(hist) + 1):
        sampled = hist.get(j, 0) / args.trials
        gamma_bin = gamma_two_half_cdf((j + 0.5) / scale) - gamma_two_half_cdf(
            (j - 0.5) / scale
        )
        print(f"{j:>4} {sampled:>10.5f} {law[j]:>10.5f} {gamma_bin:>10.5f}")


if __name__ == "__main__":
    main()
