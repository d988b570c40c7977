#!/usr/bin/env python3
"""Sweep the convergence bounds over seeded random corpora.

Prints, per bound, the worst margin seen across the sweep; negative margins
beyond tolerance would mean a violated inequality.
"""

import argparse
from collections import defaultdict

from altproj.corpus import common_core, random_system
from altproj.diagnostics import bound_report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=20, help="systems per family")
    parser.add_argument("--iters", type=int, default=100)
    args = parser.parse_args()

    systems = []
    for seed in range(args.count):
        systems.append((f"triple9/{seed}", random_system(9, (3, 3, 3), seed=seed)))
        systems.append((f"core8/{seed}", common_core(8, (3, 4, 3), core_dim=1 + seed % 2, seed=seed)))

    worst = defaultdict(lambda: (float("inf"), ""))
    for name, system in systems:
        for check in bound_report(system, n_max=args.iters).entries:
            if check.margin < worst[check.name][0]:
                worst[check.name] = (check.margin, name)

    print(f"{2 * args.count} systems, horizon {args.iters}")
    print(f"{'bound':12s} {'worst margin':>14s}   at")
    for bound_name, (margin, where) in sorted(worst.items()):
        print(f"{bound_name:12s} {margin:+14.3e}   {where}")


if __name__ == "__main__":
    main()
