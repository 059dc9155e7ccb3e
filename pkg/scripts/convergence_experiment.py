#!/usr/bin/env python3
"""Local-statistics convergence across growing graph families.

Builds several sequences (tori, cycles, paths-vs-cycles, and a
fixed-proportion union whose limit is a genuine mixture), prints the
pairwise distance tables, and shows how the distances shrink with size.

    python scripts/convergence_experiment.py [--radius R]
"""

import argparse
import sys

from qhdecomp.families import FamilySpec, sequence
from qhdecomp.stats import d_s, sparse_density, stat_vector
from qhdecomp.families import generate
from qhdecomp.graph import validate


def show(title, rep):
    print(f"\n== {title} (R={rep.R}, tail <= {rep.tail}) ==")
    print("sizes:", rep.sizes)
    for (i, j), v in sorted(rep.pairwise.items()):
        print(f"  d_s({i},{j}) = {v}  (~{float(v):.6f})")
    print("consecutive nonincreasing:", rep.consecutive_nonincreasing)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--radius", type=int, default=2)
    args = ap.parse_args()
    R = args.radius

    show("tori LxL", sequence([FamilySpec("grid_torus", (L, L)) for L in (6, 8, 10, 12)], R))
    show("cycles", sequence([FamilySpec("cycle", (n,)) for n in (6, 12, 24, 48)], R))

    # paths converge to the cycle limit: boundary effect vanishes
    print("\n== paths vs cycles: d_s and sparse-density gap ==")
    p3 = validate([(0, 1), (1, 2)], 3, 2)
    for n in (12, 24, 48, 96, 192):
        g, h = generate(FamilySpec("cycle", (n,))), generate(FamilySpec("path", (n,)))
        v, _ = d_s(stat_vector(g, R), stat_vector(h, R))
        gap = abs(sparse_density(p3, g) - sparse_density(p3, h))
        print(f"  n={n:4d}  d_s={float(v):.6f}  |density gap|={float(gap):.6f}")

    # fixed-proportion unions: stable statistics, a mixture limit
    def mixed(m):
        return FamilySpec(
            "disjoint_union",
            parts=(FamilySpec("grid_torus", (2 * m, 2 * m)), FamilySpec("cycle", (4 * m * m,))),
        )

    show("torus+cycle fixed proportions", sequence([mixed(m) for m in (3, 4, 5, 6)], R))
    return 0


if __name__ == "__main__":
    sys.exit(main())
