"""Translates C_{mu+nv} meeting C_0 beyond the pairwise-lemma set, and where they touch.

For random (a, b) lists the extra (m, n) found by brute force, and checks by
sampling that each extra cylinder meets the boundary of C_0 only inside the
lemma's cylinders.
"""

import argparse
from collections import Counter

import numpy as np

from levy2d.geometry import enumerate_overlapping_translates, lemma_translates
from levy2d.verification import check_lemma1_boundary, random_params


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    a, b = random_params(np.random.default_rng(args.seed), args.n)
    extra = Counter()
    conds = Counter()
    for z, bb in zip(a, b):
        for t in enumerate_overlapping_translates(z, bb) - lemma_translates(z):
            extra[t] += 1
            m, n = t
            conds[(t, abs(m + n * z) < 2 and abs(m * bb + n) < 2)] += 1
    print(f"{args.n} instances; extra translates by (m, n):")
    for t, c in sorted(extra.items()):
        print(f"  {t}: {c}")
    print("example: a=-0.9+0.3i, b=0.3 ->", sorted(enumerate_overlapping_translates(complex(-0.9, 0.3), 0.3)
                                                 - lemma_translates(complex(-0.9, 0.3))))
    print(check_lemma1_boundary(args.n, args.seed).line())


if __name__ == "__main__":
    main()
