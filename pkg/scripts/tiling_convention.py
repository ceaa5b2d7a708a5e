"""Which lattice F(a, b) tiles: Z(1, b) + Z(a1, 1) or Z(1, b) + Z(-a1, 1)."""

import argparse

import numpy as np

from levy2d import fundamental_domain as fd
from levy2d.geometry import Region
from levy2d.verification import random_params


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--per-region", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = np.random.default_rng(args.seed)
    for reg in Region:
        a, b = random_params(rng, args.per_region, int(reg), margin=1e-3)
        plus = sum(fd.tiling_check(z, bb, 500, i) for i, (z, bb) in enumerate(zip(a, b)))
        minus = sum(fd.tiling_check(z, bb, 500, i, convention=-1) for i, (z, bb) in enumerate(zip(a, b)))
        print(f"region {reg.name:>3}: +a1 tiles {plus}/{len(a)}, -a1 tiles {minus}/{len(a)}")


if __name__ == "__main__":
    main()
