"""Per-theta spread of the window count and the theta budget it implies.

The relative standard error of the count estimator is sd(count) / mean(count)
/ sqrt(thetas); this prints the budget needed for a target relative error.
"""

import argparse
import math

from levy2d.diophantine import levy_estimate


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--thetas", type=int, default=2000)
    p.add_argument("--qmax", type=float, default=1e7)
    p.add_argument("--target", type=float, default=1.5e-3)
    p.add_argument("--seed", type=int, default=1)
    args = p.parse_args()
    e = levy_estimate(2, args.thetas, int(args.qmax), seed=args.seed)
    spread = e.stderr / e.mean * math.sqrt(args.thetas)
    need = math.ceil((spread / args.target) ** 2)
    print(f"mean={e.mean:.5f} stderr={e.stderr:.5f} per-theta relative spread={spread:.4f}")
    for n in (20_000, 40_000, need):
        print(f"thetas={n:>7}: relative stderr ~ {spread / math.sqrt(n):.5f}")


if __name__ == "__main__":
    main()
