"""Compare the two Levy-constant estimators on the same random theta.

For d = 1 the target is pi^2 / (12 ln 2).  The per-theta slope estimator
drops the record interval straddling q_max and runs low; the window-count
estimator does not.  Also shows the effect of the window start q_min.
"""

import argparse

from levy2d.diophantine import LEVY_1D, levy_estimate


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("-d", type=int, default=1, choices=[1, 2])
    p.add_argument("--thetas", type=int, default=4000)
    p.add_argument("--qmax", type=float, default=1e6)
    p.add_argument("--q-min", type=int, nargs="+", default=[1, 10, 100, 1000])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    qmax = int(args.qmax)
    print(f"d={args.d} thetas={args.thetas} q_max={qmax}" + (f" target={LEVY_1D:.7f}" if args.d == 1 else ""))
    print(f"{'q_min':>6} {'count':>10} {'se':>8} {'slope':>10} {'se':>8}")
    for q_min in args.q_min:
        e = levy_estimate(args.d, args.thetas, qmax, seed=args.seed, q_min=q_min)
        print(f"{q_min:>6} {e.mean:10.5f} {e.stderr:8.5f} {e.slope_mean:10.5f} {e.slope_stderr:8.5f}")


if __name__ == "__main__":
    main()
