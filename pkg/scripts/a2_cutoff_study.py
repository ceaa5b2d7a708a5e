"""Behaviour of the outer integral as region III is cut to a2 >= eps.

Prints (eps, value, (full - value) / eps); a bounded last column means the
integrand has no singularity at the a2 = 0 edge.
"""

import argparse

from levy2d.quadrature import integrate_outer


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--eps", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4, 1e-5])
    args = p.parse_args()
    full = integrate_outer(args.tol)
    print(f"full            {full.value:.15f}  (error estimate {full.error_estimate:.2e})")
    for eps in args.eps:
        v = integrate_outer(args.tol, a2_min=eps).value
        print(f"eps={eps:<10.0e} {v:.15f}  slope={(full.value - v) / eps:.6f}")


if __name__ == "__main__":
    main()
