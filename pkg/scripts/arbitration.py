"""Two-dimensional simulation against the candidate constants.

Candidates: the published value and 2 zeta(2) zeta(3) / (3 mu_S) with the true
zeta values, using the quadrature result for 3 mu_S.  Writes the run report
to --out if given.
"""

import argparse
import json

from levy2d.cli import main as cli_main


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--thetas", default="4e4")
    p.add_argument("--qmax", default="1e7")
    p.add_argument("--seed", default="0")
    p.add_argument("--out", default=None)
    args = p.parse_args()
    argv = ["simulate", "-d", "2", "--thetas", args.thetas, "--qmax", args.qmax, "--seed", args.seed]
    if args.out:
        import contextlib
        import io

        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = cli_main(argv)
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
        rep = json.loads(buf.getvalue())
        for k, z in rep["extra"]["standardized_distance"].items():
            print(f"{k:>26}: {rep['extra']['candidates'][k]:.12f}  z={z:+.2f}")
        return code
    return cli_main(argv)


if __name__ == "__main__":
    raise SystemExit(main())
