"""Scan the error rate of the optimal Fourier-covariant attack and report where
the Alice-Bob information stops exceeding the Alice-Eve information."""

import argparse

import numpy as np

from cloneforge.cloner import clone_report
from cloneforge.covariance import xyz_pattern
from cloneforge.optimize import CloneProblem, ck_verdict


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lo", type=float, default=0.15, help="smallest error rate")
    ap.add_argument("--hi", type=float, default=0.30, help="largest error rate")
    ap.add_argument("--steps", type=int, default=16)
    args = ap.parse_args(argv)

    problem = CloneProblem(xyz_pattern(), "fourier")
    print(f"{'error':>7s} {'I_AB':>8s} {'I_AE':>8s} {'rate':>8s} secure")
    for err in np.linspace(args.lo, args.hi, args.steps):
        _, p = problem.max_fb_at(1.0 - err)
        rep = clone_report(problem.amplitudes(p), "fourier")
        v = ck_verdict(rep.I_AB, rep.I_AE)
        print(f"{err:7.3f} {rep.I_AB:8.4f} {rep.I_AE:8.4f} {v.R_lower:8.4f} {v.secure}")


if __name__ == "__main__":
    main()
