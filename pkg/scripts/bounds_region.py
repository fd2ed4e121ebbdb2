"""Price-of-robustness region as CSV: lower and upper bound on OPT(delta).

With no instance, uses the constants SW=0.9, OPT=0.7; with ``--instance``
it also solves for OPT(delta) exactly at each delta.
"""
import argparse
import csv
import sys

import numpy as np

from robust_contracts import BoundsReport, bounds, solve_robust
from robust_contracts.io import load


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sw", type=float, default=0.9)
    ap.add_argument("--opt", type=float, default=0.7)
    ap.add_argument("--instance")
    ap.add_argument("--points", type=int, default=99)
    ap.add_argument("-o", "--output")
    args = ap.parse_args()

    inst = None
    if args.instance:
        inst, rep = load(args.instance)
        if not rep.ok:
            sys.exit("invalid instance: " + "; ".join(rep.errors))
    deltas = np.linspace(0.0, 1.0, args.points + 2)[1:-1]
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["delta", "lb", "ub"] + (["opt_delta"] if inst else []))
    for d in deltas:
        if inst is None:
            rep = BoundsReport(args.opt, args.sw, float(d))
            w.writerow([f"{d:.6f}", f"{rep.lb:.6f}", f"{rep.ub:.6f}"])
        else:
            rep = bounds(inst, float(d))
            psi = solve_robust(inst, float(d)).psi
            w.writerow([f"{d:.6f}", f"{rep.lb:.6f}", f"{rep.ub:.6f}", f"{psi:.6f}"])
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
