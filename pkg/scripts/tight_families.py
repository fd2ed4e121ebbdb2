"""Robust optimum on both tight families against the closed-form bounds."""
import argparse
import math
import time

from robust_contracts import gen_tight_lb, gen_tight_ub, solve_robust
from robust_contracts.generators import kappa


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--deltas", type=float, nargs="+", default=[0.04, 0.1, 0.25, 0.5])
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 50])
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print("family,delta,n,psi,lower,upper,seconds")
    for d in args.deltas:
        t0 = time.perf_counter()
        sol = solve_robust(gen_tight_ub(d), d, threads=args.threads)
        print(f"ub,{d},2,{sol.psi:.6f},,{1 - d:.6f},{time.perf_counter() - t0:.3f}")
    for d in args.deltas:
        lo = 1 - 2 * math.sqrt(d) + d
        for n in args.sizes:
            if n <= kappa(d):
                continue
            t0 = time.perf_counter()
            sol = solve_robust(gen_tight_lb(d, n), d, threads=args.threads)
            hi = lo + math.sqrt(d) / n
            print(f"lb,{d},{n},{sol.psi:.6f},{lo:.6f},{hi:.6f},{time.perf_counter() - t0:.3f}")


if __name__ == "__main__":
    main()
