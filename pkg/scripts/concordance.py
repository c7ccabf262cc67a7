"""Closed-form indices against traced mergers and Levinson phase counts on the curated points.

Slow: about a minute for the traces and a few more for the Levinson totals.
"""
import argparse
import time
import warnings

from oddsw.bulk import PhysParams
from oddsw.indices import index_vector
from oddsw.oracles import ResolutionWarning, count_mergers, levinson_total, numeric_W_infty, trace_branches
from oddsw.suites import curated_points


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--no-levinson", action="store_true")
    args = ap.parse_args()
    p = PhysParams()
    bad = 0
    print(f"{'point':<40} {'closed form':>12} {'traced':>12} {'W0':>8} {'Winf':>6}")
    for name, bd in curated_points(p):
        t = time.perf_counter()
        iv = index_vector(bd, p)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            got = count_mergers(trace_branches(bd, p))
        want = (iv.P, iv.I, iv.E)
        W0 = float("nan") if args.no_levinson else levinson_total(bd, p).extrapolated
        Winf = numeric_W_infty(bd, p)
        flag = "" if got == want else "  <-- mismatch"
        bad += got != want
        print(f"{name:<40} {str(want):>12} {str(got):>12} {W0:8.3f} {Winf:6.2f}"
              f"  ({time.perf_counter() - t:.1f}s){flag}")
    print(f"{bad} mismatches")


if __name__ == "__main__":
    main()
