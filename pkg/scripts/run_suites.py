"""Run every verification suite with a fixed seed and write one JSON report per suite."""
import argparse
import json
import os

from oddsw.suites import SUITES, run_suite

# suites whose sample count is fixed by their curated inputs
FIXED = {"chern", "branches", "levinson"}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default="reports")
    ap.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args()
    os.makedirs(args.outdir, exist_ok=True)
    for name in args.only or sorted(SUITES):
        rep = run_suite(name, args.seed, args.samples)
        with open(os.path.join(args.outdir, f"{name}.json"), "w") as fh:
            json.dump(rep.as_dict(), fh, indent=1, default=str)
        print(f"{name:<14} cases={rep.cases:<5} failures={rep.failures:<3} skipped={rep.skipped:<4} "
              f"max_dev={rep.max_dev:.2e}  {rep.seconds:.1f}s")


if __name__ == "__main__":
    main()
