"""Particle-hole symmetric NN chart over (Σ, Δ²) at fixed μ = i·mu_im.

Compares the computed verdict with the region Δ² > Σ² - |μ|² - ν² point by point.
"""
import argparse
import csv
import io

from oddsw.bulk import PhysParams
from oddsw.cli import Axis, ChartRequest, cmd_chart


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mu-im", type=float, default=0.5)
    ap.add_argument("--n", type=int, default=61)
    ap.add_argument("--out", default="nn_phs_chart.csv")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    p = PhysParams()
    req = ChartRequest("NN", Axis("sigma", -1.5, 1.5, args.n), Axis("delta2", 0.0, 2.0, args.n),
                       {"nn.mu_im": args.mu_im}, p)
    rows = list(csv.DictReader(io.StringIO(cmd_chart(req, args.out, args.jobs))))
    agree = disagree = edge = 0
    for r in rows:
        if r["on_boundary"] == "1":
            edge += 1
            continue
        s, d2 = float(r["sigma"]), float(r["delta2"])
        want = d2 > s * s - args.mu_im ** 2 - p.nu ** 2
        if (r["verdict"] == "holds") == want:
            agree += 1
        else:
            disagree += 1
            print("mismatch at", r)
    print(f"{len(rows)} points: {agree} agree, {disagree} disagree, {edge} on a surface")


if __name__ == "__main__":
    main()
