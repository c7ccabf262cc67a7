"""Sweep the reduced ND plane (m, q) and print the verdict map.

    python scripts/nd_chart.py --out nd_chart.csv --n 41
"""
import argparse
import csv
import io

from oddsw.bulk import PhysParams
from oddsw.cli import Axis, ChartRequest, cmd_chart

SYMBOL = {"holds": "+", "violated": ".", "on_boundary": "#"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=41)
    ap.add_argument("--out", default="nd_chart.csv")
    args = ap.parse_args()
    n = args.n
    req = ChartRequest("ND", Axis("m", -4.0, 0.0, n), Axis("q", -3.0, 3.0, n), {}, PhysParams())
    text = cmd_chart(req, args.out)
    rows = list(csv.DictReader(io.StringIO(text)))
    # q down the page (top = +3), m across
    grid = {(r["m"], r["q"]): r for r in rows}
    ms = list(dict.fromkeys(r["m"] for r in rows))
    qs = list(dict.fromkeys(r["q"] for r in rows))[::-1]
    print("verdict map: '+' holds, '.' violated, '#' on a transition surface")
    for q in qs:
        print(f"{float(q):+6.2f} " + "".join(SYMBOL[grid[(m, q)]["verdict"]] for m in ms))
    print(" " * 7 + f"m from {float(ms[0]):g} to {float(ms[-1]):g}")
    tuples = sorted({(r["P"], r["I"], r["E"], r["B"]) for r in rows if r["on_boundary"] == "0"})
    print(f"{len(tuples)} distinct (P, I, E, B) off surfaces:", ", ".join("(" + ",".join(t) + ")" for t in tuples))


if __name__ == "__main__":
    main()
