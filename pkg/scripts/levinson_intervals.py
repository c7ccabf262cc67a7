"""Levinson phase counts on sub-intervals of kx for the Dirichlet condition.

Each interval's count should equal the signed number of branches leaving the band
inside it: one near kx = -2.224, one near kx = 1.157, none elsewhere.
"""
from oddsw.boundary import dirichlet
from oddsw.bulk import PhysParams
from oddsw.oracles import levinson_estimate

INTERVALS = [(-3.0, -1.0), (-1.5, -0.5), (0.2, 0.9), (0.5, 5.0), (-10.0, 10.0)]


def main():
    p = PhysParams()
    for a, b in INTERVALS:
        est = levinson_estimate(dirichlet(), a, b, p)
        vals = " ".join(f"{v:+.4f}" for v in est.values)
        print(f"[{a:+6.2f}, {b:+6.2f}]  eps={est.eps}  values {vals}  extrapolated {est.extrapolated:+.4f}")


if __name__ == "__main__":
    main()
