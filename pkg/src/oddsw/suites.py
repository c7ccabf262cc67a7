"""Seeded verification suites behind `oddsw verify`, plus the random generators they share.

Each suite returns a Report; a case fails when an analytic statement and its
independent check disagree. Cases that land on a transition surface are skipped,
not failed (they have measure zero and are reported as such).
"""
from __future__ import annotations

import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import C2, HalfInt
from .boundary import (BoundaryData, DDParams, EverywhereSingular, FiberSingular, NDParams, NNParams,
                       build, is_phs, is_self_adjoint, is_self_adjoint_full, kx_shift, phs_by_params,
                       von_neumann_U)
from .bulk import BandLabel, PhysParams, chern_numeric
from .indices import (EmptyRegion, OnSurface, ParabolaCurve, Verdict, arc_intersections,
                      asymptotic_curve, avoids_origin, bec_holds_phs_nn, curve_kind, index_E,
                      index_E_table, index_P, index_vector, nd_from_reduced, nn_from_reduced,
                      winding_N)
from .oracles import (count_mergers, intersect_sample, levinson_total, numeric_W_infty,
                      parabola_winding_numeric, trace_branches)

# one representative per nonempty region of the ND (m, q) chart
CURATED_ND = [(-3.54, -1.88), (-3.54, 1.86), (-3.3, -0.72), (-3.3, 0.7), (-2.28, -2.28),
              (-2.06, 2.2), (-1.02, -0.84), (-1.02, 0.84), (-0.6, -2.42), (-0.3, -0.3),
              (-0.3, 0.3), (-0.12, -1.3)]
# (Σ, Δ, Re μ, Im μ) spread over the four Re μ + Σ columns and the rows of the NN tables
CURATED_NN = [(1.478, -0.026, 0.298, -0.03), (1.405, -1.126, 0.087, 0.672),
              (-1.497, 0.078, -0.334, 0.006), (-1.271, -0.15, 0.922, 0.691),
              (-1.01, -0.304, 0.855, -0.453), (1.419, 0.112, -1.317, 0.168),
              (0.244, 0.283, -0.06, 0.073), (-1.459, -0.338, -0.051, -1.487),
              (1.495, 1.468, 1.416, -1.491), (1.265, 0.36, -1.376, 0.009)]


def curated_points(p: PhysParams) -> list:
    out = [(f"ND m={m} q={q}", build(nd_from_reduced(m, q, p))) for m, q in CURATED_ND]
    out += [(f"NN S={s} D={d} mu={mr}{mi:+}i", build(nn_from_reduced(s, d, complex(mr, mi))))
            for s, d, mr, mi in CURATED_NN]
    return out


# ---------------------------------------------------------------- generators

def random_c2(rng, scale: float = 1.0) -> C2:
    z = rng.normal(scale=scale, size=2) + 1j * rng.normal(scale=scale, size=2)
    return C2(complex(z[0]), complex(z[1]))


def random_complex(rng, scale: float = 1.0) -> complex:
    return complex(rng.normal(scale=scale), rng.normal(scale=scale))


def random_family_params(rng, family: str | None = None, phs: bool | None = None):
    family = family or rng.choice(["DD", "ND", "NN"], p=[0.2, 0.4, 0.4])
    phs = bool(rng.random() < 0.5) if phs is None else phs
    if family == "DD":
        return DDParams(random_c2(rng), random_c2(rng), random_c2(rng), random_c2(rng))
    if family == "ND":
        alpha = complex(rng.normal()) if phs else random_complex(rng)
        lamp = 0.0 if phs else float(rng.normal())
        return NDParams(alpha, float(rng.normal()), lamp, random_c2(rng), random_c2(rng), random_c2(rng))
    mu = 1j * rng.normal() if phs else random_complex(rng)
    mup = complex(rng.normal()) if phs else random_complex(rng)
    l1p, l2p = (0.0, 0.0) if phs else (float(rng.normal()), float(rng.normal()))
    return NNParams(complex(mu), mup, float(rng.normal()), float(rng.normal()), l1p, l2p,
                    random_c2(rng), random_c2(rng))


def random_invertible(rng, max_cond: float = 1e3) -> np.ndarray:
    while True:
        G = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if np.linalg.cond(G) < max_cond:
            return G


def random_parabola(rng) -> ParabolaCurve:
    """A mix of genuine parabolas, half-lines, lines and points, all avoiding 0."""
    while True:
        kind = rng.integers(4)
        c0, c1, c2 = (random_complex(rng) for _ in range(3))
        if kind == 1:
            c1 = c0 * rng.normal()          # collinear leading terms: a half-line
        elif kind == 2:
            c0 = 0j
        elif kind == 3:
            c0 = c1 = 0j
        pc = ParabolaCurve(c0, c1, c2)
        if avoids_origin(pc):
            return pc


# ---------------------------------------------------------------- report

@dataclass
class Report:
    suite: str
    seed: int
    cases: int = 0
    failures: int = 0
    max_dev: float = 0.0
    records: list = field(default_factory=list)
    skipped: int = 0
    seconds: float = 0.0

    def add(self, case, ok: bool, dev: float = 0.0, **detail):
        self.cases += 1
        self.failures += int(not ok)
        if np.isfinite(dev):
            self.max_dev = max(self.max_dev, float(dev))
        self.records.append({"case": case, "ok": bool(ok), "dev": float(dev), **detail})

    def skip(self, case, reason: str):
        self.skipped += 1
        self.records.append({"case": case, "ok": None, "skipped": reason})

    def as_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------- suites

def _selfadjoint(rep, rng, n, p):
    for i in range(n):
        bd = build(random_family_params(rng))
        a, b = is_self_adjoint(bd), is_self_adjoint_full(bd, p)
        rep.add(i, a and b, kind="constructed", two_by_four=a, two_by_six=b)
        noisy = BoundaryData(bd.a1, bd.a1p, bd.a2p + random_c2(rng, 0.3), bd.a2, bd.b1, bd.b2)
        a, b = is_self_adjoint(noisy), is_self_adjoint_full(noisy, p)
        rep.add(i, a == b, kind="perturbed", two_by_four=a, two_by_six=b)


def _unitary(rep, rng, n, p):
    for i in range(n):
        bd = build(random_family_params(rng))
        kx = float(rng.normal(scale=3.0))
        try:
            U = von_neumann_U(bd, kx)
        except FiberSingular:
            rep.skip(i, "A1 + A2 singular")
            continue
        dev = float(np.abs(U @ U.conj().T - np.eye(2)).max())
        rep.add(i, dev < 1e-12, dev)


def _phs(rep, rng, n, p):
    for i in range(n):
        fp = random_family_params(rng)
        a, b = is_phs(build(fp)), phs_by_params(fp)
        rep.add(i, a == b, numeric=a, params=b)


def _same_indices(a, b) -> bool:
    return a.as_tuple() == b.as_tuple() and a.M == b.M and a.verdict == b.verdict


def _orbit(rep, rng, n, p):
    for i in range(n):
        bd = build(random_family_params(rng))
        G = random_invertible(rng)
        try:
            a, b = index_vector(bd, p), index_vector(bd.apply(G), p)
        except (EmptyRegion, EverywhereSingular) as e:
            rep.skip(i, str(e))
            continue
        rep.add(i, _same_indices(a, b), before=a.line(), after=b.line())


def _shift(rep, rng, n, p):
    for i in range(n):
        bd = build(random_family_params(rng))
        tau = float(rng.normal(scale=2.0))
        try:
            a, b = index_vector(bd, p), index_vector(kx_shift(bd, tau), p)
        except (EmptyRegion, EverywhereSingular) as e:
            rep.skip(i, str(e))
            continue
        rep.add(i, _same_indices(a, b), before=a.line(), after=b.line())


def _winding(rep, rng, n, p):
    for i in range(n):
        pc = random_parabola(rng)
        exact = winding_N(pc)
        num = parabola_winding_numeric(pc)
        ok = HalfInt.of(round(2 * num) / 2) == exact and abs(num - float(exact)) < 1e-6
        rep.add(i, ok, abs(num - float(exact)), kind=curve_kind(pc).value, exact=float(exact))


def _intersections(rep, rng, n, p):
    for i in range(n):
        bd = build(random_family_params(rng, family=rng.choice(["ND", "NN"])))
        try:
            exact = arc_intersections(asymptotic_curve(bd, p))
        except OnSurface as e:
            rep.skip(i, e.surface)
            continue
        sampled = intersect_sample(asymptotic_curve(bd, p))
        rep.add(i, exact == sampled, exact=list(exact), sampled=list(sampled))


def _escapes(rep, rng, n, p):
    for i in range(n):
        bd = build(random_family_params(rng, family=rng.choice(["ND", "NN"])))
        try:
            a, b = index_E(bd, p), index_E_table(bd, p)
        except (OnSurface, EmptyRegion) as e:
            rep.skip(i, str(e))
            continue
        rep.add(i, a == b, from_asymptotes=a, from_tables=b)


def _branches(rep, rng, n, p):
    for name, bd in curated_points(p)[:n]:
        iv = index_vector(bd, p)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            got = count_mergers(trace_branches(bd, p))
        want = (iv.P, iv.I, iv.E)
        rep.add(name, got == want, traced=list(got), closed_form=list(want))


def _chern(rep, rng, n, p):
    for band, want in ((BandLabel.plus, 2), (BandLabel.zero, 0), (BandLabel.minus, -2)):
        c = chern_numeric(p, 256, band)
        rep.add(band.name, abs(c - want) < 1e-3, abs(c - want), value=c)


def _levinson(rep, rng, n, p):
    for name, bd in curated_points(p)[:n]:
        L = levinson_total(bd, p).extrapolated
        W = numeric_W_infty(bd, p)
        dev = max(abs(L - round(L)), abs(L + W - 2))
        rep.add(name, dev < 0.1 and round(L) == index_P(bd, p), dev, W0=L, W_infty=W)


def _becregions(rep, rng, n, p):
    for i in range(n):
        if rng.random() < 0.5:
            m = -1.0 if rng.random() < 0.25 else float(rng.uniform(-4, 0))
            q = float(rng.uniform(-3, 3))
            iv = index_vector(build(nd_from_reduced(m, q, p)), p)
            if iv.verdict is Verdict.on_boundary:
                rep.skip(i, ",".join(iv.surfaces))
                continue
            want = abs(q) < abs(m + 1) and m != -1.0
            rep.add(i, (iv.verdict is Verdict.holds) == want, family="ND", m=m, q=q)
        else:
            s, d, mi = (float(x) for x in rng.uniform(-1.5, 1.5, 3))
            iv = index_vector(build(nn_from_reduced(s, d, 1j * mi)), p)
            if iv.verdict is Verdict.on_boundary:
                rep.skip(i, ",".join(iv.surfaces))
                continue
            want = bec_holds_phs_nn(s, d * d, mi * mi, p.nu)
            rep.add(i, (iv.verdict is Verdict.holds) == want, family="NN", sigma=s, delta=d, mu_im=mi)


SUITES = {
    "selfadjoint": _selfadjoint, "unitary": _unitary, "phs": _phs, "orbit": _orbit,
    "shift": _shift, "winding": _winding, "intersections": _intersections,
    "escapes": _escapes, "branches": _branches, "chern": _chern, "levinson": _levinson,
    "becregions": _becregions,
}


def run_suite(name: str, seed: int = 0, samples: int = 100, p: PhysParams | None = None) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; valid: {', '.join(sorted(SUITES))}")
    p = p or PhysParams()
    rep = Report(name, seed)
    t = time.perf_counter()
    SUITES[name](rep, np.random.default_rng(seed), samples, p)
    rep.seconds = time.perf_counter() - t
    return rep
