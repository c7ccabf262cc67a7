import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from oddsw.algebra import HalfInt, OriginHit, open_arg_increment
from oddsw.boundary import DDParams, NDParams, NNParams, build, dirichlet, dn_swap, no_flux_bc, kx_shift
from oddsw.bulk import PhysParams
from oddsw.indices import (CurveKind, Empty, EmptyRegion, Hyperbola, Line, OnSurface, ParabolaCurve,
                           SQRT2, Verdict, arc_intersections, asymptotic_curve, avoids_origin,
                           bec_holds_phs_nn, boundary_polynomials, curve_kind, escape_asymptotes,
                           index_B, index_E, index_E_table, index_I, index_I_geometric, index_P,
                           index_vector, nd_from_reduced, nn_from_reduced, reduce_nd, reduce_nn,
                           transition_report, winding_B, winding_N)
from oddsw.oracles import intersect_sample, parabola_winding_numeric
from oddsw.suites import random_family_params, random_invertible, random_parabola

seeds = st.integers(0, 2 ** 32 - 1)


def nd(m, q, p):
    return build(nd_from_reduced(m, q, p))


def nn_ex(delta, p=None):
    return build(nn_from_reduced(1.0, delta, 0.5j))


# ---------------------------------------------------------------- reduced parameters

def test_reduce_nd_examples(p):
    r = reduce_nd(NDParams(alpha=0, lam=0), p)
    assert (r.m, r.q) == (-1, 0)
    assert reduce_nd(NDParams(alpha=0, lam=0.1), p).q == pytest.approx(-1)
    assert reduce_nd(NDParams(alpha=0.5j, lam=1), p).m == pytest.approx(-1 / 9)


@given(st.floats(-6, 0), st.floats(-4, 4))
def test_nd_reduced_roundtrip(m, q):
    p = PhysParams()
    r = reduce_nd(nd_from_reduced(m, q, p), p)
    assert r.m == pytest.approx(m, abs=1e-12) and r.q == pytest.approx(q, abs=1e-12)


def test_reduce_nn_thresholds(p):
    r = reduce_nn(NNParams(mu=0.5j, l1=1, l2=1), p)
    assert (r.sigma, r.delta2) == (1, 0)
    assert r.Mminus == pytest.approx(0.75 - 0.2 * SQRT2)
    assert r.Mplus == pytest.approx(0.75 + 0.2 * SQRT2)
    assert r.Iplus == r.Iminus == pytest.approx(0.71)
    assert r.Ecal == pytest.approx(0.39) and r.Bcal == pytest.approx(0.75)


# ---------------------------------------------------------------- P, I, E, B examples

def test_index_P_examples(p):
    assert index_P(dirichlet(), p) == 2
    assert index_P(nd(-1, 2, p), p) == 3
    assert index_P(nd(-1, -2, p), p) == 1
    assert index_P(nn_ex(0), p) == 0
    with pytest.raises(OnSurface):
        index_P(nd(-1, SQRT2, p), p)


def test_asymptotic_curves(p):
    assert isinstance(asymptotic_curve(dirichlet(), p), Empty)
    c = asymptotic_curve(build(NDParams(alpha=0, lam=0.3)), p)
    assert isinstance(c, Line) and c.m == pytest.approx(-1)
    fp = NNParams(mu=0.3 + 0.5j, l1=1.2, l2=-0.4)
    h = asymptotic_curve(build(fp), p)
    assert isinstance(h, Hyperbola)
    assert h.center_x == pytest.approx(-(0.3 + 0.4) / p.nu)


def test_arc_intersections_examples():
    assert arc_intersections(Line(-1, 1)) == (1, 0)
    assert arc_intersections(Line(-2, -2)) == (0, 0)
    assert arc_intersections(Empty()) == (0, 0)


def test_index_I_examples(p):
    assert index_I(nd(-1, 1, p), p) == 1
    assert index_I(nd(-2, -2, p), p) == 0
    assert index_I(nn_ex(1), p) == 1
    assert index_I(dirichlet(), p) == 0


def test_escape_examples(p):
    esc = escape_asymptotes(dirichlet(), p)
    assert (esc.omega_plus_inf.value, esc.omega_minus_inf.value) == pytest.approx((2.5, -2.5))
    esc = escape_asymptotes(nn_ex(0), p)
    assert esc.omega_plus_inf.value == pytest.approx(0.39 / 0.284)
    assert esc.omega_minus_inf.value == pytest.approx(-0.39 / 0.284)
    for lam in (-0.7, 0.2, 1.3):
        esc = escape_asymptotes(build(NDParams(alpha=0.4, lam=lam)), p)
        assert esc.omega_plus_inf.value == pytest.approx(-esc.omega_minus_inf.value)
    # exceptional escapes sit on the q = ±(m+1) and q = m-1 surfaces
    assert escape_asymptotes(nd(-2, -1, p), p).omega_minus_inf.kind == "infinite"
    assert escape_asymptotes(nd(-2, 1, p), p).omega_plus_inf.kind == "infinite"
    esc = escape_asymptotes(nd(-2, -3, p), p)
    assert esc.omega_plus_inf.kind == esc.omega_minus_inf.kind == "zero"


def test_index_E_examples(p):
    assert index_E(dirichlet(), p) == -1
    assert index_E(nd(-2, -2, p), p) == 1
    assert index_E(nn_ex(0), p) == -1
    with pytest.raises(OnSurface):
        index_E(nd(-2, -3, p), p)


def test_index_B_examples(p):
    assert index_B(dirichlet(), p) == 0
    assert index_B(build(NDParams(alpha=0, lam=-0.1)), p) == 1
    assert index_B(nn_ex(0), p) == -2
    assert index_B(nd(-0.5, 0.0, p), p) == 0


def test_index_vector_examples(p):
    iv = index_vector(dirichlet(), p)
    assert iv.as_tuple() == (2, 0, -1, 0) and iv.M == 2 and iv.verdict is Verdict.holds
    iv = index_vector(nd(-1, 1, p), p)
    assert iv.as_tuple() == (2, 1, -1, 1) and iv.M == 3 and iv.verdict is Verdict.violated
    iv = index_vector(nn_ex(1), p)
    assert iv.as_tuple() == (1, 1, -1, 0) and iv.M == 2 and iv.verdict is Verdict.holds
    iv = index_vector(nd(-1, SQRT2, p), p)
    assert iv.verdict is Verdict.on_boundary and iv.P is None and iv.M is None
    assert iv.line().startswith("P=undefined")


def test_no_flux_condition_indices(p):
    iv = index_vector(no_flux_bc(4.0, p), p)
    assert iv.as_tuple() == (2, -1, 1, -1) and iv.verdict is Verdict.violated


# ---------------------------------------------------------------- parabola calculus

def test_curve_kind_examples():
    assert curve_kind(ParabolaCurve(0, 0, 1)) is CurveKind.Point
    assert curve_kind(ParabolaCurve(0, 1j, 1)) is CurveKind.Line
    assert curve_kind(ParabolaCurve(1, 1j, 1)) is CurveKind.Parabola
    assert curve_kind(ParabolaCurve(1, 2, 1j)) is CurveKind.HalfLine


def test_avoids_origin_examples():
    assert avoids_origin(ParabolaCurve(0, 1j, 1))
    assert not avoids_origin(ParabolaCurve(0, 1j, 1j))
    assert avoids_origin(ParabolaCurve(1, 1j, -1))
    assert not avoids_origin(ParabolaCurve(1, -2, 1))      # (k-1)²
    assert avoids_origin(ParabolaCurve(1, -2, 2))          # (k-1)² + 1


def test_winding_N_examples():
    assert winding_N(ParabolaCurve(0, 1j, 1)) == HalfInt.of(0.5)
    assert winding_N(ParabolaCurve(1, 1j, 1)) == HalfInt(0)
    assert winding_N(ParabolaCurve(1, 1j, -1)) == HalfInt.of(-1)
    with pytest.raises(OriginHit):
        winding_N(ParabolaCurve(0, 1j, 1j))


@given(seeds)
def test_winding_N_matches_sampled_winding(seed):
    pc = random_parabola(np.random.default_rng(seed))
    num = parabola_winding_numeric(pc)
    assert abs(num - float(winding_N(pc))) < 1e-6


def test_winding_N_against_sampling_on_a_window():
    """Open arg increment of P on k ∈ [-1e4, 1e4] rounds to the exact half-integer."""
    rng = np.random.default_rng(7)
    k = np.sinh(np.linspace(-np.arcsinh(1e4), np.arcsinh(1e4), 40001))
    for _ in range(300):
        pc = random_parabola(rng)
        w = open_arg_increment(pc(k))
        assert HalfInt.of(round(2 * w) / 2) == winding_N(pc)


# ---------------------------------------------------------------- boundary polynomials and B

@given(seeds, st.floats(-10, 10))
def test_boundary_polynomials_are_determinants(seed, kx):
    bd = build(random_family_params(np.random.default_rng(seed)))
    Pp, Pm = boundary_polynomials(bd)
    A1, A2 = bd.halves(kx)
    s = bd.scale() ** 2 * (1 + kx * kx)
    assert abs(Pp(kx) - np.linalg.det(A1 + A2)) < 1e-10 * s
    assert abs(Pm(kx) - np.linalg.det(A1 - A2)) < 1e-10 * s


def test_boundary_polynomial_examples(p):
    Pp, Pm = boundary_polynomials(build(DDParams((1, 2j), (0.5, 1), (1j, 0), (2, 1))))
    for a, b in ((Pp.c0, Pm.c0), (Pp.c1, Pm.c1), (Pp.c2, Pm.c2)):
        assert a == pytest.approx(-b)
    Pp, _ = boundary_polynomials(build(NNParams(mu=0, l1=0, l2=0)))
    assert Pp.c0 == 0 and abs(Pp.c1.imag) < 1e-15


@given(seeds)
def test_winding_B_equals_index_B(seed):
    p = PhysParams()
    bd = build(random_family_params(np.random.default_rng(seed)))
    b = index_B(bd, p)
    w = winding_B(bd)
    assume(b is not None and w is not None)
    assert float(w) == b


# ---------------------------------------------------------------- geometric and tabulated agreement

@given(seeds)
def test_geometric_I_agrees(seed):
    p = PhysParams()
    rng = np.random.default_rng(seed)
    bd = build(random_family_params(rng, rng.choice(["ND", "NN"])))
    try:
        a = index_I(bd, p)
        b = index_I_geometric(bd, p)
    except (OnSurface, EmptyRegion):
        assume(False)
    assert a == b


@given(seeds)
def test_intersections_sampled(seed):
    p = PhysParams()
    rng = np.random.default_rng(seed)
    curve = asymptotic_curve(build(random_family_params(rng, rng.choice(["ND", "NN"]))), p)
    try:
        exact = arc_intersections(curve)
    except OnSurface:
        assume(False)
    assert intersect_sample(curve) == exact


@given(seeds)
def test_escape_table_agrees(seed):
    p = PhysParams()
    rng = np.random.default_rng(seed)
    bd = build(random_family_params(rng, rng.choice(["ND", "NN"])))
    try:
        a, b = index_E(bd, p), index_E_table(bd, p)
    except (OnSurface, EmptyRegion):
        assume(False)
    assert a == b


# ---------------------------------------------------------------- invariances

@given(seeds, st.floats(-5, 5))
def test_orbit_and_shift_invariance(seed, tau):
    p = PhysParams()
    rng = np.random.default_rng(seed)
    bd = build(random_family_params(rng))
    try:
        iv = index_vector(bd, p)
    except EmptyRegion:
        assume(False)
    assert index_vector(bd.apply(random_invertible(rng)), p) == iv
    assert index_vector(kx_shift(bd, tau), p) == iv
    assert iv.M is None or iv.M == iv.P + iv.I


def test_dn_double_swap(p):
    g = no_flux_bc(4.0, p)
    assert index_vector(dn_swap(dn_swap(g)), p) == index_vector(g, p)


# ---------------------------------------------------------------- BEC regions

@given(st.floats(-4, 0), st.floats(-3, 3))
def test_nd_bec_region(m, q):
    p = PhysParams()
    iv = index_vector(nd(m, q, p), p)
    assume(iv.verdict is not Verdict.on_boundary)
    assert (iv.verdict is Verdict.holds) == (abs(q) < abs(m + 1))


@given(st.floats(-3, 3))
def test_nd_phs_slice_never_holds(q):
    p = PhysParams()
    iv = index_vector(nd(-1, q, p), p)
    assert iv.verdict is not Verdict.holds


@given(st.floats(-1.5, 1.5), st.floats(0, 1.5), st.floats(-1.5, 1.5))
def test_nn_phs_bec_region(s, d, mi):
    p = PhysParams()
    iv = index_vector(build(nn_from_reduced(s, d, 1j * mi)), p)
    assume(iv.verdict is not Verdict.on_boundary)
    assert (iv.verdict is Verdict.holds) == bec_holds_phs_nn(s, d * d, mi * mi, p.nu)


# ---------------------------------------------------------------- transitions

def _deltas(report):
    return {e["surface"]: (e["type"], e["expected_delta"]) for e in report}


def test_transition_q_sqrt2(p):
    r = _deltas(transition_report(nd(-1, 1, p), nd(-1, 2, p), p))
    assert list(r) == ["q=sqrt2"]
    typ, d = r["q=sqrt2"]
    assert typ == "a" and (d["P"], d["I"], d["E"]) == (1, -1, 0)


def test_transition_q_zero(p):
    r = _deltas(transition_report(nd(-0.5, 0.5, p), nd(-0.5, -0.5, p), p))
    assert list(r) == ["q=0"]
    assert r["q=0"][0] == "d" and r["q=0"][1]["B"] == -2


def test_transition_nn_phs_nonelementary(p):
    rep = transition_report(nn_ex(0), nn_ex(1), p)
    by = {e["surface"]: e for e in rep}
    assert by["D2=I+"]["t"] == pytest.approx(by["D2=I-"]["t"])
    assert by["D2=I+"]["expected_delta"]["I"] == 2
    assert by["D2=E"]["type"] == "c" and abs(by["D2=E"]["expected_delta"]["E"]) == 2
    assert by["D2=B"]["expected_delta"]["B"] == 2


def test_transition_requires_same_family(p):
    with pytest.raises(ValueError):
        transition_report(nd(-1, 1, p), nn_ex(0), p)
    assert transition_report(dirichlet(), dirichlet(), p) == []
