import numpy as np
import pytest
from hypothesis import given, strategies as st

from oddsw.bulk import (S1, S2, S3, BandLabel, ChartSingular, PhysParams, band_rim, chern_numeric,
                        eigenprojection, hamiltonian, omega_plus, projection_at_infinity, section,
                        section_zero_at_infinity, transition_function, transition_winding)
from oddsw.scattering import kappa_ev
from conftest import small

BANDS = list(BandLabel)


def test_phys_params_validation():
    with pytest.raises(ValueError):
        PhysParams(1.0, 0.25)
    with pytest.raises(ValueError):
        PhysParams(-1.0, 0.1)


def test_omega_plus_examples(p):
    assert omega_plus(0, 0, p) == pytest.approx(1.0)
    assert omega_plus(1, 0, p) == pytest.approx(np.sqrt(1.64))
    assert omega_plus(0.3, 0.7, p) == pytest.approx(omega_plus(0.3, -0.7, p))


def test_band_rim(p):
    assert band_rim(0, p) == p.f
    assert band_rim(2, p) == pytest.approx(np.sqrt(4.04))
    ky = np.linspace(-5, 5, 200001)
    assert np.min(omega_plus(1.0, ky, p).real) == pytest.approx(band_rim(1.0, p), abs=1e-9)


@given(small, small)
def test_hamiltonian_structure(kx, ky):
    p = PhysParams()
    H = hamiltonian(kx, ky, p)
    assert np.allclose(H, kx * S1 + ky * S2 + (p.f - p.nu * (kx * kx + ky * ky)) * S3)
    assert np.allclose(H, H.conj().T)
    # particle-hole symmetry: -conj H(k) = H(-k)
    assert np.allclose(-H.conj(), hamiltonian(-kx, -ky, p))
    ev = np.linalg.eigvalsh(H)
    w = omega_plus(kx, ky, p).real
    assert np.allclose(ev, [-w, 0, w], atol=1e-10)


@given(small, small)
def test_eigenprojections(kx, ky):
    p = PhysParams()
    H = hamiltonian(kx, ky, p)
    w = omega_plus(kx, ky, p).real
    total = np.zeros((3, 3), dtype=complex)
    for band, e in zip(BANDS, (w, 0, -w)):
        P = eigenprojection(kx, ky, band, p)
        assert np.abs(P @ P - P).max() < 1e-12
        assert np.allclose(P, P.conj().T)
        assert np.trace(P).real == pytest.approx(1.0)
        assert np.abs(H @ P - e * P).max() < 1e-10 * (1 + w)
        total += P
    assert np.allclose(total, np.eye(3))


def test_projection_limit_is_direction_independent(p):
    # the in-plane part of d/|d| decays like 1/(ν|k|), which bounds the spread across directions
    for R in (1e6, 1e7):
        Ps = [eigenprojection(R * np.cos(t), R * np.sin(t), BandLabel.plus, p) for t in np.linspace(0, 6, 7)]
        spread = max(np.abs(P - Ps[0]).max() for P in Ps)
        assert spread <= 1.0 / (p.nu * R)
        assert np.abs(Ps[0] - projection_at_infinity(BandLabel.plus)).max() <= 1.0 / (p.nu * R)
    assert spread < 1e-6


def test_section_examples(p):
    assert np.allclose(section(0, 0, "infinity", p), [0, 1, 1j])
    assert transition_function(1, 1) == pytest.approx(1j)
    with pytest.raises(ChartSingular):
        section(0, 0, "zero", p)
    with pytest.raises(ValueError):
        section(1, 0, "nowhere", p)
    big = section(1e7, 0.0, "zero", p)
    assert np.allclose(big / np.linalg.norm(big) * np.sqrt(2), section_zero_at_infinity(), atol=1e-5)


@given(small, small, st.sampled_from(["zero", "infinity"]))
def test_section_is_band_plus(kx, ky, chart):
    p = PhysParams()
    if abs(kx) + abs(ky) < 1e-6:
        return
    psi = section(kx, ky, chart, p)
    P = eigenprojection(kx, ky, BandLabel.plus, p)
    assert np.abs(P @ psi - psi).max() < 1e-10 * (1 + np.linalg.norm(psi))


@given(small, small)
def test_section_continued_to_evanescent_momentum(kx, kappa):
    p = PhysParams()
    ke = kappa_ev(kx, kappa, p)
    psi = section(kx, ke, "infinity", p)
    w = omega_plus(kx, ke, p)
    assert np.abs(hamiltonian(kx, ke, p) @ psi - w * psi).max() < 1e-10 * (1 + abs(w)) * np.linalg.norm(psi)


def test_chern_numbers(p):
    assert chern_numeric(p, 256) == pytest.approx(2.0, abs=1e-3)
    assert chern_numeric(p, 256, BandLabel.zero) == pytest.approx(0.0, abs=1e-3)
    assert chern_numeric(p, 256, BandLabel.minus) == pytest.approx(-2.0, abs=1e-3)
    with pytest.raises(ValueError):
        chern_numeric(p, 16)


def test_chern_other_params():
    assert chern_numeric(PhysParams(0.5, 0.4), 256) == pytest.approx(2.0, abs=1e-3)


def test_transition_winding(p):
    assert transition_winding(p, 256) == pytest.approx(2.0, abs=1e-6)
    assert transition_winding(p, 256, reverse=True) == pytest.approx(-2.0, abs=1e-6)
    assert transition_winding(p, 256, radius=0.5) == pytest.approx(transition_winding(p, 256, radius=2.0))
