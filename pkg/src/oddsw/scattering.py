"""Evanescent kinematics, Jost function and scattering amplitude on the half-plane y > 0."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import det2, wedge
from .boundary import (BoundaryData, DDParams, DNParams, FiberSingular, NDParams, NNParams,
                       rank_failures, ul_matrix, EverywhereSingular)
from .bulk import ChartSingular, PhysParams, band_rim, section


class OnBand(ValueError):
    """ω is not in the gap below the band rim at this kx."""


class SectionSingular(ArithmeticError):
    """A section used in the Jost matrix hits its chart singularity."""


@dataclass(frozen=True)
class GapPoint:
    kx: float
    omega: float


@dataclass(frozen=True)
class ScatteringSolution:
    S: complex
    T: complex


def csqrt(z):
    """Principal square root on complex input."""
    return np.sqrt(np.asarray(z, dtype=complex))[()]


def kappa_ev(kx, kappa, p: PhysParams):
    """Evanescent partner of κ at the same (kx, ω): Im ≥ 0 branch."""
    C = (1 - 2 * p.nu * p.f) / p.nu ** 2
    return 1j * csqrt(kappa * kappa + 2 * kx * kx + C)


def x_pm(omega, p: PhysParams):
    """Roots X of ν²X² + (1-2νf)X + f² - ω² = 0, i.e. the values of kx² + ky² at frequency ω."""
    nu, f = p.nu, p.f
    disc = np.sqrt(1 - 4 * nu * f + 4 * (omega * omega) * nu * nu)
    b = 1 - 2 * nu * f
    return (-b + disc) / (2 * nu * nu), (-b - disc) / (2 * nu * nu)


def ky_pm(kx: float, omega: float, p: PhysParams):
    Xp, Xm = x_pm(omega, p)
    if Xp >= kx * kx:
        raise OnBand(f"omega={omega} is not below the band rim {band_rim(kx, p)} at kx={kx}")
    return 1j * np.sqrt(kx * kx - Xp), 1j * np.sqrt(kx * kx - Xm)


def _lift(psi, ky, p: PhysParams) -> np.ndarray:
    """M·(ψ, i ky ψ): boundary values (η - ν u_y, u, v, ν v_y) of a plane wave."""
    return np.array([psi[0] - p.nu * 1j * ky * psi[1], psi[1], psi[2], p.nu * 1j * ky * psi[2]],
                    dtype=complex)


def _section(kx, ky, chart, p):
    try:
        return section(kx, ky, chart, p)
    except ChartSingular as e:
        raise SectionSingular(str(e)) from e


def jost_columns(bd: BoundaryData, kx: float, kappa: complex, p: PhysParams, out_chart: str = "zero"):
    """Ā·M·Ψ for the propagating wave at ky = κ and its evanescent partner."""
    ke = kappa_ev(kx, kappa, p)
    A = ul_matrix(bd, kx)
    w_out = A @ _lift(_section(kx, kappa, out_chart, p), kappa, p)
    w_ev = A @ _lift(_section(kx, ke, "infinity", p), ke, p)
    return w_out, w_ev


def jost_g(bd: BoundaryData, kx: float, kappa: complex, p: PhysParams, out_chart: str = "zero") -> complex:
    """g = det(Ā V); zeros with Im κ > 0 are edge states.

    out_chart selects the section for the κ wave: 'zero' is smooth at k = ∞,
    'infinity' is smooth at k = 0. The two differ by a factor of winding 2.
    """
    w_out, w_ev = jost_columns(bd, kx, kappa, p, out_chart)
    return complex(w_out[0] * w_ev[1] - w_out[1] * w_ev[0])


def _rescaled_column(bd_A, X, ky, kx, omega, p):
    h = p.f - p.nu * X
    psi = np.array([X, kx * omega - 1j * ky * h, ky * omega + 1j * kx * h], dtype=complex)
    return bd_A @ _lift(psi, ky, p), psi


def jost_g_rescaled(bd: BoundaryData, kx: float, omega: float, p: PhysParams, with_norms: bool = False):
    """Jost function on the bound-state sheet, with polynomial (overflow-free) sections.

    Both waves use ω·ψ̂ at ky± = i√(kx² - X±). With with_norms the section norms are
    also returned so callers can discard the spurious zeros where a section vanishes.
    """
    kyp, kym = ky_pm(kx, omega, p)
    Xp, Xm = x_pm(omega, p)
    A = ul_matrix(bd, kx)
    wp, sp = _rescaled_column(A, Xp, kyp, kx, omega, p)
    wm, sm = _rescaled_column(A, Xm, kym, kx, omega, p)
    g = complex(wp[0] * wm[1] - wp[1] * wm[0])
    if with_norms:
        return g, float(np.linalg.norm(sp)), float(np.linalg.norm(sm))
    return g


def _check_fiber(bd: BoundaryData, kx: float):
    try:
        bad = rank_failures(bd)
    except EverywhereSingular as e:
        raise FiberSingular(str(e)) from e
    if any(abs(kx - b) <= 1e-12 * (1 + abs(b)) for b in bad):
        raise FiberSingular(f"rank failure at kx={kx}")


def s_amplitude(bd: BoundaryData, kx: float, kappa: float, p: PhysParams,
                out_chart: str = "zero") -> ScatteringSolution:
    """Solve ĀM(Ψ_in + S Ψ_out + T Ψ_ev) = 0 by Cramer's rule."""
    _check_fiber(bd, kx)
    w_out, w_ev = jost_columns(bd, kx, kappa, p, out_chart)
    w_in, _ = jost_columns(bd, kx, -kappa, p, out_chart)
    g = det2(np.column_stack([w_out, w_ev]))
    if g == 0:
        raise FiberSingular("vanishing Jost determinant at a propagating momentum")
    S = -det2(np.column_stack([w_in, w_ev])) / g
    T = -det2(np.column_stack([w_out, w_in])) / g
    return ScatteringSolution(complex(S), complex(T))


def g_leading(fp, eps: float, phi, p: PhysParams):
    """Leading behaviour of g at (kx, κ) = (cos φ, -sin φ)/ε as ε → 0.

    Accepts scalar or array φ. Exact prefactors are irrelevant for windings;
    the φ-dependence is what matters.
    """
    nu = p.nu
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    root = np.sqrt(1 + c * c)
    if isinstance(fp, DNParams):
        raise TypeError("route DN through dn_swap first")
    if isinstance(fp, DDParams):
        t = c / eps
        out = 2j * (wedge(fp.a1p, fp.a2p) + t * (wedge(fp.a1p, fp.b2) + wedge(fp.b1, fp.a2p))
                    + t * t * wedge(fp.b1, fp.b2))
    elif isinstance(fp, NDParams):
        al = complex(fp.alpha)
        pre = (2 * fp.lam * c + 1j * nu * abs(1 + 1j * al) ** 2 * s
               - nu * abs(1 - 1j * al) ** 2 * root + 2 * fp.lamp * eps)
        out = pre * (c * wedge(fp.a1, fp.b1) + eps * wedge(fp.a1, fp.a1p)) / eps ** 2
    elif isinstance(fp, NNParams):
        mu, mup = complex(fp.mu), complex(fp.mup)
        l1, l2, l1p, l2p = fp.l1, fp.l2, fp.l1p, fp.l2p
        A1 = eps * (mup + l2p) + 1j * nu * s + (mu + l2) * c
        A2 = eps * (mup - l2p) + nu * root + (mu - l2) * c
        B1 = 1j * eps * (l1p + mup.conjugate()) - nu * s + 1j * (l1 + mu.conjugate()) * c
        B2 = 1j * eps * (l1p - mup.conjugate()) - 1j * nu * root + 1j * (l1 - mu.conjugate()) * c
        out = wedge(fp.a1, fp.a2) * (A1 * B2 - A2 * B1) / eps ** 2
    else:
        raise TypeError(f"not a family parameter set: {fp!r}")
    out = np.asarray(out)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------- vectorized paths

def _sections_vec(kx, ky, chart, p: PhysParams):
    k2 = kx * kx + ky * ky
    w = np.sqrt(k2 + (p.f - p.nu * k2) ** 2)
    q = (p.f - p.nu * k2) / w
    hat = np.stack([k2 / w, kx - 1j * ky * q, ky + 1j * kx * q])
    den = kx - 1j * ky if chart == "infinity" else kx + 1j * ky
    return hat / den


def _lift_vec(psi, ky, p):
    return np.stack([psi[0] - p.nu * 1j * ky * psi[1], psi[1], psi[2], p.nu * 1j * ky * psi[2]])


def _ul_vec(bd: BoundaryData, kx):
    """Ā(kx) for an array of kx: shape (2, 4, n)."""
    kx = np.asarray(kx, dtype=float)
    one = np.ones_like(kx)
    c1 = bd.a1p.vec[:, None] + bd.b1.vec[:, None] * kx
    c2 = bd.a2p.vec[:, None] + bd.b2.vec[:, None] * kx
    return np.stack([bd.a1.vec[:, None] * one, c1, c2, bd.a2.vec[:, None] * one], axis=1)


def _apply(A, v):
    return np.einsum("ijn,jn->in", A, v)


def jost_g_vec(bd: BoundaryData, kx, kappa, p: PhysParams, out_chart: str = "zero"):
    kx = np.asarray(kx, dtype=float)
    kappa = np.broadcast_to(np.asarray(kappa, dtype=complex), kx.shape)
    ke = kappa_ev(kx, kappa, p)
    A = _ul_vec(bd, kx)
    wo = _apply(A, _lift_vec(_sections_vec(kx, kappa, out_chart, p), kappa, p))
    we = _apply(A, _lift_vec(_sections_vec(kx, ke, "infinity", p), ke, p))
    return wo[0] * we[1] - wo[1] * we[0]


def s_amplitude_vec(bd: BoundaryData, kx, kappa: float, p: PhysParams, out_chart: str = "zero"):
    """S(kx, κ) = -g(kx, -κ)/g(kx, κ) on an array of kx."""
    return -jost_g_vec(bd, kx, -kappa, p, out_chart) / jost_g_vec(bd, kx, kappa, p, out_chart)


def rescaled_measure_vec(bd: BoundaryData, kx: float, omega, p: PhysParams):
    """|g| / (|w+| |w-|) on the bound-state sheet, for an array of ω at fixed kx.

    This is |sin| of the angle between the two boundary columns, so it lies in
    [0, 1] and is insensitive to the overall scale of the sections.
    Returns (measure, |ψ+|, |ψ-|).
    """
    omega = np.asarray(omega, dtype=float)
    Xp, Xm = x_pm(omega, p)
    kyp = 1j * np.sqrt(np.asarray(kx * kx - Xp, dtype=complex))
    kym = 1j * np.sqrt(np.asarray(kx * kx - Xm, dtype=complex))
    A = ul_matrix(bd, kx)
    cols_ = []
    norms = []
    for X, ky in ((Xp, kyp), (Xm, kym)):
        h = p.f - p.nu * X
        psi = np.stack([X + 0j, kx * omega - 1j * ky * h, ky * omega + 1j * kx * h])
        cols_.append(A @ _lift_vec(psi, ky, p))
        norms.append(np.linalg.norm(psi, axis=0))
    wp, wm = cols_
    g = wp[0] * wm[1] - wp[1] * wm[0]
    den = np.linalg.norm(wp, axis=0) * np.linalg.norm(wm, axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        m = np.where(den > 0, np.abs(g) / den, 0.0)
    return m, norms[0], norms[1]
