"""Bulk bands of the odd-viscous rotating shallow-water Hamiltonian."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import UnderResolved, numeric_winding


class ChartSingular(ValueError):
    """Section requested at the point its chart excludes."""


S1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=complex)
S2 = np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], dtype=complex)
S3 = np.array([[0, 0, 0], [0, 0, -1j], [0, 1j, 0]], dtype=complex)
SPIN = (S1, S2, S3)


@dataclass(frozen=True)
class PhysParams:
    f: float = 1.0
    nu: float = 0.2

    def __post_init__(self):
        if not (self.f > 0 and self.nu > 0):
            raise ValueError("f and nu must be positive")
        if not 4 * self.nu * self.f < 1:
            raise ValueError(f"need 4*nu*f < 1, got {4 * self.nu * self.f}")


class BandLabel(Enum):
    plus = 1
    zero = 0
    minus = -1


def k_sq(kx, ky):
    """kx² + ky², holomorphic in ky (no modulus)."""
    return kx * kx + ky * ky


def hamiltonian(kx, ky, p: PhysParams) -> np.ndarray:
    k2 = k_sq(kx, ky)
    return kx * S1 + ky * S2 + (p.f - p.nu * k2) * S3


def omega_plus(kx, ky, p: PhysParams):
    k2 = k_sq(kx, ky)
    w = np.sqrt(np.asarray(k2 + (p.f - p.nu * k2) ** 2, dtype=complex))
    return w[()] if np.ndim(w) == 0 else w


def band_rim(kx, p: PhysParams):
    kx = np.asarray(kx, dtype=float)
    r = np.sqrt(kx * kx + (p.f - p.nu * kx * kx) ** 2)
    return float(r) if r.ndim == 0 else r


def _unit_d(kx, ky, p: PhysParams):
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    m = p.f - p.nu * (kx * kx + ky * ky)
    w = np.sqrt(kx * kx + ky * ky + m * m)
    return kx / w, ky / w, m / w


def _projection_from_e(ex, ey, ez, band: BandLabel) -> np.ndarray:
    es = ex * S1 + ey * S2 + ez * S3
    es2 = es @ es
    if band is BandLabel.zero:
        return np.eye(3) - es2
    s = 1 if band is BandLabel.plus else -1
    return 0.5 * (es2 + s * es)


def eigenprojection(kx: float, ky: float, band: BandLabel, p: PhysParams) -> np.ndarray:
    """Spectral projection of H(k) onto band ``band``; depends on k only through d/|d|."""
    ex, ey, ez = _unit_d(kx, ky, p)
    return _projection_from_e(float(ex), float(ey), float(ez), band)


def projection_at_infinity(band: BandLabel) -> np.ndarray:
    return _projection_from_e(0.0, 0.0, -1.0, band)


def _hat(kx, ky, p: PhysParams):
    k2 = k_sq(kx, ky)
    w = omega_plus(kx, ky, p)
    q = (p.f - p.nu * k2) / w
    return np.array([k2 / w, kx - 1j * ky * q, ky + 1j * kx * q], dtype=complex)


def section(kx: float, ky: complex, chart: str, p: PhysParams) -> np.ndarray:
    """Band-plus eigenvector, chart 'infinity' (smooth at k=0) or 'zero' (smooth at k=∞).

    ky may be complex; the vector is then the analytic continuation.
    """
    kx = complex(kx)
    ky = complex(ky)
    if chart == "infinity":
        den = kx - 1j * ky
        if abs(den) == 0.0:
            if abs(kx) == 0.0 and abs(ky) == 0.0:
                return np.array([0, 1, 1j], dtype=complex)
            raise ChartSingular("kx - i ky = 0 away from the origin")
        return _hat(kx, ky, p) / den
    if chart == "zero":
        den = kx + 1j * ky
        if abs(den) == 0.0:
            raise ChartSingular("chart 'zero' excludes kx + i ky = 0")
        return _hat(kx, ky, p) / den
    raise ValueError(f"unknown chart {chart!r}")


def section_zero_at_infinity() -> np.ndarray:
    return np.array([0, 1, -1j], dtype=complex)


def transition_function(kx, ky):
    return (kx + 1j * ky) / (kx - 1j * ky)


def transition_winding(p: PhysParams, n: int = 256, radius: float = 1.0, reverse: bool = False) -> float:
    if n < 64:
        raise ValueError("n must be at least 64")
    th = 2 * np.pi * np.arange(n) / n
    if reverse:
        th = -th
    return numeric_winding(transition_function(radius * np.cos(th), radius * np.sin(th)))


def _band_vectors(ex, ey, ez, band: BandLabel) -> np.ndarray:
    """Normalized eigenvectors from the largest column of the projection; shape (..., 3)."""
    e = np.stack([ex, ey, ez], axis=-1)
    es = np.einsum("...a,aij->...ij", e.astype(complex), np.stack(SPIN))
    es2 = es @ es
    if band is BandLabel.zero:
        P = np.eye(3) - es2
    else:
        s = 1 if band is BandLabel.plus else -1
        P = 0.5 * (es2 + s * es)
    norms = np.linalg.norm(P, axis=-2)
    j = np.argmax(norms, axis=-1)
    v = np.take_along_axis(P, j[..., None, None], axis=-1)[..., 0]
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def chern_numeric(p: PhysParams, grid: int = 256, band: BandLabel = BandLabel.plus) -> float:
    """Fukui-Hatsugai lattice Chern number over the compactified plane.

    Polar grid in r ∈ [0,1] with |k| = r/(1-r); the ring r = 1 is the point at
    infinity where all directions share one projection.
    """
    if grid < 64:
        raise ValueError("grid must be at least 64")
    nr, nt = grid, grid
    r = np.linspace(0.0, 1.0, nr + 1)
    th = 2 * np.pi * np.arange(nt) / nt
    with np.errstate(divide="ignore"):
        kr = r / (1.0 - r)
    kr_in = kr[:-1, None]
    kx = kr_in * np.cos(th)[None, :]
    ky = kr_in * np.sin(th)[None, :]
    ex, ey, ez = _unit_d(kx, ky, p)
    ex = np.concatenate([ex, np.zeros((1, nt))])
    ey = np.concatenate([ey, np.zeros((1, nt))])
    ez = np.concatenate([ez, -np.ones((1, nt))])
    v = _band_vectors(ex, ey, ez, band)
    # one representative per degenerate ring so the gauge is single-valued there
    v[0, :] = v[0, 0]
    v[-1, :] = v[-1, 0]

    def link(a, b):
        return np.einsum("...i,...i->...", a.conj(), b)

    v00 = v[:-1, :]
    v10 = v[1:, :]
    v11 = np.roll(v[1:, :], -1, axis=1)
    v01 = np.roll(v[:-1, :], -1, axis=1)
    w = link(v00, v10) * link(v10, v11) * link(v11, v01) * link(v01, v00)
    phase = np.angle(w)
    if np.max(np.abs(phase)) > np.pi / 2:
        raise UnderResolved("plaquette Berry phase exceeds guard; increase grid")
    # plaquettes ordered (r, θ) form a positively oriented loop in the k-plane
    return float(np.sum(phase) / (2 * np.pi))
