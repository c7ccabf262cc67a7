"""Local self-adjoint boundary conditions at y = 0 and their von Neumann unitaries.

A boundary condition is stored as six vectors in C^2 so that the 2x4 matrix
acting on (η, u, v, ν v_y) at the fiber kx reads

    Ā(kx) = (a1, a1' + kx b1, a2' + kx b2, a2).

Self-adjointness is A1 A2* + A2 A1* = 0 with A1, A2 the left and right 2x2 halves.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .algebra import C2, ZERO2, cols, det2, inv2, wedge
from .bulk import PhysParams


class DegenerateParams(ValueError):
    pass


class FiberSingular(ArithmeticError):
    """A1 ± A2 is not invertible at the requested kx."""


class EverywhereSingular(ValueError):
    """Ā(kx) has rank < 2 for every kx."""


class WrongFamily(ValueError):
    pass


class Family(Enum):
    DD = "DD"
    ND = "ND"
    DN = "DN"
    NN = "NN"


J = np.diag([-1.0 + 0j, 1.0 + 0j])
SWAP = np.array([[0, 1], [1, 0]], dtype=complex)
CLASSIFY_TOL = 1e-9
SA_TOL = 1e-10


@dataclass(frozen=True)
class BoundaryData:
    a1: C2
    a1p: C2
    a2p: C2
    a2: C2
    b1: C2
    b2: C2

    def __post_init__(self):
        for name in ("a1", "a1p", "a2p", "a2", "b1", "b2"):
            object.__setattr__(self, name, C2.of(getattr(self, name)))

    def vectors(self) -> tuple:
        return (self.a1, self.a1p, self.a2p, self.a2, self.b1, self.b2)

    def scale(self) -> float:
        return max(max(v.norm() for v in self.vectors()), 1e-300)

    def halves(self, kx: float):
        c1 = self.a1p.vec + kx * self.b1.vec
        c2 = self.a2p.vec + kx * self.b2.vec
        return cols(self.a1, c1), cols(c2, self.a2)

    def apply(self, G) -> "BoundaryData":
        """Left action of a constant invertible 2x2 matrix (same orbit)."""
        G = np.asarray(G, dtype=complex)
        return BoundaryData(*(C2.of(G @ v.vec) for v in self.vectors()))


# ---------------------------------------------------------------- parameters

@dataclass(frozen=True)
class DDParams:
    a1p: C2 = C2(1, 0)
    a2p: C2 = C2(0, 1)
    b1: C2 = ZERO2
    b2: C2 = ZERO2
    family = Family.DD


@dataclass(frozen=True)
class NDParams:
    """a2 = α a1, ᾱ a1' + a2' = iλ' a1, ᾱ b1 + b2 = iλ a1."""

    alpha: complex = 0j
    lam: float = 0.0
    lamp: float = 0.0
    a1: C2 = C2(1, 0)
    a1p: C2 = C2(0, 1)
    b1: C2 = ZERO2
    family = Family.ND


@dataclass(frozen=True)
class DNParams(NDParams):
    """Mirror of ND: same relations with the indices 1 and 2 interchanged.

    Only alpha = 0 is genuinely new: a1 = alpha a2 with alpha != 0 is ND data.
    """

    family = Family.DN

    def as_nd(self) -> NDParams:
        return NDParams(self.alpha, self.lam, self.lamp, self.a1, self.a1p, self.b1)


@dataclass(frozen=True)
class NNParams:
    mu: complex = 0j
    mup: complex = 0j
    l1: float = 0.0
    l2: float = 0.0
    l1p: float = 0.0
    l2p: float = 0.0
    a1: C2 = C2(1, 0)
    a2: C2 = C2(0, 1)
    family = Family.NN


FamilyParams = DDParams | NDParams | DNParams | NNParams


def build(fp) -> BoundaryData:
    if isinstance(fp, DNParams):
        if complex(fp.alpha) != 0:
            raise DegenerateParams("DN with alpha != 0 has a1 != 0 and is ND data")
        return swap(build(fp.as_nd()))
    if isinstance(fp, DDParams):
        return BoundaryData(ZERO2, fp.a1p, fp.a2p, ZERO2, fp.b1, fp.b2)
    if isinstance(fp, NDParams):
        a1 = C2.of(fp.a1)
        if a1.norm() == 0:
            raise DegenerateParams("ND needs a1 != 0")
        al = complex(fp.alpha)
        a1p, b1 = C2.of(fp.a1p), C2.of(fp.b1)
        a2 = a1 * al
        a2p = a1 * (1j * fp.lamp) - a1p * al.conjugate()
        b2 = a1 * (1j * fp.lam) - b1 * al.conjugate()
        return BoundaryData(a1, a1p, a2p, a2, b1, b2)
    if isinstance(fp, NNParams):
        a1, a2 = C2.of(fp.a1), C2.of(fp.a2)
        if abs(wedge(a1, a2)) <= CLASSIFY_TOL * max(a1.norm(), a2.norm()) ** 2:
            raise DegenerateParams("NN needs a1, a2 independent")
        mu, mup = complex(fp.mu), complex(fp.mup)
        a1p = a1 * mup + a2 * (1j * fp.l1p)
        a2p = a1 * (1j * fp.l2p) - a2 * mup.conjugate()
        b1 = a1 * mu + a2 * (1j * fp.l1)
        b2 = a1 * (1j * fp.l2) - a2 * mu.conjugate()
        return BoundaryData(a1, a1p, a2p, a2, b1, b2)
    raise TypeError(f"not a family parameter set: {fp!r}")


def classify(bd: BoundaryData, tol: float = CLASSIFY_TOL) -> Family:
    s = bd.scale()
    n1, n2 = bd.a1.norm(), bd.a2.norm()
    if n1 <= tol * s and n2 <= tol * s:
        return Family.DD
    if abs(wedge(bd.a1, bd.a2)) > tol * max(n1, n2) ** 2:
        return Family.NN
    # ND and DN overlap when a1, a2 are parallel and both nonzero; DN is kept for a1 = 0
    return Family.ND if n1 > tol * s else Family.DN


def _nd_decode(bd: BoundaryData) -> NDParams:
    a1 = bd.a1.vec
    n2 = np.vdot(a1, a1).real
    alpha = np.vdot(a1, bd.a2.vec) / n2
    ilp = np.vdot(a1, np.conj(alpha) * bd.a1p.vec + bd.a2p.vec) / n2
    il = np.vdot(a1, np.conj(alpha) * bd.b1.vec + bd.b2.vec) / n2
    return NDParams(complex(alpha), float(il.imag), float(ilp.imag), bd.a1, bd.a1p, bd.b1)


def params_of(bd: BoundaryData, tol: float = CLASSIFY_TOL):
    """Recover family parameters (in the gauge carried by bd) from boundary data."""
    fam = classify(bd, tol)
    if fam is Family.DD:
        return DDParams(bd.a1p, bd.a2p, bd.b1, bd.b2)
    if fam is Family.ND:
        return _nd_decode(bd)
    if fam is Family.DN:
        nd = _nd_decode(dn_swap(bd))
        return DNParams(nd.alpha, nd.lam, nd.lamp, nd.a1, nd.a1p, nd.b1)
    basis = cols(bd.a1, bd.a2)
    c = np.linalg.solve(basis, np.column_stack([v.vec for v in (bd.a1p, bd.a2p, bd.b1, bd.b2)]))
    # a1' = μ' a1 + iλ1' a2, a2' = iλ2' a1 - μ̄' a2, b1 = μ a1 + iλ1 a2, b2 = iλ2 a1 - μ̄ a2
    return NNParams(mu=complex(c[0, 2]), mup=complex(c[0, 0]),
                    l1=float(c[1, 2].imag), l2=float(c[0, 3].imag),
                    l1p=float(c[1, 0].imag), l2p=float(c[0, 1].imag),
                    a1=bd.a1, a2=bd.a2)


# ---------------------------------------------------------------- matrices

def ul_matrix(bd: BoundaryData, kx: float) -> np.ndarray:
    A1, A2 = bd.halves(kx)
    return np.hstack([A1, A2])


def m_matrix(p: PhysParams) -> np.ndarray:
    """Maps Ψ = (η,u,v,η',u',v') to (η - ν u', u, v, ν v')."""
    M = np.zeros((4, 6), dtype=complex)
    M[0, 0], M[0, 4] = 1, -p.nu
    M[1, 1] = 1
    M[2, 2] = 1
    M[3, 5] = p.nu
    return M


def n_matrix(p: PhysParams) -> np.ndarray:
    N = np.zeros((6, 2), dtype=complex)
    N[0, 0], N[4, 0] = p.nu, 1
    N[3, 1] = 1
    return N


def omega_hat(p: PhysParams) -> np.ndarray:
    lam = 1.0 / (1.0 + p.nu ** 2)
    W = np.zeros((6, 6), dtype=complex)
    W[0, 2] = W[2, 0] = -lam
    W[1, 5] = W[5, 1] = -1.0 / p.nu
    W[2, 4] = W[4, 2] = lam * p.nu
    return W


def full_matrix(bd: BoundaryData, kx: float, p: PhysParams) -> np.ndarray:
    return ul_matrix(bd, kx) @ m_matrix(p)


def full_coefficients(bd: BoundaryData, p: PhysParams):
    """(A_c, A_k) with full_matrix = A_c + kx A_k."""
    A_c = full_matrix(bd, 0.0, p)
    return A_c, full_matrix(bd, 1.0, p) - A_c


def from_full(A_c, A_k, p: PhysParams, tol: float = 1e-12) -> BoundaryData:
    """Decode a kx-affine 2x6 boundary matrix into the six vectors."""
    A_c = np.asarray(A_c, dtype=complex)
    A_k = np.asarray(A_k, dtype=complex)
    s = max(np.abs(A_c).max(), np.abs(A_k).max(), 1.0)
    bad = (np.abs(A_c[:, 3]).max() > tol * s or np.abs(A_k[:, 3]).max() > tol * s
           or np.abs(p.nu * A_c[:, 0] + A_c[:, 4]).max() > tol * s
           or np.abs(A_k[:, [0, 4, 5]]).max() > tol * s)
    if bad:
        raise ValueError("matrix is not of the form Ā(kx) M")
    return BoundaryData(A_c[:, 0], A_c[:, 1], A_c[:, 2], A_c[:, 5] / p.nu, A_k[:, 1], A_k[:, 2])


def _sample_kx(samples: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).normal(scale=3.0, size=samples)


def is_self_adjoint(bd: BoundaryData, samples: int = 8) -> bool:
    s = bd.scale()
    for kx in _sample_kx(samples):
        A1, A2 = bd.halves(kx)
        r = A1 @ A2.conj().T + A2 @ A1.conj().T
        if np.abs(r).max() > SA_TOL * s * s * (1 + kx * kx):
            return False
    return True


def full_matrix_is_self_adjoint(A_c, A_k, p: PhysParams, samples: int = 8) -> bool:
    """A N = 0 and A Ω̂ A* = 0 for A = A_c + kx A_k at sampled kx."""
    A_c = np.asarray(A_c, dtype=complex)
    A_k = np.asarray(A_k, dtype=complex)
    N, W = n_matrix(p), omega_hat(p)
    s = max(np.abs(A_c).max(), np.abs(A_k).max(), 1e-300)
    for kx in _sample_kx(samples):
        A = A_c + kx * A_k
        sc = s * (1 + abs(kx))
        if np.abs(A @ N).max() > SA_TOL * sc:
            return False
        if np.abs(A @ W @ A.conj().T).max() > SA_TOL * sc * sc / min(p.nu, 1.0):
            return False
    return True


def is_self_adjoint_full(bd: BoundaryData, p: PhysParams, samples: int = 8) -> bool:
    return full_matrix_is_self_adjoint(*full_coefficients(bd, p), p, samples)


# ---------------------------------------------------------------- unitaries

def von_neumann_U(bd: BoundaryData, kx: float, rtol: float = 1e-12) -> np.ndarray:
    A1, A2 = bd.halves(kx)
    Ap = A1 + A2
    d = det2(Ap)
    if abs(d) <= rtol * max(np.abs(Ap).max(), 1e-300) ** 2:
        raise FiberSingular(f"A1 + A2 singular at kx={kx}")
    return inv2(Ap) @ (A1 - A2)


def _nd_U(alpha: complex, lam: float, lamp: float, kx: float) -> np.ndarray:
    a2 = abs(alpha) ** 2
    D = 1 + a2 + 1j * (lamp + kx * lam)
    R = np.array([[1, -alpha], [np.conj(alpha), -a2]], dtype=complex)
    return J + 2.0 / D * R


def closed_form_U(fp, kx: float) -> np.ndarray:
    if isinstance(fp, DDParams):
        return J.copy()
    if isinstance(fp, DNParams):
        return -SWAP @ _nd_U(complex(fp.alpha), fp.lam, fp.lamp, kx) @ SWAP
    if isinstance(fp, NDParams):
        return _nd_U(complex(fp.alpha), fp.lam, fp.lamp, kx)
    if isinstance(fp, NNParams):
        L1 = fp.l1p + kx * fp.l1
        L2 = fp.l2p + kx * fp.l2
        w = complex(fp.mup) + kx * complex(fp.mu)
        Ut = np.array([[1 + 1j * L1, w], [np.conj(w), -1 - 1j * L2]], dtype=complex)
        d = det2(Ut)
        if d == 0:
            raise FiberSingular("det Ũ = 0")
        return J - 2.0 / d * Ut
    raise TypeError(f"not a family parameter set: {fp!r}")


def unitary_curve(bd: BoundaryData):
    """kx -> U(kx) through the closed form of the recovered family parameters."""
    fp = params_of(bd)
    return lambda kx: closed_form_U(fp, kx)


def _regular_samples(bd: BoundaryData, samples: int, seed: int = 1) -> np.ndarray:
    ks = _sample_kx(samples, seed)
    try:
        bad = rank_failures(bd)
    except EverywhereSingular:
        return ks
    return np.array([k for k in ks if all(abs(k - b) > 1e-6 and abs(-k - b) > 1e-6 for b in bad)])


def is_phs(bd: BoundaryData, samples: int = 8, tol: float = 1e-10) -> bool:
    for kx in _regular_samples(bd, samples):
        if np.abs(von_neumann_U(bd, kx) - np.conj(von_neumann_U(bd, -kx))).max() > tol:
            return False
    return True


def phs_by_params(fp) -> bool:
    """Parameter-level criterion for particle-hole symmetry."""
    if isinstance(fp, DDParams):
        return True
    if isinstance(fp, NDParams):
        return fp.lamp == 0 and complex(fp.alpha).imag == 0
    return (fp.l1p == 0 and fp.l2p == 0 and complex(fp.mu).real == 0
            and complex(fp.mup).imag == 0)


def orbit_equivalent(bd1: BoundaryData, bd2: BoundaryData, samples: int = 8, tol: float = 1e-10) -> bool:
    ks = [k for k in _regular_samples(bd1, samples) if k in set(_regular_samples(bd2, samples))]
    for kx in ks:
        if np.abs(von_neumann_U(bd1, kx) - von_neumann_U(bd2, kx)).max() > tol:
            return False
    return True


# ---------------------------------------------------------------- rank, transforms

def _real_roots(coeffs, scale: float) -> list:
    """Real roots of sum c_j x^j (ascending, complex coefficients)."""
    c = np.array(coeffs, dtype=complex)
    tiny = 1e-13 * scale
    while c.size and abs(c[-1]) <= tiny:
        c = c[:-1]
    if c.size == 0:
        raise EverywhereSingular("Ā(kx) has rank < 2 for all kx")
    if c.size == 1:
        return []
    out = []
    for r in np.roots(c[::-1]):
        x = r.real
        val = np.polyval(c[::-1], x)
        dval = np.polyval(np.polyder(c[::-1]), x)
        if abs(r.imag) <= 1e-9 * (1 + abs(r)) and abs(val) <= 1e-8 * scale * (1 + abs(x)) ** (c.size - 1):
            if dval != 0:
                x = float(x - (val / dval).real)
            out.append(float(x))
    return sorted(out)


def rank_failures(bd: BoundaryData) -> list:
    fam = classify(bd)
    s = bd.scale() ** 2
    if fam is Family.NN:
        return []
    if fam is Family.DD:
        return _real_roots([wedge(bd.a1p, bd.a2p),
                            wedge(bd.a1p, bd.b2) + wedge(bd.b1, bd.a2p),
                            wedge(bd.b1, bd.b2)], s)
    if fam is Family.DN:
        bd = dn_swap(bd)
    return _real_roots([wedge(bd.a1, bd.a1p), wedge(bd.a1, bd.b1)], s)


def kx_shift(bd: BoundaryData, tau: float) -> BoundaryData:
    return replace(bd, a1p=bd.a1p + bd.b1 * tau, a2p=bd.a2p + bd.b2 * tau)


def swap(bd: BoundaryData) -> BoundaryData:
    return BoundaryData(bd.a2, bd.a2p, bd.a1p, bd.a1, bd.b2, bd.b1)


def dn_swap(bd: BoundaryData) -> BoundaryData:
    if classify(bd) not in (Family.DN, Family.ND):
        raise WrongFamily("dn_swap needs DN (or ND) data")
    return swap(bd)


def route(bd: BoundaryData) -> BoundaryData:
    """Send DN data to ND; other families unchanged."""
    return dn_swap(bd) if classify(bd) is Family.DN else bd


def dirichlet() -> BoundaryData:
    return build(DDParams())


def no_flux_bc(a: float, p: PhysParams) -> BoundaryData:
    """No normal flow plus ∂x u + a ∂y v = 0 at the wall, decoded from its 2x6 matrix."""
    A_c = np.zeros((2, 6), dtype=complex)
    A_k = np.zeros((2, 6), dtype=complex)
    A_c[0, 2] = 1
    A_c[1, 5] = a
    A_k[1, 1] = 1j
    return from_full(A_c, A_k, p)
