"""Closed-form index vector (P, I, E, B) of a boundary condition, and the geometry behind it.

P  signed count of edge branches merging with the upper band at finite kx
I  signed count of branches escaping parabolically (ω ~ kx²) as |kx| → ∞
E  signed count of branches with a positive flat asymptote as |kx| → ∞
B  winding of det U(kx) along the real kx line
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .algebra import HalfInt, OriginHit, wedge
from .boundary import BoundaryData, DDParams, NDParams, NNParams, params_of, route
from .bulk import PhysParams

SQRT2 = np.sqrt(2.0)
SURFACE_TOL = 1e-9


class OnSurface(ValueError):
    """Parameters lie (within tolerance) on a transition surface of the requested index."""

    def __init__(self, msg: str, surface: str = ""):
        super().__init__(msg)
        self.surface = surface


class EmptyRegion(RuntimeError):
    """A lookup landed in a cell the region tables mark as empty."""


# ---------------------------------------------------------------- reduced parameters

@dataclass(frozen=True)
class ReducedND:
    m: float
    q: float


@dataclass(frozen=True)
class ReducedNN:
    sigma: float
    delta2: float
    muR: float
    muI: float
    nu: float

    @property
    def mu2(self):
        return self.muR ** 2 + self.muI ** 2

    @property
    def Mplus(self):
        return self.sigma ** 2 - self.mu2 + self.nu * SQRT2 * (self.muR + self.sigma)

    @property
    def Mminus(self):
        return self.sigma ** 2 - self.mu2 - self.nu * SQRT2 * (self.muR + self.sigma)

    @property
    def Iplus(self):
        return self.sigma ** 2 - self.mu2 + 2 * self.nu * self.muR - self.nu ** 2

    @property
    def Iminus(self):
        return self.sigma ** 2 - self.mu2 - 2 * self.nu * self.muR - self.nu ** 2

    @property
    def Ecal(self):
        return (self.sigma - self.nu) ** 2 - self.mu2

    @property
    def Bcal(self):
        return self.sigma ** 2 - self.mu2

    def scale(self) -> float:
        return 1.0 + self.sigma ** 2 + self.mu2 + self.delta2 + self.nu * (abs(self.muR) + abs(self.sigma))


def reduce_nd(fp: NDParams, p: PhysParams) -> ReducedND:
    al = complex(fp.alpha)
    d = abs(1 - 1j * al) ** 2
    return ReducedND(-abs(1 + 1j * al) ** 2 / d, -2 * fp.lam / (p.nu * d))


def nd_from_reduced(m: float, q: float, p: PhysParams, lamp: float = 0.0) -> NDParams:
    """Invert (α, λ) ↦ (m, q) on the slice α ∈ iℝ with |α| < 1 (every m ≤ 0 is reached)."""
    if m > 0:
        raise ValueError("m must be <= 0")
    r = np.sqrt(-m)
    t = (1 - r) / (1 + r)   # α = i t gives m = -((1-t)/(1+t))²
    alpha = 1j * t
    d = abs(1 - 1j * alpha) ** 2
    return NDParams(alpha=alpha, lam=-q * p.nu * d / 2, lamp=lamp)


def reduce_nn(fp: NNParams, p: PhysParams) -> ReducedNN:
    mu = complex(fp.mu)
    return ReducedNN((fp.l1 + fp.l2) / 2, ((fp.l1 - fp.l2) / 2) ** 2, mu.real, mu.imag, p.nu)


def nn_from_reduced(sigma: float, delta: float, mu: complex, mup: complex = 0j,
                    l1p: float = 0.0, l2p: float = 0.0) -> NNParams:
    return NNParams(mu=mu, mup=mup, l1=sigma + delta, l2=sigma - delta, l1p=l1p, l2p=l2p)


def family_params(bd: BoundaryData):
    """Family parameters with DN routed to ND."""
    return params_of(route(bd))


def _near(x: float, y: float, scale: float) -> bool:
    return abs(x - y) <= SURFACE_TOL * scale


def _check(name: str, value: float, threshold: float, scale: float):
    if _near(value, threshold, scale):
        raise OnSurface(f"on surface {name}", name)


# ---------------------------------------------------------------- P

def _nd_P(r: ReducedND) -> int:
    s = max(1.0, abs(r.q))
    _check("q=sqrt2", r.q, SQRT2, s)
    _check("q=-sqrt2", r.q, -SQRT2, s)
    if r.q < -SQRT2:
        return 1
    return 2 if r.q < SQRT2 else 3


def _nn_P(r: ReducedNN) -> int:
    s = r.scale()
    _check("D2=M+", r.delta2, r.Mplus, s)
    _check("D2=M-", r.delta2, r.Mminus, s)
    d, Mp, Mm = r.delta2, r.Mplus, r.Mminus
    if d > Mp and d > Mm:
        return 2
    if Mm < d < Mp:
        return 1
    if Mp < d < Mm:
        return 3
    return 0 if Mm < Mp else 4


def index_P(bd: BoundaryData, p: PhysParams) -> int:
    fp = family_params(bd)
    if isinstance(fp, DDParams):
        return 2
    if isinstance(fp, NDParams):
        return _nd_P(reduce_nd(fp, p))
    return _nn_P(reduce_nn(fp, p))


# ---------------------------------------------------------------- asymptotic curves and arcs

@dataclass(frozen=True)
class Line:
    """c- = m c+ + q."""
    m: float
    q: float


@dataclass(frozen=True)
class Hyperbola:
    """c- (A2 + 2ν² c+) = A0 + A1 c+."""
    A0: float
    A1: float
    A2: float
    nu: float

    @property
    def center_x(self) -> float:
        return -self.A2 / (2 * self.nu ** 2)

    def implicit(self, cp, cm):
        return (self.A2 + 2 * self.nu ** 2 * cp) * cm - self.A0 - self.A1 * cp


@dataclass(frozen=True)
class Empty:
    pass


AsymCurve = Line | Hyperbola | Empty

ARC_UP = (np.pi / 2, 3 * np.pi / 4)       # kx → -∞
ARC_DOWN = (-np.pi / 2, -np.pi / 4)       # kx → +∞


def asymptotic_curve(bd: BoundaryData, p: PhysParams):
    fp = family_params(bd)
    if isinstance(fp, DDParams):
        return Empty()
    if isinstance(fp, NDParams):
        r = reduce_nd(fp, p)
        return Line(r.m, r.q)
    mu = complex(fp.mu)
    nu = p.nu
    return Hyperbola(2 * (abs(mu) ** 2 - fp.l1 * fp.l2),
                     nu * (2 * mu.real - fp.l1 - fp.l2),
                     nu * (2 * mu.real + fp.l1 + fp.l2), nu)


def _real_roots_poly(coef_desc, tol=1e-7):
    c = np.trim_zeros(np.asarray(coef_desc, dtype=float), "f")
    if c.size <= 1:
        return []
    out = []
    for r in np.roots(c):
        if abs(r.imag) <= tol * (1 + abs(r)):
            x = r.real
            for _ in range(3):   # Newton polish
                d = np.polyval(np.polyder(c), x)
                if d == 0:
                    break
                x = x - np.polyval(c, x) / d
            out.append(float(x))
    return sorted(out)


def circle_points(curve) -> list:
    """Intersections of the curve with c+² + c-² = 2, as angles θ.

    Coalescing pairs off the arcs are dropped; on an arc they raise OnSurface.
    """
    if isinstance(curve, Empty):
        return []
    pts = []
    if isinstance(curve, Line):
        m, q = curve.m, curve.q
        a, b, c = 1 + m * m, 2 * m * q, q * q - 2
        disc = b * b - 4 * a * c
        if abs(disc) <= SURFACE_TOL * (b * b + abs(4 * a * c) + 1):
            cp = -b / (2 * a)
            _tangency(float(np.arctan2(m * cp + q, cp)))
            return []
        if disc < 0:
            return []
        for s in (1, -1):
            cp = (-b + s * np.sqrt(disc)) / (2 * a)
            pts.append((cp, m * cp + q))
    else:
        h = curve
        k = 2 * h.nu ** 2
        xc = h.center_x
        if _near(h.A0 + h.A1 * xc, 0.0, 1 + abs(h.A0) + abs(h.A1 * xc)):
            # degenerate: union of c+ = xc and c- = A1/k
            yc = h.A1 / k
            for cp, cm_sq in ((xc, 2 - xc * xc),):
                if cm_sq > 0:
                    pts += [(cp, np.sqrt(cm_sq)), (cp, -np.sqrt(cm_sq))]
            if 2 - yc * yc > 0:
                r = np.sqrt(2 - yc * yc)
                pts += [(r, yc), (-r, yc)]
        else:
            D = np.array([k, h.A2])             # descending coefficients in c+
            N = np.array([h.A1, h.A0])
            Q = np.polyadd(np.polymul(np.array([1.0, 0.0, -2.0]), np.polymul(D, D)), np.polymul(N, N))
            roots = _real_roots_poly(Q)
            for cp in roots:
                pts.append((cp, (h.A0 + h.A1 * cp) / (h.A2 + k * cp)))
    th = sorted(float(np.arctan2(cm, cp)) for cp, cm in pts)
    keep = []
    i = 0
    while i < len(th):
        if i + 1 < len(th) and th[i + 1] - th[i] <= 1e-7:
            _tangency(0.5 * (th[i] + th[i + 1]))
            i += 2
            continue
        keep.append(th[i])
        i += 1
    return keep


def _tangency(theta: float):
    """Coalescing intersections only matter on an arc, where I jumps by two."""
    for lo, hi in (ARC_UP, ARC_DOWN):
        if lo - 1e-7 <= theta <= hi + 1e-7:
            raise OnSurface("curve tangent to circle on an arc", "tangent")


def _in_arc(theta: float, arc) -> bool:
    lo, hi = arc
    for end in (lo, hi):
        if abs(theta - end) <= 1e-9:
            raise OnSurface("intersection at an arc endpoint", f"endpoint@{end:.4f}")
    return lo < theta < hi


def arc_intersections(curve) -> tuple:
    th = circle_points(curve)
    return (sum(_in_arc(t, ARC_UP) for t in th), sum(_in_arc(t, ARC_DOWN) for t in th))


# ---------------------------------------------------------------- I

def _nd_I(r: ReducedND) -> int:
    m, q = r.m, r.q
    s = max(1.0, abs(q), abs(m))
    for name, thr in (("q=sqrt2", SQRT2), ("q=-sqrt2", -SQRT2), ("q=m+1", m + 1), ("q=-(m+1)", -(m + 1))):
        _check(name, q, thr, s)
    a = abs(m + 1)
    if (SQRT2 < q < -(m + 1)) or (-SQRT2 < q < -a):
        return -1
    if (m + 1 < q < -SQRT2) or (a < q < SQRT2):
        return 1
    return 0


_E = None   # marks an empty cell
_NN_I_TABLES = {
    # rows: [D2 < I±], [I- < D2 < I+], [I+ < D2 < I-], [D2 > I±]; columns by D2 against M±
    "lt_-nu": [[0, 1, _E], [-1, 0, 1], [_E, 0, _E], [_E, -1, 0]],
    "-nu_0": [[_E, _E, _E], [-1, 0, 1], [_E, -2, -1], [_E, -1, 0]],
    "0_nu": [[_E, _E, _E], [_E, 2, 1], [1, 0, -1], [_E, 1, 0]],
    "gt_nu": [[0, -1, _E], [_E, 0, _E], [1, 0, -1], [_E, 1, 0]],
}


def _nn_I_row(r: ReducedNN) -> int:
    d, Ip, Im = r.delta2, r.Iplus, r.Iminus
    if d < Ip and d < Im:
        return 0
    if Im < d < Ip:
        return 1
    if Ip < d < Im:
        return 2
    return 3


def _nn_I(r: ReducedNN) -> int:
    s = r.scale()
    x = r.muR + r.sigma
    for name, val, thr in (("muR+Sigma=-nu", x, -r.nu), ("muR+Sigma=0", x, 0.0), ("muR+Sigma=nu", x, r.nu)):
        _check(name, val, thr, s)
    for name, thr in (("D2=M+", r.Mplus), ("D2=M-", r.Mminus), ("D2=I+", r.Iplus), ("D2=I-", r.Iminus)):
        _check(name, r.delta2, thr, s)
    lo, hi = sorted((r.Mplus, r.Mminus))
    col = 0 if r.delta2 < lo else (1 if r.delta2 < hi else 2)
    key = "lt_-nu" if x < -r.nu else "-nu_0" if x < 0 else "0_nu" if x < r.nu else "gt_nu"
    v = _NN_I_TABLES[key][_nn_I_row(r)][col]
    if v is None:
        raise EmptyRegion(f"table {key}, row {_nn_I_row(r)}, column {col} should be empty")
    return v


def index_I(bd: BoundaryData, p: PhysParams) -> int:
    fp = family_params(bd)
    if isinstance(fp, DDParams):
        return 0
    if isinstance(fp, NDParams):
        return _nd_I(reduce_nd(fp, p))
    return _nn_I(reduce_nn(fp, p))


def index_I_geometric(bd: BoundaryData, p: PhysParams) -> int:
    up, down = arc_intersections(asymptotic_curve(bd, p))
    return up - down


# ---------------------------------------------------------------- E

@dataclass(frozen=True)
class Asymptote:
    """Flat asymptote ω of an edge branch; kind 'finite', 'infinite' or 'zero'."""
    value: float
    kind: str = "finite"

    @property
    def exceptional(self) -> bool:
        return self.kind != "finite"


@dataclass(frozen=True)
class Escapes:
    omega_plus_inf: Asymptote     # branch at kx → +∞
    omega_minus_inf: Asymptote    # branch at kx → -∞


def _quotient(num: float, den: float, scale: float) -> Asymptote:
    if abs(den) <= SURFACE_TOL * scale:
        return Asymptote(np.inf, "infinite")
    if abs(num) <= SURFACE_TOL * scale:
        return Asymptote(0.0, "zero")
    return Asymptote(num / den)


def escape_asymptotes(bd: BoundaryData, p: PhysParams) -> Escapes:
    fp = family_params(bd)
    nu = p.nu
    if isinstance(fp, DDParams):
        return Escapes(Asymptote(1 / (2 * nu)), Asymptote(-1 / (2 * nu)))
    if isinstance(fp, NDParams):
        al = complex(fp.alpha)
        num = fp.lam - nu * (1 + abs(al) ** 2)
        s = 1 + abs(fp.lam) + nu * (1 + abs(al) ** 2)
        return Escapes(_quotient(num, 2 * nu * (fp.lam - 2 * nu * al.imag), s),
                       _quotient(-num, 2 * nu * (fp.lam + 2 * nu * al.imag), s))
    mu = complex(fp.mu)
    l1, l2 = fp.l1, fp.l2
    num = abs(mu) ** 2 - nu ** 2 + nu * (l1 + l2) - l1 * l2
    a = 4 * nu ** 2 * mu.real
    b = 2 * nu * (abs(mu) ** 2 + nu ** 2 - l1 * l2)
    s = 1 + abs(mu) ** 2 + nu * (abs(l1) + abs(l2) + abs(mu.real)) + abs(l1 * l2)
    return Escapes(_quotient(num, a + b, s), _quotient(num, a - b, s))


def index_E(bd: BoundaryData, p: PhysParams) -> int:
    esc = escape_asymptotes(bd, p)
    for a in (esc.omega_plus_inf, esc.omega_minus_inf):
        if a.exceptional:
            raise OnSurface(f"escape asymptote is {a.kind}", f"escape-{a.kind}")
    return int(esc.omega_minus_inf.value > 0) - int(esc.omega_plus_inf.value > 0)


def index_E_table(bd: BoundaryData, p: PhysParams) -> int:
    """E read off the regional tables (NN) or the piecewise statement (ND)."""
    fp = family_params(bd)
    if isinstance(fp, DDParams):
        return -1
    if isinstance(fp, NDParams):
        r = reduce_nd(fp, p)
        m, q = r.m, r.q
        a = abs(m + 1)
        s = max(1.0, abs(q), abs(m))
        for name, thr in (("q=m-1", m - 1), ("q=|m+1|", a), ("q=-|m+1|", -a)):
            _check(name, q, thr, s)
        if q < m - 1 or q > a:
            return -1
        return 0 if -a < q < a else 1
    r = reduce_nn(fp, p)
    s = r.scale()
    for name, thr in (("D2=I+", r.Iplus), ("D2=I-", r.Iminus), ("D2=E", r.Ecal)):
        _check(name, r.delta2, thr, s)
    row = _nn_I_row(r)
    above = r.delta2 > r.Ecal
    return [(1, -1), (0, 0), (0, 0), (-1, 1)][row][0 if above else 1]


# ---------------------------------------------------------------- parabola winding calculus

class CurveKind(Enum):
    Point = "Point"
    Line = "Line"
    HalfLine = "HalfLine"
    Parabola = "Parabola"


KIND_TOL = 1e-12


@dataclass(frozen=True)
class ParabolaCurve:
    """k ↦ c0 k² + c1 k + c2 for real k."""

    c0: complex
    c1: complex
    c2: complex
    d10: float = field(init=False)
    d20: float = field(init=False)
    d21: float = field(init=False)
    cP: float = field(init=False)

    def __post_init__(self):
        for n in ("c0", "c1", "c2"):
            object.__setattr__(self, n, complex(getattr(self, n)))
        d10 = (self.c1 * self.c0.conjugate()).imag
        d20 = (self.c2 * self.c0.conjugate()).imag
        d21 = (self.c2 * self.c1.conjugate()).imag
        object.__setattr__(self, "d10", d10)
        object.__setattr__(self, "d20", d20)
        object.__setattr__(self, "d21", d21)
        object.__setattr__(self, "cP", d20 * d20 - d21 * d10)

    def __call__(self, k):
        return (self.c0 * k + self.c1) * k + self.c2

    def scale(self) -> float:
        return max(abs(self.c0), abs(self.c1), abs(self.c2), 1e-300)


def curve_kind(pc: ParabolaCurve) -> CurveKind:
    s = pc.scale()
    z0 = abs(pc.c0) <= KIND_TOL * s
    z1 = abs(pc.c1) <= KIND_TOL * s
    if z0 and z1:
        return CurveKind.Point
    if z0:
        return CurveKind.Line
    if abs(pc.d10) <= KIND_TOL * s * s:
        return CurveKind.HalfLine
    return CurveKind.Parabola


def avoids_origin(pc: ParabolaCurve) -> bool:
    s = pc.scale()
    kind = curve_kind(pc)
    if kind is CurveKind.Point:
        return abs(pc.c2) > KIND_TOL * s
    if kind is CurveKind.Line:
        return abs(pc.d21) > KIND_TOL * s * s
    if kind is CurveKind.HalfLine:
        if abs(pc.d20) > KIND_TOL * s * s:
            return True
        c10 = (pc.c1 * pc.c0.conjugate()).real
        c20 = (pc.c2 * pc.c0.conjugate()).real
        return 4 * c20 * abs(pc.c0) ** 2 > c10 ** 2 + KIND_TOL * s ** 4
    return abs(pc.cP) > KIND_TOL * s ** 4


def winding_N(pc: ParabolaCurve) -> HalfInt:
    """Total change of arg P(k) / 2π as k runs over the real line."""
    if not avoids_origin(pc):
        raise OriginHit("curve meets the origin")
    kind = curve_kind(pc)
    if kind in (CurveKind.Point, CurveKind.HalfLine):
        return HalfInt(0)
    if kind is CurveKind.Line:
        return HalfInt(-int(np.sign(pc.d21)))
    if pc.cP > 0:
        return HalfInt(0)
    return HalfInt(-2 * int(np.sign(pc.d10)))


def boundary_polynomials(bd: BoundaryData) -> tuple:
    """P±(kx) = det(A1(kx) ± A2(kx)) as ParabolaCurves (P+, P-)."""
    a1, a1p, a2p, a2, b1, b2 = (v.vec for v in bd.vectors())
    out = []
    for s in (1, -1):
        c0 = s * wedge(b2, b1)
        c1 = wedge(b2, a2 + s * a1p) + wedge(a1 + s * a2p, b1)
        c2 = wedge(a1 + s * a2p, a1p + s * a2)
        out.append(ParabolaCurve(c0, c1, c2))
    return tuple(out)


def winding_B(bd: BoundaryData):
    """N(P-) - N(P+) from the winding calculus; None when a polynomial meets the origin."""
    Pp, Pm = boundary_polynomials(bd)
    if not (avoids_origin(Pp) and avoids_origin(Pm)):
        return None
    return winding_N(Pm) - winding_N(Pp)


# ---------------------------------------------------------------- B

def _nn_B(fp: NNParams, p: PhysParams):
    r = reduce_nn(fp, p)
    l1, l2, l1p, l2p = fp.l1, fp.l2, fp.l1p, fp.l2p
    mu, mup = complex(fp.mu), complex(fp.mup)
    s = r.scale()
    zero = lambda x: abs(x) <= SURFACE_TOL * s
    if zero(abs(mu)) and zero(l1) and zero(l2):
        return 0
    if zero(l1 + l2):
        return 0
    on_B = _near(r.delta2, r.Bcal, s)
    if not on_B and not zero(r.sigma):
        return 0 if r.delta2 > r.Bcal else -2 * int(np.sign(r.sigma))
    if on_B:
        cross = (mu.conjugate() * mup + mu * mup.conjugate()).real
        if not zero(r.sigma) or not zero(l2 * l1p + l1 * l2p - cross):
            d21 = (-(l1 + l2) * (1 - l1p * l2p + abs(mup) ** 2)
                   + (l1p + l2p) * (cross - l2 * l1p - l1 * l2p))
            if not zero(d21):
                return int(np.sign(d21))
    return None


def index_B(bd: BoundaryData, p: PhysParams):
    """Boundary winding, or None where it is ill-defined."""
    fp = family_params(bd)
    if isinstance(fp, DDParams):
        return 0
    if isinstance(fp, NDParams):
        q = reduce_nd(fp, p).q
        return 0 if q == 0 else int(np.sign(q))
    return _nn_B(fp, p)


# ---------------------------------------------------------------- index vector

class Verdict(Enum):
    holds = "holds"
    violated = "violated"
    on_boundary = "on_boundary"


@dataclass(frozen=True)
class IndexVector:
    P: int | None
    I: int | None
    E: int | None
    B: int | None
    M: int | None
    verdict: Verdict
    surfaces: tuple = ()

    def as_tuple(self):
        return (self.P, self.I, self.E, self.B)

    def line(self) -> str:
        f = lambda v: "undefined" if v is None else str(v)
        return (f"P={f(self.P)} I={f(self.I)} E={f(self.E)} B={f(self.B)} "
                f"M={f(self.M)} BEC={self.verdict.value}")


def index_vector(bd: BoundaryData, p: PhysParams) -> IndexVector:
    vals, surfaces = {}, []
    for name, fn in (("P", index_P), ("I", index_I), ("E", index_E)):
        try:
            vals[name] = fn(bd, p)
        except OnSurface as e:
            vals[name] = None
            surfaces.append(f"{name}:{e.surface}")
    B = index_B(bd, p)
    if None in (vals["P"], vals["I"]):
        M, verdict = None, Verdict.on_boundary
    else:
        M = vals["P"] + vals["I"]
        verdict = Verdict.holds if M == 2 else Verdict.violated
        if surfaces:
            verdict = Verdict.on_boundary
    return IndexVector(vals["P"], vals["I"], vals["E"], B, M, verdict, tuple(surfaces))


def bec_holds_phs_nn(sigma: float, delta2: float, mu_abs2: float, nu: float) -> bool:
    """Particle-hole symmetric NN: bulk-edge correspondence iff Δ² > Σ² - |μ|² - ν²."""
    return delta2 > sigma ** 2 - mu_abs2 - nu ** 2


# ---------------------------------------------------------------- transitions

def _surface_functions(fp, p: PhysParams) -> dict:
    """Signed functions of the parameters vanishing on each transition surface, with type labels."""
    if isinstance(fp, NDParams):
        r = reduce_nd(fp, p)
        m, q = r.m, r.q
        return {("a", "q=sqrt2"): q - SQRT2, ("a", "q=-sqrt2"): q + SQRT2,
                ("b", "q=m+1"): q - (m + 1), ("b", "q=-(m+1)"): q + (m + 1),
                ("c", "q=m-1"): q - (m - 1), ("d", "q=0"): q}
    r = reduce_nn(fp, p)
    return {("a", "D2=M+"): r.delta2 - r.Mplus, ("a", "D2=M-"): r.delta2 - r.Mminus,
            ("b", "D2=I+"): r.delta2 - r.Iplus, ("b", "D2=I-"): r.delta2 - r.Iminus,
            ("c", "D2=E"): r.delta2 - r.Ecal, ("d", "D2=B"): r.delta2 - r.Bcal}


def _interp_params(fp1, fp2, t: float):
    if isinstance(fp1, NNParams):
        lin = lambda a, b: (1 - t) * a + t * b
        return NNParams(lin(fp1.mu, fp2.mu), lin(fp1.mup, fp2.mup), lin(fp1.l1, fp2.l1),
                        lin(fp1.l2, fp2.l2), lin(fp1.l1p, fp2.l1p), lin(fp1.l2p, fp2.l2p),
                        fp1.a1, fp1.a2)
    lin = lambda a, b: (1 - t) * a + t * b
    return NDParams(lin(fp1.alpha, fp2.alpha), lin(fp1.lam, fp2.lam), lin(fp1.lamp, fp2.lamp),
                    fp1.a1, fp1.a1p, fp1.b1)


def transition_report(bd1: BoundaryData, bd2: BoundaryData, p: PhysParams,
                      n: int = 2001, delta: float = 1e-6) -> list:
    """Transition surfaces crossed on the straight parameter path bd1 → bd2.

    Each entry records the surface, its type (a: P↔I, b: I↔E, c: E jumps by 2,
    d: B surface) and the index changes found just before and after the crossing.
    """
    fp1, fp2 = family_params(bd1), family_params(bd2)
    if type(fp1) is not type(fp2):
        raise ValueError("endpoints must lie in the same family")
    if isinstance(fp1, DDParams):
        return []
    from .boundary import build
    ts = np.linspace(0.0, 1.0, n)
    vals = [_surface_functions(_interp_params(fp1, fp2, t), p) for t in ts]
    out = []
    for key in vals[0]:
        f = np.array([v[key] for v in vals])
        nz = np.nonzero(np.sign(f))[0]
        # consecutive nonzero samples of opposite sign; a sample exactly on the surface is skipped over
        for i, j in zip(nz[:-1], nz[1:]):
            if np.sign(f[i]) == np.sign(f[j]):
                continue
            a, b = ts[i], ts[j]
            for _ in range(60):
                mid = 0.5 * (a + b)
                fm = _surface_functions(_interp_params(fp1, fp2, mid), p)[key]
                if fm == 0:
                    a = b = mid
                    break
                if np.sign(fm) == np.sign(f[i]):
                    a = mid
                else:
                    b = mid
            tc = 0.5 * (a + b)
            before = index_vector(build(_interp_params(fp1, fp2, max(tc - delta, 0.0))), p)
            after = index_vector(build(_interp_params(fp1, fp2, min(tc + delta, 1.0))), p)
            diff = {}
            for name in ("P", "I", "E", "B"):
                x, y = getattr(before, name), getattr(after, name)
                diff[name] = None if x is None or y is None else y - x
            out.append({"surface": key[1], "type": key[0], "t": float(tc), "expected_delta": diff})
    out.sort(key=lambda e: e["t"])
    return out
