"""Numerical cross-checks of the closed-form indices.

Each oracle reaches the same integer along an independent route: contour windings
of det U and of the Jost function, direct root tracing of edge branches, the phase
of the scattering amplitude, and brute-force sampling of the arc intersections.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .algebra import OriginHit, UnderResolved, open_arg_increment, refine_until_resolved
from .boundary import BoundaryData, von_neumann_U
from .bulk import PhysParams, band_rim
from .indices import (ARC_DOWN, ARC_UP, Empty, Line, ParabolaCurve, curve_kind,
                      CurveKind, family_params)
from .scattering import g_leading, jost_g_vec, rescaled_measure_vec, s_amplitude_vec


class ResolutionWarning(UserWarning):
    pass


# ---------------------------------------------------------------- windings

def det_U_curve(bd: BoundaryData, kx) -> np.ndarray:
    return np.array([np.linalg.det(von_neumann_U(bd, k)) for k in np.atleast_1d(kx)])


def _det_U_vec(bd: BoundaryData, kx):
    from .scattering import _ul_vec
    A = _ul_vec(bd, kx)
    A1, A2 = A[:, :2, :], A[:, 2:, :]

    def det(M):
        return M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]

    # det U = det(A1 - A2) / det(A1 + A2)
    return det(A1 - A2) / det(A1 + A2)


def numeric_B(bd: BoundaryData, Kmax: float = 1e6, n: int = 1 << 14) -> float:
    """Winding of kx ↦ det U(kx) over [-Kmax, Kmax], closed through kx = ±∞."""
    umax = np.arcsinh(Kmax)

    def curve(u):
        return _det_U_vec(bd, np.sinh(u))

    return refine_until_resolved(curve, -umax, umax, n, closed=True)


def numeric_W_infty(bd: BoundaryData, p: PhysParams, R: float = 1e-3, n: int = 4096,
                    source: str = "leading", attempts: int = 4) -> float:
    """Winding of φ ↦ g at (kx, κ) = (cos φ, -sin φ)/R, φ ∈ [0, 2π].

    source='leading' uses the leading-order expansion; source='jost' evaluates the
    Jost function itself on the raw boundary data (no family routing at all).
    """
    fp = family_params(bd)
    for _ in range(attempts):
        if source == "leading":
            fn = lambda phi, R=R: g_leading(fp, R, phi, p)
        elif source == "jost":
            fn = lambda phi, R=R: jost_g_vec(bd, np.cos(phi) / R, -np.sin(phi) / R, p, "zero")
        else:
            raise ValueError(f"unknown source {source!r}")
        try:
            return refine_until_resolved(fn, 0.0, 2 * np.pi, n, closed=True)
        except OriginHit:
            R /= 3
    raise OriginHit("Jost function vanishes on every contour tried")


def parabola_winding_numeric(pc: ParabolaCurve, n: int = 2048) -> float:
    """Arg increment of P(k) over k ∈ ℝ via k = tan t, scaled by cos^deg t to stay finite."""
    kind = curve_kind(pc)
    deg = {CurveKind.Point: 0, CurveKind.Line: 1}.get(kind, 2)

    def Q(t):
        c, s = np.cos(t), np.sin(t)
        if deg == 2:
            return pc.c0 * s * s + pc.c1 * s * c + pc.c2 * c * c
        if deg == 1:
            return pc.c1 * s + pc.c2 * c
        return np.full_like(t, pc.c2, dtype=complex)

    return refine_until_resolved(Q, -np.pi / 2, np.pi / 2, n, closed=False)


# ---------------------------------------------------------------- arcs

def _implicit(curve, cp, cm):
    if isinstance(curve, Line):
        return cm - curve.m * cp - curve.q
    return curve.implicit(cp, cm)


def intersect_sample(curve, n: int = 10_000) -> tuple:
    """Sign changes of the curve's implicit equation along each arc (brute force)."""
    if isinstance(curve, Empty):
        return (0, 0)
    out = []
    for lo, hi in (ARC_UP, ARC_DOWN):
        th = np.linspace(lo, hi, n)
        F = _implicit(curve, np.sqrt(2) * np.cos(th), np.sqrt(2) * np.sin(th))
        sg = np.sign(F)
        sg = sg[sg != 0]     # a sample exactly on the circle must not hide the crossing
        out.append(int(np.sum(sg[:-1] * sg[1:] < 0)))
    return tuple(out)


# ---------------------------------------------------------------- branch tracing

@dataclass
class Branch:
    kx: list = field(default_factory=list)
    omega: list = field(default_factory=list)
    start: str = ""          # 'band', 'zero', 'tail', 'fragment'
    end: str = ""
    start_tail: str = ""     # 'parabolic' / 'flat' when start == 'tail'
    end_tail: str = ""
    flat_asymptote: float | None = None
    proper_merge_at: list = field(default_factory=list)


@dataclass
class EdgeBranchSet:
    branches: list
    sign: int = 1
    kx_grid: np.ndarray | None = None

    def rows(self):
        for i, b in enumerate(self.branches):
            ann = f"start={b.start}{':' + b.start_tail if b.start_tail else ''};end={b.end}{':' + b.end_tail if b.end_tail else ''}"
            for k, w in zip(b.kx, b.omega):
                yield i, k, w, ann


def kx_grid(kx_min: float, kx_max: float, n: int, scale: float = 0.5) -> np.ndarray:
    """n points on [kx_min, kx_max], uniform near |kx| < scale and geometric beyond."""
    if n <= 0 or kx_min > kx_max:
        return np.empty(0)
    u = np.linspace(np.arcsinh(kx_min / scale), np.arcsinh(kx_max / scale), n)
    return scale * np.sinh(u)


def default_kx_grid(K: float = 1000.0, n: int = 1201, scale: float = 0.5) -> np.ndarray:
    return kx_grid(-K, K, n, scale)


def default_omega_grid(n: int = 1500) -> np.ndarray:
    """Fractions of the band rim, dense towards both ω = 0 and the rim."""
    lo = np.geomspace(1e-6, 0.5, n)
    hi = 1 - np.geomspace(1e-10, 0.5, n)[::-1]
    return np.unique(np.concatenate([lo, hi]))


def _abs_g(bd, kx, w, p):
    from .scattering import jost_g_rescaled
    return abs(jost_g_rescaled(bd, kx, w, p))


def gap_roots(bd: BoundaryData, kx: float, p: PhysParams, tgrid=None, sign: int = 1,
              dip: float = 1e-4, spurious: float = 1e-8) -> list:
    """Edge eigenvalues at fixed kx, as fractions t = |ω|/rim of the band rim.

    Candidates are local minima of the column-angle measure; a candidate is kept
    when |g| at the refined point is below dip times |g| at the neighbouring grid
    points (a genuine zero, not a near-parallel pair of columns) and neither
    section is vanishingly small there (the spurious zeros at ω = ±f).
    """
    tgrid = default_omega_grid() if tgrid is None else np.asarray(tgrid)
    rim = band_rim(kx, p)
    w = sign * rim * tgrid
    m, n1, n2 = rescaled_measure_vec(bd, kx, w, p)
    nscale = max(np.median(n1), np.median(n2))
    idx = np.nonzero((m[1:-1] < m[:-2]) & (m[1:-1] <= m[2:]))[0] + 1
    roots = []
    for j in idx:
        a, c, b = tgrid[j - 1], tgrid[j], tgrid[j + 1]
        h = max(c - a, b - c)
        # centred coordinate: the minimizer's relative tolerance then scales with h, not t
        f = lambda u: float(rescaled_measure_vec(bd, kx, np.array([sign * rim * (c + u * h)]), p)[0][0] ** 2)
        res = minimize_scalar(f, bounds=((a - c) / h, (b - c) / h), method="bounded",
                              options={"xatol": 1e-13})
        t = float(c + res.x * h)
        _, s1, s2 = rescaled_measure_vec(bd, kx, np.array([sign * rim * t]), p)
        if min(s1[0], s2[0]) <= spurious * nscale:
            continue
        g0 = _abs_g(bd, kx, sign * rim * t, p)
        gn = min(_abs_g(bd, kx, sign * rim * a, p), _abs_g(bd, kx, sign * rim * b, p))
        if g0 < dip * gn:
            roots.append(t)
    return roots


def _match(ra, rb, cap):
    """Greedy nearest matching of two root lists (fractions of the rim)."""
    pairs = sorted((abs(x - y), i, j) for i, x in enumerate(ra) for j, y in enumerate(rb)
                   if abs(x - y) <= cap)
    ua, ub, out = set(), set(), []
    for d, i, j in pairs:
        if i not in ua and j not in ub:
            ua.add(i)
            ub.add(j)
            out.append((i, j))
    return out, [i for i in range(len(ra)) if i not in ua], [j for j in range(len(rb)) if j not in ub]


def _boundary_t(t, rim_frac, zero_frac):
    return t > 1 - rim_frac or t < zero_frac


def _needs_split(ra, rb, rim_frac, zero_frac, cap, tight):
    pairs, una, unb = _match(ra, rb, cap)
    if any(not _boundary_t(ra[i], rim_frac, zero_frac) for i in una):
        return True
    if any(not _boundary_t(rb[j], rim_frac, zero_frac) for j in unb):
        return True
    return any(abs(ra[i] - rb[j]) > tight for i, j in pairs)


def _sample_slices(bd, p, kxs, tgrid, sign, rim_frac, zero_frac, cap, tight, min_dk, max_new):
    """Root slices on kxs, bisecting intervals whose endpoints do not link cleanly."""
    slices = {float(k): gap_roots(bd, float(k), p, tgrid, sign) for k in kxs}
    stack = [(float(a), float(b)) for a, b in zip(kxs[:-1], kxs[1:])]
    added = 0
    while stack and added < max_new:
        a, b = stack.pop()
        if b - a <= min_dk * max(1.0, abs(a)):
            continue
        if not _needs_split(slices[a], slices[b], rim_frac, zero_frac, cap, tight):
            continue
        mid = 0.5 * (a + b)
        slices[mid] = gap_roots(bd, mid, p, tgrid, sign)
        added += 1
        stack += [(a, mid), (mid, b)]
    if stack:
        warnings.warn("kx refinement budget exhausted", ResolutionWarning)
    ks = np.array(sorted(slices))
    return ks, [slices[k] for k in ks]


def _link(kxs, slices, rims, cap):
    branches: list = []
    live: dict = {}
    for i, (kx, roots) in enumerate(zip(kxs, slices)):
        prev = list(live.items())
        pairs, _, unb = _match([b._t[-1] for _, b in prev], roots, cap) if prev else ([], [], list(range(len(roots))))
        new_live = {}
        for pi, j in pairs:
            bi, b = prev[pi]
            b.kx.append(float(kx))
            b.omega.append(roots[j] * rims[i])
            b._t.append(roots[j])
            new_live[bi] = b
        for j in unb:
            b = Branch(kx=[float(kx)], omega=[roots[j] * rims[i]])
            b._t = [roots[j]]
            branches.append(b)
            new_live[len(branches) - 1] = b
        live = new_live
    return branches


def _tail_kind(kx, omega, outer: int = 6) -> str:
    """'parabolic' if log|ω| grows like 2 log|kx| on the outermost samples, else 'flat'."""
    k = np.abs(np.asarray(kx[-outer:], dtype=float))
    w = np.abs(np.asarray(omega[-outer:], dtype=float))
    if len(k) < 2 or np.any(w == 0) or np.ptp(np.log(k)) == 0:
        return "flat"
    slope = np.polyfit(np.log(k), np.log(w), 1)[0]
    return "parabolic" if slope > 1.0 else "flat"


def trace_branches(bd: BoundaryData, p: PhysParams, kx_grid=None, omega_grid=None, sign: int = 1,
                   rim_frac: float = 0.02, zero_frac: float = 0.02, cap: float = 0.1,
                   tight: float = 0.01, min_dk: float = 1e-7, max_new: int = 4000) -> EdgeBranchSet:
    """Trace in-gap edge branches over kx and annotate how each one starts and ends.

    Roots are linked between neighbouring kx by nearest ω/rim; intervals where that
    is ambiguous are bisected. Ends within rim_frac of the band rim are mergers,
    ends within zero_frac of ω = 0 are crossings into the other gap, and ends at
    the grid edges are tails. sign = -1 traces the lower gap instead.
    """
    kxs = default_kx_grid() if kx_grid is None else np.asarray(kx_grid, dtype=float)
    if kxs.size == 0:
        return EdgeBranchSet([], sign, kxs)
    kxs, slices = _sample_slices(bd, p, np.sort(kxs), omega_grid, sign, rim_frac, zero_frac,
                                 cap, tight, min_dk, max_new)
    rims = np.atleast_1d(band_rim(kxs, p))
    branches = _link(kxs, slices, rims, cap)
    first, last = float(kxs[0]), float(kxs[-1])

    def kind(t, at_edge):
        if at_edge:
            return "tail"
        if t > 1 - rim_frac:
            return "band"
        if t < zero_frac:
            return "zero"
        return "fragment"

    for b in branches:
        b.omega = [sign * w for w in b.omega]
        b.start = kind(b._t[0], b.kx[0] == first)
        b.end = kind(b._t[-1], b.kx[-1] == last)
        if b.start == "tail":
            b.start_tail = _tail_kind(b.kx[::-1], b.omega[::-1])
        if b.end == "tail":
            b.end_tail = _tail_kind(b.kx, b.omega)
        if b.end_tail == "flat":
            b.flat_asymptote = float(b.omega[-1])
        elif b.start_tail == "flat":
            b.flat_asymptote = float(b.omega[0])
        if b.start == "band":
            b.proper_merge_at.append(float(b.kx[0]))
        if b.end == "band":
            b.proper_merge_at.append(float(b.kx[-1]))
        if "fragment" in (b.start, b.end):
            warnings.warn(f"branch fragment near kx={b.kx[0]:.4g}..{b.kx[-1]:.4g}", ResolutionWarning)
        del b._t
    return EdgeBranchSet(branches, sign, kxs)


def count_mergers(ebs: EdgeBranchSet) -> tuple:
    """Signed (P, I, E) with kx increasing: leaving the band +1, joining it -1;
    a tail at kx → -∞ counts +1 and at kx → +∞ counts -1 (to I if parabolic, to E if flat).
    """
    P = I = E = 0
    if ebs.sign != 1:
        raise ValueError("merger counts refer to the upper gap")
    for b in ebs.branches:
        if b.start == "band":
            P += 1
        if b.end == "band":
            P -= 1
        if b.start == "tail":
            if b.start_tail == "parabolic":
                I += 1
            elif b.omega[0] > 0:
                E += 1
        if b.end == "tail":
            if b.end_tail == "parabolic":
                I -= 1
            elif b.omega[-1] > 0:
                E -= 1
    return P, I, E


# ---------------------------------------------------------------- Levinson

def levinson_jump(bd: BoundaryData, kx1: float, kx2: float, eps: float, p: PhysParams,
                  n: int = 20001) -> float:
    """Phase change of S(kx, κ = eps)/2π along [kx1, kx2].

    The propagating wave uses the section that is smooth at k = 0, so that nothing
    spurious happens where the interval crosses kx = 0.
    """
    if kx1 * kx2 < 0 or max(abs(kx1), abs(kx2)) > 10:
        a, b = np.arcsinh(kx1), np.arcsinh(kx2)
        kx = np.sinh(np.linspace(a, b, n))
    else:
        kx = np.linspace(kx1, kx2, n)
    S = s_amplitude_vec(bd, kx, eps, p, out_chart="infinity")
    while True:
        try:
            return open_arg_increment(S)
        except UnderResolved:
            n = 4 * n
            if n > 1 << 22:
                raise
            kx = np.interp(np.linspace(0, 1, n), np.linspace(0, 1, kx.size), kx)
            S = s_amplitude_vec(bd, kx, eps, p, out_chart="infinity")


@dataclass(frozen=True)
class LevinsonEstimate:
    values: tuple
    eps: tuple
    extrapolated: float

    @property
    def consistent(self) -> bool:
        return max(self.values) - min(self.values) < 0.1


def levinson_estimate(bd: BoundaryData, kx1: float, kx2: float, p: PhysParams,
                      eps_seq=(0.1, 0.05, 0.025), n: int = 20001) -> LevinsonEstimate:
    vals = tuple(levinson_jump(bd, kx1, kx2, e, p, n) for e in eps_seq)
    # Richardson with error linear in eps on the last two halvings
    ext = 2 * vals[-1] - vals[-2] if len(vals) > 1 else vals[0]
    return LevinsonEstimate(vals, tuple(eps_seq), float(ext))


def levinson_total(bd: BoundaryData, p: PhysParams, K: float = 1e4, n: int = 200001,
                   eps_seq=(0.1, 0.05, 0.025)) -> LevinsonEstimate:
    """Whole-line phase count W0; together with W∞ it sums to the bulk index 2."""
    return levinson_estimate(bd, -K, K, p, eps_seq, n)
