"""Small fixed-size complex linear algebra and winding numbers of planar curves."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class OriginHit(ArithmeticError):
    """A sampled curve passes (numerically) through the origin."""


class UnderResolved(ArithmeticError):
    """Adjacent samples differ in argument by more than the step guard."""


STEP_GUARD = np.pi / 2


@dataclass(frozen=True)
class C2:
    x: complex
    y: complex

    @classmethod
    def of(cls, v) -> "C2":
        if isinstance(v, C2):
            return v
        a = np.asarray(v, dtype=complex).ravel()
        if a.shape != (2,):
            raise ValueError(f"expected two components, got shape {a.shape}")
        return cls(complex(a[0]), complex(a[1]))

    @property
    def vec(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=complex)

    def __add__(self, other):
        o = C2.of(other)
        return C2(self.x + o.x, self.y + o.y)

    def __sub__(self, other):
        o = C2.of(other)
        return C2(self.x - o.x, self.y - o.y)

    def __mul__(self, s):
        return C2(self.x * s, self.y * s)

    __rmul__ = __mul__

    def __neg__(self):
        return C2(-self.x, -self.y)

    def norm(self) -> float:
        return float(np.hypot(abs(self.x), abs(self.y)))

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.vec).all())


ZERO2 = C2(0j, 0j)


def _as_vec(u) -> np.ndarray:
    if isinstance(u, C2):
        return u.vec
    return np.asarray(u, dtype=complex)


def wedge(u, v) -> complex:
    """u ∧ v = u_x v_y - v_x u_y, i.e. det of the matrix with columns u, v."""
    a, b = _as_vec(u), _as_vec(v)
    return complex(a[0] * b[1] - b[0] * a[1])


def cols(*vs) -> np.ndarray:
    """Juxtapose 2-vectors as columns of a 2×n matrix."""
    return np.column_stack([_as_vec(v) for v in vs])


def det2(m) -> complex:
    m = np.asarray(m, dtype=complex)
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def adjugate(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)


def inv2(m) -> np.ndarray:
    return adjugate(m) / det2(m)


@dataclass(frozen=True, order=True)
class HalfInt:
    """Exact n/2, stored as the integer n."""

    twice_value: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        fr = Fraction(value)
        if (2 * fr).denominator != 1:
            raise ValueError(f"{value!r} is not a half-integer")
        return cls(int(2 * fr))

    def __add__(self, other):
        o = other if isinstance(other, HalfInt) else HalfInt.of(other)
        return HalfInt(self.twice_value + o.twice_value)

    __radd__ = __add__

    def __sub__(self, other):
        o = other if isinstance(other, HalfInt) else HalfInt.of(other)
        return HalfInt(self.twice_value - o.twice_value)

    def __neg__(self):
        return HalfInt(-self.twice_value)

    def __mul__(self, k: int):
        return HalfInt(self.twice_value * int(k))

    __rmul__ = __mul__

    def __float__(self):
        return self.twice_value / 2

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice_value == other.twice_value
        try:
            return 2 * Fraction(other) == self.twice_value
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(("HalfInt", self.twice_value))

    def is_integer(self) -> bool:
        return self.twice_value % 2 == 0

    def as_int(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return self.twice_value // 2

    def __repr__(self):
        if self.is_integer():
            return f"HalfInt({self.twice_value // 2})"
        return f"HalfInt({self.twice_value}/2)"


def _arg_steps(z: np.ndarray, tol_origin: float | None) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    if z.size < 2:
        return np.zeros(0)
    scale = float(np.max(np.abs(z)))
    tol = 1e-12 * scale if tol_origin is None else tol_origin
    if scale == 0.0 or np.min(np.abs(z)) <= tol:
        raise OriginHit("curve passes within tolerance of the origin")
    steps = np.angle(z[1:] / z[:-1])
    if np.max(np.abs(steps)) > STEP_GUARD:
        raise UnderResolved(f"argument step {np.max(np.abs(steps)):.3f} exceeds guard")
    return steps


def open_arg_increment(points, tol_origin: float | None = None) -> float:
    """Continuous change of arg along an open polyline, in units of 2π."""
    return float(np.sum(_arg_steps(points, tol_origin)) / (2 * np.pi))


def numeric_winding(points, tol_origin: float | None = None, close_tol: float = 1e-9) -> float:
    """Winding number about 0 of a closed polyline (first point repeated at the end or not)."""
    z = np.asarray(points, dtype=complex).ravel()
    scale = float(np.max(np.abs(z))) if z.size else 0.0
    if z.size and abs(z[-1] - z[0]) > close_tol * max(scale, 1.0):
        z = np.append(z, z[0])
    return open_arg_increment(z, tol_origin)


def refine_until_resolved(fn, t0: float, t1: float, n: int, *, closed: bool,
                          max_n: int = 1 << 22, tol_origin: float | None = None,
                          fill: int = 15) -> float:
    """Arg increment of fn over [t0, t1] in units of 2π.

    Starts from n uniform intervals and subdivides only those whose argument step
    exceeds the guard, so a near-pass of the origin costs a handful of extra points
    instead of a global refinement. With closed=True the chord from fn(t1) back to
    fn(t0) is added.
    """
    t = np.linspace(t0, t1, n + 1)
    z = np.asarray(fn(t), dtype=complex)
    while True:
        zc = np.append(z, z[0]) if closed else z
        try:
            return open_arg_increment(zc, tol_origin)
        except UnderResolved:
            pass
        steps = np.abs(np.angle(z[1:] / z[:-1]))
        bad = np.nonzero(steps > STEP_GUARD)[0]
        if bad.size == 0:          # only the closing chord is coarse
            raise UnderResolved("closing chord exceeds the step guard")
        if t.size + fill * bad.size > max_n:
            raise UnderResolved(f"argument still unresolved after {t.size} samples")
        frac = np.arange(1, fill + 1) / (fill + 1)
        new_t = (t[bad, None] + frac * (t[bad + 1] - t[bad])[:, None]).ravel()
        new_z = np.asarray(fn(new_t), dtype=complex)
        order = np.argsort(np.concatenate([t, new_t]), kind="stable")
        t = np.concatenate([t, new_t])[order]
        z = np.concatenate([z, new_z])[order]
