"""Quaternion and biquaternion arithmetic.

Two layers live here.  The array layer works on numpy arrays whose last
axis holds the four complex coordinates ``(w, x, y, z)`` and is what the
field, operator and quadrature code uses on large batches of nodes.  The
value layer, :class:`BiQuat`, wraps a single ``(4,)`` array and gives the
usual operator overloads for interactive work and tests.

Real quaternions are not a separate type: a :class:`BiQuat` whose
coordinates all have zero imaginary part *is* a quaternion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import NonInvertible, NotHermitian, NotUnitNorm, NullDisplacement

DEGENERACY_RTOL = 1e-12
UNIT_NORM_TOL = 1e-10

# ---------------------------------------------------------------------------
# array layer
# ---------------------------------------------------------------------------


def as_qarray(a) -> np.ndarray:
    """Coerce *a* to a complex array with trailing axis of length 4."""
    if isinstance(a, BiQuat):
        return a.c
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        out = np.zeros(4, dtype=complex)
        out[0] = arr
        return out
    if arr.shape[-1] != 4:
        raise ValueError(f"quaternion arrays need a trailing axis of 4, got {arr.shape}")
    return arr


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable quaternion arrays, ``a`` on the left."""
    a = np.asarray(a)
    b = np.asarray(b)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ],
        axis=-1,
    )


def qconj_arr(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out[..., 1:] *= -1
    return out


def cconj_arr(a: np.ndarray) -> np.ndarray:
    return np.conj(a)


def hconj_arr(a: np.ndarray) -> np.ndarray:
    return qconj_arr(np.conj(a))


def norm2_arr(a: np.ndarray) -> np.ndarray:
    """``a a#``, which for biquaternions is the complex sum of squared coordinates."""
    a = np.asarray(a)
    return np.sum(a * a, axis=-1)


# Basis elements as plain arrays; handy for the operator code.
ONE = np.array([1, 0, 0, 0], dtype=complex)
E_I = np.array([0, 1, 0, 0], dtype=complex)
E_J = np.array([0, 0, 1, 0], dtype=complex)
E_K = np.array([0, 0, 0, 1], dtype=complex)
BASIS = (E_I, E_J, E_K)

# ---------------------------------------------------------------------------
# value layer
# ---------------------------------------------------------------------------


class BiQuat:
    """A biquaternion ``w + xI + yJ + zK`` with complex coordinates.

    Instances are immutable.  Arithmetic with Python numbers treats the
    number as a scalar biquaternion, so ``2 * I`` and ``1 + 1j * I`` work.
    """

    __slots__ = ("c",)

    def __init__(self, w=0.0, x=0.0, y=0.0, z=0.0):
        c = np.array([w, x, y, z], dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError(f"non-finite biquaternion component in {c}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    def __setattr__(self, name, value):
        raise AttributeError("BiQuat is immutable")

    @classmethod
    def from_array(cls, arr) -> "BiQuat":
        arr = np.asarray(arr, dtype=complex).reshape(4)
        return cls(*arr)

    @classmethod
    def coerce(cls, v) -> "BiQuat":
        if isinstance(v, BiQuat):
            return v
        if isinstance(v, (int, float, complex, np.number)):
            return cls(v)
        return cls.from_array(v)

    # coordinates
    @property
    def w(self) -> complex:
        return complex(self.c[0])

    @property
    def x(self) -> complex:
        return complex(self.c[1])

    @property
    def y(self) -> complex:
        return complex(self.c[2])

    @property
    def z(self) -> complex:
        return complex(self.c[3])

    @property
    def scalar(self) -> complex:
        return self.w

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.c[1:])

    def components(self) -> list[float]:
        """The eight real components ``[Re w, Im w, Re x, Im x, ...]``."""
        out = []
        for v in self.c:
            out.extend((float(v.real), float(v.imag)))
        return out

    @classmethod
    def from_components(cls, comps: Sequence[float]) -> "BiQuat":
        if len(comps) != 8:
            raise ValueError("need exactly eight real components")
        return cls(*(complex(comps[2 * k], comps[2 * k + 1]) for k in range(4)))

    # predicates
    @property
    def is_quaternion(self) -> bool:
        return bool(np.all(self.c.imag == 0))

    @property
    def is_hermitian(self) -> bool:
        return bool(self.c[0].imag == 0 and np.all(self.c[1:].real == 0))

    # arithmetic
    def __add__(self, other):
        try:
            o = BiQuat.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return BiQuat.from_array(self.c + o.c)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = BiQuat.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return BiQuat.from_array(self.c - o.c)

    def __rsub__(self, other):
        try:
            o = BiQuat.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return BiQuat.from_array(o.c - self.c)

    def __neg__(self):
        return BiQuat.from_array(-self.c)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return BiQuat.from_array(self.c * other)
        if not isinstance(other, BiQuat):
            return NotImplemented
        return BiQuat.from_array(qmul(self.c, other.c))

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return BiQuat.from_array(other * self.c)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return BiQuat.from_array(self.c / other)
        return NotImplemented

    def __eq__(self, other):
        try:
            o = BiQuat.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return bool(np.array_equal(self.c, o.c))

    def __hash__(self):
        return hash(tuple(self.c.tolist()))

    def __abs__(self) -> float:
        """Euclidean size of the eight real components (not the algebraic norm)."""
        return float(np.sqrt(np.sum(np.abs(self.c) ** 2)))

    def allclose(self, other, atol: float = 1e-12, rtol: float = 0.0) -> bool:
        o = BiQuat.coerce(other)
        return bool(np.allclose(self.c, o.c, atol=atol, rtol=rtol))

    def __repr__(self):
        parts = []
        for coef, name in zip(self.c, ("", "I", "J", "K")):
            if coef == 0:
                continue
            if coef.imag == 0:
                s = f"{coef.real:.12g}"
            else:
                s = f"({coef.real:.12g}{coef.imag:+.12g}j)"
            parts.append(s + (("*" + name) if name else ""))
        return "BiQuat(" + (" + ".join(parts) if parts else "0") + ")"

    # conjugations and norm as methods too
    def qconj(self) -> "BiQuat":
        return qconj(self)

    def cconj(self) -> "BiQuat":
        return cconj(self)

    def hconj(self) -> "BiQuat":
        return hconj(self)

    def norm2(self) -> complex:
        return norm2(self)

    def inverse(self) -> "BiQuat":
        return inverse(self)


I = BiQuat(0, 1, 0, 0)
J = BiQuat(0, 0, 1, 0)
K = BiQuat(0, 0, 0, 1)


def quat(w=0.0, x=0.0, y=0.0, z=0.0) -> BiQuat:
    return BiQuat(w, x, y, z)


def hermitian(t: float, x: float, y: float, z: float) -> BiQuat:
    """The spacetime event ``t + i(xI + yJ + zK)``."""
    return BiQuat(t, 1j * x, 1j * y, 1j * z)


def mul(a, b) -> BiQuat:
    return BiQuat.coerce(a) * BiQuat.coerce(b)


def qconj(a) -> BiQuat:
    return BiQuat.from_array(qconj_arr(BiQuat.coerce(a).c))


def cconj(a) -> BiQuat:
    return BiQuat.from_array(cconj_arr(BiQuat.coerce(a).c))


def hconj(a) -> BiQuat:
    return BiQuat.from_array(hconj_arr(BiQuat.coerce(a).c))


def norm2(a) -> complex:
    return complex(norm2_arr(BiQuat.coerce(a).c))


def _degenerate(a: BiQuat, n: complex) -> bool:
    scale = float(np.max(np.abs(a.c))) ** 2
    return abs(n) <= DEGENERACY_RTOL * scale


def inverse(a) -> BiQuat:
    """``a# / N(a)``; raises :class:`NonInvertible` on (near-)null biquaternions."""
    a = BiQuat.coerce(a)
    n = norm2(a)
    if _degenerate(a, n):
        raise NonInvertible(f"{a!r} has vanishing norm {n}")
    return qconj(a) / n


# ---------------------------------------------------------------------------
# polar forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolarQuat:
    r: float
    theta: float
    n: tuple[float, float, float]

    def to_biquat(self) -> BiQuat:
        s = math.sin(self.theta)
        return self.r * BiQuat(math.cos(self.theta), self.n[0] * s, self.n[1] * s, self.n[2] * s)


@dataclass(frozen=True)
class PolarHermitian:
    r: float
    theta: float
    n: tuple[float, float, float]
    kind: str  # "timelike" | "spacelike"

    def to_biquat(self) -> BiQuat:
        ch, sh = math.cosh(self.theta), math.sinh(self.theta)
        if self.kind == "timelike":
            a, b = ch, sh
        else:
            a, b = sh, ch
        return self.r * BiQuat(a, 1j * self.n[0] * b, 1j * self.n[1] * b, 1j * self.n[2] * b)


_CANONICAL_AXIS = (1.0, 0.0, 0.0)


def _unit(v: np.ndarray) -> tuple[float, float, float]:
    nv = float(np.linalg.norm(v))
    return tuple(float(c) for c in v / nv)  # type: ignore[return-value]


def polar(a) -> PolarQuat:
    """Polar decomposition ``a = r (cos theta + n sin theta)`` of a real quaternion.

    ``r >= 0`` and ``0 <= theta < pi``, except for negative real scalars which
    can only be written with ``theta = pi``.  Where the axis is undefined
    (any real scalar) the canonical axis ``I`` is returned.
    """
    a = BiQuat.coerce(a)
    if not a.is_quaternion:
        raise ValueError("polar() takes a real quaternion; use polar_h for Hermitian input")
    w = a.c[0].real
    v = a.c[1:].real
    vn = float(np.linalg.norm(v))
    r = math.hypot(w, vn)
    if r == 0.0:
        return PolarQuat(0.0, 0.0, _CANONICAL_AXIS)
    if vn == 0.0:
        return PolarQuat(r, 0.0 if w > 0 else math.pi, _CANONICAL_AXIS)
    # sin(theta) = vn / r > 0 puts theta in the open interval (0, pi)
    theta = math.atan2(vn, w)
    return PolarQuat(r, theta, _unit(v))


def polar_h(p) -> PolarHermitian:
    """Exponential form of a non-null Hermitian biquaternion ``t + i r``.

    Timelike events give ``r (cosh theta + i n sinh theta)``, spacelike ones
    ``r (sinh theta + i n cosh theta)``; ``theta >= 0`` and the sign of ``r``
    follows the sign of ``t`` (positive when ``t = 0``).
    """
    p = BiQuat.coerce(p)
    if not p.is_hermitian:
        raise NotHermitian(f"{p!r} is not Hermitian")
    t = p.c[0].real
    rv = p.c[1:].imag
    s = float(np.linalg.norm(rv))
    n = t * t - s * s
    scale = max(abs(t), float(np.max(np.abs(rv))) if rv.size else 0.0) ** 2
    if abs(n) <= DEGENERACY_RTOL * scale or scale == 0.0:
        raise NullDisplacement(f"{p!r} lies on the light cone")
    sign = 1.0 if t >= 0 else -1.0
    if n > 0:
        r = sign * math.sqrt(n)
        theta = math.atanh(s / abs(t))
        axis = _unit(sign * rv) if s > 0 else _CANONICAL_AXIS
        return PolarHermitian(r, theta, axis, "timelike")
    r = sign * math.sqrt(-n)
    theta = math.atanh(abs(t) / s)
    axis = _unit(sign * rv)
    return PolarHermitian(r, theta, axis, "spacelike")


# ---------------------------------------------------------------------------
# rotations and Lorentz transformations
# ---------------------------------------------------------------------------


def exp_axis(theta: float, n: Iterable[float]) -> BiQuat:
    """``exp(theta n) = cos theta + n sin theta`` for a unit 3-vector ``n``."""
    nx, ny, nz = n
    s = math.sin(theta)
    return BiQuat(math.cos(theta), nx * s, ny * s, nz * s)


def rotate(p, theta: float, n: Iterable[float]) -> BiQuat:
    """Rotate the vector part of *p* by angle *theta* about axis *n*."""
    n = tuple(n)
    q = exp_axis(theta / 2, n)
    qi = exp_axis(-theta / 2, n)
    return q * BiQuat.coerce(p) * qi


def lorentz(p, q) -> BiQuat:
    """Apply ``p -> q p q#*`` to the Hermitian event *p* with unit-norm *q*."""
    p = BiQuat.coerce(p)
    q = BiQuat.coerce(q)
    if not p.is_hermitian:
        raise NotHermitian(f"{p!r} is not Hermitian")
    if abs(norm2(q) - 1) >= UNIT_NORM_TOL:
        raise NotUnitNorm(f"N(q) = {norm2(q)}")
    out = q * p * hconj(q)
    # Hermitian by construction; scrub the rounding residue in the
    # components that must vanish so downstream predicates hold.
    c = np.array(out.c)
    c[0] = c[0].real
    c[1:] = 1j * c[1:].imag
    return BiQuat.from_array(c)
