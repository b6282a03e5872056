"""Quaternion- and biquaternion-valued fields on R^4.

Every field is a callable taking an array of points of shape ``(..., 4)``
ordered ``(w, x, y, z)`` (``w`` doubles as the time coordinate ``t`` for
biquaternion fields and may be complex) and returning values of the same
shape, the four complex coordinates of the field value.

Three families are provided:

* :class:`PolyField` -- polynomials with biquaternion coefficients, closed
  under differentiation, so operators act on them exactly;
* :class:`Kernel` -- the closed-form singular kernels used by the integral
  theorems;
* :class:`RadialPoly` -- sums of ``c x^a y^b z^c / r^m`` terms, used to
  expand ``exp(-w nabla) G`` term by term as an independent check on the
  closed forms.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping

import numpy as np

from .algebra import BASIS, BiQuat, as_qarray, qconj_arr, qmul
from .errors import ConvergenceDomain, NotSpatial, OnSingularLocus

# ---------------------------------------------------------------------------
# singular loci
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointLocus:
    center: tuple[float, float, float, float]


@dataclass(frozen=True)
class AxisLocus:
    """The line through ``center`` parallel to the w (time) axis."""

    center: tuple[float, float, float, float]


@dataclass(frozen=True)
class LightConeLocus:
    center: tuple[float, float, float, float]


LOCUS_TOL = 1e-12


def _real_center(q0) -> tuple[float, float, float, float]:
    c = as_qarray(q0)
    if np.any(c.imag != 0):
        raise ValueError("kernel offsets are real points of R^4")
    return tuple(float(v) for v in c.real)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# base class
# ---------------------------------------------------------------------------


class QField:
    """Base for evaluable fields.

    ``variant`` names the regularity class the field is declared to belong
    to (``"left"``, ``"right"``, ``"conjugate"``, ``"conjugate_right"``,
    ``"bi"`` ... or ``None``); ``locus`` lists the singular sets.
    """

    variant: str | None = None
    locus: tuple = ()

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        self.check_clear(pts)
        return self.evaluate(pts)

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def at(self, *coords) -> BiQuat:
        """Evaluate at a single point given as four coordinates or one sequence."""
        if len(coords) == 1:
            coords = tuple(np.asarray(coords[0]).ravel())
        return BiQuat.from_array(self(np.array(coords, dtype=complex)))

    def distance_to_locus(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        d = np.full(pts.shape[:-1], np.inf)
        for loc in self.locus:
            c = np.array(loc.center)
            rel = pts - c
            if isinstance(loc, PointLocus):
                dist = np.sqrt(np.sum(np.abs(rel) ** 2, axis=-1))
            elif isinstance(loc, AxisLocus):
                dist = np.sqrt(np.sum(np.abs(rel[..., 1:]) ** 2, axis=-1))
            else:
                # light cone t^2 = r^2, only meaningful for real points
                if np.any(rel.imag != 0):
                    continue
                rr = np.sqrt(np.sum(rel[..., 1:].real ** 2, axis=-1))
                dist = np.abs(np.abs(rel[..., 0].real) - rr) / math.sqrt(2)
            d = np.minimum(d, dist)
        return d

    def check_clear(self, pts: np.ndarray, tol: float = LOCUS_TOL) -> None:
        if not self.locus:
            return
        if np.any(self.distance_to_locus(pts) <= tol):
            raise OnSingularLocus(f"{self!r} evaluated on its singular locus")

    def __mul__(self, other: "QField") -> "ProductField":
        return ProductField(self, other)


class FunctionField(QField):
    """Wrap a vectorised callable ``pts -> values`` as a field."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], variant=None, locus=(), name="fn"):
        self.fn = fn
        self.variant = variant
        self.locus = tuple(locus)
        self.name = name

    def evaluate(self, pts):
        return np.asarray(self.fn(pts), dtype=complex)

    def __repr__(self):
        return f"FunctionField({self.name})"


class ProductField(QField):
    """Pointwise product ``left * right`` with the factor order preserved."""

    def __init__(self, left: QField, right: QField):
        self.left = left
        self.right = right
        self.locus = tuple(left.locus) + tuple(right.locus)
        self.variant = None

    def evaluate(self, pts):
        return qmul(self.left.evaluate(pts), self.right.evaluate(pts))

    def __repr__(self):
        return f"({self.left!r} * {self.right!r})"


class QConjField(QField):
    """Pointwise quaternion conjugate of another field."""

    def __init__(self, inner: QField):
        self.inner = inner
        self.locus = inner.locus
        self.variant = None

    def evaluate(self, pts):
        return qconj_arr(self.inner.evaluate(pts))

    def __repr__(self):
        return f"qconj({self.inner!r})"


class ShiftedField(QField):
    """``f(p - shift)``; used for translation checks."""

    def __init__(self, inner: QField, shift):
        self.inner = inner
        self.shift = np.asarray(shift, dtype=complex)
        self.variant = inner.variant
        self.locus = tuple(
            type(loc)(tuple(float(a + b) for a, b in zip(loc.center, self.shift.real)))
            for loc in inner.locus
        )

    def evaluate(self, pts):
        return self.inner.evaluate(pts - self.shift)

    def __repr__(self):
        return f"shift({self.inner!r}, {self.shift.real.tolist()})"


# ---------------------------------------------------------------------------
# polynomial fields
# ---------------------------------------------------------------------------

Mono = tuple[int, int, int, int]

VARIANTS = {
    # name: (series step, nabla side)
    "regular": (-1.0, "left"),
    "conjugate": (1.0, "left"),
    "right": (-1.0, "right"),
    "conjugate_right": (1.0, "right"),
    "bi": (-1j, "left"),
    "bi_conjugate": (1j, "left"),
    "bi_right": (-1j, "right"),
    "bi_conjugate_right": (1j, "right"),
}

# regularity class each generating variant produces
VARIANT_CLASS = {
    "regular": "left",
    "conjugate": "conjugate",
    "right": "right",
    "conjugate_right": "conjugate_right",
    "bi": "bi",
    "bi_conjugate": "bi_conjugate",
    "bi_right": "bi_right",
    "bi_conjugate_right": "bi_conjugate_right",
}


class PolyField(QField):
    """Polynomial in ``(w, x, y, z)`` with biquaternion coefficients.

    Stored as ``{(a, b, c, d): coeff}`` for ``coeff * w^a x^b y^c z^d``;
    the coefficient sits on the left of the (scalar) monomial.
    """

    def __init__(self, terms: Mapping[Mono, object] | None = None, variant: str | None = None):
        clean: dict[Mono, np.ndarray] = {}
        for mono, coeff in (terms or {}).items():
            c = as_qarray(coeff).astype(complex)
            if np.any(c != 0):
                key = tuple(int(e) for e in mono)
                if len(key) != 4 or min(key) < 0:
                    raise ValueError(f"bad monomial exponent {mono}")
                clean[key] = clean.get(key, np.zeros(4, complex)) + c
        self.terms = {k: v for k, v in clean.items() if np.any(v != 0)}
        self.variant = variant
        self.locus = ()

    # construction helpers
    @classmethod
    def constant(cls, c=1.0) -> "PolyField":
        return cls({(0, 0, 0, 0): c}, variant="constant")

    @classmethod
    def variable(cls, name: str) -> "PolyField":
        idx = _VAR_INDEX[name]
        e = [0, 0, 0, 0]
        e[idx] = 1
        return cls({tuple(e): 1.0})

    @classmethod
    def parse(cls, text: str) -> "PolyField":
        return parse_poly(text)

    def with_variant(self, variant: str | None) -> "PolyField":
        out = PolyField(self.terms, variant)
        return out

    # structure
    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def is_spatial(self) -> bool:
        return all(m[0] == 0 for m in self.terms)

    def is_scalar(self) -> bool:
        return all(np.all(c[1:] == 0) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Mono) -> BiQuat:
        return BiQuat.from_array(self.terms.get(tuple(mono), np.zeros(4, complex)))

    # evaluation
    def evaluate(self, pts):
        pts = np.asarray(pts, dtype=complex)
        out = np.zeros(pts.shape[:-1] + (4,), dtype=complex)
        for mono, c in self.terms.items():
            m = np.ones(pts.shape[:-1], dtype=complex)
            for k, e in enumerate(mono):
                if e:
                    m = m * pts[..., k] ** e
            out += m[..., None] * c
        return out

    # algebra
    def __add__(self, other):
        if not isinstance(other, PolyField):
            other = PolyField.constant(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, np.zeros(4, complex)) + v
        return PolyField(terms)

    __radd__ = __add__

    def __neg__(self):
        return PolyField({k: -v for k, v in self.terms.items()}, self.variant)

    def __sub__(self, other):
        if not isinstance(other, PolyField):
            other = PolyField.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return PolyField.constant(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return PolyField({k: v * other for k, v in self.terms.items()})
        if isinstance(other, BiQuat):
            return PolyField({k: qmul(v, other.c) for k, v in self.terms.items()})
        if isinstance(other, PolyField):
            terms: dict[Mono, np.ndarray] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    key = tuple(a + b for a, b in zip(m1, m2))
                    terms[key] = terms.get(key, np.zeros(4, complex)) + qmul(c1, c2)
            return PolyField(terms)
        if isinstance(other, QField):
            return ProductField(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return PolyField({k: other * v for k, v in self.terms.items()})
        if isinstance(other, BiQuat):
            return PolyField({k: qmul(other.c, v) for k, v in self.terms.items()})
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, PolyField):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        z = np.zeros(4, complex)
        return all(np.array_equal(self.terms.get(k, z), other.terms.get(k, z)) for k in keys)

    def __hash__(self):
        return hash(tuple(sorted((k, tuple(v.tolist())) for k, v in self.terms.items())))

    def allclose(self, other: "PolyField", atol=1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        z = np.zeros(4, complex)
        return all(np.allclose(self.terms.get(k, z), other.terms.get(k, z), atol=atol, rtol=0) for k in keys)

    def qconj(self) -> "PolyField":
        return PolyField({k: qconj_arr(v) for k, v in self.terms.items()})

    def reflect_time(self) -> "PolyField":
        """``f(-w, x, y, z)``."""
        return PolyField({k: v * (-1) ** k[0] for k, v in self.terms.items()})

    def shifted(self, q0) -> "PolyField":
        """``f(p - q0)`` expanded back into monomials."""
        q0 = as_qarray(q0)
        out = PolyField()
        for mono, c in self.terms.items():
            prod = PolyField.constant(c)
            for k, e in enumerate(mono):
                lin = PolyField({tuple(int(j == k) for j in range(4)): 1.0, (0, 0, 0, 0): -q0[k]})
                for _ in range(e):
                    prod = prod * lin
            out = out + prod
        return out

    # calculus (exact)
    def partial(self, axis: int) -> "PolyField":
        terms = {}
        for mono, c in self.terms.items():
            e = mono[axis]
            if e == 0:
                continue
            m = list(mono)
            m[axis] -= 1
            terms[tuple(m)] = c * e
        return PolyField(terms)

    def nabla(self, side: str = "left") -> "PolyField":
        """``I f_x + J f_y + K f_z`` (left) or ``f_x I + f_y J + f_z K`` (right)."""
        out = PolyField()
        for axis, e in zip((1, 2, 3), BASIS):
            d = self.partial(axis)
            eb = BiQuat.from_array(e)
            out = out + (eb * d if side == "left" else d * eb)
        return out

    def to_text(self) -> str:
        """Text form accepted by :func:`parse_poly`."""
        if not self.terms:
            return "0"
        pieces = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            mono_txt = "".join(f"*{v}^{e}" if e > 1 else f"*{v}" for v, e in zip("wxyz", mono) if e)
            for comp, unit in zip(c, ("", "*I", "*J", "*K")):
                for part, iu in ((comp.real, ""), (comp.imag, "*i")):
                    if part == 0:
                        continue
                    pieces.append(f"{float(part)!r}{iu}{unit}{mono_txt}")
        txt = " + ".join(pieces)
        return txt.replace("+ -", "- ")

    def __repr__(self):
        return f"PolyField({self.to_text()!r})"


_VAR_INDEX = {"w": 0, "t": 0, "x": 1, "y": 2, "z": 3}
_UNITS = {
    "i": BiQuat(1j),
    "I": BiQuat(0, 1),
    "J": BiQuat(0, 0, 1),
    "K": BiQuat(0, 0, 0, 1),
    "iI": BiQuat(0, 1j),
    "iJ": BiQuat(0, 0, 1j),
    "iK": BiQuat(0, 0, 0, 1j),
}
_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?(?:/\d+)?|\.\d+(?:[eE][-+]?\d+)?)"
    r"|(?P<unit>iI|iJ|iK|i|I|J|K)"
    r"|(?P<var>[wtxyz])(?:\^(?P<exp>\d+))?"
    r"|(?P<op>[-+*()]))"
)


def parse_poly(text: str) -> PolyField:
    """Parse ``"x - w*I + 3/2*w^2*x*iJ"`` style text into a :class:`PolyField`.

    Factors inside a term are multiplied left to right, so ``I*J`` is ``K``.
    ``t`` is accepted as an alias of ``w``.
    """
    pos = 0
    toks = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            s = m.group("num")
            toks.append(("num", float(Fraction(s)) if "/" in s else float(s)))
        elif m.group("unit"):
            toks.append(("unit", m.group("unit")))
        elif m.group("var"):
            toks.append(("var", (m.group("var"), int(m.group("exp") or 1))))
        else:
            toks.append(("op", m.group("op")))
    if not toks:
        raise ValueError("empty polynomial")

    total = PolyField()
    sign = 1.0
    coeff = BiQuat(1.0)
    mono = [0, 0, 0, 0]
    expect_factor = True
    have_factor = False

    def flush():
        nonlocal total
        if not have_factor:
            raise ValueError(f"dangling operator in {text!r}")
        total = total + PolyField({tuple(mono): (sign * coeff).c})

    for kind, val in toks:
        if kind == "op" and val in "+-":
            if have_factor:
                flush()
                sign, coeff, mono = 1.0, BiQuat(1.0), [0, 0, 0, 0]
                have_factor = False
            if val == "-":
                sign = -sign
            expect_factor = True
            continue
        if kind == "op" and val == "*":
            if not have_factor:
                raise ValueError(f"'*' without left operand in {text!r}")
            expect_factor = True
            continue
        if kind == "op":
            raise ValueError("parentheses are not supported in polynomial text")
        if not expect_factor:
            raise ValueError(f"missing '*' between factors in {text!r}")
        if kind == "num":
            coeff = coeff * val
        elif kind == "unit":
            coeff = coeff * _UNITS[val]
        else:
            name, e = val
            mono[_VAR_INDEX[name]] += e
        have_factor = True
        expect_factor = False
    flush()
    return total


def gen_exp_poly(G: PolyField, variant: str = "regular") -> PolyField:
    """Build ``exp(s w nabla) G`` from a spatial polynomial generator.

    ``variant`` picks the step ``s`` and the side ``nabla`` acts from; see
    :data:`VARIANTS`.  The series terminates because ``nabla`` lowers the
    degree of a polynomial.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {sorted(VARIANTS)}")
    if not G.is_spatial():
        raise NotSpatial("generating function must not depend on w/t")
    step, side = VARIANTS[variant]
    out = PolyField()
    term = G
    n = 0
    while not term.is_zero():
        coef = step**n / math.factorial(n)
        out = out + PolyField({(m[0] + n, m[1], m[2], m[3]): c * coef for m, c in term.terms.items()})
        term = term.nabla(side)
        n += 1
    return out.with_variant(VARIANT_CLASS[variant])


# ---------------------------------------------------------------------------
# generator series: c x^a y^b z^c / r^m
# ---------------------------------------------------------------------------

RMono = tuple[int, int, int, int]  # (a, b, c, m)


class RadialPoly:
    """Sum of ``coeff * x^a y^b z^c * r^(-m)`` with quaternion coefficients.

    The class is closed under spatial derivatives, which is all the
    exponential series needs; evaluation is at real spatial points.
    """

    def __init__(self, terms: Mapping[RMono, object] | None = None):
        clean: dict[RMono, np.ndarray] = {}
        for k, v in (terms or {}).items():
            c = as_qarray(v).astype(complex)
            clean[k] = clean.get(k, np.zeros(4, complex)) + c
        self.terms = {k: v for k, v in clean.items() if np.any(v != 0)}

    def partial(self, axis: int) -> "RadialPoly":
        """Derivative along spatial axis 0, 1, 2 (x, y, z)."""
        out: dict[RMono, np.ndarray] = {}
        for (a, b, c, m), coef in self.terms.items():
            e = (a, b, c)[axis]
            if e:
                k = [a, b, c, m]
                k[axis] -= 1
                out[tuple(k)] = out.get(tuple(k), np.zeros(4, complex)) + e * coef
            if m:
                k = [a, b, c, m + 2]
                k[axis] += 1
                out[tuple(k)] = out.get(tuple(k), np.zeros(4, complex)) - m * coef
        return RadialPoly(out)

    def nabla(self, side: str = "left") -> "RadialPoly":
        out: dict[RMono, np.ndarray] = {}
        for axis, e in enumerate(BASIS):
            d = self.partial(axis)
            for k, v in d.terms.items():
                prod = qmul(e, v) if side == "left" else qmul(v, e)
                out[k] = out.get(k, np.zeros(4, complex)) + prod
        return RadialPoly(out)

    def __call__(self, xyz) -> np.ndarray:
        xyz = np.asarray(xyz, dtype=complex)
        x, y, z = xyz[..., 0], xyz[..., 1], xyz[..., 2]
        r = np.sqrt(x * x + y * y + z * z)
        out = np.zeros(xyz.shape[:-1] + (4,), dtype=complex)
        for (a, b, c, m), coef in self.terms.items():
            out += (x**a * y**b * z**c / r**m)[..., None] * coef
        return out


def exp_series(G: RadialPoly, pts, n_terms: int, step: complex = -1.0, side: str = "left") -> np.ndarray:
    """Truncated ``sum_n (step*w)^n / n! nabla^n G`` at the given points."""
    pts = np.asarray(pts, dtype=complex)
    w = pts[..., 0]
    xyz = pts[..., 1:]
    out = np.zeros(pts.shape[:-1] + (4,), dtype=complex)
    term = G
    for n in range(n_terms):
        out += ((step * w) ** n / math.factorial(n))[..., None] * term(xyz)
        if n + 1 < n_terms:
            term = term.nabla(side)
    return out


# ---------------------------------------------------------------------------
# closed-form kernels
# ---------------------------------------------------------------------------

KERNEL_KINDS = ("FueterH", "AltAxis", "ZeroRadial", "BiAltAxis", "BiFueter")
_AXES = {"x": 0, "y": 1, "z": 2}

SERIES_SWITCH = 1e-2  # |w|/r below which AltAxis kernels use the series
SERIES_TERMS_NEAR_AXIS = 8
SERIES_MAX_RATIO = 0.5
SERIES_MAX_TERMS = 12


def artanh_i0(z: np.ndarray) -> np.ndarray:
    """``artanh`` on the sheet reached by giving the radius a small positive
    imaginary part (``r -> r + i0``).

    Off the real axis this is the principal branch.  On the cuts, real
    ``z > 1`` takes the value from below (``-i pi/2``) and real ``z < -1``
    the value from above (``+i pi/2``), which is where ``t / (r + i0)``
    lands for ``t > 0`` and ``t < 0`` respectively.
    """
    z = np.asarray(z, dtype=complex)
    out = np.arctanh(z)
    on_cut = (z.imag == 0) & (np.abs(z.real) > 1)
    if np.any(on_cut):
        zr = z.real[on_cut]
        out = np.array(out)
        out[on_cut] = 0.5 * np.log(np.abs((1 + zr) / (1 - zr))) - 0.5j * math.pi * np.sign(zr)
    return out


@dataclass(frozen=True)
class Kernel(QField):
    """A closed-form singular kernel centred at ``q0``.

    ``kind`` is one of :data:`KERNEL_KINDS`; ``axis`` selects x/y/z for the
    axis kernels.  ``time_sign=+1`` gives the conjugate family
    ``exp(+w nabla) G``, i.e. the standard kernel with the time coordinate
    reversed.
    """

    kind: str
    q0: tuple = (0.0, 0.0, 0.0, 0.0)
    axis: str = "x"
    time_sign: int = -1
    series_switch: float = SERIES_SWITCH

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.axis not in _AXES:
            raise ValueError(f"axis must be x, y or z, got {self.axis!r}")
        if self.time_sign not in (-1, 1):
            raise ValueError("time_sign is -1 or +1")
        object.__setattr__(self, "q0", _real_center(self.q0))

    # QField protocol
    @property
    def variant(self) -> str:  # type: ignore[override]
        conj = self.time_sign == 1
        if self.kind in ("FueterH",):
            return "left+right"
        if self.kind == "BiFueter":
            return "bi+bi_right"
        if self.kind in ("BiAltAxis",):
            return "bi_conjugate" if conj else "bi"
        return "conjugate" if conj else "left"

    @property
    def locus(self) -> tuple:  # type: ignore[override]
        c = self.q0
        if self.kind == "FueterH":
            return (PointLocus(c),)
        if self.kind in ("AltAxis", "ZeroRadial"):
            return (AxisLocus(c),)
        if self.kind == "BiFueter":
            return (LightConeLocus(c),)
        return (AxisLocus(c), LightConeLocus(c))

    @property
    def is_bi(self) -> bool:
        return self.kind.startswith("Bi")

    def generator(self) -> RadialPoly:
        """Spatial generating function ``G`` with ``kernel = exp(s w nabla) G``."""
        if self.kind in ("FueterH", "BiFueter"):
            # H = -exp(-w nabla)(rbar / r^4)
            return RadialPoly({(1, 0, 0, 4): (0, -1, 0, 0), (0, 1, 0, 4): (0, 0, -1, 0), (0, 0, 1, 4): (0, 0, 0, -1)})
        if self.kind == "ZeroRadial":
            return RadialPoly({(0, 0, 0, 3): 1.0})
        e = [0, 0, 0]
        e[_AXES[self.axis]] = 1
        return RadialPoly({(e[0], e[1], e[2], 4): 1.0})

    def series_step(self) -> complex:
        s = float(self.time_sign)
        return s * 1j if self.is_bi else s

    def evaluate(self, pts):
        pts = np.asarray(pts, dtype=complex)
        rel = pts - np.array(self.q0)
        if self.time_sign == 1 and self.kind not in ("FueterH", "BiFueter"):
            rel = rel * np.array([-1, 1, 1, 1])
        if self.kind == "FueterH":
            return _fueter(rel)
        if self.kind == "BiFueter":
            return _bifueter(rel)
        if self.kind == "ZeroRadial":
            return self._with_series(rel, _zero_radial)
        if self.kind == "AltAxis":
            return self._with_series(rel, lambda p: _alt_axis(p, _AXES[self.axis]))
        return self._with_series(rel, lambda p: _bi_alt_axis(p, _AXES[self.axis]))

    def _with_series(self, rel, closed):
        w = rel[..., 0]
        r = np.sqrt(np.sum(rel[..., 1:] ** 2, axis=-1))
        near = np.abs(w) < self.series_switch * np.abs(r)
        if not np.any(near):
            return closed(rel)
        out = np.empty(rel.shape, dtype=complex)
        far = ~near
        if np.any(far):
            out[far] = closed(rel[far])
        step = -1j if self.is_bi else -1.0
        out[near] = exp_series(self.generator(), rel[near], SERIES_TERMS_NEAR_AXIS, step)
        return out

    def __repr__(self):
        extra = f", axis={self.axis}" if self.kind in ("AltAxis", "BiAltAxis") else ""
        conj = ", conj" if self.time_sign == 1 else ""
        return f"Kernel({self.kind}{extra}{conj}, q0={list(self.q0)})"


def _fueter(q):
    n2 = np.sum(q * q, axis=-1)
    return qconj_arr(q) / (n2 * n2)[..., None]


def _bifueter(p):
    # i q / N(q)^2 with q = t + i rbar
    t = p[..., 0]
    r2 = np.sum(p[..., 1:] ** 2, axis=-1)
    den = (t * t - r2) ** 2
    out = np.empty(p.shape, dtype=complex)
    out[..., 0] = 1j * t / den
    out[..., 1:] = -p[..., 1:] / den[..., None]
    return out


def _zero_radial(p):
    w = p[..., 0]
    v = p[..., 1:]
    r2 = np.sum(v * v, axis=-1)
    r = np.sqrt(r2)
    s = r2 + w * w
    out = np.empty(p.shape, dtype=complex)
    out[..., 0] = (r2 - w * w) / (r * s * s)
    out[..., 1:] = (w * (3 * r2 + w * w) / (r**3 * s * s))[..., None] * v
    return out


def _alt_axis(p, k):
    w = p[..., 0]
    v = p[..., 1:]
    a = v[..., k]
    r2 = np.sum(v * v, axis=-1)
    r = np.sqrt(r2)
    s = w * w + r2
    at = np.arctan(w / r) / (r * w)
    br1 = 1 / s + at
    br2 = (5 * r2 + 3 * w * w) / (8 * s * s) + 3 * at / 8
    out = np.zeros(p.shape, dtype=complex)
    out[..., 0] = a / (s * s)
    out[..., 1:] = (4 * a * w * br2 / (r2 * r2))[..., None] * v
    out[..., 1 + k] -= w / (2 * r2) * br1
    return out


def _bi_alt_axis(p, k):
    t = p[..., 0]
    v = p[..., 1:]
    a = v[..., k]
    r2 = np.sum(v * v, axis=-1)
    r = np.sqrt(r2)
    d = t * t - r2
    at = artanh_i0(t / r) / (r * t)
    br1 = -1 / d + at
    br2 = (5 * r2 - 3 * t * t) / (8 * d * d) + 3 * at / 8
    out = np.zeros(p.shape, dtype=complex)
    out[..., 0] = a / (d * d)
    out[..., 1:] = (4j * a * t * br2 / (r2 * r2))[..., None] * v
    out[..., 1 + k] -= 1j * t / (2 * r2) * br1
    return out


def eval_kernel(k: Kernel, q) -> BiQuat:
    return k.at(q)


def kernel_series_oracle(k: Kernel, q, n_terms: int = 8, max_ratio: float = SERIES_MAX_RATIO) -> BiQuat:
    """Truncated exponential-series value of ``k`` at a single point.

    Independent of the closed forms: it differentiates the generator
    exactly and sums ``n_terms`` terms.  Only valid close to the spatial
    slice, so ``|w| / r`` is capped at ``max_ratio``.
    """
    if n_terms > SERIES_MAX_TERMS or n_terms < 1:
        raise ValueError(f"n_terms must be in 1..{SERIES_MAX_TERMS}")
    p = as_qarray(q) - np.array(k.q0)
    if k.time_sign == 1 and k.kind not in ("FueterH", "BiFueter"):
        p = p * np.array([-1, 1, 1, 1])
    r = float(np.sqrt(np.sum(np.abs(p[1:]) ** 2)))
    if r == 0:
        raise OnSingularLocus("series expansion needs r > 0")
    if abs(p[0]) / r > max_ratio:
        raise ConvergenceDomain(f"|w|/r = {abs(p[0]) / r:.3g} exceeds {max_ratio}")
    step = -1j if k.is_bi else -1.0
    return BiQuat.from_array(exp_series(k.generator(), p, n_terms, step))


def kernel_from_name(name: str, q0=(0, 0, 0, 0)) -> Kernel:
    """``fueter``, ``alt-x``, ``alt-y``, ``alt-z``, ``zero-radial``, ``bi-alt-x``, ``bi-fueter``,
    with an optional ``-conj`` suffix for the time-reversed family."""
    n = name.lower().replace("_", "-")
    sign = -1
    if n.endswith("-conj"):
        sign = 1
        n = n[: -len("-conj")]
    table = {
        "fueter": ("FueterH", "x"),
        "fueterh": ("FueterH", "x"),
        "zero-radial": ("ZeroRadial", "x"),
        "bi-fueter": ("BiFueter", "x"),
    }
    if n in table:
        kind, ax = table[n]
    elif n.startswith("bi-alt-"):
        kind, ax = "BiAltAxis", n[-1]
    elif n.startswith("alt-"):
        kind, ax = "AltAxis", n[-1]
    else:
        raise ValueError(f"unknown kernel name {name!r}")
    return Kernel(kind, tuple(q0), ax, sign)
