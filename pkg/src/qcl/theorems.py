"""Runners that evaluate each integral theorem and compare with its constant.

Every theorem is described by a :class:`TheoremSpec`: which 3-form, where
the kernel and the test function sit relative to it, which regularity
the test function needs, and the constant the closed surface integral
should produce.  Where careful evaluation gives a different sign or unit
from the one usually quoted, the theorem record keeps both: ``quoted_*`` is the
quoted constant, ``sign``/``unit`` what the integral actually gives; the
Report notes say so.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .algebra import I, J, K, BiQuat
from .contour import ContourRule, Segment, Contour, contour_integrate, segment_contour
from .errors import RegularityViolation, SingularityOnSurface
from .fields import Kernel, PolyField, QConjField, QField, gen_exp_poly, parse_poly
from .geometry import (
    AngularRule,
    CappedSphere,
    DeformedPrism,
    FormKind,
    HyperBox,
    Prism,
    QuadRule,
    Sphere3,
    Surface,
    SurfaceSpec,
    WidePrism,
    _time_pieces,
    ball_slices,
    integrate_sandwich,
    tube_slices,
)
from .operators import regularity_residual

TWO_PI2 = 2 * math.pi**2
UNITS = {"1": BiQuat(1), "I": I, "J": J, "K": K}


class TheoremId(Enum):
    Cauchy28 = "cauchy28"
    CauchyConj = "cauchyconj"
    CauchyRight = "cauchyright"
    CauchyRightConj = "cauchyrightconj"
    SandwichZero33 = "sandwichzero33"
    Fueter32 = "fueter32"
    Fueter39 = "fueter39"
    Fueter40 = "fueter40"
    Fueter41 = "fueter41"
    Alt48 = "alt48"
    Alt49 = "alt49"
    Alt50 = "alt50"
    Alt51 = "alt51"
    Alt52 = "alt52"
    Alt53 = "alt53"
    BiCauchy61 = "bicauchy61"
    BiAlt71 = "bialt71"
    BiAlt72 = "bialt72"
    BiFueter74 = "bifueter74"

    @classmethod
    def parse(cls, text: str) -> "TheoremId":
        key = text.strip().lower().replace("_", "").replace("-", "")
        for t in cls:
            if t.value == key:
                return t
        raise ValueError(f"unknown theorem {text!r}")


@dataclass(frozen=True)
class TheoremSpec:
    """How to assemble one theorem's integrand and what it should give.

    ``kernel`` is ``None`` for the zero theorems, else ``(kind, axis,
    time_sign, conj)`` where ``conj`` means the quaternion conjugate of
    the kernel.  ``f_side`` is where the test function stands relative to
    the form: ``"right"`` gives ``S * kernel * f`` (or ``kernel * S * f``
    when ``kernel_side == "left"``), ``"left"`` the mirror image.
    """

    id: TheoremId
    form: FormKind
    family: str  # zero | fueter | alt
    variant: str  # regularity class f must belong to
    f_side: str = "right"
    kernel: tuple | None = None
    kernel_side: str = "inner"  # inner: between form and f; left/right: across the form from f
    scale: float = 0.0
    unit: str = "1"
    sign: int = 1
    quoted_unit: str | None = None
    quoted_sign: int | None = None
    tolerance: float = 1e-6
    notes: tuple = ()

    @property
    def is_bi(self) -> bool:
        return self.form in (FormKind.SH, FormKind.SHSharp)

    @property
    def light_cone(self) -> bool:
        return self.kernel is not None and self.kernel[0] in ("BiAltAxis", "BiFueter")

    @property
    def axis_kernel(self) -> bool:
        return self.kernel is not None and self.kernel[0] in ("AltAxis", "BiAltAxis")

    def constant(self, quoted: bool = False) -> BiQuat:
        unit = UNITS[(self.quoted_unit or self.unit) if quoted else self.unit]
        sign = (self.quoted_sign if self.quoted_sign is not None else self.sign) if quoted else self.sign
        return unit * (sign * self.scale)

    def make_kernel(self, q0) -> QField | None:
        if self.kernel is None:
            return None
        kind, axis, tsign, conj = self.kernel
        k = Kernel(kind, q0=tuple(q0), axis=axis, time_sign=tsign)
        return QConjField(k) if conj else k


_SIGN_NOTE = (
    "the quoted constant has the opposite sign; with the orientation that makes the "
    "Fueter integral +2 pi^2 this integral evaluates to minus the quoted value"
)

SPECS: dict[TheoremId, TheoremSpec] = {}


def _add(spec: TheoremSpec):
    SPECS[spec.id] = spec


_add(TheoremSpec(TheoremId.Cauchy28, FormKind.Sq, "zero", "left", tolerance=1e-8))
_add(TheoremSpec(TheoremId.CauchyConj, FormKind.SqSharp, "zero", "conjugate", tolerance=1e-8))
_add(TheoremSpec(TheoremId.CauchyRight, FormKind.Sq, "zero", "right", f_side="left", tolerance=1e-8))
_add(TheoremSpec(TheoremId.CauchyRightConj, FormKind.SqSharp, "zero", "conjugate_right", f_side="left", tolerance=1e-8))
_add(
    TheoremSpec(
        TheoremId.SandwichZero33, FormKind.Sq, "sandwich", "left",
        kernel=("FueterH", "x", -1, False), kernel_side="left", tolerance=1e-7,
    )
)
_add(TheoremSpec(TheoremId.Fueter32, FormKind.Sq, "fueter", "left", kernel=("FueterH", "x", -1, False),
                 kernel_side="left", scale=TWO_PI2))
_add(TheoremSpec(TheoremId.Fueter39, FormKind.Sq, "fueter", "right", f_side="left",
                 kernel=("FueterH", "x", -1, False), kernel_side="right", scale=TWO_PI2))
_add(TheoremSpec(TheoremId.Fueter40, FormKind.SqSharp, "fueter", "conjugate", kernel=("FueterH", "x", -1, True),
                 kernel_side="left", scale=TWO_PI2))
_add(TheoremSpec(TheoremId.Fueter41, FormKind.SqSharp, "fueter", "conjugate_right", f_side="left",
                 kernel=("FueterH", "x", -1, True), kernel_side="right", scale=TWO_PI2))
for _tid, _ax, _u in ((TheoremId.Alt48, "x", "I"), (TheoremId.Alt49, "y", "J"), (TheoremId.Alt50, "z", "K")):
    _add(TheoremSpec(_tid, FormKind.Sq, "alt", "left", kernel=("AltAxis", _ax, -1, False),
                     scale=TWO_PI2 / 3, unit=_u, tolerance=1e-4))
_add(TheoremSpec(TheoremId.Alt51, FormKind.SqSharp, "alt", "conjugate", kernel=("AltAxis", "x", 1, False),
                 scale=TWO_PI2 / 3, unit="I", sign=-1, quoted_sign=1, tolerance=1e-4, notes=(_SIGN_NOTE,)))
_add(TheoremSpec(TheoremId.Alt52, FormKind.Sq, "alt", "right", f_side="left", kernel=("AltAxis", "x", -1, False),
                 scale=TWO_PI2 / 3, unit="I", tolerance=1e-4))
_add(TheoremSpec(TheoremId.Alt53, FormKind.SqSharp, "alt", "conjugate_right", f_side="left",
                 kernel=("AltAxis", "x", 1, False), scale=TWO_PI2 / 3, unit="I", sign=-1, quoted_sign=1,
                 tolerance=1e-4, notes=(_SIGN_NOTE,)))
_add(TheoremSpec(TheoremId.BiCauchy61, FormKind.SH, "zero", "bi", tolerance=1e-8))
_add(TheoremSpec(TheoremId.BiAlt71, FormKind.SH, "alt", "bi", kernel=("BiAltAxis", "x", -1, False),
                 scale=TWO_PI2 / 3, unit="I"))
_add(TheoremSpec(TheoremId.BiAlt72, FormKind.SHSharp, "alt", "bi_conjugate_right", f_side="left",
                 kernel=("BiAltAxis", "x", 1, False), scale=TWO_PI2 / 3, unit="I", sign=-1, quoted_sign=1,
                 notes=("integrated against the Hermitian sharp form S_H#; the quoted formula writes the "
                        "quaternion S_q#, which gives no surface-independent constant here", _SIGN_NOTE)))
_add(TheoremSpec(TheoremId.BiFueter74, FormKind.SH, "fueter", "bi", kernel=("BiFueter", "x", -1, False),
                 kernel_side="left", scale=TWO_PI2, unit="1", quoted_unit="I"))

# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def _fmt(x: float) -> float:
    return float(x)


@dataclass(frozen=True)
class Report:
    theorem: TheoremId
    surface: str
    quad: dict
    value: BiQuat
    expected: BiQuat
    abs_err: float
    seconds: float
    tolerance: float
    quoted: BiQuat | None = None
    route: str = "surface"
    notes: tuple = ()

    @property
    def passed(self) -> bool:
        return bool(self.abs_err <= self.tolerance)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "theorem": self.theorem.value,
            "route": self.route,
            "surface": self.surface,
            "quad": self.quad,
            "value": [_fmt(v) for v in self.value.components()],
            "expected": [_fmt(v) for v in self.expected.components()],
            "quoted": None if self.quoted is None else [_fmt(v) for v in self.quoted.components()],
            "abs_err": _fmt(self.abs_err),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": list(self.notes),
        }
        if timing:
            d["seconds"] = round(self.seconds, 6)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=False)


CSV_COLUMNS = (
    ["theorem", "route", "surface"]
    + [f"value_{c}" for c in ("re_w", "im_w", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z")]
    + [f"expected_{c}" for c in ("re_w", "im_w", "re_x", "im_x", "re_y", "im_y", "re_z", "im_z")]
    + ["abs_err", "tolerance", "passed", "seconds"]
)


def reports_to_csv(reports, timing: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        row = [r.theorem.value, r.route, r.surface]
        row += [repr(v) for v in r.value.components()]
        row += [repr(v) for v in r.expected.components()]
        row += [repr(r.abs_err), repr(r.tolerance), str(r.passed), repr(round(r.seconds, 6)) if timing else ""]
        w.writerow(row)
    return buf.getvalue()


def max_component_error(a: BiQuat, b: BiQuat) -> float:
    return float(np.max(np.abs(np.array(a.components()) - np.array(b.components()))))


# ---------------------------------------------------------------------------
# admissibility and regularity
# ---------------------------------------------------------------------------

_SAMPLE_OFFSETS = np.array(
    [[0.11, -0.07, 0.05, 0.13], [-0.09, 0.12, -0.04, 0.03], [0.02, 0.06, 0.15, -0.08], [-0.13, -0.05, 0.09, 0.07]]
)


def check_regular(f: QField, variant: str, q0, tol: float = 1e-6) -> None:
    """Raise :class:`RegularityViolation` unless ``f`` passes the ``variant`` operator near ``q0``."""
    pts = np.asarray(q0, dtype=float) + _SAMPLE_OFFSETS
    res = regularity_residual(f, pts, variant)
    scale = 1.0 + float(np.max(np.abs(f.evaluate(pts.astype(complex)))))
    if float(np.max(res)) > tol * scale:
        raise RegularityViolation(f"test function is not {variant}-regular (residual {float(np.max(res)):.3g})")


def _spatial(p) -> np.ndarray:
    return np.asarray(p, dtype=float)[1:]


def encloses(spec: SurfaceSpec, q0) -> bool:
    """Whether the real point ``q0`` lies strictly inside the surface."""
    rel = np.asarray(q0, dtype=float) - np.asarray(spec.center, dtype=float)
    r = float(np.linalg.norm(rel[1:]))
    if isinstance(spec, Sphere3):
        return float(np.linalg.norm(rel)) < spec.radius
    if isinstance(spec, CappedSphere):
        return float(np.linalg.norm(rel)) < spec.radius and abs(rel[0]) < spec.radius * math.cos(spec.delta)
    if isinstance(spec, HyperBox):
        return bool(np.all(np.abs(rel) < np.asarray(spec.halfwidths)))
    if isinstance(spec, Prism):
        ax = {"w": 0, "t": 0, "x": 1, "y": 2, "z": 3}[spec.axis]
        t1 = spec.t1 if spec.t1 is not None else 2 * spec.rho
        others = [k for k in range(4) if k != ax]
        return abs(rel[ax]) < t1 and float(np.linalg.norm(rel[others])) < spec.rho
    if isinstance(spec, (DeformedPrism, WidePrism)):
        built = spec.build().descriptor
        return abs(rel[0]) < built.t1 and r < built.rho
    raise TypeError(f"unsupported surface {spec!r}")


_AXIS_ADAPTED = (CappedSphere, Prism, DeformedPrism, WidePrism)


def _spatial_extent(spec: SurfaceSpec) -> float:
    if isinstance(spec, (Sphere3, CappedSphere)):
        return spec.radius
    if isinstance(spec, HyperBox):
        return float(np.linalg.norm(spec.halfwidths[1:]))
    return spec.rho


def check_admissible(spec: TheoremSpec, surface: SurfaceSpec, q0) -> None:
    """Surfaces the evaluation is known to be valid for.

    Axis kernels are singular along the whole time line through ``q0``;
    that line may only cross the surface at the centres of flat ball caps.
    Light-cone kernels need a contour-deformed prism.
    """
    if spec.axis_kernel:
        off = float(np.linalg.norm(_spatial(q0) - _spatial(surface.center)))
        if off < _spatial_extent(surface):
            ok = isinstance(surface, _AXIS_ADAPTED) and off < 1e-12
            if isinstance(surface, Prism) and surface.axis not in ("w", "t"):
                ok = False
            if not ok:
                raise SingularityOnSurface(
                    "axis kernel: the singular line must cross the surface at the centres of ball caps "
                    "(capsphere, prism, dprism or wprism centred on the axis)"
                )
    if spec.light_cone and not isinstance(surface, (DeformedPrism, WidePrism)):
        raise SingularityOnSurface("light-cone kernel: use a contour-deformed prism (dprism or wprism)")


# ---------------------------------------------------------------------------
# integrand assembly
# ---------------------------------------------------------------------------


def _factors(spec: TheoremSpec, f: QField, q0):
    """``(left, right)`` sandwich factors for ``spec``."""
    k = spec.make_kernel(q0)
    if k is None:
        return (None, f) if spec.f_side == "right" else (f, None)
    if spec.kernel_side == "inner":
        return (None, k * f) if spec.f_side == "right" else (f * k, None)
    # kernel across the form from f
    return (k, f) if spec.f_side == "right" else (f, k)


def expected_value(spec: TheoremSpec, f: QField, q0, enclosed: bool = True, quoted: bool = False) -> BiQuat:
    if spec.family in ("zero", "sandwich") or not enclosed:
        return BiQuat(0)
    fq = f.at(q0)
    c = spec.constant(quoted)
    if spec.family == "fueter":
        return c * fq if c.allclose(BiQuat(c.w)) or spec.f_side == "right" else fq * c
    return c * fq if spec.f_side == "right" else fq * c


def _nonaffine(f: QField) -> bool:
    return isinstance(f, PolyField) and f.degree >= 2


_NONAFFINE_NOTE = (
    "test function is not affine: kernel*f is then not regular away from the w = w0 slice, "
    "so this value depends on the surface"
)


def _report(spec, surface_text, quad, value, f, q0, enclosed, t0, route, extra_notes=()):
    expected = expected_value(spec, f, q0, enclosed)
    quoted = expected_value(spec, f, q0, enclosed, quoted=True)
    notes = list(spec.notes) + list(extra_notes)
    if spec.family == "alt" and _nonaffine(f):
        notes.append(_NONAFFINE_NOTE)
    return Report(
        theorem=spec.id,
        surface=surface_text,
        quad=quad,
        value=value,
        expected=expected,
        abs_err=max_component_error(value, expected),
        seconds=time.perf_counter() - t0,
        tolerance=spec.tolerance,
        quoted=quoted,
        route=route,
        notes=tuple(notes),
    )


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------


def run(
    t: TheoremId | str,
    f: QField,
    q0=(0.0, 0.0, 0.0, 0.0),
    surface: SurfaceSpec | Surface | str = "sphere:r=1",
    rule: QuadRule = QuadRule(24),
    tolerance: float | None = None,
    check: bool = True,
) -> Report:
    """Integrate theorem ``t`` with test function ``f`` over ``surface``."""
    from .geometry import parse_surface

    t0 = time.perf_counter()
    tid = TheoremId.parse(t) if isinstance(t, str) else t
    spec = SPECS[tid]
    if tolerance is not None:
        spec = replace(spec, tolerance=tolerance)
    if isinstance(surface, str):
        surface = parse_surface(surface)
    built = surface if isinstance(surface, Surface) else surface.build()
    desc = built.descriptor
    q0 = tuple(float(v) for v in q0)
    if check:
        check_regular(f, spec.variant, q0)
    check_admissible(spec, desc, q0)
    enclosed = encloses(desc, q0)
    left, right = _factors(spec, f, q0)
    value = integrate_sandwich(left, spec.form, right, built, rule)
    return _report(spec, desc.to_text(), rule.to_dict(), value, f, q0, enclosed, t0, "surface")


def surface_independence(t, f: QField, q0, surfaces, rule: QuadRule = QuadRule(24)) -> float:
    """Largest component-wise deviation between the values on ``surfaces``."""
    vals = [run(t, f, q0, s, rule).value for s in surfaces]
    dev = 0.0
    for a in range(len(vals)):
        for b in range(a + 1, len(vals)):
            dev = max(dev, max_component_error(vals[a], vals[b]))
    return dev


def _bi_setup(t, f, q0, tolerance, check):
    tid = TheoremId.parse(t) if isinstance(t, str) else t
    spec = SPECS[tid]
    if not (spec.is_bi and spec.kernel is not None):
        raise ValueError(f"{tid.value} is not a biquaternion kernel theorem")
    if tolerance is not None:
        spec = replace(spec, tolerance=tolerance)
    q0 = tuple(float(v) for v in q0)
    if check:
        check_regular(f, spec.variant, q0)
    return spec, q0


def _quad_info(crule: ContourRule, arule: AngularRule, **extra) -> dict:
    d = {"contour_order": crule.order, "contour_panels": crule.panels, "angular_order": arule.order}
    d.update(extra)
    return d


def run_bi_narrow(
    t,
    f: QField,
    q0=(0.0, 0.0, 0.0, 0.0),
    rho: float = 1.0,
    t1: float | None = None,
    eps: float | None = None,
    crule: ContourRule = ContourRule(),
    arule: AngularRule = AngularRule(),
    tolerance: float | None = None,
    check: bool = True,
) -> Report:
    """Prism of radius ``rho`` extruded in time, side wall integrated as a contour in ``t``.

    The angular integral over each time slice is done by quadrature; the
    time integral runs along ``[-t1, t1]`` detouring below ``t = rho``
    (pole included) and above ``t = -rho`` (excluded).  The end caps at
    ``+-t1`` stay clear of the light cone and are integrated on the real
    radius.
    """
    t0 = time.perf_counter()
    spec, q0 = _bi_setup(t, f, q0, tolerance, check)
    t1 = 2.0 * rho if t1 is None else t1
    eps = 0.25 * rho if eps is None else eps
    desc = DeformedPrism(q0, rho, eps, t1)
    desc.build()  # parameter validation
    left, right = _factors(spec, f, q0)
    side = tube_slices(left, spec.form, right, q0, rho, arule)
    path = segment_contour(-t1, t1, [(rho, "include"), (-rho, "exclude")], eps)
    total = np.asarray(contour_integrate(side, path, crule))
    for sgn in (1, -1):
        cap = ball_slices(left, spec.form, right, q0, sgn * t1, arule)
        total = total + np.asarray(contour_integrate(cap, Contour((Segment(0.0, rho),)), crule))
    value = BiQuat.from_array(total)
    notes = []
    if spec.id is TheoremId.BiFueter74:
        notes.append(bifueter_note(value, f.at(q0)))
    return _report(spec, desc.to_text(), _quad_info(crule, arule, t1=t1, eps=eps), value, f, q0, True, t0,
                   "narrow", notes)


def run_bi_wide(
    t,
    f: QField,
    q0=(0.0, 0.0, 0.0, 0.0),
    t1: float = 1.0,
    rho: float | None = None,
    eps: float | None = None,
    crule: ContourRule = ContourRule(),
    arule: AngularRule = AngularRule(),
    tolerance: float | None = None,
    check: bool = True,
) -> Report:
    """Prism wider than it is long (``rho > t1``), caps integrated as a contour in ``r``.

    The side wall at ``r = rho`` never meets the light cone; on each cap
    the radius runs from 0 to ``rho`` passing above ``r = t1``.
    """
    t0 = time.perf_counter()
    spec, q0 = _bi_setup(t, f, q0, tolerance, check)
    rho = 2.0 * t1 if rho is None else rho
    eps = 0.25 * min(t1, rho - t1) if eps is None else eps
    desc = WidePrism(q0, rho, t1, eps)
    desc.build()
    left, right = _factors(spec, f, q0)
    side = tube_slices(left, spec.form, right, q0, rho, arule)
    total = np.asarray(contour_integrate(side, Contour(tuple(_time_pieces(t1, rho))), crule))
    radial = segment_contour(0.0, rho, [(t1, "above")], eps)
    for sgn in (1, -1):
        cap = ball_slices(left, spec.form, right, q0, sgn * t1, arule)
        total = total + np.asarray(contour_integrate(cap, radial, crule))
    value = BiQuat.from_array(total)
    notes = []
    if spec.id is TheoremId.BiFueter74:
        notes.append(bifueter_note(value, f.at(q0)))
    return _report(spec, desc.to_text(), _quad_info(crule, arule, rho=rho, eps=eps), value, f, q0, True, t0,
                   "wide", notes)


BIFUETER_CANDIDATES = {"2 pi^2": BiQuat(TWO_PI2), "2 pi^2 I": I * TWO_PI2}


def resolve_bifueter_constant(crule: ContourRule = ContourRule(), arule: AngularRule = AngularRule(), tol=1e-6):
    """Evaluate the light-cone Fueter integral with ``f = 1`` and say which candidate constant it matches.

    Returns ``(value, label)``; ``label`` is ``None`` when neither fits.
    """
    rep = run_bi_narrow(TheoremId.BiFueter74, PolyField.constant(1.0), crule=crule, arule=arule, check=False)
    for label, c in BIFUETER_CANDIDATES.items():
        if max_component_error(rep.value, c) < tol:
            return rep.value, label
    return rep.value, None


def bifueter_note(value: BiQuat, fq0: BiQuat) -> str:
    try:
        const = value * fq0.inverse()
    except ArithmeticError:
        return "f(q0) is not invertible; constant not resolved"
    for label, c in BIFUETER_CANDIDATES.items():
        if max_component_error(const, c) < 1e-6:
            return f"constant resolved empirically as {label} (candidates: 2 pi^2, 2 pi^2 I)"
    return f"constant {const} matches neither 2 pi^2 nor 2 pi^2 I"


# ---------------------------------------------------------------------------
# defaults used by the table and the CLI
# ---------------------------------------------------------------------------

DEFAULT_GENERATOR = "x*y*z + 2*x^2*J - y*K + 3*z + 1"


def default_f(t: TheoremId) -> QField:
    spec = SPECS[t]
    if spec.family in ("zero", "sandwich"):
        gen = {
            "left": "regular",
            "conjugate": "conjugate",
            "right": "right",
            "conjugate_right": "conjugate_right",
            "bi": "bi",
        }[spec.variant]
        return gen_exp_poly(parse_poly(DEFAULT_GENERATOR), gen)
    return PolyField.constant(1.0).with_variant(spec.variant)


def default_surface(t: TheoremId) -> str:
    spec = SPECS[t]
    if spec.light_cone:
        return "dprism:rho=1"
    if spec.axis_kernel:
        return "prism:rho=1"
    if spec.family == "zero":
        return "box:h=1"
    return "sphere:r=1"


def default_q0(t: TheoremId) -> tuple:
    return (3.0, 0.0, 0.0, 0.0) if t is TheoremId.SandwichZero33 else (0.0, 0.0, 0.0, 0.0)


def full_table(order: int = 24, seed: int = 0) -> list[Report]:
    """One report per theorem on its default configuration, plus both light-cone routes.

    ``seed`` fixes the sample used for the extra nonconstant-f rows; the
    computation itself is deterministic.
    """
    rng = np.random.default_rng(seed)
    rule = QuadRule(order)
    out = []
    for t in TheoremId:
        spec = SPECS[t]
        f = default_f(t)
        q0 = default_q0(t)
        if spec.light_cone:
            crule = ContourRule(order=max(order, 16))
            arule = AngularRule(order=max(order, 16))
            out.append(run_bi_narrow(t, f, q0, crule=crule, arule=arule))
            if spec.family == "alt":
                out.append(run_bi_wide(t, f, q0, crule=crule, arule=arule))
        else:
            out.append(run(t, f, q0, default_surface(t), rule))
    # an affine, nonconstant test function on the alternative theorem
    coeffs = [float(c) for c in np.round(rng.uniform(-1, 1, size=3), 6)]
    gen = f"{coeffs[0]!r}*x + {coeffs[1]!r}*y*J + {coeffs[2]!r}*z*K + 1"
    f = gen_exp_poly(parse_poly(gen), "regular")
    out.append(run(TheoremId.Alt48, f, (0.0, 0.0, 0.0, 0.0), "prism:rho=1", rule))
    return out
