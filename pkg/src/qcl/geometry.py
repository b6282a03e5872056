"""Closed oriented 3-surfaces in R^4 and quadrature of quaternionic 3-forms.

Every surface is an ordered list of :class:`Patch` objects, each a map of
the unit cube ``[0, 1]^3`` into (possibly complexified) R^4 with an
analytic Jacobian.  Orientation signs are fixed at construction so that
the 3-form normal points out of the enclosed region.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .algebra import BiQuat, qmul
from .contour import Arc, Segment, segment_contour
from .errors import BadParameters, DegenerateJacobian, SingularityOnSurface
from .fields import PointLocus, QField
from .quadrature import fixed_sum, gauss_legendre_panels, uniform_periodic

MapFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]

# ---------------------------------------------------------------------------
# patches, rules, forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Patch:
    """``fn(u)`` maps ``u`` of shape ``(N, 3)`` to points ``(N, 4)`` and
    Jacobians ``(N, 4, 3)``; ``periodic`` marks azimuthal axes."""

    fn: MapFn
    orientation: int = 1
    periodic: tuple[bool, bool, bool] = (False, False, False)
    name: str = ""

    def __call__(self, u):
        return self.fn(np.atleast_2d(np.asarray(u, dtype=float)))


@dataclass(frozen=True)
class QuadRule:
    """Tensor Gauss-Legendre rule with uniform nodes on periodic axes.

    ``order`` and ``panels`` are per u-axis (a single int applies to all);
    periodic axes get ``azimuth`` nodes, by default ``order * panels``.
    """

    order: int | tuple[int, int, int] = 16
    panels: int | tuple[int, int, int] = 1
    azimuth: int | None = None

    def _axis(self, v, k: int) -> int:
        return int(v[k] if isinstance(v, (tuple, list)) else v)

    def axis_nodes(self, k: int, periodic: bool):
        o, p = self._axis(self.order, k), self._axis(self.panels, k)
        if periodic:
            n = self.azimuth if self.azimuth is not None else o * p
            if n < 4:
                raise BadParameters("azimuthal rule needs at least 4 nodes")
            return uniform_periodic(n)
        return gauss_legendre_panels(o, p)

    def nodes(self, periodic: Sequence[bool]) -> tuple[np.ndarray, np.ndarray]:
        axes = [self.axis_nodes(k, periodic[k]) for k in range(3)]
        grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
        wgrid = np.meshgrid(*[a[1] for a in axes], indexing="ij")
        u = np.stack([g.ravel() for g in grids], axis=-1)
        w = wgrid[0].ravel() * wgrid[1].ravel() * wgrid[2].ravel()
        return u, w

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}


class FormKind(Enum):
    Sq = ("q", 1)
    SqSharp = ("q", -1)
    SH = ("H", 1)
    SHSharp = ("H", -1)


def normal_minors(jac: np.ndarray) -> np.ndarray:
    """Signed 3x3 minors ``(N_w, N_x, N_y, N_z)`` of Jacobians ``(..., 4, 3)``.

    ``N_w = det d(x,y,z)/du`` and ``N_x, N_y, N_z`` are minus the minors
    for ``(w,y,z)``, ``(w,z,x)``, ``(w,x,y)``.
    """
    rows = ((1, 2, 3), (0, 2, 3), (0, 3, 1), (0, 1, 2))
    sign = (1, -1, -1, -1)
    out = np.empty(jac.shape[:-2] + (4,), dtype=complex)
    for k, (r, s) in enumerate(zip(rows, sign)):
        out[..., k] = s * _det3(jac[..., r[0], :], jac[..., r[1], :], jac[..., r[2], :])
    return out


def _det3(a, b, c):
    """Determinant of the matrices with rows ``a``, ``b``, ``c`` (last axis length 3)."""
    return (
        a[..., 0] * (b[..., 1] * c[..., 2] - b[..., 2] * c[..., 1])
        - a[..., 1] * (b[..., 0] * c[..., 2] - b[..., 2] * c[..., 0])
        + a[..., 2] * (b[..., 0] * c[..., 1] - b[..., 1] * c[..., 0])
    )


def form_from_minors(m: np.ndarray, kind: FormKind) -> np.ndarray:
    family, sign = kind.value
    factor = sign * (1j if family == "H" else 1.0)
    out = np.array(m, dtype=complex)
    out[..., 1:] *= factor
    return out


def pullback_form(patch: Patch, u, kind: FormKind = FormKind.Sq, check: bool = True):
    """The 3-form ``kind`` pulled back to the patch at ``u`` (per unit ``du^3``).

    Returns a :class:`BiQuat` for a single ``u`` and an ``(N, 4)`` array
    otherwise.
    """
    u_arr = np.asarray(u, dtype=float)
    single = u_arr.ndim == 1
    _, jac = patch(u_arr)
    m = normal_minors(jac) * patch.orientation
    if check:
        scale = np.max(np.abs(jac), axis=(-2, -1)) ** 3
        if np.any(np.sqrt(np.sum(np.abs(m) ** 2, axis=-1)) <= 1e-13 * np.maximum(scale, 1e-300)):
            raise DegenerateJacobian(f"patch {patch.name!r} has rank < 3 at some node")
    out = form_from_minors(m, kind)
    return BiQuat.from_array(out[0]) if single else out


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Surface:
    patches: tuple
    descriptor: "SurfaceSpec"

    def __iter__(self):
        return iter(self.patches)

    def shifted(self, shift) -> "Surface":
        return self.descriptor.with_center(np.asarray(self.descriptor.center) + np.asarray(shift)).build()


def _threads() -> int:
    try:
        n = int(os.environ.get("QCL_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


CLEARANCE = 1e-9


def _apply(field_: QField | None, pts: np.ndarray, descr: str) -> np.ndarray | None:
    if field_ is None:
        return None
    if getattr(field_, "locus", ()):
        d = field_.distance_to_locus(pts)
        scale = 1.0 + np.max(np.abs(pts))
        if np.any(d <= CLEARANCE * scale):
            raise SingularityOnSurface(f"{descr} {field_!r} is singular on the integration surface")
    return field_.evaluate(pts)


def _check_point_loci(surface: Surface, *fields_) -> None:
    """Point singularities can hide between quadrature nodes; test them exactly."""
    for f in fields_:
        for loc in getattr(f, "locus", ()) if f is not None else ():
            if not isinstance(loc, PointLocus):
                continue
            c = np.asarray(loc.center, dtype=float)
            d = surface.descriptor.distance(c)
            if d is not None and d <= CLEARANCE * (1.0 + float(np.max(np.abs(c)))):
                raise SingularityOnSurface(f"{f!r} is singular at a point of the surface")


def _patch_sum(patch: Patch, left, kind, right, rule: QuadRule) -> np.ndarray:
    u, w = rule.nodes(patch.periodic)
    pts, jac = patch(u)
    form = form_from_minors(normal_minors(jac) * patch.orientation, kind)
    vals = form
    lv = _apply(left, pts, "left factor")
    rv = _apply(right, pts, "right factor")
    if lv is not None:
        vals = qmul(lv, vals)
    if rv is not None:
        vals = qmul(vals, rv)
    return fixed_sum(vals * w[:, None])


def integrate_sandwich(
    left: QField | None,
    kind: FormKind,
    right: QField | None,
    surface: Surface,
    rule: QuadRule = QuadRule(),
    per_patch: bool = False,
):
    """Quadrature of ``left * S * right`` over ``surface`` in that order.

    Patches are integrated independently (concurrently when
    ``QCL_THREADS > 1``) and reduced in patch order with exact summation,
    so the result does not depend on the thread count.
    """
    _check_point_loci(surface, left, right)
    patches = list(surface.patches)
    n = min(_threads(), len(patches))
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            parts = list(ex.map(lambda p: _patch_sum(p, left, kind, right, rule), patches))
    else:
        parts = [_patch_sum(p, left, kind, right, rule) for p in patches]
    total = fixed_sum(np.array(parts))
    if per_patch:
        return BiQuat.from_array(total), [BiQuat.from_array(p) for p in parts]
    return BiQuat.from_array(total)


def surface_area(surface: Surface, rule: QuadRule = QuadRule()) -> float:
    """Unweighted 3-volume of a real surface."""
    total = []
    for p in surface.patches:
        u, w = rule.nodes(p.periodic)
        _, jac = p(u)
        m = normal_minors(jac)
        total.append(math.fsum((np.sqrt(np.sum(np.abs(m) ** 2, axis=-1)) * w).tolist()))
    return math.fsum(total)


# --- elementary parametrisations ------------------------------------------------


def _angles(u2, u3):
    """``mu = cos(theta)`` spread uniformly in ``u2`` and ``phi = 2 pi u3``."""
    mu = 1.0 - 2.0 * u2
    s = np.sqrt(1.0 - mu * mu)
    phi = 2 * math.pi * u3
    return mu, s, np.cos(phi), np.sin(phi)


def _dir_and_derivs(u2, u3):
    """Unit spatial direction and its ``u2``/``u3`` derivatives, shape (N, 3)."""
    mu, s, c, sn = _angles(u2, u3)
    n = np.stack([s * c, s * sn, mu], axis=-1)
    dmu = np.stack([-mu / s * c, -mu / s * sn, np.ones_like(mu)], axis=-1) * -2.0
    dphi = np.stack([-s * sn, s * c, np.zeros_like(mu)], axis=-1) * (2 * math.pi)
    return n, dmu, dphi


def _assemble(center, w, dw, spatial, dspatial):
    """Points and Jacobians from time/space parts.

    ``w`` (N,), ``dw`` (N, 3); ``spatial`` (N, 3), ``dspatial`` (N, 3, 3)
    whose last axis is the u-derivative index.
    """
    n = w.shape[0]
    pts = np.empty((n, 4), dtype=complex)
    pts[:, 0] = w
    pts[:, 1:] = spatial
    jac = np.empty((n, 4, 3), dtype=complex)
    jac[:, 0, :] = dw
    jac[:, 1:, :] = dspatial
    return pts + np.asarray(center, dtype=complex), jac


def _permute(pts, jac, axis: int):
    """Move the extrusion coordinate from slot 0 to slot ``axis``."""
    if axis == 0:
        return pts, jac
    order = list(range(1, 4))
    order.insert(axis, 0)
    # slot k of the output takes slot order[k] of the input
    return pts[:, order], jac[:, order, :]


def _ball_geom(r, dr, w_offset, u2, u3, axis: int = 0):
    """Points and Jacobians of the ball ``w = w_offset, |rbar| = r`` (``r`` may be complex)."""
    n, dmu, dphi = _dir_and_derivs(u2, u3)
    spatial = r[:, None] * n
    dsp = np.stack([dr[:, None] * n, r[:, None] * dmu, r[:, None] * dphi], axis=-1)
    w = np.full(r.shape, w_offset, dtype=complex)
    pts, jac = _assemble(np.zeros(4), w, np.zeros((len(r), 3)), spatial, dsp)
    return _permute(pts, jac, axis)


def _tube_geom(t, dt, radius, u2, u3, axis: int = 0):
    """Points and Jacobians of the tube ``|rbar| = radius`` at times ``t`` (may be complex)."""
    n, dmu, dphi = _dir_and_derivs(u2, u3)
    spatial = radius * n
    dsp = np.stack([np.zeros_like(n), radius * dmu, radius * dphi], axis=-1)
    dw = np.zeros((len(t), 3), dtype=complex)
    dw[:, 0] = dt
    pts, jac = _assemble(np.zeros(4), t, dw, spatial, dsp)
    return _permute(pts, jac, axis)


def _ball_patch(center, radius, w_offset, axis: int = 0, radial: Segment | Arc | None = None, name="cap") -> Patch:
    """Solid 3-ball at fixed extrusion coordinate, in spherical coordinates.

    ``radial`` (a contour piece on ``s in [0,1]``) replaces the real radius
    ``r = radius * u1`` by a complex path.
    """

    def fn(u):
        u1 = u[:, 0]
        if radial is None:
            r, dr = radius * u1 + 0j, np.full(u1.shape, radius, dtype=complex)
        else:
            r, dr = radial.z(u1), radial.dz(u1)
        pts, jac = _ball_geom(r, dr, w_offset, u[:, 1], u[:, 2], axis)
        return pts + np.asarray(center, dtype=complex), jac

    return Patch(fn, 1, (False, False, True), name)


def _tube_patch(center, radius, time_piece, axis: int = 0, name="side") -> Patch:
    """Spatial 2-sphere of fixed radius swept along a (possibly complex) time path."""

    def fn(u):
        u1 = u[:, 0]
        pts, jac = _tube_geom(time_piece.z(u1), time_piece.dz(u1), radius, u[:, 1], u[:, 2], axis)
        return pts + np.asarray(center, dtype=complex), jac

    return Patch(fn, 1, (False, False, True), name)


@dataclass(frozen=True)
class AngularRule:
    """Rule on the 2-sphere: Gauss-Legendre in ``cos(theta)``, uniform in ``phi``."""

    order: int = 24
    azimuth: int | None = None

    def nodes(self):
        mu, wm = gauss_legendre_panels(self.order, 1)
        ph, wp = uniform_periodic(self.azimuth or self.order)
        a, b = np.meshgrid(mu, ph, indexing="ij")
        return a.ravel(), b.ravel(), np.outer(wm, wp).ravel()


def slice_integrand(left, kind: FormKind, right, center, orientation: int, geom, rule: AngularRule = AngularRule()):
    """``z -> angular integral of left * S * right`` over a one-parameter family of 2-spheres.

    ``geom(z, dz, u2, u3)`` returns points and Jacobians whose first
    column is the derivative along the sweep parameter; with ``dz = 1`` the
    result is the 3-form integrand per unit ``dz``, ready for
    :func:`qcl.contour.contour_integrate`.
    """
    u2, u3, wa = rule.nodes()
    m = len(wa)
    c = np.asarray(center, dtype=complex)

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        zz = np.repeat(z, m)
        pts, jac = geom(zz, np.ones_like(zz), np.tile(u2, len(z)), np.tile(u3, len(z)))
        pts = pts + c
        vals = form_from_minors(normal_minors(jac) * orientation, kind)
        lv = _apply(left, pts, "left factor")
        rv = _apply(right, pts, "right factor")
        if lv is not None:
            vals = qmul(lv, vals)
        if rv is not None:
            vals = qmul(vals, rv)
        vals = (vals * np.tile(wa, len(z))[:, None]).reshape(len(z), m, 4)
        # fixed shapes make numpy's pairwise sum reproducible; the outer
        # contour reduction is exact
        return np.sum(vals, axis=1)

    return f


def tube_slices(left, kind, right, center, rho, rule: AngularRule = AngularRule(), orientation: int | None = None):
    """Side-wall integrand of a w-extruded prism as a function of (complex) time."""
    if orientation is None:
        orientation = _oriented(_tube_patch(center, rho, Segment(-1.0, 1.0)), center).orientation
    return slice_integrand(
        left, kind, right, center, orientation, lambda t, dt, u2, u3: _tube_geom(t, dt, rho, u2, u3), rule
    )


def ball_slices(left, kind, right, center, w_offset, rule: AngularRule = AngularRule(), orientation: int | None = None):
    """Cap integrand at ``w = w_offset`` as a function of the (complex) radius."""
    if orientation is None:
        orientation = _oriented(_ball_patch(center, 1.0, w_offset), center).orientation
    return slice_integrand(
        left, kind, right, center, orientation, lambda r, dr, u2, u3: _ball_geom(r, dr, w_offset, u2, u3), rule
    )


def _hyperspherical_band(center, radius, chi0, chi1, name="sphere") -> Patch:
    def fn(u):
        u1, u2, u3 = u[:, 0], u[:, 1], u[:, 2]
        chi = chi0 + (chi1 - chi0) * u1
        dchi = chi1 - chi0
        n, dmu, dphi = _dir_and_derivs(u2, u3)
        sc, cc = np.sin(chi), np.cos(chi)
        w = radius * cc
        dw = np.zeros((len(u1), 3))
        dw[:, 0] = -radius * sc * dchi
        spatial = (radius * sc)[:, None] * n
        dsp = np.stack(
            [(radius * cc * dchi)[:, None] * n, (radius * sc)[:, None] * dmu, (radius * sc)[:, None] * dphi], axis=-1
        )
        return _assemble(center, w, dw, spatial, dsp)

    return Patch(fn, 1, (False, False, True), name)


def _box_face(center, half, axis: int, side: int) -> Patch:
    others = [a for a in range(4) if a != axis]

    def fn(u):
        n = u.shape[0]
        pts = np.zeros((n, 4), dtype=complex)
        jac = np.zeros((n, 4, 3), dtype=complex)
        pts[:, axis] = side * half[axis]
        for k, a in enumerate(others):
            pts[:, a] = half[a] * (2 * u[:, k] - 1)
            jac[:, a, k] = 2 * half[a]
        return pts + np.asarray(center, dtype=complex), jac

    return Patch(fn, 1, (False, False, False), f"face{'wxyz'[axis]}{'+' if side > 0 else '-'}")


def _oriented(patch: Patch, interior) -> Patch:
    """Fix the orientation sign so the normal points away from ``interior``."""
    u = np.array([[0.37, 0.41, 0.29]])
    pts, jac = patch(u)
    m = normal_minors(jac)[0]
    d = (pts[0] - np.asarray(interior)).real
    s = float(np.sum(m.real * d))
    if s == 0.0:
        raise DegenerateJacobian(f"cannot orient patch {patch.name!r}")
    return Patch(patch.fn, 1 if s > 0 else -1, patch.periodic, patch.name)


# --- descriptors -----------------------------------------------------------------

_AXIS_INDEX = {"w": 0, "t": 0, "x": 1, "y": 2, "z": 3}


def _center4(c) -> tuple[float, float, float, float]:
    arr = np.asarray(c, dtype=float).ravel()
    if arr.shape != (4,):
        raise BadParameters("center needs four coordinates")
    return tuple(float(v) for v in arr)  # type: ignore[return-value]


@dataclass(frozen=True)
class SurfaceSpec:
    """Common base: every descriptor has a ``center`` and rebuilds its surface."""

    center: tuple = (0.0, 0.0, 0.0, 0.0)

    kind = "surface"

    def build(self) -> Surface:
        raise NotImplementedError

    def distance(self, p) -> float | None:
        """Euclidean distance from a real point to the surface, if known in closed form."""
        return None

    def with_center(self, c) -> "SurfaceSpec":
        d = asdict(self)
        d["center"] = _center4(c)
        return type(self)(**d)

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        for k, v in asdict(self).items():
            d[k] = list(v) if isinstance(v, tuple) else v
        return d

    def to_text(self) -> str:
        parts = []
        for k, v in asdict(self).items():
            if k == "center":
                if any(v):
                    parts.append("c=" + ";".join(repr(float(x)) for x in v))
            elif isinstance(v, tuple):
                parts.append(f"{k}=" + ";".join(repr(float(x)) for x in v))
            elif v is not None:
                parts.append(f"{k}={v}")
        return f"{self.kind}:" + ",".join(parts)


@dataclass(frozen=True)
class Sphere3(SurfaceSpec):
    radius: float = 1.0
    kind = "sphere"

    def build(self) -> Surface:
        return sphere3(self.center, self.radius)

    def distance(self, p) -> float:
        return abs(float(np.linalg.norm(np.asarray(p, float) - self.center)) - self.radius)


@dataclass(frozen=True)
class CappedSphere(SurfaceSpec):
    radius: float = 1.0
    delta: float = 0.3
    kind = "capsphere"

    def build(self) -> Surface:
        return sphere_axis_caps(self.center, self.radius, self.delta)

    def distance(self, p) -> float:
        d = np.asarray(p, float) - self.center
        dw, rr = d[0], float(np.linalg.norm(d[1:]))
        a, h = self.radius * math.sin(self.delta), self.radius * math.cos(self.delta)
        chi = math.atan2(rr, dw)
        if self.delta <= chi <= math.pi - self.delta:
            band = abs(math.hypot(dw, rr) - self.radius)
        else:
            band = min(math.hypot(dw - h, rr - a), math.hypot(dw + h, rr - a))
        caps = min(math.hypot(dw - s * h, max(rr - a, 0.0)) for s in (1, -1))
        return min(band, caps)


@dataclass(frozen=True)
class HyperBox(SurfaceSpec):
    halfwidths: tuple = (1.0, 1.0, 1.0, 1.0)
    kind = "box"

    def build(self) -> Surface:
        return hyperbox(self.center, self.halfwidths)

    def distance(self, p) -> float:
        d = np.abs(np.asarray(p, float) - self.center) - np.asarray(self.halfwidths)
        if np.all(d <= 0):
            return float(-np.max(d))
        return float(np.linalg.norm(np.maximum(d, 0.0)))


@dataclass(frozen=True)
class Prism(SurfaceSpec):
    rho: float = 1.0
    t1: float | None = None
    axis: str = "w"
    kind = "prism"

    def build(self) -> Surface:
        return prism(self.center, self.rho, self.t1, self.axis)

    def distance(self, p) -> float:
        d = np.asarray(p, float) - self.center
        ax = _AXIS_INDEX[self.axis]
        s = abs(d[ax])
        rr = float(np.linalg.norm(np.delete(d, ax)))
        t1 = 2.0 * self.rho if self.t1 is None else self.t1
        if s <= t1 and rr <= self.rho:
            return min(t1 - s, self.rho - rr)
        return math.hypot(max(s - t1, 0.0), max(rr - self.rho, 0.0))


@dataclass(frozen=True)
class DeformedPrism(SurfaceSpec):
    rho: float = 1.0
    eps: float | None = None
    t1: float | None = None
    kind = "dprism"

    def build(self) -> Surface:
        return deformed_prism(self.center, self.rho, self.eps, self.t1)


@dataclass(frozen=True)
class WidePrism(SurfaceSpec):
    rho: float = 1.0
    t1: float | None = None
    eps: float | None = None
    kind = "wprism"

    def build(self) -> Surface:
        return wide_prism(self.center, self.rho, self.t1, self.eps)


SPEC_TYPES = {cls.kind: cls for cls in (Sphere3, CappedSphere, HyperBox, Prism, DeformedPrism, WidePrism)}
_ALIASES = {"r": "radius", "h": "halfwidths", "hw": "halfwidths", "c": "center", "center": "center", "delta": "delta"}


def parse_surface(text: str) -> SurfaceSpec:
    """Parse ``kind:key=value,...`` (e.g. ``sphere:r=1``, ``box:h=0.8``,
    ``prism:rho=1,t1=2``, ``sphere:r=1,c=0;1;0;0``)."""
    kind, _, rest = text.strip().partition(":")
    kind = kind.strip().lower()
    if kind not in SPEC_TYPES:
        raise BadParameters(f"unknown surface kind {kind!r}; choose from {sorted(SPEC_TYPES)}")
    cls = SPEC_TYPES[kind]
    kw: dict = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise BadParameters(f"surface option {item!r} is not key=value")
        key = _ALIASES.get(key.strip(), key.strip())
        val = val.strip()
        if key == "center":
            kw[key] = _center4([float(v) for v in val.split(";")])
        elif key == "halfwidths":
            vals = [float(v) for v in val.split(";")]
            kw[key] = tuple(vals * 4 if len(vals) == 1 else vals)
        elif key == "axis":
            kw[key] = val
        else:
            try:
                kw[key] = float(val)
            except ValueError as exc:
                raise BadParameters(f"bad number in {item!r}") from exc
    try:
        spec = cls(**kw)
    except TypeError as exc:
        raise BadParameters(str(exc)) from exc
    return spec


def surface_from_dict(d: dict) -> SurfaceSpec:
    d = dict(d)
    kind = d.pop("kind")
    cls = SPEC_TYPES[kind]
    for k in ("center", "halfwidths"):
        if k in d:
            d[k] = tuple(float(v) for v in d[k])
    return cls(**d)


# --- constructors ------------------------------------------------------------------


def _positive(**vals):
    for k, v in vals.items():
        if not (v is not None and np.isfinite(v) and v > 0):
            raise BadParameters(f"{k} must be positive, got {v}")


def sphere3(center=(0, 0, 0, 0), radius: float = 1.0) -> Surface:
    """Hyperspherical coordinates with the poles on the w axis through ``center``."""
    _positive(radius=radius)
    c = _center4(center)
    patch = _oriented(_hyperspherical_band(c, radius, 0.0, math.pi), c)
    return Surface((patch,), Sphere3(c, float(radius)))


def sphere_axis_caps(center=(0, 0, 0, 0), radius: float = 1.0, delta: float = 0.3) -> Surface:
    """3-sphere with the polar regions ``chi < delta`` replaced by flat 3-balls.

    The w axis through ``center`` then crosses the surface only at the
    centres of the two balls, where the azimuthal rule sees it symmetrically.
    """
    _positive(radius=radius, delta=delta)
    if delta >= math.pi / 2:
        raise BadParameters("delta must be below pi/2")
    c = _center4(center)
    a = radius * math.sin(delta)
    h = radius * math.cos(delta)
    band = _oriented(_hyperspherical_band(c, radius, delta, math.pi - delta, "band"), c)
    top = _oriented(_ball_patch(c, a, h, name="cap+"), c)
    bot = _oriented(_ball_patch(c, a, -h, name="cap-"), c)
    return Surface((band, top, bot), CappedSphere(c, float(radius), float(delta)))


def hyperbox(center=(0, 0, 0, 0), halfwidths=(1.0, 1.0, 1.0, 1.0)) -> Surface:
    hw = np.broadcast_to(np.asarray(halfwidths, dtype=float), (4,))
    for v in hw:
        _positive(halfwidth=float(v))
    c = _center4(center)
    faces = tuple(_oriented(_box_face(c, hw, a, s), c) for a in range(4) for s in (1, -1))
    return Surface(faces, HyperBox(c, tuple(float(v) for v in hw)))


def prism(center=(0, 0, 0, 0), rho: float = 1.0, t1: float | None = None, axis: str = "w") -> Surface:
    """Spatial 2-sphere of radius ``rho`` extruded along ``axis`` from ``-t1`` to ``t1``,
    closed by two solid-ball caps."""
    t1 = 2.0 * rho if t1 is None else t1
    _positive(rho=rho, t1=t1)
    if axis not in _AXIS_INDEX:
        raise BadParameters(f"axis must be one of w, x, y, z; got {axis!r}")
    ax = _AXIS_INDEX[axis]
    c = _center4(center)
    sides = tuple(
        _oriented(_tube_patch(c, rho, piece, ax, name=f"side{k}"), c) for k, piece in enumerate(_time_pieces(t1, rho))
    )
    top = _oriented(_ball_patch(c, rho, t1, ax, name="cap+"), c)
    bot = _oriented(_ball_patch(c, rho, -t1, ax, name="cap-"), c)
    return Surface((*sides, top, bot), Prism(c, float(rho), float(t1), "w" if ax == 0 else axis))


def _time_pieces(t1: float, rho: float) -> list:
    """Split ``[-t1, t1]`` at ``0, +-rho/2, +-rho, +-2 rho, ...``.

    Axis kernels concentrate within a few ``rho`` of the centre slice;
    geometric panels keep long prisms as accurate as short ones.
    """
    cuts = [0.0]
    d = 0.5 * rho
    while d < t1:
        cuts.append(d)
        d *= 2.0
    cuts.append(t1)
    pos = sorted(set(cuts))
    edges = [-x for x in reversed(pos[1:])] + pos
    return [Segment(a, b) for a, b in zip(edges[:-1], edges[1:])]


def deformed_prism(center=(0, 0, 0, 0), rho: float = 1.0, eps: float | None = None, t1: float | None = None) -> Surface:
    """Narrow prism (``t1 > rho``) whose side wall runs along a complex time path.

    The time path is the real segment ``[-t1, t1]`` with semicircular
    detours of radius ``eps`` below ``t = +rho`` and above ``t = -rho``,
    i.e. where the side wall meets the light cone of ``center``.  Each
    contour piece becomes its own side patch.
    """
    t1 = 2.0 * rho if t1 is None else t1
    eps = 0.25 * rho if eps is None else eps
    _positive(rho=rho, eps=eps, t1=t1)
    if not eps < rho:
        raise BadParameters("detour radius must satisfy 0 < eps < rho")
    if not t1 > rho + eps:
        raise BadParameters("narrow prism needs t1 > rho + eps")
    c = _center4(center)
    path = segment_contour(-t1, t1, [(rho, "include"), (-rho, "exclude")], eps)
    sides = []
    for k, piece in enumerate(path.pieces):
        p = _tube_patch(c, rho, piece, 0, name=f"side{k}")
        sides.append(Patch(p.fn, 1, p.periodic, p.name))
    # outward radial normal: scalar-free minors must point along +rbar
    side_sign = _oriented(_tube_patch(c, rho, Segment(-t1, t1)), c).orientation
    sides = [Patch(s.fn, side_sign, s.periodic, s.name) for s in sides]
    top = _oriented(_ball_patch(c, rho, t1, name="cap+"), c)
    bot = _oriented(_ball_patch(c, rho, -t1, name="cap-"), c)
    return Surface((*sides, top, bot), DeformedPrism(c, float(rho), float(eps), float(t1)))


def wide_prism(center=(0, 0, 0, 0), rho: float = 1.0, t1: float | None = None, eps: float | None = None) -> Surface:
    """Wide prism (``rho > t1``) with caps whose radius runs along a complex path.

    The radial path on both caps is ``[0, rho]`` with a semicircular detour
    of radius ``eps`` above ``r = t1``, where the cap meets the light cone.
    """
    t1 = 0.5 * rho if t1 is None else t1
    eps = 0.25 * min(t1, rho - t1) if eps is None else eps
    _positive(rho=rho, t1=t1, eps=eps)
    if not rho > t1 + eps:
        raise BadParameters("wide prism needs rho > t1 + eps")
    if not eps < t1:
        raise BadParameters("detour radius must satisfy 0 < eps < t1")
    c = _center4(center)
    side = _oriented(_tube_patch(c, rho, Segment(-t1, t1)), c)
    path = segment_contour(0.0, rho, [(t1, "above")], eps)
    caps = []
    for sgn, label in ((1, "+"), (-1, "-")):
        ref = _oriented(_ball_patch(c, rho, sgn * t1, name="ref"), c).orientation
        for k, piece in enumerate(path.pieces):
            p = _ball_patch(c, rho, sgn * t1, radial=piece, name=f"cap{label}{k}")
            caps.append(Patch(p.fn, ref, p.periodic, p.name))
    return Surface((side, *caps), WidePrism(c, float(rho), float(t1), float(eps)))
