import math

import numpy as np
import pytest

from qcl.algebra import BiQuat, I, J
from qcl.errors import BadParameters, DegenerateJacobian, SingularityOnSurface
from qcl.fields import Kernel, PolyField, gen_exp_poly, parse_poly
from qcl.geometry import (
    AngularRule,
    FormKind,
    Patch,
    QuadRule,
    ball_slices,
    deformed_prism,
    hyperbox,
    integrate_sandwich,
    parse_surface,
    prism,
    pullback_form,
    sphere3,
    sphere_axis_caps,
    surface_area,
    surface_from_dict,
    wide_prism,
)

TWO_PI2 = 2 * math.pi**2


def face(hyperbox_surface, name):
    return next(p for p in hyperbox_surface.patches if p.name == name)


# pullback -------------------------------------------------------------------


def test_box_face_pullback():
    box = hyperbox(halfwidths=1.0)
    top = face(box, "facew+")
    v = pullback_form(top, [0.3, 0.5, 0.7])
    # the face map has Jacobian diag(2, 2, 2) in (x, y, z)
    assert v == BiQuat(8)
    assert pullback_form(top, [0.3, 0.5, 0.7], FormKind.SqSharp) == BiQuat(8)
    assert pullback_form(face(box, "facew-"), [0.3, 0.5, 0.7]) == BiQuat(-8)


def test_sphere_pullback_at_x_pole():
    s = sphere3()
    patch = s.patches[0]
    # chi = pi/2 (u1 = 1/2), theta = pi/2 (u2 = 1/2), phi = 0 (u3 = 0)
    pts, _ = patch(np.array([[0.5, 0.5, 0.0]]))
    assert np.allclose(pts[0], [0, 1, 0, 0], atol=1e-15)
    v = pullback_form(patch, [0.5, 0.5, 0.0])
    # the outward unit normal is +I; the form is that times the area density
    tol = 1e-13 * abs(v)
    assert abs(v.w) < tol and v.x.real > 0 and abs(v.y) < tol and abs(v.z) < tol
    sharp = pullback_form(patch, [0.5, 0.5, 0.0], FormKind.SqSharp)
    assert sharp.allclose(BiQuat(v.w, -v.x, -v.y, -v.z), 1e-15)


def test_hermitian_forms():
    patch = sphere3().patches[0]
    u = [0.31, 0.62, 0.17]
    q = pullback_form(patch, u).c
    h = pullback_form(patch, u, FormKind.SH).c
    assert h[0] == q[0] and np.allclose(h[1:], 1j * q[1:])
    hs = pullback_form(patch, u, FormKind.SHSharp).c
    assert np.allclose(hs[1:], -1j * q[1:])


def test_degenerate_jacobian():
    flat = Patch(lambda u: (np.zeros((len(u), 4), complex), np.zeros((len(u), 4, 3), complex)))
    with pytest.raises(DegenerateJacobian):
        pullback_form(flat, [0.5, 0.5, 0.5])


# constructors ---------------------------------------------------------------


def test_constructor_errors():
    with pytest.raises(BadParameters):
        sphere3(radius=-1)
    with pytest.raises(BadParameters):
        hyperbox(halfwidths=(1, 1, 0, 1))
    with pytest.raises(BadParameters):
        prism(rho=1, axis="q")
    with pytest.raises(BadParameters):
        deformed_prism(rho=1, eps=1.5)
    with pytest.raises(BadParameters):
        deformed_prism(rho=1, eps=0.2, t1=1.1)
    with pytest.raises(BadParameters):
        wide_prism(rho=1, t1=0.9, eps=0.2)
    with pytest.raises(BadParameters):
        QuadRule(4, azimuth=3).nodes((False, False, True))


def test_box_has_eight_faces():
    assert len(hyperbox().patches) == 8


def test_prism_cap_measure():
    p = prism(rho=1.0, t1=2.0)
    caps = {c.name: c for c in p.patches if c.name.startswith("cap")}
    top = pullback_form(caps["cap+"], [0.5, 0.3, 0.2])
    bot = pullback_form(caps["cap-"], [0.5, 0.3, 0.2])
    assert top.w.real > 0 and bot.w.real < 0
    assert top.allclose(-bot, 1e-14) and np.allclose(top.c[1:], 0)


@pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
def test_sphere_area(radius):
    assert surface_area(sphere3(radius=radius), QuadRule(24)) == pytest.approx(TWO_PI2 * radius**3, rel=1e-12)


def test_descriptor_roundtrip():
    for text in ("sphere:r=1.5,c=1;0;0;0", "capsphere:r=1,delta=0.25", "box:h=0.8", "prism:rho=1,t1=3",
                 "dprism:rho=1,eps=0.2,t1=2", "wprism:rho=2,t1=1"):
        spec = parse_surface(text)
        assert parse_surface(spec.to_text()) == spec
        assert surface_from_dict(spec.to_dict()) == spec
    with pytest.raises(BadParameters):
        parse_surface("torus:r=1")
    with pytest.raises(BadParameters):
        parse_surface("sphere:r=abc")


# integration ----------------------------------------------------------------

SURFACES = [
    sphere3(radius=1.3),
    sphere_axis_caps(radius=1.0),
    hyperbox(center=(0.1, 0, 0.2, 0), halfwidths=(1, 0.5, 0.7, 1.2)),
    prism(rho=0.8, t1=1.5),
    prism(rho=0.8, t1=1.5, axis="y"),
    deformed_prism(rho=1.0),
    wide_prism(rho=2.0, t1=1.0),
]


@pytest.mark.parametrize("kind", list(FormKind))
@pytest.mark.parametrize("surface", SURFACES, ids=lambda s: s.descriptor.to_text())
def test_closedness(surface, kind):
    v = integrate_sandwich(None, kind, None, surface, QuadRule(12))
    assert abs(v) < 1e-12


def test_cauchy_examples():
    f = gen_exp_poly(parse_poly("x"))
    assert abs(integrate_sandwich(None, FormKind.Sq, f, sphere3(), QuadRule(16))) < 1e-8
    v = integrate_sandwich(Kernel("FueterH"), FormKind.Sq, PolyField.constant(1), sphere3(), QuadRule(24))
    assert v.allclose(TWO_PI2, 1e-12)
    z = integrate_sandwich(Kernel("ZeroRadial"), FormKind.Sq, PolyField.constant(1), sphere_axis_caps(), QuadRule(24))
    assert abs(z) < 1e-6


def test_orientation_calibration():
    v = integrate_sandwich(Kernel("FueterH"), FormKind.Sq, None, sphere3(radius=0.7), QuadRule(24))
    assert v.w.real > 0 and abs(v.w.real - TWO_PI2) < 1e-10


def test_order_sensitivity():
    g = Kernel("FueterH", q0=(0.1, 0.2, 0, 0))
    f = gen_exp_poly(parse_poly("x*J + y*z"))
    s = sphere3()
    a = integrate_sandwich(g, FormKind.Sq, f, s, QuadRule(24))
    b = integrate_sandwich(f, FormKind.Sq, g, s, QuadRule(24))
    assert abs(a - b) > 1.0


def test_quadrature_convergence():
    errs = []
    for order in (4, 8, 16, 32):
        v = integrate_sandwich(Kernel("FueterH"), FormKind.Sq, None, hyperbox(halfwidths=1.0), QuadRule(order))
        errs.append(abs(v - TWO_PI2))
    floor = 1e-12
    for a, b in zip(errs, errs[1:]):
        assert b <= a / 10 or b < floor


@pytest.mark.parametrize(
    "surface, q0",
    [
        (hyperbox(halfwidths=1.0), (1, 0, 0, 0)),
        (hyperbox(halfwidths=1.0), (0.3, 1.0, -0.2, 0.5)),
        (sphere3(radius=2.0), (0, 0, 2.0, 0)),
        (prism(rho=1.0, t1=2.0), (0.5, 0, 1.0, 0)),
        (prism(rho=1.0, t1=2.0), (2.0, 0.1, 0.1, 0)),
        (sphere_axis_caps(radius=1.0, delta=0.3), (math.cos(0.3), 0.1, 0, 0)),
    ],
)
def test_singularity_on_surface(surface, q0):
    with pytest.raises(SingularityOnSurface):
        integrate_sandwich(Kernel("FueterH", q0=q0), FormKind.Sq, None, surface, QuadRule(4))


def test_distance_formulas(rng):
    for spec in (SURFACES[0].descriptor, SURFACES[1].descriptor, SURFACES[2].descriptor, SURFACES[3].descriptor):
        surf = spec.build()
        u, _ = QuadRule(5).nodes((False, False, False))
        for patch in surf.patches:
            pts, _ = patch(u)
            for p in pts.real[::17]:
                assert spec.distance(p) < 1e-12
        assert spec.distance(spec.center) > 0.1


def test_thread_count_does_not_change_result(monkeypatch):
    f = gen_exp_poly(parse_poly("x*y + z*K"))
    g = Kernel("AltAxis", axis="x")
    s = prism(rho=1.0)
    monkeypatch.setenv("QCL_THREADS", "1")
    a = integrate_sandwich(g, FormKind.Sq, f, s, QuadRule(12))
    monkeypatch.setenv("QCL_THREADS", "4")
    b = integrate_sandwich(g, FormKind.Sq, f, s, QuadRule(12))
    assert a == b


def test_translation_covariance():
    f = parse_poly("2 + J")
    q0 = np.array([0.1, 0.2, -0.1, 0.3])
    shift = np.array([1.5, -2.0, 0.5, 4.0])
    g1 = Kernel("FueterH", q0=tuple(q0))
    g2 = Kernel("FueterH", q0=tuple(q0 + shift))
    s = hyperbox(halfwidths=1.0)
    a = integrate_sandwich(g1, FormKind.Sq, f, s, QuadRule(16))
    b = integrate_sandwich(g2, FormKind.Sq, f, s.shifted(shift), QuadRule(16))
    assert a.allclose(b, 1e-10)


def test_cap_angular_cancellation():
    """On a cap the 1/r^3 pieces of the axis kernel cancel node by node in r.

    Individual angular nodes grow like 1/r as r -> 0 but the angular sum
    stays finite and matches the cancelled form ``x / |q|^4`` averaged over
    the sphere (zero) plus the regular remainder, so it converges as r -> 0.
    """
    k = Kernel("AltAxis", axis="x")
    f = ball_slices(k, FormKind.Sq, None, (0, 0, 0, 0), 0.5, AngularRule(24))
    r = np.array([1e-2, 1e-3, 1e-4])
    vals = f(r)
    # finite limit: the values settle instead of growing like 1/r
    assert np.all(np.abs(vals) < 10)
    assert np.abs(vals[2] - vals[1]).max() < 1e-2 * (1 + np.abs(vals[1]).max())
    # analytically cancelled form: with the odd terms removed only the
    # I component survives, -w/(2 r^2) br1 + 4 w br2 x^2 / r^4 averaged
    w = 0.5
    rr = r
    s = w * w + rr * rr
    at = np.arctan(w / rr) / (rr * w)
    br1 = 1 / s + at
    br2 = (5 * rr * rr + 3 * w * w) / (8 * s * s) + 3 * at / 8
    expected_i = 4 * math.pi * rr * rr * (-w / (2 * rr * rr) * br1 + 4 * w * br2 / (3 * rr * rr))
    assert np.allclose(vals[:, 1], expected_i, rtol=1e-9, atol=1e-9)
    assert np.allclose(vals[:, [0, 2, 3]], 0, atol=1e-9)
