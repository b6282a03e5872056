import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcl.algebra import BiQuat, I, J, K, qmul
from qcl.errors import ConvergenceDomain, NotSpatial, OnSingularLocus
from qcl.fields import (
    FunctionField,
    Kernel,
    PolyField,
    RadialPoly,
    artanh_i0,
    eval_kernel,
    gen_exp_poly,
    kernel_from_name,
    kernel_series_oracle,
    parse_poly,
)
from qcl.operators import nabla, regularity_residual

KERNELS = [
    Kernel("FueterH"),
    Kernel("AltAxis", axis="x"),
    Kernel("AltAxis", axis="y"),
    Kernel("AltAxis", axis="z"),
    Kernel("ZeroRadial"),
    Kernel("BiAltAxis", axis="x"),
    Kernel("BiFueter"),
]


def random_points(rng, n, bi=False):
    """Points at least 0.6 from the axis and, for bi kernels, from the light cone."""
    out = []
    while len(out) < n:
        p = rng.uniform(-1.5, 1.5, 4)
        r = np.linalg.norm(p[1:])
        if r < 0.6:
            continue
        if bi and abs(abs(p[0]) - r) < 0.4:
            continue
        out.append(p)
    return np.array(out)


# generating functions ---------------------------------------------------------


def test_gen_exp_examples():
    assert gen_exp_poly(parse_poly("1")) == parse_poly("1")
    assert gen_exp_poly(parse_poly("x")).allclose(parse_poly("x - w*I"))
    assert gen_exp_poly(parse_poly("x^2")).allclose(parse_poly("x^2 - 2*w*x*I - w^2"))
    with pytest.raises(NotSpatial):
        gen_exp_poly(parse_poly("w*x"))
    with pytest.raises(ValueError):
        gen_exp_poly(parse_poly("x"), "sideways")


VARIANT_CHECK = {
    "regular": "left",
    "conjugate": "conjugate",
    "right": "right",
    "conjugate_right": "conjugate_right",
    "bi": "bi",
    "bi_conjugate": "bi_conjugate",
    "bi_right": "bi_right",
    "bi_conjugate_right": "bi_conjugate_right",
}

GENERATORS = ["x*y*z + 2*x^2*J - y*K + 3*z + 1", "x^3 - 3*x*y^2 + z*I", "i*x*y + y^2*z*K"]


@pytest.mark.parametrize("variant", sorted(VARIANT_CHECK))
@pytest.mark.parametrize("gen", GENERATORS)
def test_generated_fields_are_regular(variant, gen, rng):
    f = gen_exp_poly(parse_poly(gen), variant)
    pts = rng.normal(size=(10, 4))
    assert np.max(regularity_residual(f, pts, VARIANT_CHECK[variant])) < 1e-12


def test_poly_text_roundtrip():
    for gen in GENERATORS:
        f = gen_exp_poly(parse_poly(gen), "bi")
        assert parse_poly(f.to_text()).allclose(f, 1e-15)


def test_poly_nabla_lowers_degree():
    g = parse_poly(GENERATORS[0])
    d = g.degree
    while not g.is_zero():
        g2 = g.nabla()
        assert g2.is_zero() or g2.degree < d
        g, d = g2, g2.degree if not g2.is_zero() else -1


# kernels --------------------------------------------------------------------


def test_kernel_examples():
    assert eval_kernel(Kernel("FueterH"), (1, 0, 0, 0)).allclose(1)
    assert eval_kernel(Kernel("FueterH"), (0, 1, 0, 0)).allclose(-I)
    assert eval_kernel(Kernel("AltAxis", axis="x"), (0, 1, 0, 0)).allclose(1)
    with pytest.raises(OnSingularLocus):
        Kernel("FueterH").at((0, 0, 0, 0))
    with pytest.raises(OnSingularLocus):
        Kernel("AltAxis").at((0.4, 0, 0, 0))  # anywhere on the axis line
    with pytest.raises(OnSingularLocus):
        Kernel("BiFueter").at((1, 1, 0, 0))  # light cone


def test_fueter_closed_form(rng):
    k = Kernel("FueterH", q0=(0.1, -0.2, 0.3, 0.4))
    for p in rng.normal(size=(10, 4)):
        q = BiQuat(*(p - np.array(k.q0)))
        expected = q.qconj() / abs(q) ** 4
        assert k.at(p).allclose(expected, 1e-12 * (1 + abs(expected)))


def test_series_oracle_examples():
    k = Kernel("AltAxis", axis="x")
    p = (0.0, 0.7, -0.3, 0.2)
    r = np.linalg.norm(p[1:])
    assert kernel_series_oracle(k, p, 1).allclose(0.7 / r**4, 1e-15)
    p = (0.05, 1.0, 0.2, -0.1)
    assert kernel_series_oracle(k, p, 8).allclose(k.at(p), 1e-8)
    h = Kernel("FueterH")
    p = (0.05, 1.0, 0.0, 0.0)
    assert kernel_series_oracle(h, p, 8).allclose(h.at(p), 1e-8)
    with pytest.raises(ConvergenceDomain):
        kernel_series_oracle(k, (1.0, 0.5, 0, 0), 8)
    with pytest.raises(ValueError):
        kernel_series_oracle(k, p, 13)


@pytest.mark.parametrize("k", KERNELS[1:6], ids=lambda k: f"{k.kind}-{k.axis}")
def test_series_matches_closed_form(k, rng):
    for _ in range(10):
        xyz = rng.uniform(-1.5, 1.5, 3)
        r = np.linalg.norm(xyz)
        w = 0.05 * r * rng.uniform(-1, 1)
        p = np.r_[w, xyz]
        a, b = k.at(p), kernel_series_oracle(k, p, 12)
        assert a.allclose(b, 1e-9 * (1 + abs(a)))


def test_series_switch_continuity():
    """The closed form and its near-axis series agree across the crossover."""
    k = Kernel("AltAxis", axis="y")
    xyz = np.array([0.3, 0.9, -0.4])
    r = np.linalg.norm(xyz)
    below = k.at(np.r_[r * (k.series_switch * (1 - 1e-9)), xyz])
    above = k.at(np.r_[r * (k.series_switch * (1 + 1e-9)), xyz])
    assert below.allclose(above, 1e-10 * abs(above))


def test_alt_parity(rng):
    k = Kernel("AltAxis", axis="x")
    for p in random_points(rng, 10):
        a = k.at(p)
        b = k.at(p * np.array([-1, 1, 1, 1]))
        assert abs(a.w - b.w) < 1e-12 * abs(a)
        assert abs(a.x + b.x) < 1e-12 * abs(a)


def test_kernel_from_name():
    assert kernel_from_name("alt-y").axis == "y"
    assert kernel_from_name("bi-alt-z").kind == "BiAltAxis"
    assert kernel_from_name("fueter-conj").time_sign == 1
    with pytest.raises(ValueError):
        kernel_from_name("nonsense")


@pytest.mark.parametrize("k", KERNELS, ids=lambda k: f"{k.kind}-{k.axis}")
def test_kernel_regularity(k, rng):
    variants = k.variant.split("+")
    for p in random_points(rng, 10, bi=k.is_bi):
        for v in variants:
            assert regularity_residual(k, p, v) < 1e-6


def test_conjugate_kernels_regular(rng):
    for name, variant in (("alt-x-conj", "conjugate"), ("zero-radial-conj", "conjugate"), ("bi-alt-x-conj", "bi_conjugate")):
        k = kernel_from_name(name)
        for p in random_points(rng, 5, bi=k.is_bi):
            assert regularity_residual(k, p, variant) < 1e-6


def test_complex_time_bi_kernel_matches_real_limit():
    """Off the cone the complexified kernel is continuous in Im t."""
    k = Kernel("BiAltAxis", axis="x")
    p = np.array([0.3, 1.0, 0.2, -0.1], dtype=complex)
    a = k.at(p)
    p2 = p.copy()
    p2[0] += 1e-9j
    assert k.at(p2).allclose(a, 1e-7)


def test_artanh_i0_branch():
    z = np.array([2.0, -2.0, 0.5])
    v = artanh_i0(z)
    # from below for z > 1, from above for z < -1
    assert np.allclose(v[0], np.arctanh(2.0 - 1e-14j))
    assert np.allclose(v[1], np.arctanh(-2.0 + 1e-14j))
    assert abs(v[2] - np.arctanh(0.5)) < 1e-15


# nabla-calculus identities --------------------------------------------------

RBAR = RadialPoly({(1, 0, 0, 0): (0, 1, 0, 0), (0, 1, 0, 0): (0, 0, 1, 0), (0, 0, 1, 0): (0, 0, 0, 1)})


def _rbar(xyz):
    return np.concatenate([np.zeros(xyz.shape[:-1] + (1,)), xyz], axis=-1).astype(complex)


def _fd_nabla(g: RadialPoly, xyz):
    field = FunctionField(lambda pts: g(pts[..., 1:]))
    return nabla(field, np.c_[np.zeros(len(xyz)), xyz])


def _fd_close(g, xyz, expected, tol=1e-6):
    err = np.linalg.norm(_fd_nabla(g, xyz) - expected, axis=1)
    return np.all(err <= tol * (1 + np.linalg.norm(expected, axis=1)))


def test_nabla_identities(rng):
    xyz = rng.uniform(-1, 1, (20, 3))
    xyz = xyz[np.linalg.norm(xyz, axis=1) > 0.3]
    r = np.linalg.norm(xyz, axis=1)[:, None]
    # nabla rbar = -3
    exact = RBAR.nabla()(xyz)
    assert np.allclose(exact, [-3, 0, 0, 0], atol=1e-14)
    assert np.allclose(_fd_nabla(RBAR, xyz), [-3, 0, 0, 0], atol=1e-8)
    for n in range(1, 7):
        g = RadialPoly({(0, 0, 0, n): 1.0})
        expected = -n * _rbar(xyz) / r ** (n + 2)
        assert np.allclose(g.nabla()(xyz), expected, rtol=1e-12, atol=1e-12)
        assert _fd_close(g, xyz, expected)
    for n in (1, 3, 5):
        g = RadialPoly({(1, 0, 0, n + 3): (0, 1, 0, 0), (0, 1, 0, n + 3): (0, 0, 1, 0), (0, 0, 1, n + 3): (0, 0, 0, 1)})
        expected = np.zeros((len(xyz), 4), complex)
        expected[:, 0] = n / r[:, 0] ** (n + 3)
        assert np.allclose(g.nabla()(xyz), expected, rtol=1e-12, atol=1e-12)
        assert _fd_close(g, xyz, expected)


# product of a scalar-generated kernel with a regular field ------------------


def _commutator_sum(g, f, p):
    """sum_i [e_i, g] d_i f: what D(g f) reduces to when Dg = Df = 0."""
    pts = np.asarray(p, dtype=complex)
    gv = g(pts)
    out = np.zeros(4, complex)
    for axis, e in zip((1, 2, 3), (I.c, J.c, K.c)):
        df = f.partial(axis).evaluate(pts)
        out += qmul(qmul(e, gv) - qmul(gv, e), df)
    return out


@given(st.integers(0, 2**31 - 1))
def test_product_rule_residual(seed):
    """D(g f) equals the commutator sum; it vanishes on the slice w = w0."""
    rng = np.random.default_rng(seed)
    g = Kernel("AltAxis", axis="xyz"[seed % 3])
    coeffs = rng.integers(-3, 4, 4)
    f = gen_exp_poly(parse_poly(f"{coeffs[0]}*x*y + {coeffs[1]}*z*J + {coeffs[2]}*y^2*K + {coeffs[3]}"))
    p = random_points(rng, 1)[0]
    prod = g * f
    from qcl.operators import OperatorId, apply_operator

    dgf = apply_operator(OperatorId.D, prod, p).c
    assert np.allclose(dgf, _commutator_sum(g, f, p), atol=1e-6)
    p[0] = 0.0
    assert np.allclose(apply_operator(OperatorId.D, prod, p).c, 0, atol=1e-6)


def test_product_with_affine_field_is_regular(rng):
    g = Kernel("AltAxis", axis="y")
    f = gen_exp_poly(parse_poly("x + 2*y*J - z*K + 3"))
    for p in random_points(rng, 10):
        # the commutator sum vanishes when f's derivatives are scalars
        res = regularity_residual(g * f, p, "left")
        assert res < 1e-6 or np.linalg.norm(_commutator_sum(g, f, p)) > 1e-3
