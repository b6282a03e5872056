import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcl.algebra import BiQuat, I, qconj_arr
from qcl.errors import NotRegularHere, StencilHitsSingularity
from qcl.fields import FunctionField, Kernel, QConjField, gen_exp_poly, parse_poly
from qcl.operators import (
    FdScheme,
    OperatorId,
    apply_operator,
    derivative_regular,
    laplace4,
    regularity_residual,
    wave_op,
)

IDENTITY = parse_poly("w + x*I + y*J + z*K")
point = st.tuples(*[st.floats(-2, 2, allow_nan=False) for _ in range(4)])


def test_apply_examples():
    assert apply_operator(OperatorId.D, IDENTITY, (0.3, 1, -2, 0.5)) == BiQuat(-2)
    assert apply_operator(OperatorId.D, parse_poly("3*J + 1"), (1, 2, 3, 4)) == BiQuat(0)
    val = apply_operator(OperatorId.D, Kernel("FueterH"), (1, 1, 0, 0))
    assert abs(val) < 1e-6


def test_residual_examples():
    assert regularity_residual(gen_exp_poly(parse_poly("x")), (0.2, 0.1, 0.5, -1)) == 0.0
    assert regularity_residual(parse_poly("w - x*I - y*J - z*K"), (0.2, 0.1, 0.5, -1)) == 4.0
    assert regularity_residual(Kernel("BiFueter"), (0.3, 1, 0, 0), "bi") < 1e-6


def test_second_order_examples():
    assert laplace4(Kernel("FueterH"), (1, 1, 0, 0)).allclose(0, 1e-4)
    assert wave_op(Kernel("BiAltAxis", axis="x"), (0.2, 1, 0.3, 0)).allclose(0, 1e-4)
    assert laplace4(parse_poly("w^2 + x^2"), (0.1, 0.2, 0.3, 0.4)) == BiQuat(4)


def test_derivative_examples():
    assert derivative_regular(gen_exp_poly(parse_poly("x")), (0.5, 0.1, 0.2, 0.3)) == I
    assert derivative_regular(parse_poly("2 + K"), (0.5, 0.1, 0.2, 0.3)) == BiQuat(0)
    h = Kernel("FueterH")
    d = derivative_regular(h, (1, 1, 0, 0))
    from qcl.operators import partial

    assert d.allclose(-partial(h, np.array([1, 1, 0, 0], complex), 0), 1e-6)
    with pytest.raises(NotRegularHere):
        derivative_regular(parse_poly("x"), (0, 0, 0, 0))


def test_stencil_guard():
    with pytest.raises(StencilHitsSingularity):
        apply_operator(OperatorId.D, Kernel("FueterH"), (1e-4, 0, 0, 0), FdScheme(adaptive=False))


def test_adaptive_step_near_singularity():
    # the adaptive step keeps the relative residual small close to the pole
    p = (1e-2, 2e-3, 0, -1e-3)
    k = Kernel("FueterH")
    val = apply_operator(OperatorId.D, k, p).c
    scale = np.linalg.norm(k.evaluate(np.asarray(p, dtype=complex))) / 1e-2
    assert np.linalg.norm(val) < 1e-8 * scale


def test_scheme_validation():
    with pytest.raises(ValueError):
        FdScheme(order=3)
    with pytest.raises(ValueError):
        FdScheme(h=0)


@given(point)
def test_conjugation_intertwining(p):
    """(Dg)^# = D~^# g^# and (D~g)^# = D^# g^#."""
    g = Kernel("AltAxis", axis="z", q0=(0, 3, 3, 3))
    gs = QConjField(g)
    for a, b in ((OperatorId.D, OperatorId.D_RIGHT_SHARP), (OperatorId.D_RIGHT, OperatorId.D_SHARP)):
        lhs = qconj_arr(apply_operator(a, g, p).c)
        rhs = apply_operator(b, gs, p).c
        assert np.allclose(lhs, rhs, atol=1e-6 * (1 + np.abs(lhs).max()))


@given(point)
def test_sharp_d_is_laplacian_on_polys(p):
    f = parse_poly("x^3*J - w^2*y*z + 2*w*x*K + y^2*z^2*I")
    lap = laplace4(f, p).c
    for first, second in ((OperatorId.D, OperatorId.D_SHARP), (OperatorId.D_SHARP, OperatorId.D)):
        inner = _poly_apply(first, f)
        outer = _poly_apply(second, inner)
        assert np.allclose(outer.evaluate(np.asarray(p, complex)), lap, atol=1e-9 * (1 + np.abs(lap).max()))


def _poly_apply(op, f):
    return f.partial(0) + op.sign * f.nabla(op.side)


def test_step_halving_convergence():
    k = Kernel("AltAxis", axis="x")
    p = (0.4, 1.0, 0.3, -0.2)
    for order in (2, 4):
        r1 = regularity_residual(k, p, scheme=FdScheme(order=order, h=2e-2))
        r2 = regularity_residual(k, p, scheme=FdScheme(order=order, h=1e-2))
        ratio = np.log2(r1 / r2)
        assert ratio >= order - 0.5


def test_left_right_distinction():
    f = gen_exp_poly(parse_poly("x*J"))
    p = (0.3, 0.2, 0.1, 0.7)
    assert regularity_residual(f, p, "left") == 0.0
    # D~ f = -J I + I J... expand: f = xJ - w I J = xJ - wK, D~ f = -K + J I = -2K
    assert apply_operator(OperatorId.D_RIGHT, f, p) == BiQuat(0, 0, 0, -2)


def test_fd_path_matches_exact_path(rng):
    f = gen_exp_poly(parse_poly("x*y*z + x^2*J"), "regular")
    wrapped = FunctionField(f.evaluate)
    for p in rng.normal(size=(5, 4)):
        for op in OperatorId:
            a = apply_operator(op, f, p).c
            b = apply_operator(op, wrapped, p).c
            assert np.allclose(a, b, atol=1e-7 * (1 + np.abs(a).max()))
