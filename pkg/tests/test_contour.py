import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qcl.contour import (
    INV_LIN,
    INV_SQ,
    WIDE_SECOND,
    Arc,
    Branch,
    BranchState,
    ContourRule,
    Rational,
    Segment,
    arc_decay,
    circle_contour,
    contour_integrate,
    pv_growth_exponent,
    real_line_contour,
    residue,
    residue_analytic,
    residue_numeric,
    segment_contour,
)
from qcl.errors import BadGeometry, BranchJump, OrderMismatch

PI = math.pi


def inv_sq(z):
    return 1.0 / (z * z - 1.0) ** 2


def wide(z):
    """The wide-prism radial integrand with the common factor I divided out."""
    return 0.5 * (-4j * PI / (z * z - 1) + 4j * PI * (5 * z * z - 3) / (3 * (z * z - 1) ** 2))


# residues -------------------------------------------------------------------


def test_residue_examples():
    assert residue_analytic(INV_SQ, 1.0, 2) == pytest.approx(-0.25, abs=1e-12)
    assert residue_analytic(INV_LIN, -1.0, 1) == pytest.approx(-0.5, abs=1e-12)
    assert residue_analytic(WIDE_SECOND, -1.0, 2) == pytest.approx(-2.0, abs=1e-12)
    for f, pole, order, exact in ((INV_SQ, 1.0, 2, -0.25), (INV_LIN, -1.0, 1, -0.5), (WIDE_SECOND, -1.0, 2, -2.0)):
        assert abs(residue_numeric(f, pole, 0.25) - exact) < 1e-8
        assert abs(residue(f, pole, order) - exact) < 1e-12


def test_order_mismatch():
    with pytest.raises(OrderMismatch):
        residue(INV_SQ, 1.0, 1)


def test_rational_parse():
    f = Rational.parse("5,0,-3", "1,0,-2,0,1")
    z = np.array([0.3 + 0.1j, 2.0])
    assert np.allclose(f(z), WIDE_SECOND(z))
    assert np.allclose(sorted(f.den_roots, key=lambda r: r.real), [-1, -1, 1, 1], atol=1e-14)
    assert abs(residue(f, -1.0, 2) + 2) < 1e-12


@given(st.floats(-3, 3), st.floats(0.5, 4))
def test_residue_theorem_simple_pole(a, c):
    # c / (z - a) has residue c
    f = Rational.parse(f"{c}", f"1,{-a}")
    assert abs(residue(f, a, 1) - c) < 1e-10 * (1 + c)


# contours -------------------------------------------------------------------


def test_contour_examples():
    c = real_line_contour([(1.0, "include"), (-1.0, "exclude")])
    assert abs(contour_integrate(inv_sq, c) + 0.5j * PI) < 1e-8
    both = real_line_contour([(1.0, "include"), (-1.0, "include")])
    none = real_line_contour([(1.0, "exclude"), (-1.0, "exclude")])
    assert abs(contour_integrate(inv_sq, both)) < 1e-8
    assert abs(contour_integrate(inv_sq, none)) < 1e-8
    assert abs(contour_integrate(lambda z: 1 / z, circle_contour()) - 2j * PI) < 1e-12
    cw = real_line_contour([(-1.0, "include"), (1.0, "exclude")])
    assert abs(contour_integrate(wide, cw) - 2 * PI**2 / 3) < 1e-8


def test_bad_geometry():
    with pytest.raises(BadGeometry):
        real_line_contour([(1.0, "include")], R=1.5)
    with pytest.raises(BadGeometry):
        real_line_contour([(1.0, "include"), (1.05, "exclude")], eps=0.05)
    with pytest.raises(BadGeometry):
        real_line_contour([(1.0 + 1j, "include")])
    with pytest.raises(BadGeometry):
        real_line_contour([(1.0, "sideways")])


def test_path_is_continuous():
    c = real_line_contour([(1.0, "include"), (-1.0, "exclude")], eps=0.1)
    with np.errstate(divide="ignore", invalid="ignore"):  # rays reach infinity at one end
        ends = [(p.z(np.array([0.0]))[0], p.z(np.array([1.0]))[0]) for p in c.pieces]
    finite = [(a, b) for a, b in ends if np.isfinite(a) and np.isfinite(b)]
    for (_, b), (a, _) in zip(finite, finite[1:]):
        assert abs(a - b) < 1e-12


@pytest.mark.parametrize("eps", np.geomspace(1e-3, 1e-1, 7))
def test_detour_radius_independence(eps):
    c = real_line_contour([(1.0, "include"), (-1.0, "exclude")], eps=eps)
    assert abs(contour_integrate(inv_sq, c) + 0.5j * PI) < 1e-9
    cw = real_line_contour([(-1.0, "include"), (1.0, "exclude")], eps=eps)
    assert abs(contour_integrate(wide, cw) - 2 * PI**2 / 3) < 1e-9


@given(st.sampled_from(["include", "exclude"]), st.sampled_from(["include", "exclude"]))
def test_residue_theorem_consistency(p1, p2):
    for f in (INV_SQ, WIDE_SECOND, INV_LIN):
        if f is INV_LIN:
            continue  # decays like 1/z^2 too, but checked below with its own residues
        c = real_line_contour([(1.0, p1), (-1.0, p2)])
        included = [p for p, pol in ((1.0, p1), (-1.0, p2)) if pol == "include"]
        expected = 2j * PI * sum(residue_analytic(f, p, 2) for p in included)
        assert abs(contour_integrate(f, c) - expected) < 1e-8
    c = real_line_contour([(1.0, p1), (-1.0, p2)])
    included = [p for p, pol in ((1.0, p1), (-1.0, p2)) if pol == "include"]
    expected = 2j * PI * sum(residue_analytic(INV_LIN, p, 1) for p in included)
    assert abs(contour_integrate(INV_LIN, c) - expected) < 1e-8


@pytest.mark.parametrize("h", [inv_sq, wide], ids=["narrow", "wide"])
def test_variable_inversion(h):
    """u = 1/z maps an include(+1) detour to an include(-1) detour."""
    plus = real_line_contour([(1.0, "include"), (-1.0, "exclude")])
    minus = real_line_contour([(-1.0, "include"), (1.0, "exclude")])
    direct = contour_integrate(h, plus)
    inverted = contour_integrate(lambda u: h(1 / u) / u**2, minus)
    assert abs(direct - inverted) < 1e-8


def test_arc_decay():
    assert arc_decay(inv_sq)[-1] < 1e-10
    assert arc_decay(wide)[-1] < 1e-5
    assert arc_decay(lambda z: 1 / z)[-1] > 0.5  # 1/z does not qualify


def test_principal_value_exponent():
    slope = pv_growth_exponent(np.geomspace(1e-4, 1e-2, 5))
    assert abs(slope + 1) < 0.05


def test_rule_convergence():
    c = real_line_contour([(1.0, "include"), (-1.0, "exclude")])
    errs = [abs(contour_integrate(inv_sq, c, ContourRule(order=o)) + 0.5j * PI) for o in (4, 8, 16)]
    assert errs[1] < errs[0] and errs[2] < 1e-8


# branches -------------------------------------------------------------------


def test_branch_continuation_log():
    c = circle_contour()
    state = BranchState()
    br = {"log": Branch(np.log, 2j * PI, np.exp(0.1j))}  # anchored just after the start
    # d/dz log z = 1/z: the continued log must grow by 2 pi i round the loop
    from qcl.contour import contour_nodes

    z, _ = contour_nodes(c)
    vals = state.continue_along("log", z, br["log"])
    assert abs((vals[-1] - vals[0]) - 2j * PI) < 0.2
    assert np.max(np.abs(np.diff(vals.imag))) < PI / 2
    out = contour_integrate(lambda z, log: log / z, c, branches=br)
    # integral of log z / z over the loop from the anchor = ((log end)^2 - (log start)^2)/2
    assert abs(out - ((2j * PI) ** 2) / 2) < 1e-8


def test_branch_jump_detected():
    seg = segment_contour(-1.0, 1.0)
    z = np.array([0.0, 0.5, 1.0])

    def bad(zz):
        return np.where(zz.real > 0.4, 2.0j, 0.0)

    with pytest.raises(BranchJump):
        BranchState().continue_along("bad", z, Branch(bad, 100j, 0.0))
    assert seg.pieces
