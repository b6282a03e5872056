"""Complex-plane paths, residues and branch continuation.

A :class:`Contour` is an ordered chain of pieces (segments, arcs and
infinite rays) parametrised on ``s in [0, 1]``.  Real poles are skirted
by semicircles whose side encodes the pole policy: with the contour
closed through the upper half plane, a detour *below* a pole includes it
and a detour *above* excludes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import BadGeometry, BranchJump, OrderMismatch
from .quadrature import fixed_sum, gauss_legendre_panels

# ---------------------------------------------------------------------------
# path pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def z(self, s):
        return self.a + (self.b - self.a) * s

    def dz(self, s):
        return np.full(np.shape(s), self.b - self.a, dtype=complex)


@dataclass(frozen=True)
class Arc:
    center: complex
    radius: float
    theta0: float
    theta1: float

    def z(self, s):
        th = self.theta0 + (self.theta1 - self.theta0) * np.asarray(s)
        return self.center + self.radius * np.exp(1j * th)

    def dz(self, s):
        return 1j * (self.theta1 - self.theta0) * (self.z(s) - self.center)


@dataclass(frozen=True)
class Ray:
    """Half-line ``anchor -> anchor + direction * inf`` (or reversed when ``inbound``).

    ``scale`` sets the length over which the compactified parameter is
    spread: ``z = anchor + direction * scale * s / (1 - s)``.
    """

    anchor: complex
    direction: complex
    scale: float = 1.0
    inbound: bool = False

    def _u(self, s):
        s = np.asarray(s, dtype=float)
        return 1.0 - s if self.inbound else s

    def z(self, s):
        u = self._u(s)
        return self.anchor + self.direction * self.scale * u / (1.0 - u)

    def dz(self, s):
        u = self._u(s)
        d = self.direction * self.scale / (1.0 - u) ** 2
        return -d if self.inbound else d


Piece = Segment | Arc | Ray


@dataclass(frozen=True)
class Contour:
    pieces: tuple
    poles: tuple = ()  # ((location, policy), ...)
    eps: float = 0.0
    closure: str | None = None  # "upper" when the chain is closed at infinity

    def points(self, n: int = 9) -> np.ndarray:
        """Sample points along the chain, for plotting and continuity checks."""
        s = np.linspace(0.0, 1.0, n)
        out = []
        for p in self.pieces:
            ss = s[:-1] if not isinstance(p, Ray) else s[:-1] if not p.inbound else s[1:]
            out.append(p.z(ss))
        return np.concatenate(out)


POLICIES = {"include": "below", "exclude": "above", "below": "below", "above": "above"}


def line_with_detours(start: float, end: float, poles: Sequence[tuple[float, str]], eps: float) -> list:
    """Real segment ``start -> end`` with semicircular detours around ``poles``."""
    if not start < end:
        raise BadGeometry("segment must run left to right")
    pts = sorted((float(p), POLICIES[pol]) for p, pol in poles)
    pieces: list = []
    cur = start
    for k, (p, side) in enumerate(pts):
        if not (start + eps < p < end - eps):
            raise BadGeometry(f"pole {p} too close to the segment ends")
        left_pole = pts[k - 1][0] if k else None
        pieces.extend(_graded(cur, p - eps, left_pole, p, eps))
        if side == "below":
            pieces.append(Arc(p, eps, math.pi, 2 * math.pi))
        else:
            pieces.append(Arc(p, eps, math.pi, 0.0))
        cur = p + eps
    pieces.extend(_graded(cur, end, pts[-1][0] if pts else None, None, eps))
    return pieces


def _graded(a: float, b: float, pole_a: float | None, pole_b: float | None, eps: float) -> list:
    """Split ``[a, b]`` geometrically towards ends that sit next to a detour.

    Near a detour the integrand varies on the scale ``eps``; doubling the
    sub-segment length away from the pole keeps Gauss-Legendre accurate.
    """
    if b <= a:
        return []
    cuts = {a, b}
    for pole, sgn in ((pole_a, 1.0), (pole_b, -1.0)):
        if pole is None:
            continue
        d = eps
        while True:
            d *= 2.0
            x = pole + sgn * d
            if not a < x < b:
                break
            cuts.add(x)
    edges = sorted(cuts)
    return [Segment(lo, hi) for lo, hi in zip(edges[:-1], edges[1:])]


def _validate_poles(poles, eps):
    locs = sorted(float(np.real(p)) for p, _ in poles)
    for p, pol in poles:
        if np.imag(p) != 0:
            raise BadGeometry("detour poles must be real")
        if pol not in POLICIES:
            raise BadGeometry(f"unknown pole policy {pol!r}")
    if len(set(locs)) != len(locs):
        raise BadGeometry("poles must be distinct")
    if eps <= 0:
        raise BadGeometry("detour radius must be positive")
    gaps = np.diff(locs)
    if gaps.size and eps >= gaps.min() / 2:
        raise BadGeometry("detour radius must be below half the pole separation")


def real_line_contour(poles: Sequence[tuple[float, str]], R: float | None = None, eps: float = 0.05) -> Contour:
    """Whole real line with detours, closed (implicitly) through the upper half plane.

    ``R`` is where the finite middle stretch hands over to the compactified
    rays; the rays reach infinity, so the value does not depend on ``R``.
    """
    _validate_poles(poles, eps)
    maxp = max((abs(float(np.real(p))) for p, _ in poles), default=0.0)
    if R is None:
        R = maxp + 2.0
    if R <= maxp + 1:
        raise BadGeometry("R must exceed max|pole| + 1")
    mid = line_with_detours(-R, R, [(float(np.real(p)), pol) for p, pol in poles], eps)
    pieces = [Ray(-R, -1.0, R, inbound=True), *mid, Ray(R, 1.0, R)]
    return Contour(tuple(pieces), tuple((complex(p), pol) for p, pol in poles), eps, "upper")


def segment_contour(start: float, end: float, poles: Sequence[tuple[float, str]] = (), eps: float = 0.05) -> Contour:
    """Finite real segment with detours (not closed)."""
    if poles:
        _validate_poles(poles, eps)
    return Contour(tuple(line_with_detours(start, end, poles, eps)), tuple(poles), eps, None)


def circle_contour(center: complex = 0.0, radius: float = 1.0) -> Contour:
    return Contour((Arc(center, radius, 0.0, 2 * math.pi),), (), 0.0, None)


# ---------------------------------------------------------------------------
# integration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContourRule:
    order: int = 32
    panels: int = 4
    arc_panels: int = 2
    ray_panels: int = 4


@dataclass(frozen=True)
class Branch:
    """A multivalued factor to be continued along a path.

    ``func`` returns principal values; consecutive sheets differ by
    ``period``; the principal sheet is taken at the node nearest to
    ``anchor``.
    """

    func: Callable[[np.ndarray], np.ndarray]
    period: complex
    anchor: complex = 0.0


@dataclass
class BranchState:
    """Sheet indices reached by each continued factor, per node."""

    sheets: dict = field(default_factory=dict)

    def continue_along(self, name: str, z: np.ndarray, branch: Branch) -> np.ndarray:
        vals = np.asarray(branch.func(z), dtype=complex)
        n = len(vals)
        k0 = int(np.argmin(np.abs(z - branch.anchor)))
        sheet = np.zeros(n, dtype=int)
        out = np.array(vals)
        per = complex(branch.period)
        for direction in (1, -1):
            idx = range(k0 + 1, n) if direction == 1 else range(k0 - 1, -1, -1)
            prev = k0
            for k in idx:
                m = int(round(((out[prev] - vals[k]) / per).real))
                out[k] = vals[k] + m * per
                sheet[k] = m
                if abs((out[k] - out[prev]).imag) >= math.pi / 2:
                    raise BranchJump(f"factor {name!r} jumps by {out[k] - out[prev]} between nodes")
                prev = k
        self.sheets[name] = sheet
        return out


def contour_nodes(c: Contour, rule: ContourRule = ContourRule()) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``z`` and complex weights ``w`` (``dz`` included), in path order."""
    zs, ws = [], []
    for p in c.pieces:
        panels = rule.arc_panels if isinstance(p, Arc) else rule.ray_panels if isinstance(p, Ray) else rule.panels
        s, wt = gauss_legendre_panels(rule.order, panels)
        zs.append(p.z(s))
        ws.append(wt * p.dz(s))
    return np.concatenate(zs), np.concatenate(ws)


def contour_integrate(
    f: Callable,
    c: Contour,
    rule: ContourRule = ContourRule(),
    branches: Mapping[str, Branch] | None = None,
    state: BranchState | None = None,
):
    """Integrate ``f`` along ``c``.

    ``f(z)`` may return scalars or arrays with trailing axes (e.g.
    biquaternion values ``(..., 4)``).  When ``branches`` is given each
    factor is continued along the path and passed to ``f`` by keyword.
    """
    z, w = contour_nodes(c, rule)
    if branches:
        st = state if state is not None else BranchState()
        kw = {name: st.continue_along(name, z, b) for name, b in branches.items()}
        vals = np.asarray(f(z, **kw), dtype=complex)
    else:
        vals = np.asarray(f(z), dtype=complex)
    wb = w.reshape(w.shape + (1,) * (vals.ndim - 1))
    out = fixed_sum(vals * wb)
    return complex(out) if np.ndim(out) == 0 else out


def arc_decay(f: Callable, radii=(1e3, 1e5, 1e7), n: int = 64) -> list[float]:
    """``max |f(R e^{i theta})| * R`` on upper semicircles of growing radius.

    The closing arc contributes nothing when these numbers go to zero.
    """
    th = np.linspace(0.0, math.pi, n)
    out = []
    for R in radii:
        v = np.abs(np.asarray(f(R * np.exp(1j * th)), dtype=complex))
        out.append(float(np.max(v)) * R)
    return out


# ---------------------------------------------------------------------------
# residues
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    """``num(z) / den(z)`` with coefficient lists in descending powers.

    When ``den_roots`` is given the denominator is evaluated in factored
    form, which keeps full relative accuracy next to the poles.
    """

    num: tuple
    den: tuple
    den_roots: tuple | None = None

    def __init__(self, num, den, den_roots=None):
        object.__setattr__(self, "num", tuple(complex(c) for c in np.atleast_1d(num)))
        object.__setattr__(self, "den", tuple(complex(c) for c in np.atleast_1d(den)))
        roots = None if den_roots is None else tuple(complex(r) for r in den_roots)
        if roots is not None and len(roots) != len(self.den) - 1:
            raise ValueError("den_roots must list every root with multiplicity")
        object.__setattr__(self, "den_roots", roots)

    def denominator(self, z):
        if self.den_roots is None:
            return np.polyval(self.den, z)
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.den[0], dtype=complex)
        for r in self.den_roots:
            out = out * (z - r)
        return out

    def __call__(self, z):
        return np.polyval(self.num, z) / self.denominator(z)

    def poles(self) -> np.ndarray:
        if self.den_roots is not None:
            return np.unique(np.array(self.den_roots))
        return np.roots(self.den)

    @classmethod
    def parse(cls, num: str, den: str) -> "Rational":
        den_c = [complex(s) for s in den.split(",")]
        roots = _cluster_roots(np.roots(den_c)) if len(den_c) > 1 else ()
        return cls([complex(s) for s in num.split(",")], den_c, roots)


def _cluster_roots(roots: np.ndarray, tol: float = 1e-5) -> tuple:
    """Replace each group of nearly coincident roots by the group mean.

    ``np.roots`` splits an m-fold root into m values ~eps^(1/m) apart; their
    mean is accurate to roughly machine precision.
    """
    left = list(roots)
    out: list[complex] = []
    while left:
        r = left.pop(0)
        group = [r] + [q for q in left if abs(q - r) < tol * max(1.0, abs(r))]
        left = [q for q in left if q not in group[1:]]
        m = complex(np.mean(group))
        if abs(m.imag) < 1e-12 * max(1.0, abs(m)):
            m = complex(m.real, 0.0)
        out.extend([m] * len(group))
    return tuple(out)


# The integrands that recur in the prism evaluations.
INV_SQ = Rational([1], [1, 0, -2, 0, 1], (1, 1, -1, -1))  # 1/(z^2-1)^2
INV_LIN = Rational([1], [1, 0, -1], (1, -1))  # 1/(z^2-1)
WIDE_SECOND = Rational([5, 0, -3], [1, 0, -2, 0, 1], (1, 1, -1, -1))  # (5z^2-3)/(z^2-1)^2


def _deflate(den: np.ndarray, pole: complex, order: int) -> np.ndarray:
    q = np.array(den, dtype=complex)
    scale = max(np.max(np.abs(q)), 1.0)
    for _ in range(order):
        q, rem = np.polydiv(q, np.array([1.0, -pole], dtype=complex))
        if np.max(np.abs(rem)) > 1e-9 * scale:
            raise OrderMismatch(f"denominator does not vanish to order {order} at {pole}")
    return q


def residue_analytic(f: Rational, pole: complex, order: int) -> complex:
    """Residue from the limit (order 1) or derivative (order 2) formula."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    q = _deflate(np.array(f.den), pole, order)
    if abs(np.polyval(q, pole)) < 1e-12:
        raise OrderMismatch(f"pole at {pole} has order above {order}")
    n = np.array(f.num)
    if order == 1:
        return complex(np.polyval(n, pole) / np.polyval(q, pole))
    nq = np.polyval(n, pole)
    dq = np.polyval(q, pole)
    dn = np.polyval(np.polyder(n), pole) if len(n) > 1 else 0.0
    ddq = np.polyval(np.polyder(q), pole) if len(q) > 1 else 0.0
    return complex((dn * dq - nq * ddq) / (dq * dq))


def residue_numeric(f: Callable, pole: complex, radius: float, n: int = 128) -> complex:
    """``(1 / 2 pi i) * contour integral`` on a small circle (trapezoid rule)."""
    th = 2 * math.pi * np.arange(n) / n
    z = pole + radius * np.exp(1j * th)
    return complex(np.mean(np.asarray(f(z)) * (z - pole)))


def residue(f: Rational, pole: complex, order: int, tol: float = 1e-8) -> complex:
    """Analytic residue, confirmed by a small-circle integral.

    Raises :class:`OrderMismatch` when the two disagree by more than
    ``tol``, which is what happens when ``order`` is wrong.
    """
    others = [p for p in f.poles() if abs(p - pole) > 1e-6]
    radius = 0.25 * min((abs(p - pole) for p in others), default=1.0)
    radius = min(radius, 0.25)
    num = residue_numeric(f, pole, radius)
    try:
        ana = residue_analytic(f, pole, order)
    except OrderMismatch:
        raise
    if abs(ana - num) > tol * max(1.0, abs(num)):
        raise OrderMismatch(f"analytic {ana} vs numerical {num} at {pole} (order {order})")
    return ana


# ---------------------------------------------------------------------------
# principal values
# ---------------------------------------------------------------------------


def principal_value(f: Callable[[float], float], a: float, b: float, poles: Sequence[float], eps: float) -> float:
    """Symmetric-excision integral of a real ``f`` over ``[a, b]``; ``b`` may be ``inf``."""
    from scipy.integrate import quad

    cuts = sorted(poles)
    edges = [a]
    for p in cuts:
        edges.extend([p - eps, p + eps])
    edges.append(b)
    total = 0.0
    for lo, hi in zip(edges[0::2], edges[1::2]):
        if hi <= lo:
            continue
        val, _ = quad(f, lo, hi, limit=400, epsabs=0.0, epsrel=1e-12)
        total += val
    return total


def pv_growth_exponent(eps_values: Sequence[float]) -> float:
    """Fitted ``d log|PV| / d log eps`` for the principal value of ``1/(tau^2-1)^2`` on the real line."""
    f = lambda t: 1.0 / (t * t - 1.0) ** 2
    vals = [2 * principal_value(f, 0.0, math.inf, [1.0], e) for e in eps_values]
    slope, _ = np.polyfit(np.log(eps_values), np.log(np.abs(vals)), 1)
    return float(slope)
