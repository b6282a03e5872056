"""The quaternionic differential operators and residual checks.

Operators act exactly on :class:`~qcl.fields.PolyField` inputs (and on
products of them) and by central finite differences on everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import BASIS, BiQuat, qmul
from .errors import NotRegularHere, StencilHitsSingularity
from .fields import PolyField, ProductField, QField


class OperatorId(Enum):
    """``value = (side, sign, hermitian)``.

    The operator is ``d_w + sign * c * sum_e e d_e`` with ``c = i`` when
    hermitian, ``e`` multiplying from ``side`` of the derivative values.
    """

    D = ("left", 1, False)
    D_SHARP = ("left", -1, False)
    D_RIGHT = ("right", 1, False)
    D_RIGHT_SHARP = ("right", -1, False)
    D_H = ("left", 1, True)
    D_H_SHARP = ("left", -1, True)
    D_H_RIGHT = ("right", 1, True)
    D_H_RIGHT_SHARP = ("right", -1, True)

    @property
    def side(self) -> str:
        return self.value[0]

    @property
    def sign(self) -> int:
        return self.value[1]

    @property
    def hermitian(self) -> bool:
        return self.value[2]


VARIANT_OPERATOR = {
    "left": OperatorId.D,
    "regular": OperatorId.D,
    "conjugate": OperatorId.D_SHARP,
    "right": OperatorId.D_RIGHT,
    "conjugate_right": OperatorId.D_RIGHT_SHARP,
    "bi": OperatorId.D_H,
    "bi_conjugate": OperatorId.D_H_SHARP,
    "bi_right": OperatorId.D_H_RIGHT,
    "bi_conjugate_right": OperatorId.D_H_RIGHT_SHARP,
}

_FIRST = {
    2: ((-1, 1), (-0.5, 0.5)),
    4: ((-2, -1, 1, 2), (1 / 12, -2 / 3, 2 / 3, -1 / 12)),
    6: ((-3, -2, -1, 1, 2, 3), (-1 / 60, 3 / 20, -3 / 4, 3 / 4, -3 / 20, 1 / 60)),
}
_SECOND = {
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    4: ((-2, -1, 0, 1, 2), (-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12)),
    6: ((-3, -2, -1, 0, 1, 2, 3), (1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90)),
}


@dataclass(frozen=True)
class FdScheme:
    """Central finite-difference scheme.

    ``h`` is relative: the actual step at point ``p`` is ``h * (1 + |p|)``
    times the per-axis ``scale``.  With ``adaptive`` set, the step also
    shrinks to ``h * d`` where ``d`` is the distance to the field's singular
    locus, so the truncation error stays comparable near singularities.
    """

    order: int = 4
    h: float = 1e-3
    scale: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    # typical residual of a regular field at unit distance from its locus
    tolerance: float = 1e-7
    adaptive: bool = True

    def __post_init__(self):
        if self.order not in _FIRST:
            raise ValueError("order must be 2, 4 or 6")
        if self.h <= 0:
            raise ValueError("step must be positive")

    def steps(self, pts: np.ndarray, dist: np.ndarray | None = None) -> np.ndarray:
        mag = np.sqrt(np.sum(np.abs(pts) ** 2, axis=-1))
        base = 1.0 + mag
        if self.adaptive and dist is not None:
            base = np.minimum(base, dist)
        return self.h * base

    def reach(self) -> int:
        return max(_SECOND[self.order][0])


DEFAULT_SCHEME = FdScheme()


def _poly_of(f: QField) -> PolyField | None:
    if isinstance(f, PolyField):
        return f
    if isinstance(f, ProductField):
        a, b = _poly_of(f.left), _poly_of(f.right)
        if a is not None and b is not None:
            return a * b
    return None


def _locus_distance(f: QField, pts: np.ndarray) -> np.ndarray | None:
    return f.distance_to_locus(pts) if f.locus else None


def _check_stencil(f: QField, pts: np.ndarray, scheme: FdScheme) -> None:
    if not f.locus:
        return
    dist = f.distance_to_locus(pts)
    extent = scheme.reach() * scheme.steps(pts, dist) * max(scheme.scale)
    if np.any(dist <= 2 * extent):
        raise StencilHitsSingularity("finite-difference stencil reaches the singular locus")


def _fd(f: QField, pts: np.ndarray, axis: int, scheme: FdScheme, second: bool) -> np.ndarray:
    offs, wts = (_SECOND if second else _FIRST)[scheme.order]
    h = scheme.steps(pts, _locus_distance(f, pts)) * scheme.scale[axis]
    e = np.zeros(4)
    e[axis] = 1.0
    stack = np.stack([pts + (o * h)[..., None] * e for o in offs])
    vals = f.evaluate(stack)
    acc = sum(wt * vals[k] for k, wt in enumerate(wts))
    return acc / ((h * h) if second else h)[..., None]


def partial(f: QField, pts, axis: int, scheme: FdScheme = DEFAULT_SCHEME) -> np.ndarray:
    """``d f / d coord[axis]`` at ``pts`` (shape ``(..., 4)``)."""
    pts = np.asarray(pts, dtype=complex)
    poly = _poly_of(f)
    if poly is not None:
        return poly.partial(axis).evaluate(pts)
    _check_stencil(f, pts, scheme)
    return _fd(f, pts, axis, scheme, second=False)


def _nabla_from_partials(parts, side: str) -> np.ndarray:
    out = 0
    for e, d in zip(BASIS, parts):
        out = out + (qmul(e, d) if side == "left" else qmul(d, e))
    return out


def nabla(f: QField, pts, side: str = "left", scheme: FdScheme = DEFAULT_SCHEME) -> np.ndarray:
    """Spatial ``I d_x + J d_y + K d_z`` acting from ``side``."""
    pts = np.asarray(pts, dtype=complex)
    return _nabla_from_partials([partial(f, pts, a, scheme) for a in (1, 2, 3)], side)


def _single(pts, out):
    return BiQuat.from_array(out) if np.ndim(pts) == 1 else out


def apply_operator(op: OperatorId, f: QField, p, scheme: FdScheme = DEFAULT_SCHEME):
    """``(op f)(p)``; a :class:`BiQuat` for one point, an array for many."""
    pts = np.asarray(p, dtype=complex)
    dw = partial(f, pts, 0, scheme)
    spatial = nabla(f, pts, op.side, scheme)
    c = op.sign * (1j if op.hermitian else 1.0)
    return _single(p, dw + c * spatial)


def residual_norm(values: np.ndarray) -> np.ndarray:
    """Euclidean norm over the eight real components."""
    return np.sqrt(np.sum(np.abs(values) ** 2, axis=-1))


def regularity_residual(f: QField, p, variant: str = "left", scheme: FdScheme = DEFAULT_SCHEME):
    """Size of the operator that characterises ``variant`` applied to ``f`` at ``p``."""
    op = VARIANT_OPERATOR[variant]
    pts = np.asarray(p, dtype=complex)
    val = apply_operator(op, f, pts, scheme)
    val = val.c if isinstance(val, BiQuat) else val
    res = residual_norm(val)
    return float(res) if np.ndim(res) == 0 else res


def laplace4(f: QField, p, scheme: FdScheme = DEFAULT_SCHEME):
    pts = np.asarray(p, dtype=complex)
    poly = _poly_of(f)
    if poly is not None:
        out = sum(poly.partial(a).partial(a).evaluate(pts) for a in range(4))
    else:
        _check_stencil(f, pts, scheme)
        out = sum(_fd(f, pts, a, scheme, second=True) for a in range(4))
    return _single(p, out)


def wave_op(f: QField, p, scheme: FdScheme = DEFAULT_SCHEME):
    """d'Alembertian ``d_t^2 - (d_x^2 + d_y^2 + d_z^2)``."""
    pts = np.asarray(p, dtype=complex)
    poly = _poly_of(f)
    if poly is not None:
        d2 = [poly.partial(a).partial(a).evaluate(pts) for a in range(4)]
    else:
        _check_stencil(f, pts, scheme)
        d2 = [_fd(f, pts, a, scheme, second=True) for a in range(4)]
    return _single(p, d2[0] - d2[1] - d2[2] - d2[3])


def derivative_regular(f: QField, p, scheme: FdScheme = DEFAULT_SCHEME) -> BiQuat:
    """The derivative ``nabla f`` of a left-regular field, cross-checked against ``-d_w f``."""
    pts = np.asarray(p, dtype=complex)
    grad = nabla(f, pts, "left", scheme)
    alt = -partial(f, pts, 0, scheme)
    tol = 1e-12 if _poly_of(f) is not None else scheme.tolerance
    gap = float(np.max(residual_norm(grad - alt)))
    if gap > 10 * tol * max(1.0, float(np.max(residual_norm(grad)))):
        raise NotRegularHere(f"nabla f and -f_w differ by {gap:.3g}")
    return _single(p, grad)
