"""Node/weight tables and the deterministic reduction used by every integrator."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def gauss_legendre_panels(order: int, panels: int = 1, a: float = 0.0, b: float = 1.0):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``."""
    if order < 1 or panels < 1:
        raise ValueError("order and panels must be positive")
    x, w = _gl(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def uniform_periodic(n: int, a: float = 0.0, b: float = 1.0):
    """Trapezoidal nodes for a periodic axis (offset by half a step)."""
    if n < 1:
        raise ValueError("node count must be positive")
    h = (b - a) / n
    return a + h * (np.arange(n) + 0.5), np.full(n, h)


def fixed_sum(values: np.ndarray) -> np.ndarray | complex:
    """Exactly rounded sum over axis 0, component by component.

    ``math.fsum`` is order independent, so the result is the same however
    the rows were produced.
    """
    v = np.asarray(values)
    if v.ndim == 0:
        return v[()]
    flat = v.reshape(v.shape[0], -1)
    out = np.empty(flat.shape[1], dtype=complex)
    for k in range(flat.shape[1]):
        col = flat[:, k]
        out[k] = complex(math.fsum(col.real.tolist()), math.fsum(col.imag.tolist()))
    out = out.reshape(v.shape[1:])
    return complex(out) if out.ndim == 0 else out
