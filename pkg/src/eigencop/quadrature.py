"""Quadrature rules on [0,1] and [0,1]^2.

Smooth integrands get Gauss-Legendre nodes; piecewise-constant basis
functions get composite rules split at their jump points, which makes the
integrals exact for the step families.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def gauss_legendre_01(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule mapped to [0,1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def composite_rule(cuts, points_per_cell: int = 8) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule applied on each cell of a partition of [0,1].

    `cuts` are interior breakpoints (jump locations); cells between
    consecutive cuts are integrated with a fixed-order Gauss rule, so any
    integrand that is polynomial of moderate degree between cuts is handled
    exactly.
    """
    edges = np.unique(np.concatenate(([0.0], np.asarray(cuts, dtype=float), [1.0])))
    edges = edges[(edges >= 0.0) & (edges <= 1.0)]
    x0, w0 = gauss_legendre_01(points_per_cell)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        h = b - a
        if h <= 0.0:
            continue
        nodes.append(a + h * x0)
        weights.append(h * w0)
    return np.concatenate(nodes), np.concatenate(weights)


def integrate_01(f, rule: tuple[np.ndarray, np.ndarray]) -> float:
    """Integrate a vectorized function over [0,1] with the given rule."""
    x, w = rule
    return float(np.dot(w, f(x)))


def integrate_square(f, rule_u, rule_v=None) -> float:
    """Integrate f(u, v) over the unit square.

    f must accept broadcast arrays. Separate 1-d rules may be supplied for
    the two axes (needed when the two coordinates carry different bases).
    """
    xu, wu = rule_u
    xv, wv = rule_v if rule_v is not None else rule_u
    U = xu[:, None]
    V = xv[None, :]
    vals = f(U, V)
    return float(wu @ vals @ wv)


def integrate_01_adaptive_smooth(f, a: float, b: float, n: int = 128) -> float:
    """One-panel Gauss-Legendre integral of a smooth function over [a,b]."""
    if b <= a:
        return 0.0
    x0, w0 = gauss_legendre_01(n)
    h = b - a
    return float(h * np.dot(w0, f(a + h * x0)))


def log_weighted_sine_integral(k: int) -> float:
    """Value of the integral of sin(2*pi*k*t) * log(1-t) over [0,1].

    The integrand has an integrable logarithmic singularity at t=1, so a
    single Gauss panel converges slowly.  Substituting s = 1-t moves the
    singularity to 0 and dyadic panels [2^-(j+1), 2^-j] resolve it to
    machine accuracy: on each panel log s is smooth.
    """
    x0, w0 = gauss_legendre_01(24)

    def g(s):
        # sin(2*pi*k*(1-s)) = -sin(2*pi*k*s) for integer k
        return -np.sin(2.0 * np.pi * k * s) * np.log(s)

    total = 0.0
    hi = 1.0
    for _ in range(60):
        lo = hi / 2.0
        h = hi - lo
        total += float(h * np.dot(w0, g(lo + h * x0)))
        hi = lo
        if hi < 1e-17:
            break
    return total
