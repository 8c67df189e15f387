"""Stationary Markov chains driven by an eigen-expansion copula.

Given the current state u and an independent innovation w ~ Uniform(0,1),
the next state is the solution v of

    d1C(u, v) = v + sum_k lambda_k * phi_k(u) * Phi_k(v) = w.

Step families make d1C piecewise linear in v, so the solve is exact knot
interpolation.  Smooth families use bisection until the bracket is below
1e-6, then a guarded secant (Illinois) refinement; iteration stops when
the residual is below 1e-12 or the bracket below 1e-14.

Single chains run through a plain-float scalar path; replicate banks run
through a lane-vectorized path, one numpy array per time step.  Each path
is deterministic for a given seed key; per-replicate seed keys make banks
independent of scheduling and thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .basis import (Cosine, PiecewiseSign, ShiftedLegendre, SineCosine,
                    TwoValueStep, is_step, jump_points)
from .copula import SpectralCopula

RESIDUAL_TOL = 1e-12
BRACKET_TOL = 1e-14
BISECT_WIDTH = 1e-6
MAX_ITER = 100

_S2 = math.sqrt(2.0)


# -- marginal transforms -------------------------------------------------


@dataclass(frozen=True)
class Uniform:
    pass


@dataclass(frozen=True)
class Exponential:
    """x = -rate * log(1 - u); the transformed variable has mean `rate`."""

    rate: float

    def __post_init__(self):
        if not self.rate > 0.0:
            raise ValueError("Exponential transform requires rate > 0")


@dataclass(frozen=True)
class Bernoulli:
    """x = 1 if u <= threshold else 0."""

    threshold: float

    def __post_init__(self):
        if not 0.0 < self.threshold < 1.0:
            raise ValueError("Bernoulli threshold must be in (0,1)")


MarginalTransform = Union[Uniform, Exponential, Bernoulli]


def apply_transform(transform: MarginalTransform, u):
    arr = np.asarray(u, dtype=float)
    if isinstance(transform, Uniform):
        return arr.copy()
    if isinstance(transform, Exponential):
        return -transform.rate * np.log1p(-arr)
    if isinstance(transform, Bernoulli):
        return (arr <= transform.threshold).astype(float)
    raise TypeError(f"unknown transform {transform!r}")


# -- reproducible innovation streams -------------------------------------


def innovation_stream(*keys: int) -> np.random.Generator:
    """Generator keyed by a tuple of nonnegative integers.

    Distinct key tuples give statistically independent streams, and the
    same tuple always reproduces the same draws, so replicate banks are
    reproducible regardless of scheduling order.
    """
    if not keys:
        raise ValueError("at least one key integer is required")
    for k in keys:
        if not isinstance(k, int) or k < 0:
            raise ValueError("stream keys must be nonnegative integers")
    return np.random.default_rng(np.random.SeedSequence(list(keys)))


# -- per-family scalar and vector term evaluators ------------------------


def _legendre_scalar(n: int, y: float) -> float:
    if n == 0:
        return 1.0
    p_prev, p = 1.0, y
    for m in range(1, n):
        p_prev, p = p, ((2 * m + 1) * y * p - m * p_prev) / (m + 1)
    return p


def _scalar_pair(family, k):
    """(phi, Phi) as plain-float callables for one basis function."""
    if isinstance(family, SineCosine):
        part, m = k
        w = 2.0 * math.pi * m
        if part == "sin":
            return (lambda x: _S2 * math.sin(w * x),
                    lambda x: _S2 * (1.0 - math.cos(w * x)) / w)
        return (lambda x: _S2 * math.cos(w * x),
                lambda x: _S2 * math.sin(w * x) / w)
    if isinstance(family, Cosine):
        w = k * math.pi
        return (lambda x: _S2 * math.cos(w * x),
                lambda x: _S2 * math.sin(w * x) / w)
    if isinstance(family, ShiftedLegendre):
        scale = math.sqrt(2 * k + 1)

        def phi(x, n=k, s=scale):
            return s * _legendre_scalar(n, 2.0 * x - 1.0)

        def Phi(x, n=k, s=scale):
            y = 2.0 * x - 1.0
            return (_legendre_scalar(n + 1, y) - _legendre_scalar(n - 1, y)) / (2.0 * s)

        return phi, Phi
    if isinstance(family, TwoValueStep):
        a = family.alpha
        c = family.breakpoint
        ra = math.sqrt(a)
        return (lambda x: ra if x < c else -1.0 / ra,
                lambda x: ra * x if x < c else ra * c - (x - c) / ra)
    a, b = family.cell(k)
    wdt = b - a
    inv = 1.0 / math.sqrt(wdt)
    mid = 0.5 * (a + b)
    last = k == family.n_cells

    def phi(x):
        if x < a or (x >= b and not (last and x == 1.0)):
            return 0.0
        return -inv if x < mid else inv

    def Phi(x):
        if x <= a or x >= b:
            return 0.0
        return -(x - a) * inv if x < mid else (x - b) * inv

    return phi, Phi


def _vector_pair(family, k):
    """(phi, Phi) as vectorized callables without domain checks."""
    if isinstance(family, SineCosine):
        part, m = k
        w = 2.0 * math.pi * m
        if part == "sin":
            return (lambda x: _S2 * np.sin(w * x),
                    lambda x: _S2 * (1.0 - np.cos(w * x)) / w)
        return (lambda x: _S2 * np.cos(w * x),
                lambda x: _S2 * np.sin(w * x) / w)
    if isinstance(family, Cosine):
        w = k * math.pi
        return (lambda x: _S2 * np.cos(w * x),
                lambda x: _S2 * np.sin(w * x) / w)
    if isinstance(family, ShiftedLegendre):
        scale = math.sqrt(2 * k + 1)

        def _p(n, y):
            if n == 0:
                return np.ones_like(y)
            p_prev = np.ones_like(y)
            p = y.copy() if isinstance(y, np.ndarray) else y
            for m in range(1, n):
                p_prev, p = p, ((2 * m + 1) * y * p - m * p_prev) / (m + 1)
            return p

        return (lambda x: scale * _p(k, 2.0 * x - 1.0),
                lambda x: (_p(k + 1, 2.0 * x - 1.0) - _p(k - 1, 2.0 * x - 1.0)) / (2.0 * scale))
    if isinstance(family, TwoValueStep):
        a = family.alpha
        c = family.breakpoint
        ra = math.sqrt(a)
        return (lambda x: np.where(x < c, ra, -1.0 / ra),
                lambda x: np.where(x < c, ra * x, ra * c - (x - c) / ra))
    a, b = family.cell(k)
    inv = 1.0 / math.sqrt(b - a)
    mid = 0.5 * (a + b)
    last = k == family.n_cells

    def phi(x):
        inside = (x >= a) & ((x < b) | (last & (x == 1.0)))
        return np.where(inside, np.where(x < mid, -inv, inv), 0.0)

    def Phi(x):
        return np.select([x <= a, x < mid, x < b],
                         [0.0, -(x - a) * inv, (x - b) * inv], default=0.0)

    return phi, Phi


# -- conditional CDF inversion -------------------------------------------


def _solve_scalar(sPhi, w: float) -> float:
    """Root of v + sum s_i*Phi_i(v) - w on [0,1]; sPhi pairs (s_i, Phi_i)."""
    if not sPhi:
        return w

    def g(v):
        total = v - w
        for s, Phi in sPhi:
            total += s * Phi(v)
        return total

    lo, hi = 0.0, 1.0
    flo, fhi = -w, 1.0 - w
    side = 0
    for _ in range(MAX_ITER):
        width = hi - lo
        if width <= BRACKET_TOL:
            break
        if width > BISECT_WIDTH or fhi == flo:
            mid = 0.5 * (lo + hi)
        else:
            mid = (lo * fhi - hi * flo) / (fhi - flo)
            if not lo < mid < hi:
                mid = 0.5 * (lo + hi)
        fm = g(mid)
        if abs(fm) <= RESIDUAL_TOL:
            return mid
        if fm < 0.0:
            lo, flo = mid, fm
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = mid, fm
            if side == 1:
                flo *= 0.5
            side = 1
    return 0.5 * (lo + hi)


def _solve_vector(s_list, Phi_list, w: np.ndarray) -> np.ndarray:
    if not s_list:
        return w.copy()

    def g(v):
        total = v - w
        for s, Phi in zip(s_list, Phi_list):
            total = total + s * Phi(v)
        return total

    lo = np.zeros_like(w)
    hi = np.ones_like(w)
    flo = -w
    fhi = 1.0 - w
    out = np.empty_like(w)
    done = np.zeros(w.shape, dtype=bool)
    side = np.zeros(w.shape, dtype=np.int8)
    for _ in range(MAX_ITER):
        width = hi - lo
        tiny = (width <= BRACKET_TOL) & ~done
        if tiny.any():
            mids = 0.5 * (lo + hi)
            out[tiny] = mids[tiny]
            done |= tiny
        if done.all():
            break
        bis = 0.5 * (lo + hi)
        denom = fhi - flo
        with np.errstate(divide="ignore", invalid="ignore"):
            rf = (lo * fhi - hi * flo) / denom
        bad = ~np.isfinite(rf) | (rf <= lo) | (rf >= hi)
        mid = np.where((width > BISECT_WIDTH) | bad, bis, rf)
        fm = g(mid)
        hit = (np.abs(fm) <= RESIDUAL_TOL) & ~done
        if hit.any():
            out[hit] = mid[hit]
            done |= hit
        if done.all():
            break
        active = ~done
        neg = (fm < 0.0) & active
        pos = active & ~neg
        stuck_hi = neg & (side == -1)
        stuck_lo = pos & (side == 1)
        lo = np.where(neg, mid, lo)
        flo = np.where(neg, fm, flo)
        hi = np.where(pos, mid, hi)
        fhi = np.where(pos, fm, fhi)
        fhi = np.where(stuck_hi, 0.5 * fhi, fhi)
        flo = np.where(stuck_lo, 0.5 * flo, flo)
        side = np.where(neg, -1, np.where(pos, 1, side)).astype(np.int8)
    rest = ~done
    if rest.any():
        mids = 0.5 * (lo + hi)
        out[rest] = mids[rest]
    return out


def _step_knots(c: SpectralCopula) -> np.ndarray:
    return np.unique(np.concatenate(([0.0], np.asarray(jump_points(c.family)), [1.0])))


class _Sampler:
    """Prepared per-copula evaluation tables for chain generation."""

    def __init__(self, c: SpectralCopula):
        self.copula = c
        self.step = is_step(c.family)
        self.entries = c.coeffs.entries
        self.scalar_pairs = [(lam,) + _scalar_pair(c.family, k)
                             for k, lam in self.entries]
        self.vector_pairs = [(lam,) + _vector_pair(c.family, k)
                             for k, lam in self.entries]
        if self.step:
            self.knots = _step_knots(c)
            # antiderivative values at the knots, one row per term
            self.Phi_at_knots = np.stack(
                [Phi(self.knots) for _, _, Phi in self.vector_pairs]) \
                if self.entries else np.zeros((0, self.knots.size))

    # scalar path

    def next_scalar(self, u: float, w: float) -> float:
        if not self.entries:
            return w
        if self.step:
            knots = self.knots
            s = [lam * phi(u) for lam, phi, _ in self.scalar_pairs]
            gk = [float(kn) for kn in knots]
            for j, kn in enumerate(knots):
                total = kn
                for si, row in zip(s, self.Phi_at_knots):
                    total += si * row[j]
                gk[j] = total
            j = 0
            for idx in range(len(knots) - 1):
                if gk[idx] <= w:
                    j = idx
                else:
                    break
            dg = gk[j + 1] - gk[j]
            if dg <= 0.0:
                v = knots[j]
            else:
                v = knots[j] + (w - gk[j]) * (knots[j + 1] - knots[j]) / dg
            return min(max(float(v), 0.0), 1.0)
        sPhi = [(lam * phi(u), Phi) for lam, phi, Phi in self.scalar_pairs]
        return _solve_scalar(sPhi, w)

    # vector path

    def next_vector(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        if not self.entries:
            return w.copy()
        s_list = [lam * phi(u) for lam, phi, _ in self.vector_pairs]
        if self.step:
            knots = self.knots
            g = np.broadcast_to(knots, (u.size, knots.size)).copy()
            for s, row in zip(s_list, self.Phi_at_knots):
                g += s[:, None] * row[None, :]
            j = np.clip(np.sum(g <= w[:, None], axis=1) - 1, 0, knots.size - 2)
            rows = np.arange(u.size)
            gj = g[rows, j]
            gj1 = g[rows, j + 1]
            dg = gj1 - gj
            safe = np.where(dg > 0.0, dg, 1.0)
            v = knots[j] + (w - gj) * (knots[j + 1] - knots[j]) / safe
            v = np.where(dg > 0.0, v, knots[j])
            return np.clip(v, 0.0, 1.0)
        Phi_list = [Phi for _, _, Phi in self.vector_pairs]
        return _solve_vector(s_list, Phi_list, w)


def next_state(c: SpectralCopula, u_prev, w):
    """Solve d1C(u_prev, v) = w for v.

    Scalars in, scalar out; same-shape arrays in, array out.  Step
    families are inverted exactly; smooth families to the tolerances in
    the module header.
    """
    sampler = _Sampler(c)
    u_arr = np.asarray(u_prev, dtype=float)
    w_arr = np.asarray(w, dtype=float)
    if np.any((u_arr < 0.0) | (u_arr > 1.0)) or np.any((w_arr < 0.0) | (w_arr > 1.0)):
        raise ValueError("u_prev and w must lie in [0,1]")
    if u_arr.ndim == 0 and w_arr.ndim == 0:
        return sampler.next_scalar(float(u_arr), float(w_arr))
    if u_arr.shape != w_arr.shape:
        raise ValueError("u_prev and w must have matching shapes")
    flat = sampler.next_vector(u_arr.ravel(), w_arr.ravel())
    return flat.reshape(u_arr.shape)


def sample_wl(lam: float, u_prev, q):
    """Closed-form next state for the symmetric two-value step copula
    (alpha = 1) with coefficient lam, |lam| <= 1.

    Four linear branches keyed on which half u_prev falls in and on which
    side of the conditional CDF value at 1/2 the innovation q falls.
    """
    if abs(lam) > 1.0:
        raise ValueError("sample_wl requires |lam| <= 1")
    u = np.asarray(u_prev, dtype=float)
    qq = np.asarray(q, dtype=float)
    scalar = u.ndim == 0 and qq.ndim == 0
    if np.any((u < 0.0) | (u > 1.0)) or np.any((qq < 0.0) | (qq > 1.0)):
        raise ValueError("u_prev and q must lie in [0,1]")
    low_u = u < 0.5
    thr = np.where(low_u, 0.5 * (1.0 + lam), 0.5 * (1.0 - lam))
    first = qq < thr
    d_plus = (1.0 + lam) if lam != -1.0 else 1.0
    d_minus = (1.0 - lam) if lam != 1.0 else 1.0
    b1 = qq / d_plus
    b2 = (qq - lam) / d_minus
    b3 = qq / d_minus
    b4 = (qq + lam) / d_plus
    v = np.select([low_u & first, low_u & ~first, ~low_u & first],
                  [b1, b2, b3], default=b4)
    v = np.clip(v, 0.0, 1.0)
    return float(v) if scalar else v


@dataclass(frozen=True)
class ChainSample:
    """A stationary chain with uniform marginals plus its transformed
    companion series (equal to `values` under the Uniform transform)."""

    values: np.ndarray
    transformed: np.ndarray
    seed: int
    copula: SpectralCopula
    transform: MarginalTransform

    @property
    def n(self) -> int:
        return int(self.values.size)


def generate_chain(c: SpectralCopula, n: int, seed: int,
                   transform: MarginalTransform = Uniform()) -> ChainSample:
    """Length-n stationary chain: u_1 uniform, then n-1 conditional-CDF
    inversions, one innovation each, all from the stream keyed by seed."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("chain length must be a positive integer")
    rng = innovation_stream(seed)
    u = np.empty(n)
    u[0] = rng.random()
    w = rng.random(n - 1)
    sampler = _Sampler(c)
    cur = float(u[0])
    for i in range(n - 1):
        cur = sampler.next_scalar(cur, float(w[i]))
        u[i + 1] = cur
    return ChainSample(u, apply_transform(transform, u), seed, c, transform)


def generate_chain_bank(c: SpectralCopula, n: int, seed_keys) -> np.ndarray:
    """Replicate bank of chains, shape (len(seed_keys), n).

    Each row r is driven by its own stream keyed by seed_keys[r] (an int
    or tuple of ints), with the same draw order as generate_chain, and the
    whole bank advances one vectorized time step at a time.
    """
    keys = [k if isinstance(k, tuple) else (k,) for k in seed_keys]
    if not isinstance(n, int) or n < 1:
        raise ValueError("chain length must be a positive integer")
    r = len(keys)
    if r == 0:
        return np.empty((0, n))
    u = np.empty((r, n))
    w = np.empty((r, n - 1))
    for i, key in enumerate(keys):
        rng = innovation_stream(*key)
        u[i, 0] = rng.random()
        w[i] = rng.random(n - 1)
    sampler = _Sampler(c)
    for t in range(1, n):
        u[:, t] = sampler.next_vector(u[:, t - 1], w[:, t - 1])
    return u
