"""Estimators and central-limit machinery for chains driven by the
two-sine copula family (density 1 + mu1*phi1(u)phi1(v) + mu2*phi2(u)phi2(v)
with phi_k(x) = sqrt(2)*sin(2*pi*k*x)).

The pair averages

    mu_hat_k = (1/(n-1)) * sum_i phi_k(U_i) * phi_k(U_{i+1})

are asymptotically normal with covariance [[1, -mu1*mu2], [-mu1*mu2, 1]],
which yields a two-degree chi-square statistic for joint hypotheses and
Wald intervals for smooth functionals of the chain.  Long-run variances
for the functionals studied in the coverage experiments (indicator of a
threshold, exponential transform, plain mean) have closed forms; a
generic quadrature route covers arbitrary transforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quadrature import gauss_legendre_01, log_weighted_sine_integral
from .statutil import normal_quantile

_PI2 = math.pi ** 2

# squared projections of log(1-t) on the first two sine eigenfunctions,
# re-derived at import time by singularity-splitting quadrature
_LOG_SIN_1_SQ = log_weighted_sine_integral(1) ** 2
_LOG_SIN_2_SQ = log_weighted_sine_integral(2) ** 2


def _phi(k: int, x):
    return math.sqrt(2.0) * np.sin(2.0 * math.pi * k * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class MuEstimate:
    mu1: float
    mu2: float
    n_pairs: int
    covariance: tuple  # 2x2 plug-in covariance of the estimator pair

    def as_dict(self) -> dict:
        return {
            "mu1": self.mu1,
            "mu2": self.mu2,
            "n_pairs": self.n_pairs,
            "covariance": [list(row) for row in self.covariance],
        }


def estimate_mu(values) -> MuEstimate:
    """Pairwise coefficient estimates from one chain of uniforms."""
    u = np.asarray(values, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ValueError("need a 1-d chain with at least two values")
    x, y = u[:-1], u[1:]
    m = u.size - 1
    mu1 = float(np.mean(_phi(1, x) * _phi(1, y)))
    mu2 = float(np.mean(_phi(2, x) * _phi(2, y)))
    off = -mu1 * mu2 / m
    cov = ((1.0 / m, off), (off, 1.0 / m))
    return MuEstimate(mu1, mu2, m, cov)


def chi2_statistic(est: MuEstimate, mu0: tuple, paper_form: bool = False,
                   plug_in: bool = False) -> float:
    """Two-degree chi-square statistic for the joint null (mu1, mu2) = mu0.

    The default divisor 1 - (mu1*mu2)^2 comes from inverting the full
    asymptotic covariance; `paper_form` selects the variant with divisor
    1 - mu1*mu2 instead (the two differ by the factor 1 + mu1*mu2).
    `plug_in` evaluates the coefficient product at the estimates rather
    than at the null, for confidence-set use.
    """
    mu01, mu02 = float(mu0[0]), float(mu0[1])
    d1 = est.mu1 - mu01
    d2 = est.mu2 - mu02
    prod = est.mu1 * est.mu2 if plug_in else mu01 * mu02
    num = d1 * d1 + d2 * d2 + 2.0 * prod * d1 * d2
    div = (1.0 - prod) if paper_form else (1.0 - prod * prod)
    return est.n_pairs * num / div


# -- long-run variances of chain functionals ------------------------------


def sigma2_indicator(a: float, mu1: float) -> float:
    """Long-run variance of the mean of 1(U_i <= a) under the chain with
    coefficients (mu1, -4*mu1)."""
    if not 0.0 < a < 1.0:
        raise ValueError("threshold a must be in (0,1)")
    s1 = math.sin(math.pi * a) ** 4
    s2 = math.sin(2.0 * math.pi * a) ** 4
    return a * (1.0 - a) + (4.0 * mu1 / _PI2) * (s1 / (1.0 - mu1) - s2 / (1.0 + 4.0 * mu1))


def indicator_zero_effect_threshold(mu1: float) -> float:
    """Threshold a* where the chain dependence adds nothing to the
    indicator variance, found by bisection on the correction bracket."""

    def bracket(a: float) -> float:
        return (math.sin(math.pi * a) ** 4 / (1.0 - mu1)
                - math.sin(2.0 * math.pi * a) ** 4 / (1.0 + 4.0 * mu1))

    lo, hi = 1e-6, 0.5
    if not bracket(lo) < 0.0 < bracket(hi):
        raise ValueError("no sign change on (0, 1/2) for this mu1")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if bracket(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def indicator_zero_effect_closed(mu1: float) -> float:
    """Closed form of the zero-effect threshold: the correction vanishes
    where cos^4(pi*a) = (1+4*mu1) / (16*(1-mu1))."""
    r = ((1.0 + 4.0 * mu1) / (16.0 * (1.0 - mu1))) ** 0.25
    return math.acos(r) / math.pi


def sigma2_exponential(rate: float, mu1: float) -> float:
    """Long-run variance of the mean of -rate*log(1-U_i) under the chain
    with coefficients (mu1, -4*mu1)."""
    if not rate > 0.0:
        raise ValueError("rate must be positive")
    corr = 4.0 * mu1 * (_LOG_SIN_1_SQ / (1.0 - mu1)
                        - 4.0 * _LOG_SIN_2_SQ / (1.0 + 4.0 * mu1))
    return rate * rate * (1.0 + corr)


def sigma2_uniform_mean(mu1: float) -> float:
    """Long-run variance of the plain mean of the chain itself."""
    return 1.0 / 12.0 + 5.0 * mu1 * mu1 / (_PI2 * (1.0 - mu1) * (1.0 + 4.0 * mu1))


def sigma2_custom(f, mu1: float, mu2: float, marginal_variance: float = None,
                  n_nodes: int = 256) -> float:
    """Long-run variance of the mean of f(U_i) for a general transform f
    under a general two-sine chain: marginal variance plus the geometric
    series of lagged covariances through the first two sine projections."""
    x, w = gauss_legendre_01(n_nodes)
    fx = np.asarray(f(x), dtype=float)
    if marginal_variance is None:
        mean = float(np.dot(w, fx))
        marginal_variance = float(np.dot(w, (fx - mean) ** 2))
    a1 = float(np.dot(w, fx * _phi(1, x)))
    a2 = float(np.dot(w, fx * _phi(2, x)))
    return marginal_variance + 2.0 * (mu1 * a1 * a1 / (1.0 - mu1)
                                      + mu2 * a2 * a2 / (1.0 - mu2))


def sigma2_f(kind: str, params: dict) -> float:
    """Dispatcher used by the command line: kind selects the formula and
    params carries its arguments."""
    if kind == "indicator":
        return sigma2_indicator(params["a"], params["mu1"])
    if kind == "exponential":
        return sigma2_exponential(params["rate"], params["mu1"])
    if kind == "uniform_mean":
        return sigma2_uniform_mean(params["mu1"])
    raise ValueError(f"unknown variance kind {kind!r}")


# -- weighted coefficient estimator ---------------------------------------


@dataclass(frozen=True)
class WeightedMuEstimate:
    """Convex reweighting of the two pair averages targeting mu1 on the
    zero-association family (where mu2 = -4*mu1).

    `variance` is the plug-in variance the interval construction uses,
    1 - 2*(1 - 4*mu^2)*(w - w^2); `variance_delta` is the delta-method
    variance of the same statistic from the joint CLT of the two pair
    averages, w^2 + (1-w)^2/16 - 2*w*(1-w)*mu^2.  The two coincide at
    w = 1 and disagree elsewhere; Monte Carlo matches the delta form.
    """

    weight: float
    estimate: float
    variance: float
    variance_delta: float
    n_pairs: int

    def as_dict(self) -> dict:
        return {
            "weight": self.weight,
            "estimate": self.estimate,
            "variance": self.variance,
            "variance_delta": self.variance_delta,
            "n_pairs": self.n_pairs,
        }


def estimate_mu_weighted(values, weight: float) -> WeightedMuEstimate:
    if not 0.0 <= weight <= 1.0:
        raise ValueError("weight must be in [0,1]")
    est = estimate_mu(values)
    w = float(weight)
    mu = w * est.mu1 - (1.0 - w) * est.mu2 / 4.0
    ww = w - w * w
    variance = 1.0 - 2.0 * (1.0 - 4.0 * mu * mu) * ww
    variance_delta = w * w + (1.0 - w) ** 2 / 16.0 - 2.0 * ww * mu * mu
    return WeightedMuEstimate(w, mu, variance, variance_delta, est.n_pairs)


# -- Wald intervals --------------------------------------------------------


@dataclass(frozen=True)
class MeanCI:
    estimate: float
    variance: float
    level: float
    lower: float
    upper: float
    n: int

    def covers(self, target: float) -> bool:
        return self.lower <= target <= self.upper

    def as_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "variance": self.variance,
            "level": self.level,
            "lower": self.lower,
            "upper": self.upper,
            "n": self.n,
        }


def wald_interval(estimate: float, sigma2: float, n: int, level: float) -> tuple[float, float]:
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0,1)")
    if sigma2 < 0.0:
        raise ValueError("variance must be nonnegative")
    half = normal_quantile(0.5 * (1.0 + level)) * math.sqrt(sigma2 / n)
    return estimate - half, estimate + half


def mean_ci(values, sigma2: float, level: float = 0.95) -> MeanCI:
    """Wald interval for the mean of a series given a long-run variance."""
    x = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise ValueError("need a 1-d series")
    est = float(x.mean())
    lo, hi = wald_interval(est, sigma2, x.size, level)
    return MeanCI(est, sigma2, level, lo, hi, int(x.size))
