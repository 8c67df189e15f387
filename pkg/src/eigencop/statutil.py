"""Self-contained statistical functions used by the estimators and tests.

Quantiles, chi-square tails, Kolmogorov-Smirnov distances and binomial
bands are implemented here directly (no external statistics dependency)
and validated against tabulated values in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

# Acklam's rational approximation to the inverse normal CDF.
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF (rational approximation plus one
    Halley step, giving close to machine precision)."""
    if not 0.0 < p < 1.0:
        raise ValueError("normal_quantile requires 0 < p < 1")
    p_low = 0.02425
    if p < p_low:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((( _C[0]*q + _C[1])*q + _C[2])*q + _C[3])*q + _C[4])*q + _C[5]) / \
            (((( _D[0]*q + _D[1])*q + _D[2])*q + _D[3])*q + 1.0)
    elif p <= 1.0 - p_low:
        q = p - 0.5
        r = q * q
        x = ((((( _A[0]*r + _A[1])*r + _A[2])*r + _A[3])*r + _A[4])*r + _A[5]) * q / \
            ((((( _B[0]*r + _B[1])*r + _B[2])*r + _B[3])*r + _B[4])*r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log(1.0 - p))
        x = -((((( _C[0]*q + _C[1])*q + _C[2])*q + _C[3])*q + _C[4])*q + _C[5]) / \
             (((( _D[0]*q + _D[1])*q + _D[2])*q + _D[3])*q + 1.0)
    # Halley refinement against erfc
    e = normal_cdf(x) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


def _gamma_p_series(a: float, x: float) -> float:
    # lower regularized gamma by series, valid for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(10000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_cf(a: float, x: float) -> float:
    # upper regularized gamma by continued fraction (modified Lentz)
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def regularized_gamma_p(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x)."""
    if x < 0.0 or a <= 0.0:
        raise ValueError("invalid incomplete gamma arguments")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_cf(a, x)


def chi2_cdf(x: float, df: float) -> float:
    if x <= 0.0:
        return 0.0
    return regularized_gamma_p(df / 2.0, x / 2.0)


def chi2_quantile(p: float, df: float) -> float:
    """Inverse chi-square CDF. df=2 has the closed form -2 log(1-p);
    other degrees of freedom are solved by bisection on the CDF."""
    if not 0.0 < p < 1.0:
        raise ValueError("chi2_quantile requires 0 < p < 1")
    if df == 2:
        return -2.0 * math.log1p(-p)
    lo, hi = 0.0, df + 1.0
    while chi2_cdf(hi, df) < p:
        hi *= 2.0
        if hi > 1e12:
            break
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if chi2_cdf(mid, df) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def chi2_gof(observed, expected) -> tuple[float, float, float]:
    """Pearson goodness-of-fit statistic, its degrees of freedom
    (cells - 1) and the upper-tail p-value."""
    obs = np.asarray(observed, dtype=float).ravel()
    exp = np.asarray(expected, dtype=float).ravel()
    if obs.shape != exp.shape:
        raise ValueError("observed and expected shapes differ")
    if np.any(exp <= 0.0):
        raise ValueError("expected counts must be positive")
    stat = float(np.sum((obs - exp) ** 2 / exp))
    df = obs.size - 1
    return stat, float(df), 1.0 - chi2_cdf(stat, df)


def kolmogorov_sf(t: float) -> float:
    """Survival function of the Kolmogorov distribution."""
    if t <= 0.18:
        return 1.0
    if t > 5.0:
        return 0.0
    total = 0.0
    for j in range(1, 101):
        term = math.exp(-2.0 * j * j * t * t)
        total += term if j % 2 == 1 else -term
        if term < 1e-18:
            break
    return max(0.0, min(1.0, 2.0 * total))


def ks_uniform(values) -> tuple[float, float]:
    """One-sample KS distance of `values` against Uniform(0,1) and the
    asymptotic p-value (with the usual small-sample correction factor)."""
    u = np.sort(np.asarray(values, dtype=float))
    n = u.size
    i = np.arange(1, n + 1, dtype=float)
    d_plus = np.max(i / n - u)
    d_minus = np.max(u - (i - 1.0) / n)
    d = float(max(d_plus, d_minus))
    root = math.sqrt(n)
    return d, kolmogorov_sf((root + 0.12 + 0.11 / root) * d)


def ks_two_sample(x, y) -> tuple[float, float]:
    """Two-sample KS distance and asymptotic p-value."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    n, m = x.size, y.size
    pooled = np.concatenate([x, y])
    cdf_x = np.searchsorted(x, pooled, side="right") / n
    cdf_y = np.searchsorted(y, pooled, side="right") / m
    d = float(np.max(np.abs(cdf_x - cdf_y)))
    n_eff = n * m / (n + m)
    root = math.sqrt(n_eff)
    return d, kolmogorov_sf((root + 0.12 + 0.11 / root) * d)


def binomial_central_band(trials: int, p: float, conf: float) -> tuple[int, int]:
    """Central binomial acceptance band: the pair of counts (lo, hi) with
    lo the conf-level lower quantile and hi the upper quantile of
    Binomial(trials, p), computed from the exact pmf."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0,1)")
    alpha = 1.0 - conf
    log_pmf = np.empty(trials + 1)
    lp, lq = math.log(p), math.log1p(-p)
    lgn = math.lgamma(trials + 1)
    for k in range(trials + 1):
        log_pmf[k] = (lgn - math.lgamma(k + 1) - math.lgamma(trials - k + 1)
                      + k * lp + (trials - k) * lq)
    cdf = np.cumsum(np.exp(log_pmf))
    lo = int(np.searchsorted(cdf, alpha / 2.0))
    hi = int(np.searchsorted(cdf, 1.0 - alpha / 2.0))
    return lo, min(hi, trials)


def lag1_autocorrelation(x) -> float:
    x = np.asarray(x, dtype=float)
    x = x - x.mean()
    denom = float(np.dot(x, x))
    if denom == 0.0:
        return 0.0
    return float(np.dot(x[:-1], x[1:]) / denom)
