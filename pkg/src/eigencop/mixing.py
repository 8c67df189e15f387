"""Mixing certificates for stationary chains driven by spectral copulas.

The n-step transition copula of such a chain is the same copula with each
coefficient raised to the n-th power, so the mixing coefficient of the
chain is controlled by sup_k |lambda_k|^n.  A chain is certifiably
psi-mixing once some n-step density is uniformly below 2 (psi' route) or
uniformly above 0 (psi* route); with all coefficients strictly inside the
unit interval either bound eventually holds, and the certificate records
the first n where a 512x512 midpoint grid of the folded density lands
strictly inside the requisite half-space with numerical headroom.

Coefficients on the unit circle (|lambda_k| = 1) keep every fold at sup 1
and the chain is not mixing; that case is reported as a boundary verdict
rather than searched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .basis import ShiftedLegendre, _legendre_even_min, eval_phi
from .copula import SpectralCopula

SUP_BOUNDARY_TOL = 1e-12
DENSITY_HEADROOM = 1e-9
DEFAULT_MAX_N = 20
DEFAULT_GRID_N = 512


class Certificate(Enum):
    CERTIFIED_LESS_THAN_TWO = "certified_less_than_two"
    CERTIFIED_BOUNDED_DENSITY = "certified_bounded_density"
    BOUNDARY_NON_MIXING = "boundary_non_mixing"
    INCONCLUSIVE = "inconclusive"


def rho_sequence(c: SpectralCopula, n_max: int):
    """Geometric envelope sup_k|lambda_k|^n for n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    sup = c.coeffs.sup_abs
    return sup ** np.arange(1, n_max + 1, dtype=float)


@dataclass(frozen=True)
class MixingReport:
    sup_coefficient: float
    rho_sequence: tuple
    certificate: Certificate
    certified_n: int | None
    fold_density_ranges: tuple  # ((n, grid_min, grid_max), ...)
    decomp_bounds: tuple | None  # ((n, lower, upper), ...) when available
    grid_n: int
    max_n: int

    def as_dict(self) -> dict:
        return {
            "sup_coefficient": self.sup_coefficient,
            "rho_sequence": list(self.rho_sequence),
            "certificate": self.certificate.value,
            "certified_n": self.certified_n,
            "fold_density_ranges": [list(r) for r in self.fold_density_ranges],
            "decomp_bounds": None if self.decomp_bounds is None
            else [list(r) for r in self.decomp_bounds],
            "grid_n": self.grid_n,
            "max_n": self.max_n,
        }


def _decomp_applicable(c: SpectralCopula) -> bool:
    # envelope 1 +/- M*sup^(n-3) is only safe when each term's uniform
    # bound (2k+1)|lambda_k| stays within 1 and the total weighted mass
    # sum |lambda_k| * (2k+1)^(1/2) * max|phi_k| does too
    if not isinstance(c.family, ShiftedLegendre):
        return False
    sup = c.coeffs.sup_abs
    if not sup < 1.0 - SUP_BOUNDARY_TOL or sup == 0.0:
        return False
    total = 0.0
    for k, lam in c.coeffs.entries:
        scale = math.sqrt(2 * k + 1)
        amp = scale if k % 2 == 1 else scale * abs(_legendre_even_min(k))
        if abs(lam) * (2 * k + 1) > 1.0:
            return False
        total += abs(lam) * scale * amp
    return total <= 1.0


def certify_psi(c: SpectralCopula, max_n: int = DEFAULT_MAX_N,
                grid_n: int = DEFAULT_GRID_N) -> MixingReport:
    """Search folds n = 1..max_n for a uniform density bound certifying
    psi-mixing of the stationary chain."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    sup = c.coeffs.sup_abs
    rho = tuple(float(r) for r in rho_sequence(c, max_n)) if sup > 0.0 \
        else tuple(0.0 for _ in range(max_n))

    if sup >= 1.0 - SUP_BOUNDARY_TOL:
        return MixingReport(sup, rho, Certificate.BOUNDARY_NON_MIXING, None,
                            (), None, grid_n, max_n)

    # midpoint grid; per-term outer products are fold-independent, only the
    # coefficient powers change, so precompute them once
    x = (np.arange(grid_n) + 0.5) / grid_n
    outers = {}
    for k, _ in c.coeffs.entries:
        col = eval_phi(c.family, k, x)
        outers[k] = np.multiply.outer(col, col)

    ranges = []
    cert = Certificate.INCONCLUSIVE
    cert_n = None
    bounded_n = None
    for n in range(1, max_n + 1):
        folded = c.fold(n)
        dens = np.ones((grid_n, grid_n))
        # folded coefficients that underflow to zero are dropped from the
        # container, so look them up by key with a zero default
        for k, outer in outers.items():
            lam = folded.coeffs.get(k, 0.0)
            if lam != 0.0:
                dens = dens + lam * outer
        gmin = float(dens.min())
        gmax = float(dens.max())
        ranges.append((n, gmin, gmax))
        if gmax < 2.0 - DENSITY_HEADROOM:
            cert = Certificate.CERTIFIED_LESS_THAN_TWO
            cert_n = n
            break
        if bounded_n is None and gmin > DENSITY_HEADROOM:
            bounded_n = n
    if cert is Certificate.INCONCLUSIVE and bounded_n is not None:
        cert = Certificate.CERTIFIED_BOUNDED_DENSITY
        cert_n = bounded_n

    decomp = None
    if _decomp_applicable(c):
        m = c.coeffs.sum_squares
        decomp = tuple((n, 1.0 - m * sup ** (n - 3), 1.0 + m * sup ** (n - 3))
                       for n in range(3, max_n + 1))

    return MixingReport(sup, rho, cert, cert_n, tuple(ranges), decomp,
                        grid_n, max_n)
