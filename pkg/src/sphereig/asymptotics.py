"""Closed-form asymptotic regimes for the real-eigenvalue count.

Large-deviation rate r(alpha) with its electrostatic decomposition over
the spherical cap geometry, the small-alpha series, the local CLT density
around the mean, and the two edge asymptotes (all eigenvalues real, no
eigenvalues real).  Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OddN, OutOfRange, ParityError

# zeta(3/2) and zeta'(-1); frozen literals, reproduced to 12+ digits by an
# independent Euler-Maclaurin recomputation in the test suite
ZETA_3_2 = 2.6123753486854883
ZETA_PRIME_MINUS1 = -0.1654211437004509

# Gaussian scale of the local CLT: c = sqrt(2 pi) (2 - sqrt(2))
CLT_SCALE = math.sqrt(2.0 * math.pi) * (2.0 - math.sqrt(2.0))

__all__ = [
    "ZETA_3_2",
    "ZETA_PRIME_MINUS1",
    "CLT_SCALE",
    "Constants",
    "CONSTANTS",
    "EnergyBreakdown",
    "CltParameters",
    "ld_rate",
    "small_alpha_rate",
    "energy_breakdown",
    "clt_parameters",
    "clt_log_density",
    "all_real_log_asymptotic",
    "no_real_log_asymptotic",
]


@dataclass(frozen=True)
class Constants:
    zeta_3_2: float
    zeta_prime_minus1: float


CONSTANTS = Constants(ZETA_3_2, ZETA_PRIME_MINUS1)


def _check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise OutOfRange(f"alpha must lie in (0, 1], got {alpha}")
    return alpha


def ld_rate(alpha):
    """Large-deviation rate r(alpha): log p_{N, alpha N} ~ -N^2 r(alpha).

    Closed form 8 r = (1+a)^2 log(1+a) - (1-a)^2 log(1-a) - 2a, with the
    removable (1-a)^2 log(1-a) term set to its limit 0 at a = 1.  Below
    a = 1/2 the equivalent all-positive power series is used instead, so
    small rates are free of cancellation:

        8 r = sum_{k>=1} 2 a^(2k+1) / (k (4 k^2 - 1)).
    """
    a = _check_alpha(alpha)
    if a < 0.5:
        acc = 0.0
        a2 = a * a
        p = a * a2  # a^(2k+1)
        k = 1
        while True:
            term = 2.0 * p / (k * (4.0 * k * k - 1.0))
            acc += term
            if term < 1e-18 * acc:
                break
            p *= a2
            k += 1
        return acc / 8.0
    ap = 1.0 + a
    am = 1.0 - a
    val = ap * ap * math.log(ap) - 2.0 * a
    if am > 0.0:
        val -= am * am * math.log(am)
    return val / 8.0


def small_alpha_rate(alpha):
    """Leading series of the rate: (1/8)(2 a^3/3 + a^5/15)."""
    a = float(alpha)
    return (2.0 * a ** 3 / 3.0 + a ** 5 / 15.0) / 8.0


@dataclass(frozen=True)
class EnergyBreakdown:
    """The rate as electrostatic energy of charge on the radius-1/2 sphere:
    an annulus piece, an equatorial piece, and their interaction, with the
    polar cap angle theta0 fixed by cos(theta0) = alpha."""

    alpha: float
    theta0: float
    E_annulus: float
    E_equator: float
    E_cross: float
    total: float
    V_a_equator: float
    V_e: float


def energy_breakdown(alpha):
    """Split ld_rate(alpha) into annulus/equator/cross energies.

    The pieces: E_equator = (a^2/2) log 2; E_cross = a * V_a with V_a the
    annulus potential on the equator; E_annulus from the annulus
    self-energy integral in closed form.  Their sum reproduces
    ld_rate(alpha) to 1e-12; the equator potential V_e = a log 2 is
    reported as well.
    """
    a = _check_alpha(alpha)
    log2 = math.log(2.0)
    ap = 1.0 + a
    am = 1.0 - a

    E_e = 0.5 * a * a * log2
    V_e = a * log2
    V_a = -0.5 * (a - ap * math.log(0.5 * ap) + am * math.log(0.5))
    E_x = a * V_a

    first = (a - ap * math.log(0.5 * ap)) * a
    if am > 0.0:
        second = am * (
            0.5 * math.log(ap / am)
            + a * (-1.0 + math.log(0.5 * math.sqrt(ap * am)))
        )
    else:
        second = 0.0
    E_a = 0.25 * (first + second)

    return EnergyBreakdown(
        alpha=a,
        theta0=math.acos(a),
        E_annulus=E_a,
        E_equator=E_e,
        E_cross=E_x,
        total=E_a + E_e + E_x,
        V_a_equator=V_a,
        V_e=V_e,
    )


@dataclass(frozen=True)
class CltParameters:
    N: int
    mu_N: float
    sigma2: float
    c: float


def clt_parameters(N, use_exact_mean=False):
    """Mean, variance, and Gaussian scale of the local CLT window."""
    N = int(N)
    if N < 1:
        raise OutOfRange(f"N must be positive, got {N}")
    if use_exact_mean:
        from .exact_dist import exact_moments

        mu = float(exact_moments(N).mean_numeric.value)
    else:
        mu = math.sqrt(math.pi * N / 2.0)
    return CltParameters(N=N, mu_N=mu, sigma2=(2.0 - math.sqrt(2.0)) * mu, c=CLT_SCALE)


def clt_log_density(N, M, use_exact_mean=False):
    """Log of the Gaussian local-CLT density at count M:

        -(1/2) log(pi c sqrt(N)) - (M - mu_N)^2 / (c sqrt(N)).

    mu_N is sqrt(pi N / 2) by default, or the exact finite-N mean when
    use_exact_mean is set (even N only).  The density normalizes against
    dM; lattice masses live on spacing-2 points.
    """
    N = int(N)
    M = int(M)
    if N < 1:
        raise OutOfRange(f"N must be positive, got {N}")
    if (M - N) % 2:
        raise ParityError(f"M={M} must have the parity of N={N}")
    if not 0 <= M <= N:
        raise OutOfRange(f"M={M} outside [0, {N}]")
    params = clt_parameters(N, use_exact_mean)
    sqn = math.sqrt(N)
    d = M - params.mu_N
    return -0.5 * math.log(math.pi * params.c * sqn) - d * d / (params.c * sqn)


def all_real_log_asymptotic(N):
    """Asymptote of log p_{N,N}:
    N^2/4 - (N^2/2) log 2 + (1/12) log N - 1/12 - zeta'(-1)."""
    N = int(N)
    if N < 2:
        raise OutOfRange(f"N must be at least 2, got {N}")
    return (
        N * N / 4.0
        - (N * N / 2.0) * math.log(2.0)
        + math.log(N) / 12.0
        - 1.0 / 12.0
        - ZETA_PRIME_MINUS1
    )


def no_real_log_asymptotic(N):
    """Asymptote of log p_{N,0}: -sqrt(pi N / 8) zeta(3/2)."""
    N = int(N)
    if N < 2:
        raise OutOfRange(f"N must be at least 2, got {N}")
    return -math.sqrt(math.pi * N / 8.0) * ZETA_3_2
