"""Exact finite-N distribution of the number of real eigenvalues.

For an N x N real Gaussian pencil (N even) the generating function of the
real-eigenvalue count factorizes as

    Z_N(xi) = prod_{l=0}^{N/2-1} [ (1 - pi q_l) + pi q_l xi^2 ],

with explicit rationals q_l, so every probability p_{N,M} is an exact
polynomial in pi with rational coefficients.  Two independent arithmetic
routes are implemented: the factorized product above (primary) and a
gamma-function product with a sign prefactor (cross-check); both reduce to
the same coefficients, and the cross-check keeps its own arithmetic all
the way to numeric evaluation so transcription errors cannot hide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import NumericalError, OddN, ParityError
from .exactnum import (
    _MP_LOCK,
    HighPrecFloat,
    PiPolynomial,
    SqrtPiLaurent,
    evaluate_symbolic,
)

DEFAULT_PRECISION_BITS = 256

__all__ = [
    "FactorWeights",
    "GammaFactors",
    "GenPoly",
    "ProbabilityTable",
    "ExactMoments",
    "factor_weights",
    "gamma_factors",
    "generating_polynomial",
    "probability_table",
    "exact_moments",
    "crosscheck_gamma_form",
    "log_probability_none",
    "log_probability_all",
    "all_real_probability_symbolic",
    "log_generating_function",
]


def _require_even(N):
    N = int(N)
    if N < 2 or N % 2:
        raise OddN(f"the exact distribution is defined here for even N >= 2, got N={N}")
    return N


@dataclass(frozen=True)
class FactorWeights:
    """The rationals q_l of the factorized generating function."""

    N: int
    q: tuple  # Fraction, length N/2


def factor_weights(N):
    """Exact factor weights q_l, l = 0..N/2-1.

    q_l = N * C(N, N/2) * C(N-1, 2l) / 4**N; after reduction every
    denominator is a pure power of two, which keeps all downstream
    big-integer arithmetic cheap.
    """
    N = _require_even(N)
    m = N // 2
    den = 1 << (2 * N)
    scale = N * math.comb(N, m)
    q = tuple(Fraction(scale * math.comb(N - 1, 2 * l), den) for l in range(m))
    return FactorWeights(N, q)


@dataclass(frozen=True)
class GenPoly:
    """Expanded generating function: Z_N(xi) = sum_k c_k xi^(2k)."""

    N: int
    coefficients: tuple  # PiPolynomial, index k = 0..N/2


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _balanced_product(polys):
    if not polys:
        return [1]
    while len(polys) > 1:
        nxt = [
            _int_poly_mul(polys[i], polys[i + 1])
            for i in range(0, len(polys) - 1, 2)
        ]
        if len(polys) & 1:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def generating_polynomial(N):
    """Expand the factorized generating function in powers of xi^2.

    The product is taken in the shifted variable y = xi^2 - 1, where each
    factor is (1 + pi q_l y): the y-expansion collects the elementary
    symmetric functions of the q_l over a balanced product tree of integer
    polynomials, and the binomial shift back to xi^2 then gives every
    coefficient directly.  The expansion is verified to sum to exactly 1
    before returning.
    """
    fw = factor_weights(N)
    m = fw.N // 2
    D = 1 << (2 * fw.N)
    # numerators of q_l over the common power-of-two denominator D
    nums = [q.numerator << (2 * fw.N - _exp2(q.denominator)) for q in fw.q]
    tree = _balanced_product([[D, n] for n in nums])
    D_m = D ** m
    # e[k]: elementary symmetric function of the q_l (exact)
    e = [Fraction(tree[k], D_m) for k in range(m + 1)]

    coeff_maps = []
    for j in range(m + 1):
        c = {}
        for k in range(j, m + 1):
            ek = e[k]
            if not ek:
                continue
            v = math.comb(k, j) * ek
            if (k - j) & 1:
                v = -v
            c[k] = v
        coeff_maps.append(c)

    _verify_unit_sum(coeff_maps, 2 * fw.N * m, m)
    coeffs = tuple(PiPolynomial._raw(c) for c in coeff_maps)
    return GenPoly(fw.N, coeffs)


def _exp2(n):
    # n is a power of two
    return n.bit_length() - 1


def _verify_unit_sum(coeff_maps, total_exp, m):
    # sum of all coefficients must be exactly 1; accumulate integer
    # numerators over the common denominator 2**total_exp per pi-degree
    totals = [0] * (m + 1)
    for c in coeff_maps:
        for k, v in c.items():
            den = v.denominator
            e = den.bit_length() - 1
            # every denominator is a power of two dividing the common one
            if den & (den - 1) or e > total_exp:
                raise NumericalError("coefficient denominator escaped the 2-adic lattice")
            totals[k] += v.numerator << (total_exp - e)
    if totals[0] != 1 << total_exp or any(totals[k] for k in range(1, m + 1)):
        raise NumericalError("generating polynomial does not sum to 1")


@dataclass(frozen=True)
class ProbabilityTable:
    """Exact probabilities p_{N,M} for M = 0, 2, ..., N."""

    N: int
    entries: tuple  # (M, p_symbolic: PiPolynomial, p_numeric: HighPrecFloat)

    def probability(self, M):
        M = int(M)
        if M % 2 or not 0 <= M <= self.N:
            raise ParityError(
                f"M={M} is not an even count in [0, {self.N}]"
            )
        return self.entries[M // 2]

    def numeric_map(self):
        return {M: pn for M, _, pn in self.entries}


def probability_table(N, precision_bits=DEFAULT_PRECISION_BITS):
    gp = generating_polynomial(N)
    entries = tuple(
        (2 * k, c, evaluate_symbolic(c, precision_bits))
        for k, c in enumerate(gp.coefficients)
    )
    return ProbabilityTable(gp.N, entries)


@dataclass(frozen=True)
class ExactMoments:
    """Mean and variance of the real-eigenvalue count, exactly.

    The count is a sum of independent two-point variables: factor l
    contributes 2 with probability pi q_l, else 0.  Hence
    mean = 2 sum_l pi q_l and variance = 4 sum_l pi q_l (1 - pi q_l).
    """

    N: int
    mean_symbolic: PiPolynomial
    variance_symbolic: PiPolynomial
    mean_numeric: HighPrecFloat
    variance_numeric: HighPrecFloat


def exact_moments(N, precision_bits=DEFAULT_PRECISION_BITS):
    fw = factor_weights(N)
    s1 = sum(fw.q, Fraction(0))
    s2 = sum((q * q for q in fw.q), Fraction(0))
    mean = PiPolynomial({1: 2 * s1})
    var = PiPolynomial({1: 4 * s1, 2: -4 * s2})
    return ExactMoments(
        fw.N,
        mean,
        var,
        evaluate_symbolic(mean, precision_bits),
        evaluate_symbolic(var, precision_bits),
    )


# ---------------------------------------------------------------------------
# Independent gamma-product route.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GammaFactors:
    """Pieces of the gamma-product form of the generating function.

    Z_N(xi) = prefactor * prod_l (xi^2 alpha_l + beta_l), with the
    identities beta_l = beta_prime_l - alpha_l and
    prefactor * prod_l beta_prime_l = 1 holding exactly (the latter is
    the normalization Z_N(1) = 1 and fixes the sign).
    """

    N: int
    alpha: tuple  # SqrtPiLaurent
    beta: tuple  # SqrtPiLaurent
    beta_prime: tuple  # SqrtPiLaurent
    prefactor: SqrtPiLaurent


def _gamma_half_integer(n):
    """Gamma(n + 1/2) = sqrt(pi) (2n)! / (4**n n!) as an exact monomial."""
    return SqrtPiLaurent.monomial(
        Fraction(math.factorial(2 * n), (1 << (2 * n)) * math.factorial(n)), 1
    )


def gamma_factors(N):
    N = _require_even(N)
    m = N // 2
    g_np1_half = _gamma_half_integer(m)  # Gamma((N+1)/2)
    g_half_np1 = SqrtPiLaurent.constant(math.factorial(m))  # Gamma(N/2+1)
    g_half_np1_inv = g_half_np1.inverse()

    alpha = []
    beta = []
    beta_prime = []
    pi_sym = SqrtPiLaurent.monomial(Fraction(1), 2)
    sqrt_pi = SqrtPiLaurent.monomial(Fraction(1), 1)
    for l in range(m):
        d = N - 1 - 4 * l  # never zero: N-1 is odd
        a = Fraction(2, d) * pi_sym * g_np1_half * g_half_np1_inv
        bp = sqrt_pi * Fraction(2 * (1 << N) * math.factorial(2 * l) * math.factorial(N - 2 * l - 1), d * math.factorial(N))
        # beta from its own two-term display, not from bp - a
        b = Fraction(2, d) * sqrt_pi * (
            SqrtPiLaurent.constant(
                Fraction((1 << N) * math.factorial(2 * l) * math.factorial(N - 2 * l - 1), math.factorial(N))
            )
            - sqrt_pi * g_np1_half * g_half_np1_inv
        )
        if b != bp - a:
            raise NumericalError(
                f"gamma-route factor identity failed at l={l}; "
                "the factorized route remains authoritative"
            )
        alpha.append(a)
        beta.append(b)
        beta_prime.append(bp)

    pref = SqrtPiLaurent.constant(Fraction((-1) ** ((m * (m - 1) // 2) % 2), 1 << (N * (N - 1) // 2)))
    pref = pref * g_np1_half ** m * g_half_np1 ** m
    for s in range(1, N + 1):
        if s % 2 == 0:
            g = SqrtPiLaurent.constant(math.factorial(s // 2 - 1))
        else:
            g = _gamma_half_integer((s - 1) // 2)
        pref = pref * (g.inverse() ** 2)

    check = pref
    for bp in beta_prime:
        check = check * bp
    if check != 1:
        raise NumericalError(
            "gamma-route sign/normalization identity failed; "
            "the factorized route remains authoritative"
        )
    return GammaFactors(N, tuple(alpha), tuple(beta), tuple(beta_prime), pref)


def _laurent_poly_mul(a, b):
    out = [SqrtPiLaurent({}) for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai * bj
    return out


def gamma_form_coefficients(N):
    """Coefficients of xi^(2k) from the gamma-product route, as
    SqrtPiLaurent values (kept in this representation so the numeric
    cross-check exercises genuinely separate arithmetic)."""
    gf = gamma_factors(N)
    factors = [[b, a] for a, b in zip(gf.alpha, gf.beta)]
    while len(factors) > 1:
        nxt = [
            _laurent_poly_mul(factors[i], factors[i + 1])
            for i in range(0, len(factors) - 1, 2)
        ]
        if len(factors) & 1:
            nxt.append(factors[-1])
        factors = nxt
    return [gf.prefactor * c for c in factors[0]]


def crosscheck_gamma_form(N, precision_bits=DEFAULT_PRECISION_BITS):
    """Maximum absolute difference between the numeric coefficients of the
    two generating-function routes."""
    gp = generating_polynomial(N)
    other = gamma_form_coefficients(N)
    worst = mpmath.mpf(0)
    for c_primary, c_other in zip(gp.coefficients, other):
        a = evaluate_symbolic(c_primary, precision_bits)
        b = evaluate_symbolic(c_other, precision_bits)
        d = abs(a.value - b.value)
        if d > worst:
            worst = d
    return float(worst)


# ---------------------------------------------------------------------------
# Direct numeric paths that avoid the full expansion: the edge
# probabilities and the generating function on the positive axis only need
# the factor weights, so they stay cheap for N in the hundreds.
# ---------------------------------------------------------------------------


def _mpf_fraction(f):
    return mpmath.mpf(f.numerator) / f.denominator


def log_probability_none(N, precision_bits=DEFAULT_PRECISION_BITS):
    """log p_{N,0} = sum_l log(1 - pi q_l), as a HighPrecFloat."""
    fw = factor_weights(N)
    with _MP_LOCK, mpmath.workprec(precision_bits + 16):
        acc = mpmath.fsum(
            mpmath.log(1 - mpmath.pi * _mpf_fraction(q)) for q in fw.q
        )
    return HighPrecFloat(acc, precision_bits)


def log_probability_all(N, precision_bits=DEFAULT_PRECISION_BITS):
    """log p_{N,N} = sum_l log(pi q_l), as a HighPrecFloat."""
    fw = factor_weights(N)
    with _MP_LOCK, mpmath.workprec(precision_bits + 16):
        acc = mpmath.fsum(
            mpmath.log(mpmath.pi * _mpf_fraction(q)) for q in fw.q
        )
    return HighPrecFloat(acc, precision_bits)


def all_real_probability_symbolic(N):
    """p_{N,N} = prod_l pi q_l, exactly (a pi-monomial)."""
    fw = factor_weights(N)
    prod = Fraction(1)
    for q in fw.q:
        prod *= q
    return PiPolynomial({N // 2: prod})


def log_generating_function(N, xi, precision_bits=DEFAULT_PRECISION_BITS):
    """log Z_N(xi) for real xi > 0, from the factorized form."""
    fw = factor_weights(N)
    with _MP_LOCK, mpmath.workprec(precision_bits + 16):
        x = _mpf_fraction(xi) if isinstance(xi, Fraction) else mpmath.mpf(xi)
        if x <= 0:
            raise ValueError("xi must be positive; the xi=0 value is log p_{N,0}")
        xi2 = x * x
        acc = mpmath.fsum(
            mpmath.log(1 - (1 - xi2) * mpmath.pi * _mpf_fraction(q)) for q in fw.q
        )
    return HighPrecFloat(acc, precision_bits)
