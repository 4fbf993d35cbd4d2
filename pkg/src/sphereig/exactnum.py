"""Exact and high-precision numeric kernel.

Exact numbers are polynomials in pi (or Laurent polynomials in sqrt(pi))
with rational coefficients.  Because pi is transcendental, two such
polynomials represent the same real number if and only if they have the
same coefficient map, so representation equality is value equality and no
rounding ever happens on the symbolic side.

The floating side provides high-precision evaluation of those symbols,
a semi-infinite adaptive quadrature that tolerates an integrable
singularity at the origin, and bracketed 1-D minimization/root-finding.
"""

from __future__ import annotations

import heapq
import math
import numbers
import threading
from fractions import Fraction

import mpmath
from scipy.optimize import brentq, fminbound

from .errors import BadBracket, NonConvergence, NoSignChange

# Exact rational arithmetic: fractions.Fraction already guarantees lowest
# terms and a positive denominator, which is the whole contract.
BigRational = Fraction

__all__ = [
    "BigRational",
    "PiPolynomial",
    "SqrtPiLaurent",
    "HighPrecFloat",
    "evaluate_symbolic",
    "integrate_semiaxis",
    "minimize_scalar",
    "find_root_bracketed",
]


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, numbers.Rational):
        return Fraction(v)
    raise TypeError(f"expected a rational coefficient, got {type(v).__name__}")


class PiPolynomial:
    """Exact real number sum_k c_k * pi**k with rational c_k and k >= 0.

    Immutable.  Zero coefficients are never stored, so the coefficient
    map is canonical and ``==`` decides value equality.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, v in dict(coeffs).items():
                k = int(k)
                if k < 0:
                    raise ValueError("pi-degree must be non-negative")
                v = _as_fraction(v)
                if v:
                    c[k] = v
        self._c = c

    @classmethod
    def _raw(cls, coeffs):
        # internal: trusted dict of degree -> nonzero Fraction, not copied
        self = object.__new__(cls)
        self._c = coeffs
        return self

    @classmethod
    def constant(cls, value):
        return cls({0: value})

    @classmethod
    def pi_times(cls, value, power=1):
        """value * pi**power as a one-term polynomial."""
        return cls({power: value})

    @property
    def coeffs(self):
        """Degree -> coefficient mapping (a defensive copy)."""
        return dict(self._c)

    def coefficient(self, k):
        return self._c.get(k, Fraction(0))

    def degree(self):
        """Largest stored pi-power, or -1 for the zero polynomial."""
        return max(self._c) if self._c else -1

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def _coerce(self, other):
        if isinstance(other, PiPolynomial):
            return other
        if isinstance(other, numbers.Rational):
            return PiPolynomial({0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for k, v in o._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return PiPolynomial._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return PiPolynomial._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Rational) and not isinstance(other, PiPolynomial):
            f = _as_fraction(other)
            if not f:
                return PiPolynomial._raw({})
            return PiPolynomial._raw({k: v * f for k, v in self._c.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = {}
        for k1, v1 in self._c.items():
            for k2, v2 in o._c.items():
                k = k1 + k2
                s = c.get(k, 0) + v1 * v2
                if s:
                    c[k] = s
                else:
                    c.pop(k, None)
        return PiPolynomial._raw(c)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative powers are not representable")
        out = PiPolynomial({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, PiPolynomial):
            return self._c == other._c
        if isinstance(other, numbers.Rational):
            f = Fraction(other)
            if not f:
                return not self._c
            return self._c == {0: f}
        return NotImplemented

    def __hash__(self):
        if not self._c:
            return hash(Fraction(0))
        if set(self._c) == {0}:
            return hash(self._c[0])
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "PiPolynomial(0)"
        parts = [f"{v}*pi^{k}" if k else f"{v}" for k, v in sorted(self._c.items())]
        return "PiPolynomial(" + " + ".join(parts) + ")"


class SqrtPiLaurent:
    """Exact real number sum_d c_d * sqrt(pi)**d, d any integer.

    Negative powers of sqrt(pi) are allowed; conversion to PiPolynomial
    exists exactly when every stored degree is even and non-negative.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for d, v in dict(coeffs).items():
                d = int(d)
                v = _as_fraction(v)
                if v:
                    c[d] = v
        self._c = c

    @classmethod
    def _raw(cls, coeffs):
        self = object.__new__(cls)
        self._c = coeffs
        return self

    @classmethod
    def constant(cls, value):
        return cls({0: value})

    @classmethod
    def monomial(cls, value, degree):
        """value * sqrt(pi)**degree."""
        return cls({degree: value})

    @classmethod
    def from_pi_polynomial(cls, p):
        return cls({2 * k: v for k, v in p.coeffs.items()})

    def to_pi_polynomial(self):
        c = {}
        for d, v in self._c.items():
            if d < 0 or d % 2:
                raise ValueError(
                    f"degree {d} in sqrt(pi) has no pi-polynomial image"
                )
            c[d // 2] = v
        return PiPolynomial._raw(c)

    @property
    def coeffs(self):
        return dict(self._c)

    def coefficient(self, d):
        return self._c.get(d, Fraction(0))

    def is_zero(self):
        return not self._c

    def is_monomial(self):
        return len(self._c) == 1

    def inverse(self):
        """Exact reciprocal; defined for monomials only."""
        if len(self._c) != 1:
            raise ValueError("only monomials have a representable inverse")
        (d, v), = self._c.items()
        return SqrtPiLaurent._raw({-d: 1 / v})

    def _coerce(self, other):
        if isinstance(other, SqrtPiLaurent):
            return other
        if isinstance(other, PiPolynomial):
            return SqrtPiLaurent.from_pi_polynomial(other)
        if isinstance(other, numbers.Rational):
            return SqrtPiLaurent({0: other})
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for d, v in o._c.items():
            s = c.get(d, 0) + v
            if s:
                c[d] = s
            else:
                c.pop(d, None)
        return SqrtPiLaurent._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return SqrtPiLaurent._raw({d: -v for d, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Rational) and not isinstance(
            other, (SqrtPiLaurent, PiPolynomial)
        ):
            f = _as_fraction(other)
            if not f:
                return SqrtPiLaurent._raw({})
            return SqrtPiLaurent._raw({d: v * f for d, v in self._c.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        c = {}
        for d1, v1 in self._c.items():
            for d2, v2 in o._c.items():
                d = d1 + d2
                s = c.get(d, 0) + v1 * v2
                if s:
                    c[d] = s
                else:
                    c.pop(d, None)
        return SqrtPiLaurent._raw(c)

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = SqrtPiLaurent({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, SqrtPiLaurent):
            return self._c == other._c
        if isinstance(other, PiPolynomial):
            return self._c == {2 * k: v for k, v in other.coeffs.items()}
        if isinstance(other, numbers.Rational):
            f = Fraction(other)
            if not f:
                return not self._c
            return self._c == {0: f}
        return NotImplemented

    def __hash__(self):
        if not self._c:
            return hash(Fraction(0))
        if set(self._c) == {0}:
            return hash(self._c[0])
        return hash(frozenset(self._c.items()))

    def __repr__(self):
        if not self._c:
            return "SqrtPiLaurent(0)"
        parts = [f"{v}*s^{d}" if d else f"{v}" for d, v in sorted(self._c.items())]
        return "SqrtPiLaurent(" + " + ".join(parts) + ")"


class HighPrecFloat:
    """An mpmath float tagged with the precision it was computed at.

    ``value`` is exact once created (mpf objects are immutable binary
    floats); ``precision_bits`` records the accuracy claim P of the
    producing computation, see evaluate_symbolic.
    """

    __slots__ = ("value", "precision_bits")

    def __init__(self, value, precision_bits):
        self.value = value
        self.precision_bits = int(precision_bits)

    def __float__(self):
        return float(self.value)

    @staticmethod
    def _other_value(other):
        if isinstance(other, HighPrecFloat):
            return other.value
        if isinstance(other, (int, float, Fraction, mpmath.mpf)):
            return other
        return None

    def __eq__(self, other):
        v = self._other_value(other)
        if v is None:
            return NotImplemented
        return self.value == v

    def __lt__(self, other):
        v = self._other_value(other)
        if v is None:
            return NotImplemented
        return self.value < v

    def __le__(self, other):
        v = self._other_value(other)
        if v is None:
            return NotImplemented
        return self.value <= v

    def __hash__(self):
        return hash(self.value)

    def decimal(self, digits):
        """Decimal string with `digits` significant digits, truncated
        toward zero (never rounded up), exponent notation as needed."""
        return decimal_string(self.value, digits)

    def __repr__(self):
        return f"HighPrecFloat({mpmath.nstr(self.value, 20)}, bits={self.precision_bits})"


# mpmath's working precision is process-global; every block that changes
# it must hold this lock or concurrent evaluations would corrupt each
# other's precision.
_MP_LOCK = threading.Lock()


def decimal_string(x, digits):
    """Truncating (round-toward-zero) decimal representation of x.

    Keeps `digits` significant digits.  Truncation rather than rounding
    makes printed prefixes of a value stable as `digits` grows.
    """
    digits = int(digits)
    if digits < 1:
        raise ValueError("need at least one digit")
    with _MP_LOCK:
        x = mpmath.mpf(x) if not isinstance(x, mpmath.mpf) else x
        if mpmath.isnan(x):
            return "nan"
        if mpmath.isinf(x):
            return "inf" if x > 0 else "-inf"
        if x == 0:
            return "0"
        sign = "-" if x < 0 else ""
        ax = abs(x)
        # scale to an integer carrying `digits` significant digits, floor it;
        # the exponent guess from log10 is corrected if rounding put it off
        e = int(mpmath.floor(mpmath.log10(ax)))
        with mpmath.workprec(max(10 * digits + 64, 500)):
            ten = mpmath.mpf(10)
            scaled = int(mpmath.floor(ax * ten ** (digits - 1 - e)))
            while scaled >= 10 ** digits:
                e += 1
                scaled = int(mpmath.floor(ax * ten ** (digits - 1 - e)))
            while scaled < 10 ** (digits - 1):
                e -= 1
                scaled = int(mpmath.floor(ax * ten ** (digits - 1 - e)))
        mant = str(scaled).rstrip("0") or "0"
        if len(mant) > 1:
            mant = mant[0] + "." + mant[1:]
    if -4 <= e < digits:
        return sign + _positional(mant, e)
    return f"{sign}{mant}e{'+' if e >= 0 else '-'}{abs(e):02d}"


def _positional(mant, e):
    digits_only = mant.replace(".", "")
    if e >= 0:
        if e + 1 >= len(digits_only):
            return digits_only + "0" * (e + 1 - len(digits_only))
        return digits_only[: e + 1] + "." + digits_only[e + 1 :]
    return "0." + "0" * (-e - 1) + digits_only


_EVAL_GUARD_BITS = 16


def evaluate_symbolic(value, precision_bits=256):
    """Evaluate an exact symbolic number to a HighPrecFloat.

    Accepts PiPolynomial, SqrtPiLaurent, BigRational/Fraction, or int.
    Total on those types.  The relative error of the result is below
    2**(-precision_bits + 2), i.e. guard g = 2 in the bound 2**(-P + g):
    when the terms of an alternating sum cancel well below their own
    magnitude, the working precision is escalated until the final value
    still carries P good bits.
    """
    P = int(precision_bits)
    if P < 53:
        raise ValueError("precision_bits must be at least 53")
    if isinstance(value, (int, Fraction)):
        with _MP_LOCK, mpmath.workprec(P + _EVAL_GUARD_BITS):
            if isinstance(value, int):
                v = mpmath.mpf(value)
            else:
                v = mpmath.mpf(value.numerator) / value.denominator
            return HighPrecFloat(v, P)
    if isinstance(value, PiPolynomial):
        items = sorted(value.coeffs.items())
        use_sqrt = False
    elif isinstance(value, SqrtPiLaurent):
        items = sorted(value.coeffs.items())
        use_sqrt = True
    else:
        raise TypeError(f"cannot evaluate {type(value).__name__}")
    if not items:
        return HighPrecFloat(mpmath.mpf(0), P)
    max_deg = max(abs(d) for d, _ in items)
    guard = _EVAL_GUARD_BITS + (len(items) * (max_deg + 2)).bit_length()
    extra = 0
    for _ in range(8):
        with _MP_LOCK, mpmath.workprec(P + guard + extra):
            base = mpmath.sqrt(mpmath.pi) if use_sqrt else mpmath.pi
            terms = []
            for d, c in items:
                t = (mpmath.mpf(c.numerator) / c.denominator) * (base ** d)
                terms.append(t)
            acc = mpmath.fsum(terms)
            scale = mpmath.fsum(map(abs, terms))
            if acc != 0:
                # bits lost to cancellation; accept only if the current
                # escalation already covers them (the fixed guard absorbs
                # the per-term rounding)
                lost = int(mpmath.mag(scale) - mpmath.mag(acc))
                if lost <= extra + 14:
                    return HighPrecFloat(+acc, P)
                extra = lost + 16
            else:
                extra = max(64, 2 * extra)
    raise NonConvergence(
        "symbolic evaluation did not stabilize under cancellation escalation"
    )


# ---------------------------------------------------------------------------
# Semi-infinite quadrature.
#
# Gauss-Kronrod 15(7) on panels of the transformed axis u in [0,1),
# t = u/(1-u).  The node set never touches a panel endpoint, so integrands
# with a logarithmic singularity at t=0 are sampled but never evaluated at
# the singular point.  Panels are refined globally worst-first.
# ---------------------------------------------------------------------------

_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
)
_WGK = (
    0.022935322010529225,
    0.06309209262997855,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
)
_WGK_CENTER = 0.20948214108472783
_WG = (
    0.1294849661688697,
    0.27970539148927664,
    0.3818300505051189,
)
_WG_CENTER = 0.41795918367346935


def _gk15(g, a, b):
    """(Kronrod value, |Kronrod - Gauss| error proxy) for int_a^b g."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = g(c)
    resk = _WGK_CENTER * fc
    resg = _WG_CENTER * fc
    for j in range(7):
        dx = h * _XGK[j]
        f1 = g(c - dx)
        f2 = g(c + dx)
        s = f1 + f2
        resk += _WGK[j] * s
        if j & 1:
            resg += _WG[j >> 1] * s
    return resk * h, abs(resk - resg) * h


def _seed_panels():
    # geometric seed panels toward u=0 (possible integrand singularity at
    # t=0) and u=1 (the t -> infinity tail); worst-first bisection deepens
    # either end as far as the tolerance actually requires
    edges = [0.0]
    for k in range(8, 0, -1):
        edges.append(2.0 ** -k)
    for k in range(2, 7):
        edges.append(1.0 - 2.0 ** -k)
    edges.append(1.0)
    return edges


_SEED_EDGES = _seed_panels()


def integrate_semiaxis(f, tol, max_evals=600_000):
    """Adaptive integral of f over [0, infinity) to absolute accuracy tol.

    The integrand may have an integrable (e.g. logarithmic) singularity
    at 0; it is never evaluated exactly at 0.  Raises NonConvergence if
    the evaluation budget is exhausted before the internal error estimate
    drops below tol/2.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")

    def g(u):
        om = 1.0 - u
        if om <= 0.0:
            # t beyond 1/eps; any integrand this kernel can certify has
            # decayed to nothing there
            return 0.0
        t = u / om
        return f(t) / (om * om)

    heap = []  # (-err, lo, hi, value)
    evals = 0
    for lo, hi in zip(_SEED_EDGES, _SEED_EDGES[1:]):
        val, err = _gk15(g, lo, hi)
        evals += 15
        heap.append((-err, lo, hi, val))
    heapq.heapify(heap)

    target = 0.5 * tol
    while True:
        total_err = math.fsum(-item[0] for item in heap)
        if total_err <= target:
            break
        if evals >= max_evals:
            raise NonConvergence(
                f"semi-axis quadrature: error estimate {total_err:.3e} > "
                f"target {target:.3e} after {evals} evaluations"
            )
        neg_err, lo, hi, _ = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            # panel at floating-point resolution; cannot refine further
            raise NonConvergence(
                f"semi-axis quadrature: panel [{lo}, {hi}] not refinable, "
                f"residual estimate {-neg_err:.3e}"
            )
        v1, e1 = _gk15(g, lo, mid)
        v2, e2 = _gk15(g, mid, hi)
        evals += 30
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
    return math.fsum(item[3] for item in heap)


_PROBE_POINTS = 33


def minimize_scalar(f, bracket, tol=1e-10):
    """Minimum of f on the open bracket (lo, hi) -> (argmin, f(argmin)).

    A coarse probe grid first checks that the minimum is interior; if the
    smallest probe sits strictly at an end of the grid the bracket does
    not enclose the minimum and BadBracket is raised.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BadBracket(f"empty bracket ({lo}, {hi})")
    n = _PROBE_POINTS
    xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
    fs = [f(x) for x in xs]
    i = min(range(n), key=fs.__getitem__)
    if (i == 0 and fs[0] < fs[1]) or (i == n - 1 and fs[-1] < fs[-2]):
        raise BadBracket(
            f"f decreases into the bracket endpoint {xs[i]}; "
            "no interior minimum enclosed"
        )
    xopt, fval, ierr, _ = fminbound(f, lo, hi, xtol=tol, maxfun=1000, full_output=True)
    if ierr:
        raise NonConvergence("bounded minimization did not converge")
    return float(xopt), float(fval)


def find_root_bracketed(g, lo, hi, tol=1e-12):
    """Root of g in [lo, hi] with a required sign change at the ends."""
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise NoSignChange(f"empty bracket [{lo}, {hi}]")
    glo = g(lo)
    ghi = g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if math.copysign(1.0, glo) == math.copysign(1.0, ghi):
        raise NoSignChange(
            f"g({lo}) = {glo:.6g} and g({hi}) = {ghi:.6g} have the same sign"
        )
    root, res = brentq(g, lo, hi, xtol=tol, maxiter=200, full_output=True)
    if not res.converged:
        raise NonConvergence("bracketed root iteration did not converge")
    return float(root)
