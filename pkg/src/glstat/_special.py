"""Incomplete gamma, chi-square and normal utilities."""

import math
from functools import lru_cache

import numpy as np
from scipy import special as _sp

from ._errors import GLStatError

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 100_000


def _gamma_series(a, x):
    # P(a, x) by the power series, valid for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cont_frac(a, x):
    # Q(a, x) by the modified Lentz continued fraction, valid for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def regularized_lower_gamma(a, x):
    """Regularized lower incomplete gamma function P(a, x)."""
    if a <= 0:
        raise GLStatError(f"shape must be positive, got {a}")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_cont_frac(a, x))


def regularized_upper_gamma(a, x):
    if a <= 0:
        raise GLStatError(f"shape must be positive, got {a}")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cont_frac(a, x))


def chi_square_cdf(k, x):
    return regularized_lower_gamma(0.5 * k, 0.5 * x)


def chi_square_sf(k, x):
    return regularized_upper_gamma(0.5 * k, 0.5 * x)


def chi_square_pdf(k, x):
    if x <= 0:
        if k == 2 and x == 0:
            return 0.5
        return 0.0
    a = 0.5 * k
    return math.exp((a - 1.0) * math.log(x) - 0.5 * x - a * math.log(2.0) - math.lgamma(a))


def chi_square_quantile(k, p):
    """Inverse chi-square CDF by bracketed bisection on the incomplete gamma.

    Bisection runs until the bracket cannot be split further in double
    precision, so the result is as accurate as the CDF evaluation allows.
    """
    if k <= 0:
        raise GLStatError(f"degrees of freedom must be positive, got {k}")
    if not 0.0 < p < 1.0:
        raise GLStatError(f"probability must lie in (0, 1), got {p}")
    lo, hi = 0.0, max(1.0, float(k))
    while chi_square_cdf(k, hi) < p:
        lo, hi = hi, 2.0 * hi
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if chi_square_cdf(k, mid) < p:
            lo = mid
        else:
            hi = mid
    # pick the endpoint whose CDF is closest to p
    if abs(chi_square_cdf(k, lo) - p) < abs(chi_square_cdf(k, hi) - p):
        return lo
    return hi


@lru_cache(maxsize=None)
def chi_square_median(k):
    """Median M_k of the chi-square distribution with k degrees of freedom."""
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise GLStatError(f"degrees of freedom must be a positive integer, got {k}")
    return chi_square_quantile(int(k), 0.5)


def normal_cdf(z):
    return _sp.ndtr(z)


def normal_ppf(u):
    return _sp.ndtri(u)


def as_float_array(values):
    return np.ascontiguousarray(values, dtype=np.float64)
