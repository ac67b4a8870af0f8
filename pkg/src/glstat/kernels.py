"""Symmetric kernels and the analytic law of the GM kernel under Pareto margins."""

from dataclasses import dataclass, field
import math
from typing import Callable

import numpy as np

from ._errors import (
    DegenerateKernelError,
    GLStatError,
    InvalidDimensionError,
    KernelDomainError,
)
from ._special import chi_square_median, chi_square_pdf, chi_square_quantile, chi_square_sf

__all__ = [
    "Kernel",
    "KernelLaw",
    "hodges_lehmann_kernel",
    "mean_of_m_kernel",
    "identity_kernel",
    "gm_pareto_kernel",
    "gm_pareto_kernel_law",
    "kernel_from_name",
]


@dataclass(frozen=True)
class Kernel:
    """A symmetric function of ``m`` real arguments.

    ``func`` takes the arguments positionally. ``family`` and ``params``
    tag the built-in kernels so the enumeration layer can dispatch them to
    the compiled core; user kernels leave ``family`` as ``None`` and may
    supply ``vectorized``, which maps an ``(N, m)`` array to ``N`` values.
    """

    m: int
    func: Callable[..., float]
    name: str
    family: str | None = None
    params: dict = field(default_factory=dict, compare=False)
    vectorized: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.m < 1:
            raise InvalidDimensionError(f"kernel dimension must be >= 1, got {self.m}")

    def __call__(self, *xs):
        if len(xs) != self.m:
            raise InvalidDimensionError(f"{self.name} takes {self.m} arguments, got {len(xs)}")
        return self.func(*xs)

    eval = __call__

    def batch(self, rows):
        """Evaluate on every row of an ``(N, m)`` array."""
        rows = np.asarray(rows, dtype=np.float64)
        if rows.ndim != 2 or rows.shape[1] != self.m:
            raise InvalidDimensionError(f"expected rows of length {self.m}")
        if self.vectorized is not None:
            return np.asarray(self.vectorized(rows), dtype=np.float64)
        return np.array([self.func(*r) for r in rows.tolist()], dtype=np.float64)


def _check_dim(m, minimum=1):
    if isinstance(m, bool) or int(m) != m or m < minimum:
        raise InvalidDimensionError(f"kernel dimension must be an integer >= {minimum}, got {m}")
    return int(m)


def _sorted_sum(xs):
    # summing in sorted order makes the value exactly permutation invariant
    total = 0.0
    for v in sorted(xs):
        total += v
    return total


def _sorted_row_sum(rows):
    rows = np.sort(rows, axis=1)
    total = rows[:, 0].copy()
    for t in range(1, rows.shape[1]):
        total += rows[:, t]
    return total


def _sum_family(m, name, divisor, func):
    return Kernel(
        m, func, name, family="sum", params={"divisor": divisor},
        vectorized=lambda rows: _sorted_row_sum(rows) / divisor,
    )


def hodges_lehmann_kernel(m=2):
    """Generalized Hodges-Lehmann kernel ``(x_1 + ... + x_m) / 2``.

    The factor 1/2 is kept for every ``m``; see :func:`mean_of_m_kernel`
    for the average.
    """
    m = _check_dim(m)

    def hl(*xs):
        return _sorted_sum(xs) / 2.0

    return _sum_family(m, "hodges_lehmann", 2.0, hl)


def mean_of_m_kernel(m=2):
    m = _check_dim(m)

    def mean_m(*xs):
        return _sorted_sum(xs) / m

    return _sum_family(m, "mean_of_m", float(m), mean_m)


def identity_kernel():
    return _sum_family(1, "identity", 1.0, lambda x: x)


def gm_pareto_kernel(m=2):
    """Modified maximum-likelihood kernel of the GM tail-index estimator.

    h(x_1..x_m) = M_{2m-2} / (2m) / (mean(log x_i) - log min x_i), with
    M_{2m-2} the chi-square median. Depends on the arguments only through
    the ratios x_i / min x_i.
    """
    m = _check_dim(m, minimum=2)
    scale = chi_square_median(2 * m - 2) / (2 * m)

    def gm(*xs):
        arr = np.sort(np.asarray(xs, dtype=np.float64))
        if not np.all(arr > 0) or not np.all(np.isfinite(arr)):
            raise KernelDomainError("GM kernel needs finite, strictly positive arguments")
        if arr[0] == arr[-1]:
            raise DegenerateKernelError("GM kernel evaluated on equal arguments")
        lg = np.log(arr)
        total = 0.0
        for v in lg:
            total += float(v)
        d = total / m - float(lg[0])
        if not d > 0:
            raise DegenerateKernelError("GM kernel denominator is not positive")
        return scale / d

    def gm_rows(rows):
        rows = np.sort(rows, axis=1)
        if not np.all(rows > 0) or not np.all(np.isfinite(rows)):
            raise KernelDomainError("GM kernel needs finite, strictly positive arguments")
        if np.any(rows[:, 0] == rows[:, -1]):
            raise DegenerateKernelError("GM kernel evaluated on equal arguments")
        lg = np.log(rows)
        d = _sorted_row_sum(lg) / m - lg[:, 0]
        if not np.all(d > 0):
            raise DegenerateKernelError("GM kernel denominator is not positive")
        return scale / d

    return Kernel(m, gm, "gm_pareto", family="gm", params={"scale": scale}, vectorized=gm_rows)


_BY_NAME = {
    "hodges_lehmann": hodges_lehmann_kernel,
    "mean_of_m": mean_of_m_kernel,
    "gm_pareto": gm_pareto_kernel,
}


def kernel_from_name(name, m=None):
    """Kernel lookup used by configuration files."""
    if name == "identity":
        if m not in (None, 1):
            raise InvalidDimensionError("the identity kernel has dimension 1")
        return identity_kernel()
    try:
        factory = _BY_NAME[name]
    except KeyError:
        raise GLStatError(f"unknown kernel {name!r}") from None
    return factory(2 if m is None else m)


@dataclass(frozen=True)
class KernelLaw:
    """Distribution of a kernel value h(Y_1..Y_m) for independent Y_i."""

    cdf: Callable[[float], float]
    pdf: Callable[[float], float]
    ppf: Callable[[float], float]
    support: tuple[float, float]


def gm_pareto_kernel_law(m, alpha):
    """Law of the GM kernel under i.i.d. Pareto(sigma, alpha) margins.

    With W = 2 m alpha (mean log - log min) ~ chi2_{2m-2}, the kernel value is
    M alpha / W, so H(t) = P(W >= M alpha / t).
    """
    m = _check_dim(m, minimum=2)
    if not alpha > 0 or not math.isfinite(alpha):
        raise GLStatError(f"tail index must be positive, got {alpha}")
    k = 2 * m - 2
    med = chi_square_median(k)
    alpha = float(alpha)
    c = med * alpha

    def cdf(t):
        if t <= 0:
            return 0.0
        if math.isinf(t):
            return 1.0
        w = med * (alpha / t)
        if w == med:
            return 0.5
        return chi_square_sf(k, w)

    def pdf(t):
        if t <= 0 or math.isinf(t):
            return 0.0
        w = med * (alpha / t)
        return chi_square_pdf(k, w) * w / t

    def ppf(p):
        if not 0.0 < p < 1.0:
            raise GLStatError(f"probability must lie in (0, 1), got {p}")
        if p == 0.5:
            return alpha
        return c / chi_square_quantile(k, 1.0 - p)

    return KernelLaw(cdf=cdf, pdf=pdf, ppf=ppf, support=(0.0, math.inf))
