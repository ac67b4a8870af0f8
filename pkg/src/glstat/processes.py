"""Data-generating processes with Pareto margins.

``ar1_pareto`` is a Gaussian-copula construction: a stationary Gaussian
AR(1) series Z_t with unit variance is mapped through the normal CDF and
the Pareto quantile function, so every X_t is exactly Pareto(sigma, alpha)
and rho is the autocorrelation of the latent series.
"""

from dataclasses import dataclass, asdict
import math

import numpy as np
from scipy.signal import lfilter

from ._errors import GLStatError
from ._special import (
    chi_square_cdf,
    chi_square_median,
    chi_square_quantile,
    normal_cdf,
    normal_ppf,
    regularized_lower_gamma,
)
from .empirical_u import Sample

__all__ = [
    "ParetoParams",
    "ProcessConfig",
    "pareto_cdf",
    "pareto_inverse",
    "chi_square_median",
    "chi_square_quantile",
    "chi_square_cdf",
    "regularized_lower_gamma",
    "normal_cdf",
    "normal_ppf",
    "make_rng",
    "generate",
]

KINDS = ("iid_pareto", "ar1_pareto")


@dataclass(frozen=True)
class ParetoParams:
    sigma: float = 2.0
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and self.alpha > 0):
            raise GLStatError(f"Pareto parameters must be positive, got {self}")


@dataclass(frozen=True)
class ProcessConfig:
    kind: str = "iid_pareto"
    pareto: ParetoParams = ParetoParams()
    rho: float = 0.0
    n: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GLStatError(f"unknown process kind {self.kind!r}; expected one of {KINDS}")
        if not -1.0 < self.rho < 1.0:
            raise GLStatError(f"AR(1) coefficient must lie in (-1, 1), got {self.rho}")
        if self.n < 1:
            raise GLStatError("n must be positive")
        if self.kind == "iid_pareto" and self.rho != 0.0:
            raise GLStatError("iid_pareto requires rho = 0")

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        pareto = d.pop("pareto", {})
        if not isinstance(pareto, ParetoParams):
            pareto = ParetoParams(**pareto)
        return cls(pareto=pareto, **d)

    def to_dict(self):
        return asdict(self)


def pareto_cdf(params, x):
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore"):
        out = np.where(x >= params.sigma, 1.0 - (params.sigma / x) ** params.alpha, 0.0)
    return float(out) if out.ndim == 0 else out


def pareto_inverse(params, u):
    u = np.asarray(u, dtype=np.float64)
    if np.any((u < 0) | (u >= 1)) or np.any(np.isnan(u)):
        raise GLStatError("Pareto quantile level must lie in [0, 1)")
    out = params.sigma * (1.0 - u) ** (-1.0 / params.alpha)
    return float(out) if out.ndim == 0 else out


def _pareto_from_survival(params, s):
    # X = F^{-1}(1 - s); working with s keeps precision in the upper tail
    return params.sigma * s ** (-1.0 / params.alpha)


def make_rng(seed, *stream):
    """Counter-based generator for the stream identified by ``(seed, *stream)``.

    Streams for different replicate indices are statistically independent,
    so replicate r always sees the same draws whatever the worker layout.
    """
    key = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(s) for s in stream)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def latent_ar1(rng, n, rho):
    """Stationary Gaussian AR(1) with unit marginal variance."""
    e = rng.standard_normal(n)
    e[1:] *= math.sqrt(1.0 - rho * rho)
    if rho == 0.0:
        return e
    return lfilter([1.0], [1.0, -rho], e)


def generate(config, rng=None):
    """Draw a Sample of length ``config.n``; uses ``make_rng(config.seed)`` by default."""
    rng = make_rng(config.seed) if rng is None else rng
    if config.kind == "iid_pareto":
        # 1 - U with U in [0, 1) lies in (0, 1]
        s = 1.0 - rng.random(config.n)
    else:
        z = latent_ar1(rng, config.n, config.rho)
        s = normal_cdf(-z)
    return Sample(_pareto_from_survival(config.pareto, s))
