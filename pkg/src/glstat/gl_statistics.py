"""Generalized L-statistics T(H_n) and the influence kernel A of their CLT."""

from dataclasses import dataclass, field
from functools import cached_property
import math
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate

from ._errors import DegenerateDensityError, GLStatError
from .empirical_u import EmpiricalUDist, quantile_rank

__all__ = [
    "WeightFunction",
    "CallableWeight",
    "GLSpec",
    "gl_statistic",
    "InfluenceKernelA",
    "influence_kernel_a",
    "sigma_squared_iid",
]


class WeightFunction:
    """Piecewise-polynomial weight J on [0, 1], zero outside ``[lo, hi]``.

    ``breaks`` are the piece boundaries ``lo = t_0 < ... < t_k = hi`` and
    ``coefs[i]`` holds the ascending power coefficients on piece i.
    Integrals are computed from the exact antiderivative.
    """

    def __init__(self, breaks, coefs):
        breaks = np.asarray(breaks, dtype=np.float64)
        if breaks.ndim != 1 or breaks.size < 2 or np.any(np.diff(breaks) <= 0):
            raise GLStatError("breaks must be strictly increasing with at least two entries")
        if breaks[0] < 0 or breaks[-1] > 1:
            raise GLStatError("weight support must lie within [0, 1]")
        if len(coefs) != breaks.size - 1:
            raise GLStatError("need one coefficient vector per piece")
        self.breaks = breaks
        self.coefs = [np.atleast_1d(np.asarray(c, dtype=np.float64)) for c in coefs]
        self._anti = [P.polyint(c) for c in self.coefs]
        # antiderivative value accumulated up to the start of each piece
        acc = [0.0]
        for i, a in enumerate(self._anti):
            lo, hi = breaks[i], breaks[i + 1]
            acc.append(acc[-1] + P.polyval(hi, a) - P.polyval(lo, a))
        self._acc = np.array(acc)

    @property
    def support(self):
        return float(self.breaks[0]), float(self.breaks[-1])

    @property
    def is_zero(self):
        return all(not np.any(c) for c in self.coefs)

    @classmethod
    def zero(cls):
        return cls([0.0, 1.0], [[0.0]])

    @classmethod
    def constant(cls, value=1.0, lo=0.0, hi=1.0):
        return cls([lo, hi], [[value]])

    @classmethod
    def trimmed(cls, lo, hi):
        """Uniform weight 1 / (hi - lo) on [lo, hi], e.g. the trimmed mean."""
        return cls([lo, hi], [[1.0 / (hi - lo)]])

    def _piece(self, t):
        return np.clip(np.searchsorted(self.breaks, t, side="right") - 1, 0, len(self.coefs) - 1)

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        inside = (t >= self.breaks[0]) & (t <= self.breaks[-1])
        idx = self._piece(t)
        for i, c in enumerate(self.coefs):
            sel = inside & (idx == i)
            if np.any(sel):
                out[sel] = P.polyval(t[sel], c)
        return float(out) if out.ndim == 0 else out

    def cumulative(self, t):
        """Integral of J from 0 to t, vectorized."""
        t = np.clip(np.asarray(t, dtype=np.float64), self.breaks[0], self.breaks[-1])
        idx = self._piece(t)
        out = np.empty_like(t)
        for i, a in enumerate(self._anti):
            sel = idx == i
            if np.any(sel):
                out[sel] = self._acc[i] + P.polyval(t[sel], a) - P.polyval(self.breaks[i], a)
        return out

    def integrate(self, a, b):
        ca, cb = self.cumulative(np.array([a, b]))
        return float(cb - ca)


class CallableWeight:
    """Arbitrary bounded weight on ``[lo, hi]`` integrated by adaptive quadrature."""

    def __init__(self, func, lo, hi, tol=1e-10):
        if not 0.0 <= lo < hi <= 1.0:
            raise GLStatError("weight support must be a subinterval of [0, 1]")
        self.func = func
        self.lo, self.hi = float(lo), float(hi)
        self.tol = tol
        self.breaks = np.array([self.lo, self.hi])

    @property
    def support(self):
        return self.lo, self.hi

    is_zero = False

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        vals = np.vectorize(lambda s: float(self.func(s)) if self.lo <= s <= self.hi else 0.0)(t)
        return float(vals) if vals.ndim == 0 else vals

    def integrate(self, a, b):
        a, b = max(a, self.lo), min(b, self.hi)
        if b <= a:
            return 0.0
        val, _ = integrate.quad(self.func, a, b, epsabs=self.tol, epsrel=self.tol, limit=200)
        return val

    def cumulative(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        order = np.argsort(t, kind="stable")
        out = np.empty_like(t)
        acc, prev = 0.0, 0.0
        for i in order:
            acc += self.integrate(prev, t[i])
            prev = max(prev, t[i])
            out[i] = acc
        return out


@dataclass(frozen=True)
class GLSpec:
    """Weight function J plus point masses (a_i, p_i)."""

    J: WeightFunction | CallableWeight = field(default_factory=WeightFunction.zero)
    point_masses: tuple = ()

    def __post_init__(self):
        pm = tuple((float(a), float(p)) for a, p in self.point_masses)
        for _, p in pm:
            if not 0.0 < p < 1.0:
                raise GLStatError(f"point-mass levels must lie in (0, 1), got {p}")
        object.__setattr__(self, "point_masses", pm)

    @classmethod
    def median(cls):
        return cls(WeightFunction.zero(), ((1.0, 0.5),))

    @classmethod
    def from_dict(cls, cfg):
        """Parse ``{"J": {"type": ..., "alpha": ..., "beta": ...}, "point_masses": [[a, p], ...]}``."""
        jcfg = dict(cfg.get("J", {"type": "zero"}))
        kind = jcfg.get("type", "zero")
        lo, hi = float(jcfg.get("alpha", 0.0)), float(jcfg.get("beta", 1.0))
        if kind == "zero":
            J = WeightFunction.zero()
        elif kind == "constant":
            J = WeightFunction.constant(float(jcfg.get("value", 1.0)), lo, hi)
        elif kind == "trimmed":
            J = WeightFunction.trimmed(lo, hi)
        else:
            raise GLStatError(f"unknown weight type {kind!r}")
        return cls(J, tuple(tuple(pm) for pm in cfg.get("point_masses", ())))

    def to_dict(self):
        J = self.J
        if isinstance(J, WeightFunction) and len(J.coefs) == 1 and J.coefs[0].size == 1:
            lo, hi = J.support
            value = float(J.coefs[0][0])
            if value == 0.0:
                jd = {"type": "zero"}
            else:
                jd = {"type": "constant", "value": value, "alpha": lo, "beta": hi}
        else:
            raise GLStatError("only constant weights are serializable")
        return {"J": jd, "point_masses": [list(pm) for pm in self.point_masses]}


def gl_statistic(dist: EmpiricalUDist, spec: GLSpec) -> float:
    """T(H_n) = sum_i [int_{(i-1)/N}^{i/N} J] H_n^{-1}(i/N) + sum_j a_j H_n^{-1}(p_j)."""
    N = dist.count
    total = 0.0
    if not spec.J.is_zero:
        lo, hi = spec.J.support
        grid = np.arange(N + 1, dtype=np.float64) / N
        # only cells meeting the support carry weight
        first = max(0, int(math.floor(lo * N)) - 1)
        last = min(N, int(math.ceil(hi * N)) + 1)
        cum = spec.J.cumulative(grid[first:last + 1])
        w = np.diff(cum)
        # H_n^{-1}(i/N) is the i-th order statistic
        total += math.fsum(w * dist.kernel_values[first:last])
    for a, p in spec.point_masses:
        total += a * dist.kernel_values[quantile_rank(p, N) - 1]
    return float(total)


@dataclass(frozen=True)
class InfluenceKernelA:
    spec: GLSpec
    law: object
    kernel: object

    @cached_property
    def _quantiles(self):
        out = []
        for a, p in self.spec.point_masses:
            xi = self.law.ppf(p)
            dens = self.law.pdf(xi)
            if not dens >= 1e-12:
                raise DegenerateDensityError(f"kernel density {dens} at the {p}-quantile is below 1e-12")
            out.append((a, p, xi, dens))
        return out

    def _ppf(self, t):
        if t <= 0.0:
            return self.law.support[0]
        if t >= 1.0:
            return self.law.support[1]
        return self.law.ppf(t)

    @cached_property
    def _y_range(self):
        lo, hi = self.spec.J.support
        return self._ppf(lo), self._ppf(hi)

    @cached_property
    def _constant_pieces(self):
        # (y_start, y_end, value) when J is piecewise constant, else None
        J = self.spec.J
        if not isinstance(J, WeightFunction) or any(c.size > 1 for c in J.coefs):
            return None
        return [
            (self._ppf(J.breaks[i]), self._ppf(J.breaks[i + 1]), float(c[0]))
            for i, c in enumerate(J.coefs)
        ]

    def _weight_on_y(self, y):
        return float(self.spec.J(self.law.cdf(y)))

    def _quad(self, f, a, b):
        val, _ = integrate.quad(f, a, b, epsabs=1e-11, epsrel=1e-10, limit=400)
        return val

    @cached_property
    def _centred(self):
        ylo, yhi = self._y_range
        return self._quad(lambda y: self.law.cdf(y) * self._weight_on_y(y), ylo, yhi)

    def _upper(self, start):
        # int_{start}^{yhi} J(H_F(y)) dy
        pieces = self._constant_pieces
        if pieces is not None:
            return sum(c * max(0.0, b - max(a, start)) for a, b, c in pieces if c)
        ylo, yhi = self._y_range
        start = min(max(start, ylo), yhi)
        return self._quad(self._weight_on_y, start, yhi) if start < yhi else 0.0

    def integral_term(self, v):
        """-int (1[v <= y] - H_F(y)) J(H_F(y)) dy for a kernel value v."""
        if self.spec.J.is_zero:
            return 0.0
        ylo, yhi = self._y_range
        if math.isfinite(ylo) and math.isfinite(yhi):
            return self._centred - self._upper(v)
        # unbounded range: integrate the centred integrand directly, split at v
        f = lambda y: ((1.0 if v <= y else 0.0) - self.law.cdf(y)) * self._weight_on_y(y)
        cut = min(max(v, ylo), yhi)
        return -(self._quad(f, ylo, cut) + self._quad(f, cut, yhi))

    def point_mass_term(self, v):
        return sum(a * (p - (1.0 if v <= xi else 0.0)) / dens for a, p, xi, dens in self._quantiles)

    def from_value(self, v):
        return self.integral_term(v) + self.point_mass_term(v)

    def __call__(self, *xs):
        return self.from_value(self.kernel(*xs))

    def bound(self):
        """Upper bound int |J(H_F(y))| dy + sum |a_i| / h_F(H_F^{-1}(p_i)) on |A|."""
        total = 0.0
        if not self.spec.J.is_zero:
            ylo, yhi = self._y_range
            total += self._quad(lambda y: abs(self._weight_on_y(y)), ylo, yhi)
        return total + sum(abs(a) / dens for a, _, _, dens in self._quantiles)


def influence_kernel_a(ik: InfluenceKernelA, x) -> float:
    return ik(*x)


def _values_to_a(ik, values):
    if ik.spec.J.is_zero:
        out = np.zeros_like(values)
        for a, p, xi, dens in ik._quantiles:
            out += a * (p - (values <= xi)) / dens
        return out
    return np.array([ik.from_value(v) for v in values])


def sigma_squared_iid(
    ik: InfluenceKernelA,
    sampler: Callable[[np.random.Generator, tuple], np.ndarray],
    reps: int,
    inner: int = 256,
    rng: np.random.Generator | None = None,
) -> tuple[float, float]:
    """Nested Monte-Carlo estimate of m^2 Var(E[A(Y_1..Y_m) | Y_1]).

    ``sampler(rng, shape)`` returns i.i.d. draws. Each outer draw x gets
    ``inner`` conditional replicates; the inner-noise contribution to the
    outer variance is subtracted. Returns ``(estimate, standard_error)``.
    """
    if reps < 1000:
        raise GLStatError("sigma_squared_iid needs at least 1000 outer replicates")
    if not ik.spec.point_masses and ik.spec.J.is_zero:
        return 0.0, 0.0
    rng = np.random.default_rng() if rng is None else rng
    m = ik.kernel.m
    x = np.asarray(sampler(rng, (reps,)), dtype=np.float64)
    if m == 1:
        a = _values_to_a(ik, ik.kernel.batch(x[:, None]))
        cond = a
        noise = np.zeros(reps)
    else:
        others = np.asarray(sampler(rng, (reps, inner, m - 1)), dtype=np.float64)
        rows = np.concatenate([np.broadcast_to(x[:, None, None], (reps, inner, 1)), others], axis=2)
        vals = ik.kernel.batch(rows.reshape(-1, m))
        a = _values_to_a(ik, vals).reshape(reps, inner)
        cond = a.mean(axis=1)
        noise = a.var(axis=1, ddof=1) / inner
    dev = (cond - cond.mean()) ** 2 * reps / (reps - 1) - noise
    est = m * m * float(dev.mean())
    se = m * m * float(dev.std(ddof=1)) / math.sqrt(reps)
    return est, se
