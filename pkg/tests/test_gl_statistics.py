import itertools
import math

import numpy as np
import pytest
from scipy import integrate

from glstat import (
    DegenerateDensityError,
    GLSpec,
    GLStatError,
    InfluenceKernelA,
    KernelLaw,
    WeightFunction,
    build_empirical_udist,
    gl_statistic,
    gm_estimate,
    gm_pareto_kernel,
    gm_pareto_kernel_law,
    hodges_lehmann_kernel,
    identity_kernel,
    influence_kernel_a,
    sigma_squared_iid,
    u_statistic,
)
from glstat.gl_statistics import CallableWeight, _values_to_a
from glstat.processes import make_rng

from conftest import pareto_draws


def trimmed_mean(x, gamma):
    x = np.sort(x)
    n = len(x)
    k = int(math.floor(n * gamma))
    return float(np.mean(x[k:n - k]))


def hodges_lehmann_direct(x, m):
    vals = sorted(sum(c) / 2 for c in itertools.combinations(x, m))
    return vals[math.ceil(len(vals) / 2) - 1]


def test_examples():
    hl = gl_statistic(build_empirical_udist([1, 2, 3], hodges_lehmann_kernel(2)), GLSpec.median())
    assert hl == 2.0
    spec = GLSpec(WeightFunction.trimmed(0.25, 0.75))
    assert gl_statistic(build_empirical_udist([1, 2, 3, 100], identity_kernel()), spec) == pytest.approx(2.5, abs=1e-15)
    assert trimmed_mean([1, 2, 3, 100], 0.25) == 2.5


def test_reduction_laws(rng):
    const = GLSpec(WeightFunction.constant(1.0))
    for _ in range(100):
        n = int(rng.choice([20, 40, 60]))
        x = rng.standard_t(3, size=n)
        k = hodges_lehmann_kernel(int(rng.integers(1, 4)))
        assert gl_statistic(build_empirical_udist(x, k), const) == pytest.approx(u_statistic(x, k), abs=1e-9)
        gamma = float(rng.choice([0.1, 0.2, 0.25]))
        spec = GLSpec(WeightFunction.trimmed(gamma, 1 - gamma))
        got = gl_statistic(build_empirical_udist(x, identity_kernel()), spec)
        assert got == pytest.approx(trimmed_mean(x, gamma), abs=1e-9)
        small = x[:12]
        got = gl_statistic(build_empirical_udist(small, hodges_lehmann_kernel(2)), GLSpec.median())
        assert got == pytest.approx(hodges_lehmann_direct(small, 2), abs=1e-9)


def test_translation_equivariance(rng):
    spec = GLSpec.median()
    k = hodges_lehmann_kernel(2)
    for _ in range(50):
        x = rng.normal(size=15)
        c = float(rng.normal() * 10)
        base = gl_statistic(build_empirical_udist(x, k), spec)
        shifted = gl_statistic(build_empirical_udist(x + c, k), spec)
        assert shifted == pytest.approx(base + c, abs=1e-12)


def test_point_mass_monotone(rng):
    d = build_empirical_udist(rng.normal(size=20), hodges_lehmann_kernel(2))
    levels = np.linspace(0.01, 0.99, 60)
    vals = [gl_statistic(d, GLSpec(point_masses=((1.5, p),))) for p in levels]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_polynomial_and_callable_weights_agree(rng):
    d = build_empirical_udist(rng.normal(size=25), identity_kernel())
    poly = WeightFunction([0.1, 0.9], [[0.0, 2.0]])  # J(t) = 2t on [0.1, 0.9]
    call = CallableWeight(lambda t: 2 * t, 0.1, 0.9)
    assert gl_statistic(d, GLSpec(poly)) == pytest.approx(gl_statistic(d, GLSpec(call)), abs=1e-9)
    assert poly.integrate(0.0, 1.0) == pytest.approx(0.8, abs=1e-15)


def test_spec_validation_and_dict_round_trip():
    with pytest.raises(GLStatError):
        GLSpec(point_masses=((1.0, 1.0),))
    spec = GLSpec.from_dict({"J": {"type": "trimmed", "alpha": 0.1, "beta": 0.9}, "point_masses": [[1, 0.5]]})
    assert spec.J(0.5) == pytest.approx(1 / 0.8)
    assert spec.J(0.05) == 0.0 and spec.J(0.95) == 0.0
    assert spec.point_masses == ((1.0, 0.5),)
    again = GLSpec.from_dict(spec.to_dict())
    assert again.J(0.5) == spec.J(0.5)
    assert GLSpec.from_dict({"J": {"type": "zero"}}).J.is_zero
    with pytest.raises(GLStatError):
        GLSpec.from_dict({"J": {"type": "spline"}})


def test_gm_estimate_is_gl_statistic(rng):
    for _ in range(100):
        x = pareto_draws(rng, int(rng.integers(5, 30)))
        m = int(rng.integers(2, 5))
        if len(x) < m:
            continue
        gl = gl_statistic(build_empirical_udist(x, gm_pareto_kernel(m)), GLSpec.median())
        assert abs(gl - gm_estimate(x, m)) <= 1e-12 * abs(gl)


LAW = gm_pareto_kernel_law(2, 1.0)


def median_a():
    return InfluenceKernelA(GLSpec.median(), LAW, gm_pareto_kernel(2))


def test_median_influence_is_two_valued(rng):
    ik = median_a()
    h = 1.0 / (2 * LAW.pdf(1.0))
    vals = {round(influence_kernel_a(ik, row), 12) for row in pareto_draws(rng, (500, 2))}
    assert vals == {round(h, 12), round(-h, 12)}


def test_influence_centred_monte_carlo():
    rng = np.random.default_rng(5)
    ik = median_a()
    vals = ik.kernel.batch(pareto_draws(rng, (100_000, 2)))
    a = np.array([ik.from_value(v) for v in vals[:20_000]])
    a_all = _values_to_a(ik, vals)
    assert np.allclose(a_all[:20_000], a)
    assert abs(a_all.mean()) < 3 * a_all.std() / math.sqrt(a_all.size)


def test_trimmed_influence_centred_and_bounded():
    rng = np.random.default_rng(6)
    spec = GLSpec(WeightFunction.trimmed(0.2, 0.8), ((0.5, 0.3),))
    ik = InfluenceKernelA(spec, LAW, gm_pareto_kernel(2))
    vals = ik.kernel.batch(pareto_draws(rng, (20_000, 2)))
    a = np.array([ik.from_value(v) for v in vals])
    assert abs(a.mean()) < 3 * a.std() / math.sqrt(a.size)
    bound = ik.bound()
    rows = pareto_draws(rng, (10_000, 2))
    assert np.all(np.abs([ik.from_value(v) for v in ik.kernel.batch(rows)]) <= bound + 1e-12)


def test_integral_term_against_quadrature():
    # trimmed J on a finite y-range: closed-form pieces vs brute-force quadrature
    spec = GLSpec(WeightFunction.trimmed(0.1, 0.9))
    ik = InfluenceKernelA(spec, LAW, gm_pareto_kernel(2))
    lo, hi = LAW.ppf(0.1), LAW.ppf(0.9)
    for v in (0.05, lo, 0.7, 1.0, 2.5, hi, 40.0):
        f = lambda y: ((1.0 if v <= y else 0.0) - LAW.cdf(y)) * spec.J(LAW.cdf(y))
        pts = [p for p in (v,) if lo < p < hi]
        ref = -integrate.quad(f, lo, hi, points=pts or None, limit=400, epsabs=1e-12)[0]
        assert ik.integral_term(v) == pytest.approx(ref, abs=1e-8)


def test_degenerate_density():
    flat = KernelLaw(cdf=lambda t: 0.5, pdf=lambda t: 0.0, ppf=lambda p: 1.0, support=(0, 2))
    ik = InfluenceKernelA(GLSpec.median(), flat, gm_pareto_kernel(2))
    with pytest.raises(DegenerateDensityError):
        ik(2.0, 8.0)


def pareto_sampler(rng, shape):
    return pareto_draws(rng, shape)


def test_sigma_squared_zero_kernel():
    ik = InfluenceKernelA(GLSpec(), LAW, gm_pareto_kernel(2))
    assert sigma_squared_iid(ik, pareto_sampler, 1000) == (0.0, 0.0)
    with pytest.raises(GLStatError):
        sigma_squared_iid(median_a(), pareto_sampler, 10)


def test_sigma_squared_standard_error_rate():
    ik = median_a()
    _, se1 = sigma_squared_iid(ik, pareto_sampler, 2000, rng=make_rng(1, 1))
    _, se4 = sigma_squared_iid(ik, pareto_sampler, 8000, rng=make_rng(1, 2))
    # four times the replicates halves the standard error
    assert 0.5 * 0.7 <= se4 / se1 <= 0.5 * 1.3
    _, se2 = sigma_squared_iid(ik, pareto_sampler, 4000, rng=make_rng(1, 3))
    assert (1 / math.sqrt(2)) * 0.7 <= se2 / se1 <= (1 / math.sqrt(2)) * 1.3


@pytest.mark.slow
def test_sigma_squared_matches_clt_variance():
    ik = median_a()
    est, se = sigma_squared_iid(ik, pareto_sampler, 4000, rng=make_rng(7, 0))
    n, reps = 2000, 500
    z = np.array([
        math.sqrt(n) * (gm_estimate(pareto_draws(make_rng(7, 1, r), n), 2) - 1.0)
        for r in range(reps)
    ])
    emp = z.var(ddof=1)
    emp_se = emp * math.sqrt(2 / (reps - 1))
    assert abs(est - emp) < 3 * math.hypot(se, emp_se)
