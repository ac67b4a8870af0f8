import numpy as np
import pytest

from glstat import _backend
from glstat import _enumerate_python


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pareto_draws(rng, shape, sigma=2.0, alpha=1.0):
    return sigma * (1.0 - rng.random(shape)) ** (-1.0 / alpha)


@pytest.fixture(params=["compiled", "python"])
def backend_core(request, monkeypatch):
    """Run a test against each enumeration backend in turn."""
    if request.param == "compiled":
        if _backend.compiled_core is None:
            pytest.skip("compiled core not built")
        chosen = _backend.compiled_core
    else:
        chosen = _enumerate_python
    import glstat.empirical_u
    import glstat.gm_pareto

    monkeypatch.setattr(glstat.empirical_u, "core", chosen)
    monkeypatch.setattr(glstat.gm_pareto, "core", chosen)
    return chosen
