import numpy as np
import pytest

from multiqsl import Lorentzian, MemorylessExponential, Tabulated


def random_pure(rng, n):
    v = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return v / np.linalg.norm(v)


def random_projector(rng, n):
    v = random_pure(rng, n)
    return np.outer(v, v.conj())


def haar_unitary(rng, d):
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def detuned_table(t_max=3.0, num=301):
    """Sampled coherence of an exponentially damped, detuned qubit."""
    t = np.linspace(0.0, t_max, num)
    return Tabulated(t, np.exp(-(0.5 + 0.7j) * t))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


MODELS = {
    "exp": MemorylessExponential(1.0),
    "exp3": MemorylessExponential(3.0),
    "lorentz_weak": Lorentzian(1.0, 50.0),
    "lorentz_critical": Lorentzian(25.0, 50.0),
    "lorentz_strong": Lorentzian(100.0, 50.0),
    "table": detuned_table(),
}


@pytest.fixture(params=sorted(MODELS))
def any_model(request):
    return MODELS[request.param]
