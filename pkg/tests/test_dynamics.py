import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from multiqsl import dynamics as dyn
from multiqsl.dynamics import Lorentzian, MemorylessExponential, Regime, Tabulated
from multiqsl.errors import RangeError, SingularityError
from multiqsl.matcore import basis_index, validate_density

from conftest import MODELS, detuned_table, random_projector


def lorentzian_ode(gamma0, lam, t_end):
    """Independent oracle: integrate c'' + lam c' + (gamma0 lam / 2) c = 0."""
    sol = solve_ivp(lambda t, y: [-y[1], 0.5 * gamma0 * lam * y[0] - lam * y[1]],
                    (0.0, t_end), [1.0, 0.0], method="DOP853", rtol=1e-13, atol=1e-15)
    return sol.y[0, -1]


def test_coherence_starts_at_one(any_model):
    assert abs(complex(any_model.coherence(0.0)) - 1.0) < 1e-14


def test_exponential_half_life():
    assert dyn.population(MemorylessExponential(1.0), np.log(2.0)) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("gamma0, t", [(1.0, 1.0), (1.0, 0.05), (25.0, 0.4), (24.999, 0.4), (100.0, 0.3), (100.0, 1.0)])
def test_lorentzian_matches_ode(gamma0, t):
    expected = lorentzian_ode(gamma0, 50.0, t)
    assert complex(Lorentzian(gamma0, 50.0).coherence(t)).real == pytest.approx(expected, abs=1e-8)


def test_lorentzian_frozen_oracle_value():
    # solve_ivp DOP853 at rtol 1e-13 gave 0.6096653991212496
    assert complex(Lorentzian(1.0, 50.0).coherence(1.0)).real == pytest.approx(0.6096653991212496, abs=1e-8)


def test_lorentzian_critical_point():
    t = np.linspace(0, 0.5, 11)
    crit = Lorentzian(25.0, 50.0).coherence(t)
    np.testing.assert_allclose(crit, np.exp(-25 * t) * (1 + 25 * t), rtol=1e-12)
    for eps in (1e-7, -1e-7):
        near = Lorentzian(25.0 + eps, 50.0).coherence(t)
        np.testing.assert_allclose(near, crit, atol=1e-7)


def test_population_rate_vs_central_difference(any_model):
    for t in (0.05, 0.3, 0.9, 1.7):
        h = 1e-6 * max(1.0, t)
        fd = (dyn.population(any_model, t + h) - dyn.population(any_model, t - h)) / (2 * h)
        exact = dyn.population_rate(any_model, t)
        assert abs(exact - fd) <= 1e-6 * max(abs(exact), 1e-3)


def test_memory_regimes():
    assert dyn.memory_regime(MemorylessExponential(2.0)) is Regime.MEMORYLESS
    assert dyn.memory_regime(Lorentzian(10.0, 50.0)) is Regime.MEMORYLESS
    assert dyn.memory_regime(Lorentzian(30.0, 50.0)) is Regime.MEMORY
    assert dyn.memory_regime(detuned_table()) is Regime.MEMORYLESS
    t = np.linspace(0, 5, 200)
    assert dyn.memory_regime(Tabulated(t, np.cos(t))) is Regime.MEMORY


def test_first_coherence_zero():
    model = Lorentzian(100.0, 50.0)
    t0 = dyn.first_coherence_zero(model)
    assert abs(complex(model.coherence(t0))) < 1e-12
    assert np.all(np.abs(model.coherence(np.linspace(0, t0, 50)[:-1])) > 0)
    assert dyn.first_coherence_zero(Lorentzian(20.0, 50.0)) is None
    t = np.linspace(0, 3, 61)
    assert dyn.first_coherence_zero(Tabulated(t, np.cos(t))) == pytest.approx(np.pi / 2, abs=1e-3)
    with pytest.raises(SingularityError):
        dyn.decay_rates(model, t0)


def test_decay_rates_of_detuned_table():
    rates = dyn.decay_rates(detuned_table(), 1.0)
    assert rates.gamma == pytest.approx(-0.5, abs=1e-4)
    assert rates.delta == pytest.approx(-0.7, abs=1e-4)


def test_kraus_completeness(any_model):
    for t in np.linspace(0, 2.5, 11):
        m0, m1 = dyn.kraus_pair(any_model, t)
        total = m0.conj().T @ m0 + m1.conj().T @ m1
        assert np.abs(total - np.eye(2)).max() <= 1e-12


def test_single_qubit_excited_state():
    model = MemorylessExponential(1.0)
    rho0 = np.diag([1.0, 0.0])
    for t in (0.1, 0.7, 2.0):
        p = dyn.population(model, t)
        np.testing.assert_allclose(dyn.apply_channel(model, rho0, t, 1).matrix, np.diag([p, 1 - p]), atol=1e-15)
        drho = dyn.liouvillian_from_derivative(model, rho0, t, 1)
        assert drho[0, 0].real == pytest.approx(dyn.population_rate(model, t), rel=1e-13)


def test_ground_state_is_dark(any_model):
    for n in (1, 2, 3):
        rho0 = np.zeros((2**n, 2**n))
        rho0[-1, -1] = 1.0
        np.testing.assert_array_equal(dyn.apply_channel(any_model, rho0, 0.8, n).matrix, rho0)
        assert np.abs(dyn.liouvillian_from_derivative(any_model, rho0, 0.8, n)).max() == 0.0


def test_basis_labels_decay_independently():
    model = MemorylessExponential(1.0)
    p = dyn.population(model, 0.5)
    rho0 = np.zeros((4, 4))
    rho0[basis_index("10"), basis_index("10")] = 1.0
    out = dyn.apply_channel(model, rho0, 0.5, 2).matrix
    assert out[basis_index("10"), basis_index("10")] == pytest.approx(p)
    assert out[basis_index("00"), basis_index("00")] == pytest.approx(1 - p)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tensor_route_matches_kraus_sum(any_model, rng, n):
    for t in (0.2, 1.3):
        rho0 = random_projector(rng, n)
        fast = dyn.apply_channel(any_model, rho0, t, n).matrix
        np.testing.assert_allclose(fast, dyn.apply_channel_kraus(any_model, rho0, t, n), atol=1e-13)


_model_names = st.sampled_from(sorted(MODELS))


@settings(max_examples=200, deadline=None)
@given(_model_names, st.integers(1, 4), st.floats(0.0, 3.0), st.integers(0, 2**32 - 1))
def test_channel_output_is_density(name, n, t, seed):
    rho0 = random_projector(np.random.default_rng(seed), n)
    validate_density(dyn.apply_channel(MODELS[name], rho0, t, n))


@settings(max_examples=100, deadline=None)
@given(_model_names, st.integers(1, 4), st.floats(0.0, 3.0), st.integers(0, 2**32 - 1))
def test_generator_is_traceless(name, n, t, seed):
    rho0 = random_projector(np.random.default_rng(seed), n)
    drho = dyn.liouvillian_from_derivative(MODELS[name], rho0, t, n)
    assert abs(np.trace(drho)) <= 1e-10
    np.testing.assert_allclose(drho, drho.conj().T, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_superoperator_matches_derivative(any_model, rng, n):
    for t in np.linspace(0.01, 2.5, 9):
        if abs(complex(any_model.coherence(t))) <= 1e-6:
            continue
        rho0 = random_projector(rng, n)
        rho_t = dyn.apply_channel(any_model, rho0, t, n).matrix
        a = dyn.liouvillian_superop(any_model, rho_t, t, n)
        b = dyn.liouvillian_from_derivative(any_model, rho0, t, n)
        np.testing.assert_allclose(a, b, atol=1e-8)


def test_derivative_matches_finite_difference(rng):
    model = Lorentzian(100.0, 50.0)
    rho0 = random_projector(rng, 2)
    t, h = 0.4, 1e-6
    fd = (dyn.apply_channel(model, rho0, t + h, 2).matrix - dyn.apply_channel(model, rho0, t - h, 2).matrix) / (2 * h)
    np.testing.assert_allclose(dyn.liouvillian_from_derivative(model, rho0, t, 2), fd, atol=1e-6)


def test_tabulated_csv(tmp_path):
    t = np.linspace(0, 2, 41)
    c = np.exp(-(0.5 + 0.7j) * t)
    path = tmp_path / "c.csv"
    rows = "\n".join(f"{a:.17g},{b.real:.17g},{b.imag:.17g}" for a, b in zip(t, c))
    path.write_text("t,c_real,c_imag\n" + rows + "\n")
    model = Tabulated.from_csv(path)
    assert complex(model.coherence(1.0)) == pytest.approx(np.exp(-(0.5 + 0.7j)), abs=1e-4)
    with pytest.raises(RangeError):
        model.coherence(2.5)


def test_tabulated_validation():
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0], [0.9, 0.5])
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0, 0.5], [1.0, 0.5, 0.2])
    with pytest.raises(ValueError):
        Tabulated([0.0, 1.0], [1.0, 1.5])


def test_static_table_leaves_state_unchanged(rng):
    model = Tabulated([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])
    rho0 = random_projector(rng, 2)
    np.testing.assert_allclose(dyn.apply_channel(model, rho0, 1.5, 2).matrix, rho0, atol=1e-15)
    assert np.abs(dyn.liouvillian_from_derivative(model, rho0, 1.5, 2)).max() == 0.0


def test_model_parameter_checks():
    with pytest.raises(ValueError):
        MemorylessExponential(-1.0)
    with pytest.raises(ValueError):
        Lorentzian(0.0, 50.0)
    with pytest.raises(ValueError):
        dyn.population(MemorylessExponential(1.0), -0.1)
