import numpy as np
import pytest

from multiqsl.entangle import (McConfig, concurrence, family_envelope, mc_scan, sample_pure_state,
                               wootters_concurrence)
from multiqsl.matcore import PureState, basis_index


def brute_wootters(psi):
    """Concurrence from the spin-flipped overlap |<psi|sy x sy|psi*>|."""
    sy = np.array([[0, -1j], [1j, 0]])
    return abs(psi.conj() @ np.kron(sy, sy) @ psi.conj())


def test_samples_are_normalized_and_deterministic():
    cfg = McConfig(n_samples=50, seed=7)
    for i in (0, 13, 49):
        a = sample_pure_state(cfg, i).amplitudes
        assert np.linalg.norm(a) == pytest.approx(1.0, abs=1e-14)
        np.testing.assert_array_equal(a, sample_pure_state(cfg, i).amplitudes)
    assert not np.allclose(sample_pure_state(cfg, 0).amplitudes, sample_pure_state(McConfig(50, seed=8), 0).amplitudes)
    with pytest.raises(IndexError):
        sample_pure_state(cfg, 50)


def test_sample_does_not_depend_on_sample_count():
    a = sample_pure_state(McConfig(n_samples=10, seed=3), 4).amplitudes
    b = sample_pure_state(McConfig(n_samples=20000, seed=3), 4).amplitudes
    np.testing.assert_array_equal(a, b)


def test_real_sampling_is_isotropic():
    cfg = McConfig(n_samples=20000, seed=11)
    amps = np.array([sample_pure_state(cfg, i).amplitudes.real for i in range(cfg.n_samples)])
    # each squared amplitude has mean 1/4 and variance 1/8 - 1/16 = 3/80 on the real 3-sphere
    sigma = np.sqrt(3 / 80 / cfg.n_samples)
    assert np.all(np.abs((amps**2).mean(axis=0) - 0.25) < 3 * sigma)
    assert np.all(np.abs(amps.mean(axis=0)) < 3 * np.sqrt(0.25 / cfg.n_samples))


def test_complex_sampling_mode():
    a = sample_pure_state(McConfig(n_samples=3, seed=1, amplitudes="complex"), 2).amplitudes
    assert np.any(a.imag != 0)


def test_concurrence_examples():
    bell = PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert concurrence(bell) == pytest.approx(1.0, abs=1e-15)
    assert concurrence(PureState.basis("11")) == 0.0
    s = PureState(2, [0.6, 0, 0, 0.8])
    assert concurrence(s) == pytest.approx(0.96, abs=1e-15)
    assert wootters_concurrence(s.projector()) == pytest.approx(0.96, abs=1e-7)
    assert brute_wootters(s.amplitudes) == pytest.approx(0.96, abs=1e-15)


def test_concurrence_agrees_with_wootters(rng):
    for _ in range(20):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        s = PureState(2, v / np.linalg.norm(v))
        c = concurrence(s)
        assert c == pytest.approx(brute_wootters(s.amplitudes), abs=1e-12)
        assert c == pytest.approx(wootters_concurrence(s.projector()), abs=1e-6)


def test_concurrence_local_phase_invariance(rng):
    v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    v /= np.linalg.norm(v)
    phase_a, phase_b = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
    u = np.kron(np.diag([phase_a, 1.0]), np.diag([phase_b, 1.0]))
    assert concurrence(PureState(2, u @ v)) == pytest.approx(concurrence(PureState(2, v)), abs=1e-14)


def test_mixed_state_concurrence():
    rho = np.eye(4) / 4
    assert wootters_concurrence(rho) == 0.0
    bell = np.zeros(4)
    bell[[basis_index("01"), basis_index("10")]] = 1 / np.sqrt(2)
    werner = 0.8 * np.outer(bell, bell) + 0.2 * np.eye(4) / 4
    assert wootters_concurrence(werner) == pytest.approx(1.5 * 0.8 - 0.5, abs=1e-7)


def test_scan_is_deterministic_and_bounded():
    cfg = McConfig(n_samples=300, seed=5, p_tau=0.2)
    first = mc_scan(cfg)
    assert [r.sample_index for r in first] == list(range(300))
    assert first == mc_scan(cfg)
    assert min(r.ratio for r in first) >= 1 - 1e-6
    assert all(0 <= r.concurrence <= 1 for r in first)


def test_envelopes():
    cfg = McConfig(n_samples=1, p_tau=0.1)
    psi1 = family_envelope("psi1", cfg, n_alpha=21)
    np.testing.assert_allclose(psi1.ratio, 1.0, atol=1e-6)
    psi2 = family_envelope("psi2", cfg, n_alpha=21)
    assert 0 < psi2.alpha.min() and psi2.alpha.max() < 1
    assert np.all(np.diff(psi2.ratio) <= 1e-12)
    with pytest.raises(KeyError):
        family_envelope("ghz", cfg)


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(n_samples=0)
    with pytest.raises(ValueError):
        McConfig(p_tau=1.0)
    with pytest.raises(ValueError):
        McConfig(amplitudes="quaternion")
