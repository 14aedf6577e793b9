import numpy as np
import pytest

import blindmix


def random_pair(rng, n, k):
    x = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
    h = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) / np.sqrt(2)
    return x, h


def test_qam_roundtrip():
    rng = np.random.default_rng(3)
    symbols = [int(v) for v in rng.integers(0, 16, size=24)]
    x = blindmix.ofdm_modulate(blindmix.qam16_modulate(symbols))
    # The demodulator applies the forward DFT internally.
    assert blindmix.qam16_demodulate(x) == symbols


def test_forward_ambiguity_invariance():
    ens = blindmix.MeasurementEnsemble("gaussian", L=64, N=6, K=4, s=1, seed=5)
    rng = np.random.default_rng(5)
    x, h = random_pair(rng, 6, 4)
    psi = 2.0 * np.exp(1j * 0.7)
    y1 = ens.forward_A(0, x, h)
    y2 = ens.forward_A(0, psi * x, h / psi)
    assert np.linalg.norm(y1 - y2) <= 1e-13 * np.linalg.norm(y1)


def test_forward_J_matches_forward_A():
    ens = blindmix.MeasurementEnsemble("gaussian", L=48, N=5, K=3, s=1, seed=9)
    rng = np.random.default_rng(9)
    x, h = random_pair(rng, 5, 3)
    w = np.concatenate([x, np.conj(h)])
    assert np.allclose(ens.forward_J(0, w), ens.forward_A(0, x, h), rtol=0, atol=1e-14)


def test_small_instance_recovery():
    ens = blindmix.MeasurementEnsemble("gaussian", L=128, N=8, K=8, s=2, seed=17)
    truth = blindmix.make_ground_truth(8, 8, 2, signal="gaussian", seed=17, trial=0)
    y = blindmix.synthesize_observation(ens, truth, sigma=0.0)
    init = blindmix.spectral_init(ens, y)
    factors, trace, converged = blindmix.rtr_run(ens, y, init, max_iters=200)
    estimates = [blindmix.lifted_matrix(w[:8], np.conj(w[8:])) for w in factors]
    truth_mats = [blindmix.lifted_matrix(x, h) for (x, h) in truth]
    assert blindmix.relative_error(estimates, truth_mats) <= 1e-3
    assert trace["f"][-1] < trace["f"][0]


def test_ensemble_json_roundtrip():
    ens = blindmix.MeasurementEnsemble("hadamard", L=64, N=6, K=4, s=2, seed=23)
    clone = blindmix.MeasurementEnsemble.load_json(ens.dump_json())
    rng = np.random.default_rng(23)
    x, h = random_pair(rng, 6, 4)
    assert np.array_equal(ens.forward_A(1, x, h), clone.forward_A(1, x, h))


def test_hadamard_size_validation():
    with pytest.raises(Exception):
        blindmix.MeasurementEnsemble("hadamard", L=1250, N=50, K=50, s=1, seed=1)
