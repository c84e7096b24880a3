import numpy as np
import pytest

from mimozic.channel import ZicChannel, gain_logdet, rate_r2, rate_sum_joint
from mimozic.oracle import (
    GaussianJoint,
    decode_order_check,
    gaussian_mi,
    markov_condition,
    strong_mi_gap,
    zic_joint,
)

from conftest import I2, rand_matrix, rand_psd


def test_gaussian_mi_independent_is_zero():
    joint = GaussianJoint(np.diag([1.0, 2.0, 3.0]), {"x": (0, 1), "y": (1, 3)})
    assert gaussian_mi(joint, "x", "y") == pytest.approx(0.0, abs=1e-15)


def test_gaussian_mi_scalar_awgn():
    P = 3.0
    joint = GaussianJoint.linear({"x": [[P]], "z": [[1.0]]}, {"y": {"x": np.eye(1), "z": np.eye(1)}})
    assert gaussian_mi(joint, "x", "y") == pytest.approx(np.log(1 + P), abs=1e-14)


def test_gaussian_mi_singular_conditioning_raises():
    joint = GaussianJoint(np.ones((2, 2)), {"x": (0, 1), "y": (1, 2)})
    with pytest.raises(ValueError):
        gaussian_mi(joint, "x", "y")


def test_gaussian_joint_rejects_indefinite():
    with pytest.raises(ValueError):
        GaussianJoint(np.diag([1.0, -1.0]), {"x": (0, 2)})


def test_mi_ex1_two_paths(ex1):
    ch, _ = ex1
    joint = zic_joint(ch, I2, I2)
    direct = gaussian_mi(joint, "x2", "y1")
    # rate path: joint-decoding rate minus user 1's interference-free term
    via_rates = rate_sum_joint(ch, I2, I2) - gain_logdet(ch.H1, I2)
    # chain rule path: I(x1, x2; y1) - I(x1; y1 | x2)
    via_chain = gaussian_mi(joint, ["x1", "x2"], "y1") - gaussian_mi(joint, "x1", "y1", "x2")
    assert direct == pytest.approx(via_rates, abs=1e-9)
    assert direct == pytest.approx(via_chain, abs=1e-9)
    assert direct == pytest.approx(np.log(19.1 / 4), abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_gaussian_mi_symmetric_nonnegative(seed):
    rng = np.random.default_rng(1100 + seed)
    cplx = bool(seed % 2)
    n = 5
    Z = rand_matrix(rng, n, n + 2, cplx)
    C = Z @ Z.conj().T + 0.1 * np.eye(n)
    joint = GaussianJoint(C, {"x": (0, 2), "y": (2, 4), "w": (4, 5)})
    for given in ((), ("w",)):
        a = gaussian_mi(joint, "x", "y", given)
        b = gaussian_mi(joint, "y", "x", given)
        assert a == pytest.approx(b, abs=1e-10)
        assert a >= -1e-12


def test_markov_scalar():
    s, h, c = 2.0, 1.5, 0.7
    assert markov_condition([[s]], [[h]], [[h * c]], [[1.0]], [[c]]) == pytest.approx(0.0, abs=1e-15)


def test_markov_singular_noise_raises():
    with pytest.raises(ValueError):
        markov_condition(I2, I2, I2, np.zeros((2, 2)), I2)


@pytest.mark.parametrize("seed", range(20))
def test_markov_aligned_strong_instance(seed):
    rng = np.random.default_rng(1200 + seed)
    cplx = bool(seed % 2)
    F = rand_matrix(rng, 3, 2, cplx)
    A = rand_matrix(rng, 2, 3, cplx)
    A *= 0.9 / np.linalg.norm(A, 2)
    H2 = A @ F
    Sx = rand_psd(rng, 2, cplx)
    assert markov_condition(Sx, F, H2, np.eye(3), A.conj().T) <= 1e-10


@pytest.mark.parametrize("seed", range(20))
def test_markov_noisy_instance(seed):
    rng = np.random.default_rng(1300 + seed)
    cplx = bool(seed % 2)
    H2 = rand_matrix(rng, 3, 2, cplx)
    A = rand_matrix(rng, 3, 2, cplx)
    A *= 0.9 / np.linalg.norm(A, 2)
    F = A.conj().T @ H2
    Sx = rand_psd(rng, 2, cplx)
    assert markov_condition(Sx, H2, F, np.eye(3), A) <= 1e-10


@pytest.mark.parametrize("seed", range(10))
def test_markov_unitary_invariance(seed):
    rng = np.random.default_rng(1400 + seed)
    H, G = rand_matrix(rng, 3, 3, True), rand_matrix(rng, 2, 3, True)
    Suv = rand_matrix(rng, 3, 2, True)
    Su = rand_psd(rng, 3, True) + np.eye(3)
    Sx = rand_psd(rng, 3, True)
    U = np.linalg.qr(rand_matrix(rng, 3, 3, True))[0]
    base = markov_condition(Sx, H, G, Su, Suv)
    # x -> U x: covariance U Sx U^H, channels H U^H, G U^H
    rotated = markov_condition(U @ Sx @ U.conj().T, H @ U.conj().T, G @ U.conj().T, Su, Suv)
    assert rotated == pytest.approx(base, rel=1e-10, abs=1e-12)


def test_mi_gap_trivial_cases():
    rng = np.random.default_rng(5)
    F = rand_matrix(rng, 2, 2)
    ch = ZicChannel(rand_matrix(rng, 2, 2), F, F)
    S1 = rand_psd(rng, 2)
    assert strong_mi_gap(ch, I2, S1, rand_psd(rng, 2)) == pytest.approx(0.0, abs=1e-12)
    ch = ZicChannel(I2, F, 0.5 * F)
    assert strong_mi_gap(ch, 0.5 * I2, S1, np.zeros((2, 2))) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        strong_mi_gap(ch, I2, S1, I2)


@pytest.mark.parametrize("seed", range(10))
def test_mi_gap_half_scaled(seed):
    rng = np.random.default_rng(1500 + seed)
    F = rand_matrix(rng, 2, 2)
    ch = ZicChannel(rand_matrix(rng, 2, 2), F, 0.5 * F)
    assert strong_mi_gap(ch, 0.5 * I2, rand_psd(rng, 2), rand_psd(rng, 2)) >= -1e-9


def test_decode_order_ex1(ex1):
    ch, _ = ex1
    val = decode_order_check(ch, I2, I2)
    assert val == pytest.approx(np.log(19.1) - 2 * np.log(4), abs=1e-9)
    assert val == pytest.approx(0.177, abs=1e-3)


def test_decode_order_trivial_cases():
    rng = np.random.default_rng(6)
    ch = ZicChannel(I2, np.zeros((2, 2)), rand_matrix(rng, 2, 2))
    assert decode_order_check(ch, I2, I2) < 0
    ch = ZicChannel(I2, rand_matrix(rng, 2, 2), rand_matrix(rng, 2, 2))
    assert decode_order_check(ch, I2, np.zeros((2, 2))) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_decode_order_identity(seed):
    rng = np.random.default_rng(1600 + seed)
    cplx = bool(seed % 2)
    ch = ZicChannel(rand_matrix(rng, 2, 3, cplx), rand_matrix(rng, 2, 2, cplx), rand_matrix(rng, 3, 2, cplx))
    S1, S2 = rand_psd(rng, 3, cplx), rand_psd(rng, 2, cplx)
    expected = rate_sum_joint(ch, S1, S2) - gain_logdet(ch.H1, S1) - rate_r2(ch, S2)
    assert decode_order_check(ch, S1, S2) == pytest.approx(expected, abs=1e-9)
