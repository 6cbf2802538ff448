import numpy as np
import pytest

from specshrink import core, spaces, theta
from specshrink.errors import (
    NotSemisimple,
    PreconditionViolated,
    Singular,
    WellDefinednessDegraded,
)


def positive_definite(rng, n, lo=0.5, hi=2.0):
    q = spaces.haar_unitary(rng, n)
    s = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    return (q * s) @ q.conj().T


def invertible_normal(rng, n):
    q = spaces.haar_unitary(rng, n)
    lam = np.exp(rng.uniform(np.log(0.4), np.log(2.5), size=n)) \
        * np.exp(2j * np.pi * rng.uniform(size=n))
    return q @ np.diag(lam) @ q.conj().T


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

def test_decompose_normal_input():
    rng = np.random.default_rng(80)
    N = invertible_normal(rng, 3)
    dec = theta.theta_decompose(N)
    assert core.opnorm(dec.s - np.eye(3)) <= 1e-7
    assert core.opnorm(dec.normal - N) <= 1e-7
    assert dec.residual <= 1e-10


def test_decompose_worked_example():
    # diag(2,1) . rotation . diag(2,1)^-1; the positive factor is recovered
    # up to a scalar, so compare the involution output instead
    X = np.array([[0.0, -2.0], [0.5, 0.0]])
    dec = theta.theta_decompose(X)
    ratio = dec.s[0, 0] / dec.s[1, 1]
    assert abs(dec.s[0, 1]) <= 1e-12
    assert ratio.real == pytest.approx(2.0, abs=1e-10)
    assert np.allclose(theta.theta(X), [[0.0, -0.5], [2.0, 0.0]], atol=1e-12)


def test_decompose_recovers_constructed_factorization():
    rng = np.random.default_rng(81)
    S = positive_definite(rng, 4)
    N = invertible_normal(rng, 4)
    X = S @ N @ np.linalg.inv(S)
    dec = theta.theta_decompose(X)
    assert dec.residual <= 1e-7
    assert core.opnorm(dec.normal @ dec.normal.conj().T
                       - dec.normal.conj().T @ dec.normal) \
        <= 1e-7 * core.opnorm(dec.normal) ** 2
    assert np.min(np.linalg.eigvalsh(dec.s)) > 0


def test_decompose_error_paths():
    with pytest.raises(NotSemisimple):
        theta.theta_decompose(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(Singular):
        theta.theta_decompose(np.diag([1.0, 0.0]))
    P = np.array([[1.0, 1.0], [0.0, 1e-7]])
    bad = P @ np.diag([1.0, 2.0]) @ np.linalg.inv(P)
    with pytest.raises(WellDefinednessDegraded):
        theta.theta_decompose(bad)


# ---------------------------------------------------------------------------
# the involution
# ---------------------------------------------------------------------------

def test_theta_fixes_normals():
    rng = np.random.default_rng(82)
    N = invertible_normal(rng, 3)
    assert core.opnorm(theta.theta(N) - N) <= 1e-8 * (1 + core.opnorm(N))


def test_theta_worked_example():
    X = np.array([[0.0, -2.0], [0.5, 0.0]])
    assert np.allclose(theta.theta(X), [[0.0, -0.5], [2.0, 0.0]], atol=1e-12)


def test_theta_is_involutory_and_spectral():
    rng = np.random.default_rng(83)
    for n in (2, 3, 4):
        S = positive_definite(rng, n)
        N = invertible_normal(rng, n)
        X = S @ N @ np.linalg.inv(S)
        TX = theta.theta(X)
        cond = np.linalg.cond(S, 2)
        assert core.opnorm(theta.theta(TX) - X) <= 1e-6 * core.opnorm(X) * cond ** 2
        assert core.spectrum_match_distance(core.spectrum(TX), core.spectrum(X)) <= 1e-6


def test_theta_normal_perturbations_stay_small():
    # on normal matrices the map is the identity, so normal-to-normal
    # oscillation equals the perturbation size
    rng = np.random.default_rng(84)
    q = spaces.haar_unitary(rng, 3)
    lam = np.array([1.0, 2.0, 3.0])
    X0 = q @ np.diag(lam) @ q.conj().T
    for scale in (1e-2, 1e-3):
        bump = q @ np.diag(lam + scale * rng.standard_normal(3)) @ q.conj().T
        dev = core.opnorm(theta.theta(bump) - theta.theta(X0))
        assert dev <= 3 * scale + 1e-10


# ---------------------------------------------------------------------------
# well-definedness
# ---------------------------------------------------------------------------

def test_putnam_fuglede_trivial_and_double_decomposition():
    rng = np.random.default_rng(85)
    S = positive_definite(rng, 3)
    N = invertible_normal(rng, 3)
    assert theta.check_putnam_fuglede(S, S, N, N)
    X = S @ N @ np.linalg.inv(S)
    dec = theta.theta_decompose(X)
    assert theta.check_putnam_fuglede(S, dec.s, N, dec.normal)


def test_putnam_fuglede_guard():
    rng = np.random.default_rng(86)
    S = positive_definite(rng, 3)
    N = invertible_normal(rng, 3)
    M = invertible_normal(rng, 3)
    with pytest.raises(PreconditionViolated):
        theta.check_putnam_fuglede(S, S, N, M)


def test_theta_commutativity():
    rng = np.random.default_rng(87)
    q = spaces.haar_unitary(rng, 3)
    S = positive_definite(rng, 3)
    lam1 = np.exp(2j * np.pi * rng.uniform(size=3)) * np.array([0.5, 1.0, 2.0])
    lam2 = np.exp(2j * np.pi * rng.uniform(size=3)) * np.array([1.5, 0.7, 1.1])
    N1 = q @ np.diag(lam1) @ q.conj().T
    N2 = q @ np.diag(lam2) @ q.conj().T
    Sinv = np.linalg.inv(S)
    X, Y = S @ N1 @ Sinv, S @ N2 @ Sinv
    assert theta.theta_commutativity_check(X, Y)
    # polynomial images commute too
    assert theta.theta_commutativity_check(X, X @ X)
    with pytest.raises(PreconditionViolated):
        theta.theta_commutativity_check(X, X + np.triu(np.ones((3, 3)), 1))


def test_ads_identity():
    rng = np.random.default_rng(88)
    U = spaces.haar_unitary(rng, 3)
    assert theta.theta_ads_identity(np.eye(3), U)
    assert theta.theta_ads_identity(np.diag([2.0, 1.0, 1.0]), U, tol=1e-7)
    S = positive_definite(rng, 3)
    assert theta.theta_ads_identity(S, spaces.haar_unitary(rng, 3))


def test_theta_via_calculus_routes_agree():
    rng = np.random.default_rng(89)
    N = invertible_normal(rng, 3)
    assert core.opnorm(theta.theta_via_calculus(np.eye(3), N) - N) <= 1e-8
    d = np.diag([0.5, 1.0, 2.0])
    nd = np.diag([1.0, 1j, -1.0])
    assert core.opnorm(theta.theta_via_calculus(d, nd) - nd) <= 1e-10
    S = positive_definite(rng, 3)
    X = S @ N @ np.linalg.inv(S)
    cond = np.linalg.cond(S, 2)
    assert core.opnorm(theta.theta(X) - theta.theta_via_calculus(S, N)) \
        <= 1e-6 * cond ** 2 * (1 + core.opnorm(X))


def test_continuity_probe_scales():
    rng = np.random.default_rng(90)
    S = positive_definite(rng, 3)
    N = invertible_normal(rng, 3)
    X0 = S @ N @ np.linalg.inv(S)
    small = theta.theta_continuity_probe(X0, 1e-4, samples=20, seed=0)
    large = theta.theta_continuity_probe(X0, 1e-2, samples=20, seed=0)
    assert small.max_oscillation < large.max_oscillation
    assert small.max_oscillation <= 1e-2  # simple spectrum: locally Lipschitz-ish


def test_continuity_probe_repeated_spectrum_reports():
    rep = theta.theta_continuity_probe(np.diag([1.0, 1.0, 2.0]).astype(complex),
                                       1e-3, samples=20, seed=1)
    assert rep.samples == 20
    assert rep.max_oscillation >= 0.0
