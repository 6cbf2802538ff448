import numpy as np
import pytest

import oracles
from specshrink import calculus, core, spaces
from specshrink.errors import AmbiguousClustering, EqualEigenvalues, NotSemisimple


def triangular(l1, l2, a):
    return np.array([[l1, a], [0.0, l2]], dtype=complex)


# ---------------------------------------------------------------------------
# spectral idempotents
# ---------------------------------------------------------------------------

def test_idempotents_diagonal_with_multiplicity():
    dec = calculus.spectral_idempotents(np.diag([1.0, 1.0, 2.0]))
    by_val = {round(l.real): E for l, E in dec.pairs}
    assert np.allclose(by_val[1], np.diag([1.0, 1.0, 0.0]), atol=1e-12)
    assert np.allclose(by_val[2], np.diag([0.0, 0.0, 1.0]), atol=1e-12)


def test_idempotents_triangular_closed_form():
    l1, l2, a = 2.0, -1.0, 1.5
    dec = calculus.spectral_idempotents(triangular(l1, l2, a))
    by_val = {round(l.real): E for l, E in dec.pairs}
    expected = np.array([[1.0, a / (l1 - l2)], [0.0, 0.0]])
    assert np.allclose(by_val[2], expected, atol=1e-10)
    assert np.allclose(by_val[-1], np.eye(2) - expected, atol=1e-10)


def test_idempotents_conjugation_transport():
    rng = np.random.default_rng(70)
    P = spaces.bounded_conjugator(rng, 3)
    X = P @ np.diag([1.0, 2.0, 3.0]) @ np.linalg.inv(P)
    dec = calculus.spectral_idempotents(X)
    cond = np.linalg.cond(P, 2)
    for lam, E in dec.pairs:
        i = int(round(lam.real)) - 1
        rank1 = np.zeros((3, 3))
        rank1[i, i] = 1.0
        expected = P @ rank1 @ np.linalg.inv(P)
        assert core.opnorm(E - expected) <= 1e-7 * cond


def test_idempotent_algebra():
    rng = np.random.default_rng(71)
    X = spaces.sample("mn_ss", 4, rng)
    dec = calculus.spectral_idempotents(X)
    n = 4
    total = sum(E for _, E in dec.pairs)
    assert core.opnorm(total - np.eye(n)) <= 1e-8
    assemble = sum(l * E for l, E in dec.pairs)
    assert core.opnorm(assemble - X) <= 1e-8 * (1 + core.opnorm(X))
    for i, (_, Ei) in enumerate(dec.pairs):
        assert core.opnorm(Ei @ X - X @ Ei) <= 1e-7 * (1 + core.opnorm(X))
        for j, (_, Ej) in enumerate(dec.pairs):
            target = Ei if i == j else np.zeros((n, n))
            assert core.opnorm(Ei @ Ej - target) <= 1e-7


def test_not_semisimple_rejected():
    with pytest.raises(NotSemisimple):
        calculus.spectral_idempotents(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_ambiguous_clustering_rejected():
    # clusters 5e-6 apart violate the 10x separation at grouping_tol 1e-6
    with pytest.raises(AmbiguousClustering):
        calculus.spectral_idempotents(np.diag([0.0, 5e-6, 1.0]), grouping_tol=1e-6)


# ---------------------------------------------------------------------------
# apply_function
# ---------------------------------------------------------------------------

def test_apply_identity_and_constant():
    rng = np.random.default_rng(72)
    X = spaces.sample("mn_ss", 3, rng)
    assert core.opnorm(calculus.apply_function(X, lambda z: z) - X) <= 1e-8
    assert core.opnorm(calculus.apply_function(X, lambda z: 1.0) - np.eye(3)) <= 1e-8


def test_apply_matches_paper_closed_form():
    l1, l2, a = 0.3 + 1.1j, -0.7, 2.0 - 0.5j
    T = triangular(l1, l2, a)
    for f in (np.conj, lambda z: z * z, calculus.sqrt_shift):
        got = calculus.apply_function(T, f)
        expected = calculus.calc_2x2_closed_form(l1, l2, a, f)
        assert core.opnorm(got - expected) <= 1e-10


def test_closed_form_conjugation_example():
    # f = conj, eigenvalues +-i, alpha = 1: off-diagonal quotient is -1
    out = calculus.calc_2x2_closed_form(1j, -1j, 1.0, np.conj)
    assert np.allclose(out, [[-1j, -1.0], [0.0, 1j]])


def test_closed_form_identity_and_square():
    l1, l2, a = 1.3, -0.2, 0.7
    assert np.allclose(calculus.calc_2x2_closed_form(l1, l2, a, lambda z: z),
                       triangular(l1, l2, a))
    out = calculus.calc_2x2_closed_form(l1, l2, a, lambda z: z * z)
    assert out[0, 1] == pytest.approx(a * (l1 + l2))


def test_closed_form_equal_eigenvalues():
    with pytest.raises(EqualEigenvalues):
        calculus.calc_2x2_closed_form(1.0, 1.0, 0.5, np.conj)


def test_homomorphism_property():
    rng = np.random.default_rng(73)
    X = spaces.sample("mn_ss", 4, rng)
    f = np.conj
    g = calculus.sqrt_shift
    lhs = calculus.apply_function(X, lambda z: f(z) * g(z))
    rhs = calculus.apply_function(X, f) @ calculus.apply_function(X, g)
    assert core.opnorm(lhs - rhs) <= 1e-8 * (1 + core.opnorm(X)) ** 2


def test_conj_on_normal_is_adjoint():
    rng = np.random.default_rng(74)
    N = spaces.sample("nn", 4, rng)
    assert core.opnorm(calculus.apply_function(N, np.conj) - N.conj().T) \
        <= 1e-8 * (1 + core.opnorm(N))


def test_conjugation_invariance():
    rng = np.random.default_rng(75)
    X = spaces.sample("mn_ss", 3, rng)
    S = spaces.bounded_conjugator(rng, 3)
    cond = np.linalg.cond(S, 2)
    lhs = calculus.apply_function(S @ X @ np.linalg.inv(S), np.conj)
    rhs = S @ calculus.apply_function(X, np.conj) @ np.linalg.inv(S)
    assert core.opnorm(lhs - rhs) <= 1e-7 * cond ** 2 * (1 + core.opnorm(X))


def test_lagrange_oracle_agreement():
    rng = np.random.default_rng(76)
    for _ in range(20):
        X = spaces.sample("mn_ss", 3, rng)
        for f in (np.conj, lambda z: z * z):
            a = calculus.apply_function(X, f)
            b = calculus.lagrange_apply(X, f)
            c = oracles.lagrange_matrix_function(X, f)
            scale = 1 + core.opnorm(X)
            assert core.opnorm(a - b) <= 1e-6 * scale
            assert core.opnorm(a - c) <= 1e-4 * scale  # Vandermonde route is rougher


# ---------------------------------------------------------------------------
# continuity
# ---------------------------------------------------------------------------

def test_probe_decays_at_simple_spectrum():
    T = np.diag([1.0, 2.0, 3.0]).astype(complex)
    devs = [calculus.continuity_probe(T, np.conj, s, samples=30,
                                      rng=np.random.default_rng(i))
            for i, s in enumerate((1e-2, 1e-3, 1e-4))]
    assert devs[0] / devs[1] >= 5
    assert devs[1] / devs[2] >= 5


def test_blowup_witness():
    delta = 1e-8
    T = triangular(1.0, 1.0 + delta, delta ** 0.25)
    fT = calculus.apply_function(T, calculus.sqrt_shift, grouping_tol=1e-12)
    assert core.opnorm(fT) >= 10.0
    assert core.opnorm(T - np.eye(2)) <= 1e-2 * (1 + 1e-9)
    # off-diagonal behaves like delta^(-1/4)
    assert abs(fT[0, 1]) == pytest.approx(delta ** -0.25, rel=0.05)


def test_blowup_witness_embedded_in_repeated_block():
    T0 = np.diag([1.0, 1.0, 2.0]).astype(complex)
    Tp = T0.copy()
    Tp[0, 1] = 9e-5
    Tp[1, 1] = 1.0 + 4e-9
    assert core.opnorm(Tp - T0) <= 1e-4
    dev = core.opnorm(
        calculus.apply_function(Tp, calculus.sqrt_shift, grouping_tol=1e-12)
        - calculus.apply_function(T0, calculus.sqrt_shift, grouping_tol=1e-12))
    assert dev >= 1.0


def test_named_function_parser():
    assert calculus.named_function("identity")(2.0) == 2.0
    assert calculus.named_function("conj")(1j) == -1j
    assert calculus.named_function("square")(3.0) == 9.0
    assert calculus.named_function("sqrt-shift")(1.0) == 0.0
    p = calculus.named_function("poly:1,0,2")
    assert p(2.0) == pytest.approx(9.0)
    with pytest.raises(ValueError):
        calculus.named_function("nope")
