"""Reconstruction of the conjugating matrix behind a black-box preserver.

A continuous commutativity- and spectrum-preserving map on the unitary
group induces a map on subspaces,

    Psi(W) = ker(I - phi(U_W)),     U_W = 2 P_W - I,

which preserves dimensions, inclusions, and lattice operations for pairs
with commuting projections.  Such a subspace map is implemented by an
invertible linear or conjugate-linear operator T, and probing Psi on the
coordinate lines, the sum lines span(e_1 + e_i) and the single witness
line span(e_1 + i e_2) recovers T's columns, their relative scales, and
the linear/conjugate-linear branch.  Linear T gives phi(U) = T U T^{-1};
conjugate-linear T gives phi(U) = T' U^t T'^{-1} for the matrix T' whose
columns are the recovered images.

Classification is validated on held-out samples before being returned;
maps that pass the spectrum and commutativity spot checks but are not of
the conjugation form (the exotic involution, for instance) fail that
residual and are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core, spaces, theta as theta_mod
from .errors import (
    BranchAmbiguous,
    DimensionDrift,
    EigenvalueCollision,
    OracleFailure,
    ResidualTooLarge,
    Singular,
    UnsupportedDimension,
)

MODE_CONJUGATION = "conjugation"
MODE_TRANSPOSE = "transpose_conjugation"

CLASSIFIABLE_SPACES = (
    spaces.SpaceId.UN,
    spaces.SpaceId.NN,
    spaces.SpaceId.GLN_SS,
    spaces.SpaceId.SLN_SS,
)


@dataclass(frozen=True, eq=False)
class PreserverClassification:
    """The matrix and branch implementing a preserver oracle.

    ``matrix`` is normalized so its largest-modulus entry is exactly 1;
    the implementing matrix is only determined projectively.  ``residual``
    is the worst relative deviation ``||phi(X) - T X^o T^{-1}|| / ||X||``
    over the validation samples.
    """

    matrix: np.ndarray
    mode: str
    residual: float

    def apply(self, X) -> np.ndarray:
        """Evaluate the classified form on a matrix."""
        T = self.matrix
        A = core.as_matrix(X)
        if self.mode == MODE_TRANSPOSE:
            A = A.T
        return _right_divide(T @ A, T)

    def to_dict(self) -> dict:
        return {
            "matrix": core.matrix_to_dict(self.matrix),
            "mode": self.mode,
            "residual": self.residual,
        }


def _right_divide(A, S):
    return np.linalg.solve(S.T, A.T).T


def _call_oracle(phi, X):
    try:
        return core.as_matrix(phi(X))
    except Exception as exc:
        raise OracleFailure(f"oracle raised on an input: {exc!r}") from exc


def projective_distance(A, B) -> float:
    """``min over scalars c of ||A - c B||_F / ||B||_F``."""
    A = core.as_matrix(A)
    B = core.as_matrix(B)
    c = np.vdot(B, A) / np.vdot(B, B)
    return float(np.linalg.norm(A - c * B) / np.linalg.norm(B))


# ---------------------------------------------------------------------------
# The subspace map
# ---------------------------------------------------------------------------

def involution_for_subspace(W: core.Subspace) -> np.ndarray:
    """``U_W = 2 P_W - I``: the unitary Hermitian involution with
    1-eigenspace W and (-1)-eigenspace its orthogonal complement."""
    return 2.0 * core.projection(W) - np.eye(W.ambient_dim)


def psi(phi, W: core.Subspace, kernel_tol: float = 1e-6, phase: complex = 1.0) -> core.Subspace:
    """``Psi(W) = ker(phase I - phi(phase U_W))``.

    ``phase`` (modulus 1) rescales the involution; any pair (lambda, U)
    with ``ker(lambda I - U) = W`` computes the same subspace, and a
    non-real phase keeps the determinant off the real axis when the
    oracle's domain demands it.  A dimension change means the oracle
    violates its hypotheses and raises :class:`DimensionDrift`.
    """
    U = complex(phase) * involution_for_subspace(W)
    Y = _call_oracle(phi, U)
    # the operator scale here is ||U|| = 1, so kernel_tol doubles as the
    # absolute floor (the matrix is numerically zero when W is everything)
    K = core.kernel(complex(phase) * np.eye(W.ambient_dim) - Y, kernel_tol,
                    atol=kernel_tol)
    if K.dim != W.dim:
        raise DimensionDrift(
            f"subspace map changed dimension {W.dim} -> {K.dim}"
        )
    return K


def lattice_compat_check(phi, n: int, trials: int = 20, seed: int = 0,
                         tol: float = 1e-6) -> bool:
    """Psi respects sums of subspaces with commuting projections.

    Pairs are drawn with a shared orthonormal eigenbasis (columns of one
    Haar unitary), which is exactly the commuting-projection condition.
    """
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        Q = spaces.haar_unitary(rng, n)
        d1 = int(rng.integers(1, n))
        d2 = int(rng.integers(1, n))
        idx1 = rng.choice(n, size=d1, replace=False)
        idx2 = rng.choice(n, size=d2, replace=False)
        W = core.Subspace(Q[:, np.sort(idx1)])
        Wp = core.Subspace(Q[:, np.sort(idx2)])
        try:
            lhs = psi(phi, core.subspace_sum(W, Wp))
            rhs = core.subspace_sum(psi(phi, W), psi(phi, Wp))
        except (DimensionDrift, OracleFailure):
            # an oracle that breaks the subspace map certainly does not
            # respect lattice operations
            return False
        if core.subspace_distance(lhs, rhs) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Reconstruction on the unitary group
# ---------------------------------------------------------------------------

def _line(vec) -> core.Subspace:
    return core.Subspace.from_span(np.asarray(vec, dtype=complex)[:, None])


def reconstruct(phi, n: int, validation_samples: int = 20, seed: int = 0,
                residual_tol: float = 1e-6, branch_tol: float = 1e-3,
                kernel_tol: float = 1e-6, phase: complex = 1.0,
                validation_sampler=None) -> PreserverClassification:
    """Recover the implementing matrix of a preserver oracle on unitaries.

    Probes the subspace map on coordinate lines (columns up to scale), sum
    lines (relative scales) and the line span(e_1 + i e_2) (the minimal
    witness separating the linear from the conjugate-linear branch), then
    validates the assembled classification on held-out samples drawn by
    ``validation_sampler`` (Haar unitaries by default).
    """
    if n < 3:
        raise UnsupportedDimension("reconstruction requires n >= 3")
    rng = np.random.default_rng(seed)
    eye = np.eye(n, dtype=complex)

    images = []
    for i in range(n):
        K = psi(phi, _line(eye[:, i]), kernel_tol, phase)
        images.append(K.basis[:, 0])

    cols = [images[0]]
    for i in range(1, n):
        K = psi(phi, _line(eye[:, 0] + eye[:, i]), kernel_tol, phase)
        w = K.basis[:, 0]
        M = np.column_stack([images[0], images[i]])
        c, *_ = np.linalg.lstsq(M, w, rcond=None)
        if np.linalg.norm(M @ c - w) > 1e-6:
            raise ResidualTooLarge(
                "sum-line image leaves the span of the coordinate images"
            )
        a, b = c
        if abs(a) < 1e-8 or abs(b) < 1e-8:
            raise ResidualTooLarge("sum-line image is degenerate")
        cols.append((b / a) * images[i])
    T = np.column_stack(cols)

    probe = psi(phi, _line(eye[:, 0] + 1j * eye[:, 1]), kernel_tol, phase)
    d_lin = core.subspace_distance(probe, _line(T[:, 0] + 1j * T[:, 1]))
    d_conj = core.subspace_distance(probe, _line(T[:, 0] - 1j * T[:, 1]))
    lo, hi = sorted([d_lin, d_conj])
    if lo > branch_tol or hi <= branch_tol:
        raise BranchAmbiguous(
            f"probe line distances {d_lin:.3e} (linear) / {d_conj:.3e} "
            "(conjugate-linear) do not single out a branch"
        )
    mode = MODE_CONJUGATION if d_lin < d_conj else MODE_TRANSPOSE

    T = T / T.flat[int(np.argmax(np.abs(T)))]

    if validation_sampler is None:
        def validation_sampler(g):
            return spaces.haar_unitary(g, n)
    cls = PreserverClassification(matrix=T, mode=mode, residual=0.0)
    residual = 0.0
    for _ in range(validation_samples):
        U = core.as_matrix(validation_sampler(rng))
        lhs = _call_oracle(phi, U)
        rhs = cls.apply(U)
        residual = max(residual, core.opnorm(lhs - rhs) / max(core.opnorm(U), 1e-300))
    if residual > residual_tol:
        raise ResidualTooLarge(
            f"validation residual {residual:.3e} exceeds {residual_tol:.1e}; "
            "the oracle is not a conjugation or transpose-conjugation",
            residual=residual,
        )
    return PreserverClassification(matrix=T, mode=mode, residual=residual)


# ---------------------------------------------------------------------------
# Torus conjugator recovery
# ---------------------------------------------------------------------------

def torus_conjugator(phi, S, samples: int = 20, seed: int = 0,
                     residual_tol: float = 1e-6, max_attempts: int = 20) -> np.ndarray:
    """Recover a matrix conjugating the torus ``{S diag(u) S^{-1}}`` onto
    its image under the oracle.

    Picks a torus element with well-separated eigenvalues, matches the
    eigenvalues of the input and its image (spectrum preservation makes
    the matching a bijection), aligns eigenvectors, and validates on fresh
    torus samples.  The answer is determined only up to the torus
    centralizer (a diagonal right factor in the S basis), which the
    residual check is insensitive to.

    For unitary S this is the maximal torus ``S diag(u) S^*``; a general
    invertible S is conjugated with its inverse so that spectra are
    preserved.
    """
    S = core.as_matrix(S)
    n = S.shape[0]
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= 1e-10 * max(1.0, sv[0]):
        raise Singular("torus-defining matrix is singular")
    rng = np.random.default_rng(seed)
    Sinv = np.linalg.inv(S)

    def torus_element(min_gap):
        for _ in range(200):
            u = np.exp(2j * np.pi * rng.uniform(size=n))
            d = np.abs(u[:, None] - u[None, :])
            np.fill_diagonal(d, np.inf)
            if d.min() > min_gap:
                return u
        raise EigenvalueCollision("could not draw separated torus eigenvalues")

    T_G = None
    for _ in range(max_attempts):
        u = torus_element(min_gap=0.5 / n)
        X = S @ np.diag(u) @ Sinv
        Y = _call_oracle(phi, X)
        w, V = np.linalg.eig(Y)
        try:
            match = [_nearest_strict(u_i, w) for u_i in u]
        except EigenvalueCollision:
            continue
        if len(set(match)) != n:
            continue
        T_G = V[:, match] @ Sinv
        break
    if T_G is None:
        raise EigenvalueCollision("eigenvalue matching stayed ambiguous")

    residual = 0.0
    for _ in range(samples):
        u = torus_element(min_gap=0.1 / n)
        X = S @ np.diag(u) @ Sinv
        lhs = _call_oracle(phi, X)
        rhs = _right_divide(T_G @ X, T_G)
        residual = max(residual, core.opnorm(lhs - rhs) / max(core.opnorm(X), 1e-300))
    if residual > residual_tol:
        raise ResidualTooLarge(
            f"torus validation residual {residual:.3e} exceeds {residual_tol:.1e}",
            residual=residual,
        )
    return T_G


def _nearest_strict(value, candidates):
    d = np.abs(candidates - value)
    order = np.argsort(d)
    if d.size > 1 and d[order[1]] < 2.0 * d[order[0]] + 1e-9:
        raise EigenvalueCollision("eigenvalue matching is ambiguous")
    return int(order[0])


# ---------------------------------------------------------------------------
# Full-space classification
# ---------------------------------------------------------------------------

def classify_preserver(phi, space, n: int, validation_samples: int = 20,
                       seed: int = 0, residual_tol: float = 1e-6) -> PreserverClassification:
    """Classify a preserver oracle on a named space.

    Reconstruction runs on the unitary part (unitaries generate each
    supported space through commuting linear combinations); the resulting
    form is then validated on samples from the full space.  For the
    determinant-1 space the involutions used by the subspace map have
    determinant ``(-1)^(n-1)``, so odd n stays inside the space; the
    classification is additionally validated through the determinant-root
    extension on invertible samples whose determinant avoids the branch
    cut.
    """
    sid = spaces.SpaceId.parse(space)
    if sid not in CLASSIFIABLE_SPACES:
        raise ValueError(f"classification supports {[s.value for s in CLASSIFIABLE_SPACES]}")
    if n < 3:
        raise UnsupportedDimension("classification requires n >= 3")

    if sid is spaces.SpaceId.SLN_SS:
        if n % 2 == 0:
            raise UnsupportedDimension(
                "determinant-1 classification via unitary involutions needs odd n"
            )

        def stage_sampler(g):
            return spaces.special_unitary(g, n)
    else:
        def stage_sampler(g):
            return spaces.haar_unitary(g, n)

    cls = reconstruct(
        phi, n, validation_samples=validation_samples, seed=seed,
        residual_tol=residual_tol, validation_sampler=stage_sampler,
    )

    rng = np.random.default_rng(seed + 1)
    residual = cls.residual
    for _ in range(validation_samples):
        X = spaces.sample(sid, n, rng)
        lhs = _call_oracle(phi, X)
        rhs = cls.apply(X)
        residual = max(residual, core.opnorm(lhs - rhs) / max(core.opnorm(X), 1e-300))

    if sid is spaces.SpaceId.SLN_SS:
        for _ in range(validation_samples):
            X = _gl_star_ss_sample(rng, n)
            det = np.linalg.det(X)
            c = det ** (1.0 / n)
            lhs = c * _call_oracle(phi, X / c)
            rhs = cls.apply(X)
            residual = max(residual, core.opnorm(lhs - rhs) / max(core.opnorm(X), 1e-300))

    if residual > residual_tol:
        raise ResidualTooLarge(
            f"full-space validation residual {residual:.3e} exceeds {residual_tol:.1e}; "
            "the oracle is not of the conjugation form on this space",
            residual=residual,
        )
    return PreserverClassification(matrix=cls.matrix, mode=cls.mode, residual=residual)


def _gl_star_ss_sample(rng, n):
    """Semisimple invertible sample with det away from -1 and the
    nonpositive real axis, where the principal root extension is defined."""
    for _ in range(200):
        X = spaces.sample(spaces.SpaceId.GLN_SS, n, rng)
        det = np.linalg.det(X)
        if abs(det + 1.0) > 1e-3 and abs(np.angle(det)) < np.pi - 0.2:
            return X
    raise Singular("could not draw a determinant-safe sample")  # pragma: no cover


# ---------------------------------------------------------------------------
# Standard oracles
# ---------------------------------------------------------------------------

def make_oracle(kind: str, T0=None):
    """Build one of the stock preserver oracles.

    ``identity``, ``transpose``, ``conjugation`` (needs T0),
    ``transpose_conjugation`` (needs T0), ``theta``.
    """
    tag = kind.strip().lower()
    if tag in ("identity", "id"):
        return lambda X: core.as_matrix(X)
    if tag == "transpose":
        return lambda X: core.as_matrix(X).T
    if tag == "conjugation":
        T = core.as_matrix(T0)
        return lambda X: _right_divide(T @ core.as_matrix(X), T)
    if tag == "transpose_conjugation":
        T = core.as_matrix(T0)
        return lambda X: _right_divide(T @ core.as_matrix(X).T, T)
    if tag == "theta":
        return theta_mod.theta
    raise ValueError(f"unknown oracle kind {kind!r}")
