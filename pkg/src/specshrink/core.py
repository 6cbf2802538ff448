"""Dense complex matrix primitives: eigendecomposition, characteristic
polynomials, polar decomposition, subspaces and spectrum comparison.

Conventions
-----------
* Matrices are square ``complex128`` numpy arrays, validated by
  :func:`as_matrix` (square, finite entries).
* Spectra are 1-d complex arrays in canonical order, lexicographic by
  (real part, imaginary part).  The order is a reproducibility device only.
* ``||.||`` is the operator 2-norm unless a docstring says otherwise.
* Tolerances are absolute-relative hybrids ``tol * (1 + ||X||)`` unless
  stated otherwise.

All functions are pure; nothing here owns mutable state.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import (
    DimensionMismatch,
    EmptySpectrum,
    NumericalFailure,
    Singular,
    SizeMismatch,
)

#: Condition-number cap used as the numerical surrogate for semisimplicity.
#: A matrix counts as semisimple when some computed eigenvector matrix has
#: condition number at most ``1 / tol`` for the decomposition tolerance.
DEFAULT_EIG_TOL = 1e-8


def as_matrix(X) -> np.ndarray:
    """Validate and return ``X`` as a square finite complex matrix."""
    A = np.asarray(X, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if A.size and not np.all(np.isfinite(A)):
        raise DimensionMismatch("matrix entries must be finite")
    return A


def opnorm(X) -> float:
    """Operator 2-norm (largest singular value)."""
    A = np.asarray(X, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def canonical_spectrum(values) -> np.ndarray:
    """Sort eigenvalues lexicographically by (Re, Im)."""
    arr = np.asarray(values, dtype=complex).ravel()
    order = np.lexsort((arr.imag, arr.real))
    return arr[order]


def spectrum(X) -> np.ndarray:
    """Eigenvalues of ``X`` in canonical order (multiset with multiplicity)."""
    A = as_matrix(X)
    try:
        vals = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("eigenvalue computation did not converge") from exc
    return canonical_spectrum(vals)


def cluster_points(values, tol: float) -> list[np.ndarray]:
    """Single-linkage clusters of complex points at linking distance ``tol``.

    Returns index arrays; two points land in one cluster when they are
    connected by a chain of steps each shorter than ``tol``.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    n = vals.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(vals[i] - vals[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(g) for g in groups.values()]


# ---------------------------------------------------------------------------
# Eigendecomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigDecomposition:
    """Eigendecomposition ``X = P D P^{-1}`` with a semisimplicity verdict.

    ``eigenvalues`` are canonically ordered and ``vectors`` columns are
    matched to them.  ``semisimple`` is the numerical surrogate: true iff
    the eigenvector matrix has condition number below the configured cap.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    semisimple: bool
    condition: float

    def reconstruction(self) -> np.ndarray:
        """``P D P^{-1}`` from the stored factors."""
        P = self.vectors
        return P @ np.diag(self.eigenvalues) @ np.linalg.inv(P)


def eig_decompose(X, tol: float = DEFAULT_EIG_TOL) -> EigDecomposition:
    """Eigendecomposition with cluster-aware eigenvector bases.

    For a repeated eigenvalue the raw solver may return nearly parallel
    columns even when the eigenspace is healthy; inside each eigenvalue
    cluster we therefore re-extract an orthonormal basis of the numerical
    eigenspace before judging conditioning.  The matrix counts as
    semisimple when the resulting eigenvector matrix has condition number
    at most ``1 / tol``.
    """
    A = as_matrix(X)
    n = A.shape[0]
    try:
        w, P = np.linalg.eig(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("eigendecomposition did not converge") from exc
    P = P.astype(complex, copy=True)
    scale = 1.0 + opnorm(A)

    for idx in cluster_points(w, tol * scale):
        if len(idx) < 2:
            continue
        mu = w[idx].mean()
        width = float(np.max(np.abs(w[idx] - mu)))
        M = A - mu * np.eye(n)
        try:
            _, s, vh = np.linalg.svd(M)
        except np.linalg.LinAlgError as exc:  # pragma: no cover
            raise NumericalFailure("SVD did not converge") from exc
        thr = 10.0 * (width + tol * scale)
        dim = int(np.sum(s <= thr))
        if dim == len(idx):
            P[:, idx] = vh[n - dim:].conj().T
        # dim < len(idx): defective cluster; keep raw columns so the
        # conditioning estimate exposes it

    try:
        cond = float(np.linalg.cond(P, 2))
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond):
        cond = np.inf
    order = np.lexsort((w.imag, w.real))
    return EigDecomposition(
        eigenvalues=w[order],
        vectors=P[:, order],
        semisimple=bool(cond <= 1.0 / tol),
        condition=cond,
    )


# ---------------------------------------------------------------------------
# Characteristic polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonicPolynomial:
    """Monic polynomial ``x^n + c_{n-1} x^{n-1} + ... + c_0``.

    ``coeffs`` stores ``c_0 .. c_{n-1}`` (ascending); the leading 1 is
    implicit.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex).ravel())

    @property
    def degree(self) -> int:
        return self.coeffs.size

    @property
    def full(self) -> np.ndarray:
        """All coefficients ascending, including the leading 1."""
        return np.concatenate([self.coeffs, [1.0 + 0j]])

    @classmethod
    def from_roots(cls, roots) -> "MonicPolynomial":
        desc = np.atleast_1d(np.poly(np.asarray(roots, dtype=complex)))
        return cls(desc[::-1][:-1])

    def __call__(self, x):
        return np.polyval(self.full[::-1], x)

    def __mul__(self, other: "MonicPolynomial") -> "MonicPolynomial":
        prod = np.convolve(self.full, other.full)
        return MonicPolynomial(prod[:-1])

    def pow(self, k: int) -> "MonicPolynomial":
        if k < 1:
            raise ValueError("power must be a positive integer")
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def max_coeff_distance(self, other: "MonicPolynomial") -> float:
        """Max modulus of coefficient differences; degrees must agree."""
        if self.degree != other.degree:
            raise SizeMismatch(
                f"polynomial degrees differ: {self.degree} vs {other.degree}"
            )
        if self.degree == 0:
            return 0.0
        return float(np.max(np.abs(self.coeffs - other.coeffs)))


def char_poly(X) -> MonicPolynomial:
    """Characteristic polynomial ``det(x I - X)`` by the trace recurrence.

    Uses only matrix products and traces, so it is independent of the
    eigensolver and can serve as a cross-check oracle for it.
    """
    A = as_matrix(X)
    n = A.shape[0]
    eye = np.eye(n, dtype=complex)
    asc = np.empty(n, dtype=complex)
    M = np.zeros_like(A)
    c = 1.0 + 0j
    for k in range(1, n + 1):
        M = A @ M + c * eye
        c = -np.trace(A @ M) / k
        asc[n - k] = c
    return MonicPolynomial(asc)


# ---------------------------------------------------------------------------
# Spectrum comparison
# ---------------------------------------------------------------------------

def spectrum_inclusion_defect(A, B) -> float:
    """Directed Hausdorff distance: ``max_{a in A} min_{b in B} |a - b|``.

    Zero iff every point of A lies in B as a set.
    """
    a = np.asarray(A, dtype=complex).ravel()
    b = np.asarray(B, dtype=complex).ravel()
    if a.size == 0 or b.size == 0:
        raise EmptySpectrum("spectrum comparison requires nonempty spectra")
    dists = np.abs(a[:, None] - b[None, :])
    return float(np.max(np.min(dists, axis=1)))


def _bottleneck_assignment(D: np.ndarray) -> float:
    """Smallest t such that the bipartite graph {d_ij <= t} has a perfect matching."""
    n = D.shape[0]
    levels = np.unique(D)
    lo, hi = 0, levels.size - 1

    def feasible(t):
        graph = scipy.sparse.csr_matrix((D <= t).astype(np.int8))
        match = maximum_bipartite_matching(graph, perm_type="column")
        return not np.any(match == -1)

    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(levels[lo])


def spectrum_match_distance(A, B) -> float:
    """Optimal bottleneck matching distance between equal-size multisets.

    ``min over bijections sigma of max |a_i - b_sigma(i)|``.  Exhaustive
    search up to size 8, threshold-bisection assignment beyond.
    """
    a = np.asarray(A, dtype=complex).ravel()
    b = np.asarray(B, dtype=complex).ravel()
    if a.size != b.size:
        raise SizeMismatch(f"multiset sizes differ: {a.size} vs {b.size}")
    n = a.size
    if n == 0:
        return 0.0
    D = np.abs(a[:, None] - b[None, :])
    if n > 8:
        return _bottleneck_assignment(D)
    best = np.inf
    for perm in itertools.permutations(range(n)):
        worst = 0.0
        for i, j in enumerate(perm):
            d = D[i, j]
            if d > worst:
                worst = d
            if worst >= best:
                break
        else:
            best = worst
    return float(best)


# ---------------------------------------------------------------------------
# Polar decomposition
# ---------------------------------------------------------------------------

def polar_decompose(S, tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Left polar decomposition ``S = P V``.

    ``P = (S S^H)^{1/2}`` is Hermitian positive definite and ``V`` unitary.
    Raises :class:`Singular` when the smallest singular value is below
    ``tol * max(1, ||S||)``.
    """
    A = as_matrix(S)
    try:
        u, s, vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("SVD did not converge") from exc
    if s.size == 0 or s[-1] <= tol * max(1.0, s[0]):
        raise Singular("matrix is numerically singular; no polar decomposition")
    P = (u * s) @ u.conj().T
    P = 0.5 * (P + P.conj().T)
    V = u @ vh
    return P, V


# ---------------------------------------------------------------------------
# Subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n represented by an orthonormal column basis.

    ``basis`` has shape (n, d); a zero-dimensional subspace (d = 0) is
    valid.  Orthonormality is validated on construction.
    """

    basis: np.ndarray
    _tol: float = field(default=1e-8, repr=False)

    def __post_init__(self):
        B = np.asarray(self.basis, dtype=complex)
        if B.ndim != 2:
            raise DimensionMismatch(f"basis must be 2-d, got shape {B.shape}")
        object.__setattr__(self, "basis", B)
        d = B.shape[1]
        if d:
            gram = B.conj().T @ B
            if opnorm(gram - np.eye(d)) > self._tol:
                raise DimensionMismatch("basis columns are not orthonormal")

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_span(cls, vectors, rank_tol: float = 1e-10) -> "Subspace":
        """Orthonormalize arbitrary spanning vectors (columns) into a Subspace."""
        V = np.asarray(vectors, dtype=complex)
        if V.ndim == 1:
            V = V[:, None]
        if V.shape[1] == 0:
            return cls(V)
        u, s, _ = np.linalg.svd(V, full_matrices=False)
        if s.size == 0 or s[0] == 0:
            return cls(np.zeros((V.shape[0], 0), dtype=complex))
        r = int(np.sum(s > rank_tol * s[0]))
        return cls(u[:, :r])


def span(*vectors) -> Subspace:
    """Subspace spanned by the given vectors."""
    return Subspace.from_span(np.column_stack([np.asarray(v, dtype=complex) for v in vectors]))


def projection(W: Subspace) -> np.ndarray:
    """Orthogonal projection onto ``W``: Hermitian idempotent of rank dim W."""
    B = W.basis
    return B @ B.conj().T


def _check_same_ambient(W: Subspace, Wp: Subspace):
    if W.ambient_dim != Wp.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {W.ambient_dim} vs {Wp.ambient_dim}"
        )


def projections_commute(W: Subspace, Wp: Subspace, tol: float = 1e-8) -> bool:
    """True iff the orthogonal projections onto W and W' commute within tol."""
    _check_same_ambient(W, Wp)
    P, Q = projection(W), projection(Wp)
    return opnorm(P @ Q - Q @ P) <= tol


def kernel(X, tol: float = 1e-8, atol: float = 0.0) -> Subspace:
    """Orthonormal basis of the numerical null space of ``X``.

    Singular directions are those with singular value at most
    ``max(tol * sigma_max, atol)``; the zero matrix yields the full space.
    The absolute floor matters when X is numerically zero at a known
    external scale (a purely relative cut would then keep nothing).
    """
    A = as_matrix(X)
    try:
        _, s, vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("SVD did not converge") from exc
    smax = s[0] if s.size else 0.0
    mask = s <= max(tol * smax, atol)
    dim = int(np.sum(mask))
    n = A.shape[0]
    if dim == 0:
        return Subspace(np.zeros((n, 0), dtype=complex))
    return Subspace(vh[n - dim:].conj().T)


def subspace_distance(W: Subspace, Wp: Subspace) -> float:
    """Gap metric ``||P_W - P_W'||`` (operator norm); 0 iff equal subspaces."""
    _check_same_ambient(W, Wp)
    return opnorm(projection(W) - projection(Wp))


def subspace_sum(W: Subspace, Wp: Subspace) -> Subspace:
    """The subspace ``W + W'``."""
    _check_same_ambient(W, Wp)
    return Subspace.from_span(np.hstack([W.basis, Wp.basis]))


def containment_defect(W: Subspace, Wp: Subspace) -> float:
    """``||(I - P_W') P_W||``; zero iff W is contained in W'."""
    _check_same_ambient(W, Wp)
    P, Q = projection(W), projection(Wp)
    return opnorm(P - Q @ P)


# ---------------------------------------------------------------------------
# Matrix JSON file format
# ---------------------------------------------------------------------------
# {"n": int, "entries": [[[re, im], ...], ...]} row-major.

def matrix_to_dict(X) -> dict:
    A = as_matrix(X)
    return {
        "n": A.shape[0],
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }


def matrix_from_dict(data: dict) -> np.ndarray:
    n = int(data["n"])
    entries = data["entries"]
    A = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            re, im = entries[i][j]
            A[i, j] = complex(re, im)
    return as_matrix(A)


def save_matrix(path, X):
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(X), fh)


def load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        return matrix_from_dict(json.load(fh))
