"""Functional calculus on semisimple matrices.

A semisimple T decomposes as ``T = sum lambda E_lambda`` with idempotents
``E_lambda`` (image = the lambda-eigenspace, commuting with T, summing to
the identity), and ``f(T) = sum f(lambda) E_lambda`` for any f defined on
the spectrum.  The idempotents here come from the eigenvector matrix;
:func:`lagrange_apply` provides the independent interpolation route used
to cross-check it.

The calculus is famously discontinuous at matrices with repeated
eigenvalues even for continuous f; :func:`continuity_probe` measures that
empirically and the tests construct the explicit 2x2 blow-up witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import core
from .errors import (
    AmbiguousClustering,
    EqualEigenvalues,
    NotSemisimple,
)

DEFAULT_GROUPING_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Pairs (lambda, E_lambda) of a semisimple matrix, one per eigenvalue
    cluster at the stored grouping tolerance."""

    pairs: list
    grouping_tol: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.array([lam for lam, _ in self.pairs])

    def assemble(self, f: Callable[[complex], complex]) -> np.ndarray:
        n = self.pairs[0][1].shape[0]
        out = np.zeros((n, n), dtype=complex)
        for lam, E in self.pairs:
            out += complex(f(lam)) * E
        return out


def spectral_idempotents(T, grouping_tol: float = DEFAULT_GROUPING_TOL) -> SpectralDecomposition:
    """Spectral idempotents of a semisimple matrix.

    Eigenvalues within ``grouping_tol`` of each other (single linkage)
    become one cluster with the summed idempotent; clusters must stay
    separated by more than ``10 * grouping_tol`` or the grouping is
    ambiguous and refused.
    """
    ed = core.eig_decompose(T)
    if not ed.semisimple:
        raise NotSemisimple(
            f"eigenvector condition {ed.condition:.3e} exceeds the semisimplicity cap"
        )
    clusters = core.cluster_points(ed.eigenvalues, grouping_tol)
    reps = [complex(ed.eigenvalues[idx].mean()) for idx in clusters]
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            if abs(reps[i] - reps[j]) <= 10.0 * grouping_tol:
                raise AmbiguousClustering(
                    "eigenvalue clusters are not separated by 10x the grouping tolerance"
                )
    P = ed.vectors
    Pinv = np.linalg.inv(P)
    pairs = []
    for rep, idx in zip(reps, clusters):
        mask = np.zeros(ed.eigenvalues.size)
        mask[idx] = 1.0
        E = (P * mask) @ Pinv
        pairs.append((rep, E))
    return SpectralDecomposition(pairs=pairs, grouping_tol=grouping_tol)


def apply_function(T, f: Callable[[complex], complex],
                   grouping_tol: float = DEFAULT_GROUPING_TOL) -> np.ndarray:
    """``f(T) = sum f(lambda) E_lambda`` on a semisimple matrix.

    The construction is conjugation invariant:
    ``apply_function(S T S^-1, f) = S apply_function(T, f) S^-1`` up to
    conditioning-scaled rounding.
    """
    return spectral_idempotents(T, grouping_tol).assemble(f)


def calc_2x2_closed_form(lambda1: complex, lambda2: complex, alpha: complex,
                         f: Callable[[complex], complex]) -> np.ndarray:
    """Closed form of f on ``[[l1, a], [0, l2]]`` with distinct eigenvalues.

    The off-diagonal is the difference quotient
    ``a (f(l2) - f(l1)) / (l2 - l1)``; letting it blow up while the matrix
    converges is the standard discontinuity witness.
    """
    l1, l2, a = complex(lambda1), complex(lambda2), complex(alpha)
    if l1 == l2:
        raise EqualEigenvalues("closed form requires distinct eigenvalues")
    off = a * (complex(f(l2)) - complex(f(l1))) / (l2 - l1)
    return np.array([[complex(f(l1)), off], [0.0, complex(f(l2))]], dtype=complex)


def lagrange_apply(T, f: Callable[[complex], complex], gap_tol: float = 1e-8) -> np.ndarray:
    """f(T) through the Lagrange product formula; eigenvector-free oracle.

    ``f(T) = sum_i f(l_i) prod_{j != i} (T - l_j I) / (l_i - l_j)`` for
    simple spectrum.  Uses eigenvalues only, so it is independent of the
    idempotent route.
    """
    A = core.as_matrix(T)
    n = A.shape[0]
    vals = np.linalg.eigvals(A)
    scale = 1.0 + core.opnorm(A)
    d = np.abs(vals[:, None] - vals[None, :])
    np.fill_diagonal(d, np.inf)
    if n > 1 and d.min() <= gap_tol * scale:
        raise AmbiguousClustering("interpolation oracle requires simple spectrum")
    eye = np.eye(n, dtype=complex)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        term = complex(f(vals[i])) * eye
        for j in range(n):
            if j != i:
                term = term @ (A - vals[j] * eye) / (vals[i] - vals[j])
        out += term
    return out


def continuity_probe(T, f: Callable[[complex], complex], scale: float,
                     samples: int = 50, rng=None,
                     grouping_tol: float = DEFAULT_GROUPING_TOL,
                     max_resample: int = 200) -> float:
    """Max ``||f(T + D) - f(T)||`` over random semisimple perturbations.

    Perturbations have operator norm exactly ``scale``; draws landing on a
    non-semisimple or ambiguously clustered matrix are resampled.  For T
    with simple spectrum and continuous f the deviation vanishes with
    scale; at repeated eigenvalues adversarial directions (constructed in
    the tests, not sampled here) make it blow up.
    """
    A = core.as_matrix(T)
    n = A.shape[0]
    g = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    base = apply_function(A, f, grouping_tol)
    worst = 0.0
    produced = 0
    attempts = 0
    while produced < samples:
        if attempts > max_resample + samples:
            raise NotSemisimple("perturbation resampling budget exhausted")
        attempts += 1
        D = (g.standard_normal((n, n)) + 1j * g.standard_normal((n, n)))
        D *= scale / core.opnorm(D)
        try:
            val = apply_function(A + D, f, grouping_tol)
        except (NotSemisimple, AmbiguousClustering):
            continue
        produced += 1
        worst = max(worst, core.opnorm(val - base))
    return worst


# ---------------------------------------------------------------------------
# Named scalar functions for the command line
# ---------------------------------------------------------------------------

def sqrt_shift(z: complex) -> float:
    """``sqrt(|z - 1|)``: continuous, not Lipschitz at 1.

    The non-Lipschitz point is what drives the repeated-eigenvalue
    blow-up witness.
    """
    return float(np.sqrt(abs(z - 1.0)))


def named_function(name: str) -> Callable[[complex], complex]:
    """Resolve a function tag: conj, identity, square, sqrt-shift, poly:<c0,c1,...>."""
    tag = name.strip().lower()
    if tag == "conj":
        return np.conj
    if tag == "identity":
        return lambda z: z
    if tag == "square":
        return lambda z: z * z
    if tag in ("sqrt-shift", "sqrt_shift"):
        return sqrt_shift
    if tag.startswith("poly:"):
        coeffs = [complex(c) for c in tag.split(":", 1)[1].split(",")]
        return lambda z: sum(c * z ** k for k, c in enumerate(coeffs))
    raise ValueError(f"unknown function tag {name!r}")
