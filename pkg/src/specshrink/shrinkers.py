"""Spectrum-shrinking maps and the checks that probe them.

The canonical shrinker sends an n x n matrix X to a conjugated block
diagonal of p copies of X and q copies of X^t, giving an (p+q)n x (p+q)n
matrix whose characteristic polynomial is the (p+q)-th power of X's.  The
degenerate shrinkers on Hermitian and special unitary inputs collapse
everything onto a single continuously selected eigenvalue, which is what
makes the divisibility constraint fail on those spaces.

Checks evaluate a black-box map on seeded samples and report worst-case
defects.  The harness never introspects the map; continuity is the
caller's contract, probed only pathwise elsewhere.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from . import core, selectors, spaces
from .errors import (
    DimensionMismatch,
    DivisibilityViolation,
    NotHermitian,
    OracleFailure,
    SingularConjugator,
)

DEFAULT_SAMPLES = 100
DEFAULT_SEED = 0


@dataclass(frozen=True)
class ShrinkReport:
    """Worst-case defects of a shrinking-map check over a seeded batch.

    ``inclusion_defect`` is the directed Hausdorff distance from the image
    spectrum into the source spectrum; ``powerlaw_defect`` the max
    coefficient modulus of ``k_phi(X) - k_X^(m/n)``.  ``None`` means the
    quantity was not measured (e.g. power law with n not dividing m, in
    which case ``divisible`` is False).
    """

    space: str
    n: int
    m: int
    sample_count: int
    seed: int
    inclusion_defect: Optional[float]
    powerlaw_defect: Optional[float]
    divisible: bool

    def to_dict(self) -> dict:
        return asdict(self)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def canonical_shrinker(X, p: int, q: int, conjugator=None) -> np.ndarray:
    """``S(X) . blockdiag(X (x) I_p, X^t (x) I_q) . S(X)^{-1}``.

    ``conjugator`` may be None (identity), a fixed (p+q)n x (p+q)n matrix,
    or a callable X -> matrix.  Each eigenvalue's multiplicity is scaled
    by p + q.
    """
    A = core.as_matrix(X)
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 with p + q >= 1")
    blocks = []
    if p:
        blocks.append(np.kron(A, np.eye(p)))
    if q:
        blocks.append(np.kron(A.T, np.eye(q)))
    B = scipy.linalg.block_diag(*blocks)
    if conjugator is None:
        return B
    S = conjugator(A) if callable(conjugator) else conjugator
    S = core.as_matrix(S)
    m = (p + q) * A.shape[0]
    if S.shape[0] != m:
        raise DimensionMismatch(f"conjugator must be {m}x{m}, got {S.shape}")
    sv = np.linalg.svd(S, compute_uv=False)
    if sv[-1] <= 1e-12 * max(1.0, sv[0]):
        raise SingularConjugator("conjugator is numerically singular")
    return S @ B @ np.linalg.inv(S)


def degenerate_shrinker_hn(X, m: int, tol: float = 1e-8) -> np.ndarray:
    """``lambda_max(X) . I_m`` for Hermitian X.

    Shrinks spectra for every m, witnessing that the divisibility
    constraint fails on the Hermitian space.
    """
    A = core.as_matrix(X)
    if core.opnorm(A - A.conj().T) > tol * (1.0 + core.opnorm(A)):
        raise NotHermitian("degenerate Hermitian shrinker needs a Hermitian input")
    lam = float(np.max(np.linalg.eigvalsh(A)))
    return lam * np.eye(m, dtype=complex)


def degenerate_shrinker_sun(U, m: int, tol: float = 1e-8) -> np.ndarray:
    """``s(U) . I_m`` with s the continuous special-unitary selector."""
    val = selectors.su_select(U, tol=tol)
    return val * np.eye(m, dtype=complex)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def _evaluate_oracle(phi: Callable, xs, m: int, workers: int = 1):
    def call(X):
        try:
            Y = phi(X)
        except Exception as exc:
            raise OracleFailure(f"oracle raised on a sample: {exc!r}") from exc
        Y = core.as_matrix(Y)
        if Y.shape != (m, m):
            raise DimensionMismatch(
                f"oracle output is {Y.shape}, expected ({m}, {m})"
            )
        return Y

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(call, xs))
    return [call(X) for X in xs]


def _run_batch(phi, space, n, m, samples, seed, want_inclusion, want_powerlaw, workers):
    sid = spaces.SpaceId.parse(space)
    rng = np.random.default_rng(seed)
    xs = [spaces.sample(sid, n, rng) for _ in range(samples)]
    ys = _evaluate_oracle(phi, xs, m, workers)

    inclusion = None
    powerlaw = None
    if want_inclusion:
        inclusion = 0.0
        for X, Y in zip(xs, ys):
            d = core.spectrum_inclusion_defect(core.spectrum(Y), core.spectrum(X))
            inclusion = max(inclusion, d)
    if want_powerlaw:
        k = m // n
        powerlaw = 0.0
        for X, Y in zip(xs, ys):
            d = core.char_poly(Y).max_coeff_distance(core.char_poly(X).pow(k))
            powerlaw = max(powerlaw, d)
    return ShrinkReport(
        space=sid.value,
        n=n,
        m=m,
        sample_count=samples,
        seed=seed,
        inclusion_defect=inclusion,
        powerlaw_defect=powerlaw,
        divisible=(m % n == 0),
    )


def check_shrinking(phi, space, n: int, m: int, samples: int = DEFAULT_SAMPLES,
                    seed: int = DEFAULT_SEED, workers: int = 1) -> ShrinkReport:
    """Worst-case spectral inclusion defect of ``phi`` over seeded samples."""
    return _run_batch(phi, space, n, m, samples, seed,
                      want_inclusion=True, want_powerlaw=False, workers=workers)


def check_powerlaw(phi, space, n: int, m: int, samples: int = DEFAULT_SAMPLES,
                   seed: int = DEFAULT_SEED, workers: int = 1,
                   require_divisible: bool = True) -> ShrinkReport:
    """Worst-case defect of ``k_phi(X) = k_X^(m/n)`` over seeded samples.

    With ``require_divisible`` (the default) a dimension pair with n not
    dividing m raises :class:`DivisibilityViolation`; otherwise the report
    comes back flagged ``divisible=False`` with no power-law defect.
    """
    if m % n != 0:
        if require_divisible:
            raise DivisibilityViolation(f"{n} does not divide {m}")
        return _run_batch(phi, space, n, m, samples, seed,
                          want_inclusion=True, want_powerlaw=False, workers=workers)
    return _run_batch(phi, space, n, m, samples, seed,
                      want_inclusion=False, want_powerlaw=True, workers=workers)


def verify_shrinker(phi, space, n: int, m: int, samples: int = DEFAULT_SAMPLES,
                    seed: int = DEFAULT_SEED, workers: int = 1) -> ShrinkReport:
    """Inclusion and (when n | m) power-law defects in one seeded pass."""
    return _run_batch(phi, space, n, m, samples, seed,
                      want_inclusion=True, want_powerlaw=(m % n == 0), workers=workers)
