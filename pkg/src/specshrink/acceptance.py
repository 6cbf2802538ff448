"""The acceptance suite: every headline claim as an executable check.

Each criterion runs at a pinned tolerance and yields one or more
:class:`CheckResult` records.  The same runner backs the ``all`` command
line subcommand and the acceptance test module, so the reported defects
are identical in both; determinism of those defects under a fixed seed is
itself the final criterion, checked by comparing two runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import calculus, configspace, core, reconstruct, selectors, shrinkers, spaces, theta
from .errors import DivisibilityViolation, ResidualTooLarge


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    claim: str
    passed: bool
    defect: Optional[float]
    threshold: Optional[float]
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "claim": self.claim,
            "passed": self.passed,
            "defect": self.defect,
            "threshold": self.threshold,
            "details": self.details,
        }


def _result(criterion, name, claim, defect, threshold, details=None, passed=None):
    if passed is None:
        passed = defect is not None and defect <= threshold
    return CheckResult(criterion, name, claim, bool(passed),
                       None if defect is None else float(defect),
                       None if threshold is None else float(threshold),
                       details or {})


# ---------------------------------------------------------------------------
# Criteria 1-3: shrinkers
# ---------------------------------------------------------------------------

POWERLAW_SPACES = ("gln", "sln", "un", "nn", "mn", "gln_ss", "sln_ss")


def _crit_powerlaw(seed):
    claim_pl = "image characteristic polynomial is the m/n power of the source"
    claim_in = "image spectrum is contained in the source spectrum"
    rng = np.random.default_rng(seed)
    out = []
    for space in POWERLAW_SPACES:
        g = np.asarray((rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))))
        S0 = np.eye(6) + 0.25 * g / core.opnorm(g)  # fixed conjugator: continuous, condition <= 5/3

        def phi(X, S0=S0):
            return shrinkers.canonical_shrinker(X, 1, 1, S0)

        report = shrinkers.verify_shrinker(phi, space, 3, 6, samples=100, seed=seed)
        out.append(_result(1, f"powerlaw-{space}", claim_pl,
                           report.powerlaw_defect, 1e-7,
                           {"samples": 100, "pq": [1, 1]}))
        out.append(_result(2, f"inclusion-{space}", claim_in,
                           report.inclusion_defect, 1e-8,
                           {"samples": 100}))
    return out


def _crit_degenerate(seed):
    claim = ("scalar shrinkers onto a selected eigenvalue beat the divisibility "
             "constraint on Hermitian and special unitary inputs")
    out = []
    cases = [
        ("hn", 2, 5, lambda X: shrinkers.degenerate_shrinker_hn(X, 5)),
        ("sun", 3, 4, lambda U: shrinkers.degenerate_shrinker_sun(U, 4)),
    ]
    for space, n, m, phi in cases:
        report = shrinkers.check_shrinking(phi, space, n, m, samples=100, seed=seed)
        try:
            shrinkers.check_powerlaw(phi, space, n, m, samples=1, seed=seed)
            divisibility_flagged = False
        except DivisibilityViolation:
            divisibility_flagged = True
        out.append(_result(
            3, f"degenerate-{space}-{n}to{m}", claim,
            report.inclusion_defect, 1e-8,
            {"n": n, "m": m, "divisibility_flagged": divisibility_flagged},
            passed=(report.inclusion_defect <= 1e-8 and divisibility_flagged
                    and m % n != 0),
        ))
    return out


# ---------------------------------------------------------------------------
# Criterion 4: the special unitary selector
# ---------------------------------------------------------------------------

def _skew_traceless(rng, n):
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    a = 0.5 * (g - g.conj().T)
    a -= (np.trace(a) / n) * np.eye(n)
    return a / core.opnorm(a)


def _crit_su_selector(seed):
    claim = ("special unitary eigenvalue selection is spectral, conjugation "
             "invariant and continuous along paths")
    rng = np.random.default_rng(seed)
    spectral = 0.0
    invariance = 0.0
    for n in (2, 3, 4):
        for _ in range(60):
            U = spaces.special_unitary(rng, n)
            val = selectors.su_select(U)
            spectral = max(spectral, float(np.min(np.abs(np.linalg.eigvals(U) - val))))
            V = spaces.haar_unitary(rng, n)
            conj = V @ U @ V.conj().T
            invariance = max(invariance, abs(selectors.su_select(conj) - val))

    step = 1e-3
    nsteps = 500
    max_jump = 0.0
    for n in (2, 3, 4):
        for _ in range(50):
            U = spaces.special_unitary(rng, n)
            A = _skew_traceless(rng, n)
            E = scipy.linalg.expm(step * A)
            vals = np.empty(nsteps + 1, dtype=complex)
            for k in range(nsteps + 1):
                vals[k] = selectors.su_select(U)
                U = E @ U
            max_jump = max(max_jump, float(np.max(np.abs(np.diff(vals)))))

    return [
        _result(4, "su-selector-spectral", claim, spectral, 1e-8, {"draws": 180}),
        _result(4, "su-selector-conjugation-invariant", claim, invariance, 1e-8,
                {"pairs": 180}),
        _result(4, "su-selector-path-continuity", claim, max_jump, 0.05,
                {"paths": 150, "step": step, "steps_per_path": nsteps}),
    ]


# ---------------------------------------------------------------------------
# Criterion 5: monodromy
# ---------------------------------------------------------------------------

def _crit_monodromy(seed):
    claim = "a loop of the corner parameter induces a single n-cycle on the eigenvalues"
    out = []
    worst_ratio = 0.0
    all_cycles = True
    for n in range(2, 7):
        for r in (0.5, 1.0, 2.0):
            res = selectors.monodromy_xz(n, r, steps=max(64 * n, 256))
            all_cycles = all_cycles and res.is_single_cycle()
            target = np.exp(2j * np.pi / n)
            worst_ratio = max(worst_ratio, float(np.max(np.abs(res.ratios() - target))))
    out.append(_result(5, "monodromy-cycles", claim,
                       0.0 if all_cycles else 1.0, 0.5,
                       {"n_range": [2, 6], "radii": [0.5, 1.0, 2.0]},
                       passed=all_cycles))
    out.append(_result(5, "monodromy-ratio", claim, worst_ratio, 1e-6,
                       {"target": "exp(2 pi i / n)"}))
    return out


# ---------------------------------------------------------------------------
# Criterion 6: configuration space
# ---------------------------------------------------------------------------

def _circle_points(rng, n, min_gap=0.15):
    while True:
        z = np.exp(2j * np.pi * rng.uniform(size=n))
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() > min_gap:
            return configspace.CirclePoints(z)


def _crit_configspace(seed):
    claim = ("counterclockwise cosets classify circle configurations "
             "equivariantly with cyclic isotropy")
    rng = np.random.default_rng(seed)
    equivariance_failures = 0
    isotropy_failures = 0
    for n in range(2, 6):
        for _ in range(3):
            pts = _circle_points(rng, n)
            base = configspace.classify_component(pts)
            for sigma in configspace.all_permutations(n):
                lhs = configspace.classify_component(configspace.act(sigma, pts))
                if lhs != base.left_multiply(sigma):
                    equivariance_failures += 1
            iso = configspace.isotropy_of_component(pts)
            expected = configspace.expected_isotropy(base)
            if iso != expected or len(iso) != n:
                isotropy_failures += 1
    cycle_ok = all(configspace.verify_cycle_decomposition(n) for n in range(2, 9))
    return [
        _result(6, "configspace-equivariance", claim,
                float(equivariance_failures), 0.5, {"n_max": 5}),
        _result(6, "configspace-isotropy", claim,
                float(isotropy_failures), 0.5, {"n_max": 5}),
        _result(6, "configspace-cycle-decomposition", claim,
                0.0 if cycle_ok else 1.0, 0.5, {"n_range": [2, 8]},
                passed=cycle_ok),
    ]


# ---------------------------------------------------------------------------
# Criteria 7-8: functional calculus
# ---------------------------------------------------------------------------

def _semisimple_sample(rng, n, min_gap=0.05, max_mod=2.5):
    while True:
        lam = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        d = np.abs(lam[:, None] - lam[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() > min_gap and np.max(np.abs(lam)) < max_mod:
            break
    c = spaces.bounded_conjugator(rng, n)
    return c @ np.diag(lam) @ np.linalg.inv(c)


def _crit_calculus(seed):
    claim = ("the 2x2 closed form, interpolation oracle and blow-up witness "
             "agree with the idempotent calculus")
    rng = np.random.default_rng(seed)
    fns = [np.conj, lambda z: z * z, calculus.sqrt_shift]

    closed = 0.0
    for _ in range(100):
        while True:
            l1, l2 = (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / np.sqrt(2)
            if abs(l1 - l2) > 0.2:
                break
        alpha = complex(rng.standard_normal() + 1j * rng.standard_normal())
        T = np.array([[l1, alpha], [0.0, l2]])
        for f in fns:
            d = core.opnorm(calculus.calc_2x2_closed_form(l1, l2, alpha, f)
                            - calculus.apply_function(T, f))
            closed = max(closed, d)

    lagrange = 0.0
    for _ in range(100):
        T = _semisimple_sample(rng, 3)
        for f in (np.conj, lambda z: z * z):
            d = core.opnorm(calculus.apply_function(T, f) - calculus.lagrange_apply(T, f))
            lagrange = max(lagrange, d / (1.0 + core.opnorm(T)))

    delta = 1e-8
    T = np.array([[1.0, delta ** 0.25], [0.0, 1.0 + delta]], dtype=complex)
    blowup = core.opnorm(calculus.apply_function(T, calculus.sqrt_shift, grouping_tol=1e-12))
    dist = core.opnorm(T - np.eye(2))
    # ||T - I|| is delta^(1/4) up to the delta in the corner, which nudges the
    # exact value above 1e-2 by ~5e-13 relative; allow that rounding margin
    witness_ok = blowup >= 10.0 and dist <= 1e-2 * (1.0 + 1e-9)

    return [
        _result(7, "calculus-2x2-closed-form", claim, closed, 1e-10, {"triples": 100}),
        _result(7, "calculus-interpolation-oracle", claim, lagrange, 1e-6, {"samples": 100}),
        _result(7, "calculus-blowup-witness", claim, None, None,
                {"norm": blowup, "distance_to_identity": dist,
                 "required_norm": 10.0, "delta": delta},
                passed=witness_ok),
    ]


def _crit_dichotomy(seed):
    claim = "the calculus is continuous exactly at simple spectra"
    T = np.diag([1.0, 2.0, 3.0]).astype(complex)
    scales = [1e-2, 1e-3, 1e-4]
    devs = [calculus.continuity_probe(T, np.conj, s, samples=40,
                                      rng=np.random.default_rng(seed + i))
            for i, s in enumerate(scales)]
    ratios = [devs[i] / devs[i + 1] for i in range(len(devs) - 1)]
    simple_ok = all(r >= 5.0 for r in ratios)

    T0 = np.diag([1.0, 1.0, 2.0]).astype(complex)
    Tp = T0.copy()
    Tp[0, 1] = 9e-5
    Tp[1, 1] = 1.0 + 4e-9
    step_norm = core.opnorm(Tp - T0)
    dev = core.opnorm(calculus.apply_function(Tp, calculus.sqrt_shift, grouping_tol=1e-12)
                      - calculus.apply_function(T0, calculus.sqrt_shift, grouping_tol=1e-12))
    witness_ok = dev >= 1.0 and step_norm <= 1e-4

    return [
        _result(8, "dichotomy-simple-spectrum-decay", claim, None, None,
                {"deviations": devs, "ratios": ratios, "required_ratio": 5.0},
                passed=simple_ok),
        _result(8, "dichotomy-repeated-spectrum-witness", claim, None, None,
                {"deviation": dev, "perturbation_norm": step_norm,
                 "required_deviation": 1.0, "scale": 1e-4},
                passed=witness_ok),
    ]


# ---------------------------------------------------------------------------
# Criterion 9: the involution
# ---------------------------------------------------------------------------

def _positive_definite(rng, n, lo=0.5, hi=2.0):
    q = spaces.haar_unitary(rng, n)
    s = np.exp(rng.uniform(np.log(lo), np.log(hi), size=n))
    return (q * s) @ q.conj().T, float(s.max() / s.min())


def _normal_pair(rng, n):
    q = spaces.haar_unitary(rng, n)

    def lam():
        while True:
            v = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
            mods = np.abs(v)
            d = np.abs(v[:, None] - v[None, :])
            np.fill_diagonal(d, np.inf)
            if mods.min() > 0.3 and mods.max() < 3.0 and d.min() > 0.1:
                return v

    return q @ np.diag(lam()) @ q.conj().T, q @ np.diag(lam()) @ q.conj().T


def _crit_theta(seed):
    claim = ("the conjugation-swap involution is involutory, spectral, "
             "normal-fixing, well defined and acts as inverse-square "
             "conjugation on unitary orbits")
    rng = np.random.default_rng(seed)
    defects = {k: 0.0 for k in
               ("involution", "spectrum", "normal-fixing", "putnam-fuglede",
                "commutativity", "inverse-square", "calculus-route")}
    pf_all = True
    comm_all = True
    ads_all = True
    for trial in range(100):
        n = (2, 3, 4)[trial % 3]
        S, condS = _positive_definite(rng, n)
        N, N2 = _normal_pair(rng, n)
        X = S @ N @ np.linalg.inv(S)
        scale = (1.0 + core.opnorm(X)) * condS ** 2

        TX = theta.theta(X)
        defects["involution"] = max(
            defects["involution"], core.opnorm(theta.theta(TX) - X) / scale)
        defects["spectrum"] = max(
            defects["spectrum"],
            core.spectrum_match_distance(core.spectrum(TX), core.spectrum(X)))
        defects["normal-fixing"] = max(
            defects["normal-fixing"],
            core.opnorm(theta.theta(N) - N) / (1.0 + core.opnorm(N)))

        dec = theta.theta_decompose(X)
        pf_all = pf_all and theta.check_putnam_fuglede(S, dec.s, N, dec.normal)
        swapped = np.linalg.solve(S, N @ S)
        defects["putnam-fuglede"] = max(
            defects["putnam-fuglede"], core.opnorm(TX - swapped) / scale)

        Y = S @ N2 @ np.linalg.inv(S)
        comm_all = comm_all and theta.theta_commutativity_check(X, Y)
        TY = theta.theta(Y)
        defects["commutativity"] = max(
            defects["commutativity"],
            core.opnorm(TX @ TY - TY @ TX)
            / ((1.0 + core.opnorm(TX) * core.opnorm(TY)) * condS ** 2))

        U = spaces.haar_unitary(rng, n)
        ads_all = ads_all and theta.theta_ads_identity(S, U, tol=1e-6 * condS ** 2)
        XU = S @ U @ np.linalg.inv(S)
        S2 = S @ S
        defects["inverse-square"] = max(
            defects["inverse-square"],
            core.opnorm(theta.theta(XU) - np.linalg.solve(S2, XU @ S2)) / scale)

        defects["calculus-route"] = max(
            defects["calculus-route"],
            core.opnorm(TX - theta.theta_via_calculus(S, N)) / scale)

    out = []
    for name, d in defects.items():
        extra = {"trials": 100}
        if name == "putnam-fuglede":
            extra["all_confirmed"] = pf_all
        if name == "commutativity":
            extra["all_confirmed"] = comm_all
        if name == "inverse-square":
            extra["all_confirmed"] = ads_all
        out.append(_result(9, f"theta-{name}", claim, d, 1e-6, extra))
    return out


# ---------------------------------------------------------------------------
# Criterion 10: reconstruction
# ---------------------------------------------------------------------------

def _seeded_conjugator(rng, n, max_cond=50.0):
    u = spaces.haar_unitary(rng, n)
    v = spaces.haar_unitary(rng, n)
    s = max_cond ** rng.uniform(size=n)
    return (u * s) @ v.conj().T


def _crit_reconstruct(seed):
    claim = ("preserver oracles are classified as conjugation or "
             "transpose-conjugation with projective recovery; "
             "non-conjugation maps are rejected")
    rng = np.random.default_rng(seed)
    n = 3
    spaces_under_test = ("un", "nn", "gln_ss", "sln_ss")

    worst_proj = 0.0
    mode_failures = 0
    for k in range(25):
        T0 = _seeded_conjugator(rng, n)
        mode = reconstruct.MODE_CONJUGATION if k % 2 == 0 else reconstruct.MODE_TRANSPOSE
        phi = reconstruct.make_oracle(mode, T0)
        for space in spaces_under_test:
            cls = reconstruct.classify_preserver(phi, space, n, seed=seed + k)
            if cls.mode != mode:
                mode_failures += 1
            worst_proj = max(worst_proj, reconstruct.projective_distance(cls.matrix, T0))

    T0 = _seeded_conjugator(rng, 4, max_cond=10.0)
    phi = reconstruct.make_oracle(reconstruct.MODE_CONJUGATION, T0)
    inclusion = 0.0
    dim_failures = 0
    for _ in range(100):
        q = spaces.haar_unitary(rng, 4)
        d2 = int(rng.integers(2, 4))
        d1 = int(rng.integers(1, d2))
        W = core.Subspace(q[:, :d1])
        Wp = core.Subspace(q[:, :d2])
        try:
            im1 = reconstruct.psi(phi, W)
            im2 = reconstruct.psi(phi, Wp)
        except Exception:
            dim_failures += 1
            continue
        inclusion = max(inclusion, core.containment_defect(im1, im2))
    lattice_ok = (reconstruct.lattice_compat_check(reconstruct.make_oracle("identity"), 4,
                                                   trials=20, seed=seed)
                  and reconstruct.lattice_compat_check(phi, 4, trials=20, seed=seed))

    try:
        reconstruct.classify_preserver(theta.theta, "gln_ss", 3, seed=seed)
        theta_rejected = False
        theta_residual = 0.0
    except ResidualTooLarge as exc:
        theta_rejected = True
        theta_residual = float(exc.residual or 0.0)

    return [
        _result(10, "reconstruct-roundtrip", claim, worst_proj, 1e-5,
                {"pairs": 25, "spaces": list(spaces_under_test),
                 "mode_failures": mode_failures},
                passed=(worst_proj <= 1e-5 and mode_failures == 0)),
        _result(10, "reconstruct-subspace-map", claim, inclusion, 1e-6,
                {"subspace_pairs": 100, "dimension_failures": dim_failures},
                passed=(inclusion <= 1e-6 and dim_failures == 0)),
        _result(10, "reconstruct-lattice-compat", claim,
                0.0 if lattice_ok else 1.0, 0.5, {}, passed=lattice_ok),
        _result(10, "reconstruct-rejects-involution", claim, None, None,
                {"rejected": theta_rejected, "residual": theta_residual},
                passed=theta_rejected),
    ]


# ---------------------------------------------------------------------------
# Suite driver
# ---------------------------------------------------------------------------

CRITERION_CLAIMS = {
    1: "power law of characteristic polynomials under shrinking maps",
    2: "spectral inclusion of shrinking maps",
    3: "divisibility counterexamples on Hermitian and special unitary inputs",
    4: "continuous special unitary eigenvalue selection",
    5: "eigenvalue monodromy around the nilpotent block",
    6: "configuration-space classification and isotropy",
    7: "semisimple functional calculus closed forms and oracles",
    8: "continuity dichotomy of the calculus",
    9: "the conjugation-swap involution",
    10: "preserver reconstruction and rejection",
    11: "determinism of the suite under a fixed seed",
}


def run_acceptance(seed: int = 0) -> list[CheckResult]:
    """Run criteria 1-10 and return their results.

    Criterion 11 (determinism) is a relation between two runs; use
    :func:`compare_runs` on the outputs of two calls.
    """
    results = []
    results += _crit_powerlaw(seed * 1009 + 1)
    results += _crit_degenerate(seed * 1009 + 3)
    results += _crit_su_selector(seed * 1009 + 4)
    results += _crit_monodromy(seed * 1009 + 5)
    results += _crit_configspace(seed * 1009 + 6)
    results += _crit_calculus(seed * 1009 + 7)
    results += _crit_dichotomy(seed * 1009 + 8)
    results += _crit_theta(seed * 1009 + 9)
    results += _crit_reconstruct(seed * 1009 + 10)
    return results


def _numeric_fingerprint(results):
    fp = []
    for r in results:
        nums = sorted(
            (k, float(v)) for k, v in r.details.items()
            if isinstance(v, (int, float)) and not isinstance(v, bool)
        )
        fp.append((r.name, r.defect, tuple(nums)))
    return fp


def compare_runs(first: list[CheckResult], second: list[CheckResult],
                 rel: float = 1e-12) -> float:
    """Worst relative disagreement between the defects of two runs.

    Returns 0.0 for identical runs; raises if the runs have different
    shapes.  Criterion 11 passes when the result is at most ``rel``.
    """
    fp1 = _numeric_fingerprint(first)
    fp2 = _numeric_fingerprint(second)
    if len(fp1) != len(fp2):
        raise ValueError("runs have different result counts")
    worst = 0.0
    for (n1, d1, x1), (n2, d2, x2) in zip(fp1, fp2):
        if n1 != n2 or (d1 is None) != (d2 is None) or len(x1) != len(x2):
            raise ValueError(f"runs diverge structurally at {n1!r} vs {n2!r}")
        pairs = list(zip([0.0 if d1 is None else d1], [0.0 if d2 is None else d2]))
        pairs += [(a[1], b[1]) for a, b in zip(x1, x2)]
        for a, b in pairs:
            denom = max(abs(a), abs(b), 1e-300)
            worst = max(worst, abs(a - b) / denom)
    return worst


def criterion_summary(results: list[CheckResult]) -> list[str]:
    """One pass/fail line per criterion."""
    lines = []
    for crit in sorted({r.criterion for r in results}):
        group = [r for r in results if r.criterion == crit]
        ok = all(r.passed for r in group)
        defects = [r.defect for r in group if r.defect is not None]
        worst = f" worst defect {max(defects):.3e}" if defects else ""
        lines.append(
            f"criterion {crit:2d} [{'PASS' if ok else 'FAIL'}] "
            f"{CRITERION_CLAIMS[crit]}:{worst} ({len(group)} checks)"
        )
    return lines
