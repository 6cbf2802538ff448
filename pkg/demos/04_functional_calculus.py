"""Applying scalar functions to diagonalizable matrices, and where that
operation stops being continuous.

f(T) = sum f(lambda) E_lambda over the spectral idempotents.  For 2x2
upper triangular matrices the result has a closed form whose off-diagonal
is a difference quotient of f, and that quotient is the whole story of
discontinuity: pick f continuous but not Lipschitz, let the eigenvalues
collide faster than the off-diagonal entry shrinks, and f(T) blows up
while T converges.  At simple spectra nothing of the sort can happen.
"""

import numpy as np

from specshrink import calculus, core, spaces

rng = np.random.default_rng(3)

print("the 2x2 closed form vs the idempotent sum")
l1, l2, a = 0.4 + 0.9j, -1.1, 1.7
T = np.array([[l1, a], [0.0, l2]])
for name, f in [("conj", np.conj), ("square", lambda z: z * z)]:
    lhs = calculus.calc_2x2_closed_form(l1, l2, a, f)
    rhs = calculus.apply_function(T, f)
    print(f"  f = {name:6}: difference {core.opnorm(lhs - rhs):.3e}")

print()
print("interpolation oracle on a random diagonalizable 3x3")
X = spaces.sample("mn_ss", 3, rng)
d = core.opnorm(calculus.apply_function(X, np.conj)
                - calculus.lagrange_apply(X, np.conj))
print(f"  idempotent route vs interpolation route: {d:.3e}")

print()
print("continuity at a simple spectrum: deviations shrink with the scale")
T3 = np.diag([1.0, 2.0, 3.0]).astype(complex)
for i, scale in enumerate((1e-2, 1e-3, 1e-4)):
    dev = calculus.continuity_probe(T3, np.conj, scale, samples=40,
                                    rng=np.random.default_rng(i))
    print(f"  scale {scale:.0e}: max deviation {dev:.3e}")

print()
print("discontinuity at a repeated eigenvalue: f(z) = sqrt|z - 1|")
for delta in (1e-4, 1e-6, 1e-8):
    Td = np.array([[1.0, delta ** 0.25], [0.0, 1.0 + delta]], dtype=complex)
    fTd = calculus.apply_function(Td, calculus.sqrt_shift, grouping_tol=1e-12)
    print(f"  delta {delta:.0e}: ||T - I|| = {core.opnorm(Td - np.eye(2)):.2e}, "
          f"||f(T)|| = {core.opnorm(fTd):.2e}  (delta^-1/4 = {delta**-0.25:.0e})")
print("  the matrix converges to the identity while f of it diverges")
