"""The components of n distinct points on a circle, as permutation cosets.

Reading a configuration counterclockwise produces a permutation that is
well defined up to the starting point, i.e. up to right multiplication by
the cyclic shift.  That coset labels the connected component, the
labeling intertwines the permutation action, and the stabilizer of each
component is a conjugate of the cyclic group, of order exactly n.  A
small shift-factorization identity about transpositions (used when
pinning down maps on compact tori) is checked exhaustively.
"""

import numpy as np

from specshrink import configspace as cs

pts = cs.CirclePoints(np.exp(2j * np.pi * np.array([0.05, 0.62, 0.31, 0.84])))
coset = cs.classify_component(pts)
print("points at angles 0.05, 0.62, 0.31, 0.84 turns")
print("  counterclockwise coset representative:", coset.rep)

sigma = (2, 0, 3, 1)
moved = cs.act(sigma, pts)
print(f"  after acting by {sigma}: representative",
      cs.classify_component(moved).rep)
print("  equals the left-multiplied coset:",
      cs.classify_component(moved) == coset.left_multiply(sigma))

iso = cs.isotropy_of_component(pts)
print(f"  stabilizer has {len(iso)} elements (n = 4):")
for p in sorted(iso):
    print("   ", p)
print("  matches the conjugated cyclic group:",
      iso == cs.expected_isotropy(coset))

print()
print("rotating every point by a common phase never changes the coset:")
for phase in (0.1, 0.33, 0.77):
    rotated = cs.CirclePoints(pts.z * np.exp(2j * np.pi * phase))
    print(f"  phase {phase}: same coset ->",
          cs.classify_component(rotated) == coset)

print()
print("shift-factorization of transpositions, exhaustive:")
for n in range(2, 9):
    print(f"  n={n}: {cs.verify_cycle_decomposition(n)}")
