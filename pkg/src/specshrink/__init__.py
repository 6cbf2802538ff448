"""specshrink: executable verification of spectrum-shrinking map theory.

A continuous map between matrix spaces that only ever shrinks spectra is
forced, on the spaces treated here, to preserve them, with the image
characteristic polynomial a power of the source one; and a continuous
commutativity- and spectrum-preserving map is conjugation (possibly with
a transpose) by a recoverable matrix.  This package builds every object
in that story (shrinkers, eigenvalue selectors, the semisimple functional
calculus, the conjugation-swap involution, configuration-space
combinatorics, preserver reconstruction) and tests the claims as seeded
numerical invariants at desk scale.
"""

from . import (  # noqa: F401
    acceptance,
    calculus,
    configspace,
    core,
    errors,
    reconstruct,
    selectors,
    shrinkers,
    spaces,
    theta,
)

__version__ = "0.1.0"
