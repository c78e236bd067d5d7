"""The admissible region on the coefficient sphere and its grid."""
import math

import numpy as np

from swkernel import classify_region, sample_moduli_grid
from swkernel.moduli import admissible_area_fraction

# The ordered spectra cut the sphere into N! congruent chambers.
for n in (3, 4, 5):
    f = admissible_area_fraction(n, 1_000_000, np.random.default_rng(n))
    print(f"N={n}: area fraction {f:.5f}, 1/N! = {1 / math.factorial(n):.5f}")

# Subregion labels for a few quatrit angle pairs.
for psi in [(0.0, 0.0), (0.6, 0.0), (0.6, 0.4), (0.6, np.pi / 3), (0.6, 1.5)]:
    print(psi, classify_region(psi, 4))

# Grid sizes reflect the N-2 free parameters.
for n, res in [(2, 10), (3, 10), (4, 10), (5, 6)]:
    print(f"N={n}, resolution {res}: {len(sample_moduli_grid(n, res))} grid points")
