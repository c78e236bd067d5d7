"""Haar Monte Carlo: state reconstruction and fourth moments."""
import numpy as np

from swkernel import reconstruct_mc, weingarten_check
from swkernel.moduli import random_moduli_point
from swkernel.wigner import random_density_matrix

rng = np.random.default_rng(0)
for n in (2, 3):
    rho = random_density_matrix(n, rng)
    point = random_moduli_point(n, rng)
    for m in (10_000, 40_000, 160_000):
        err = reconstruct_mc(rho, point, m, seed=m).error
        print(f"N={n}, M={m:>7}: reconstruction error {err:.5f}, sqrt(M) * err = {err * np.sqrt(m):.2f}")

for n in (2, 3):
    print(f"N={n}: max fourth-moment deviation {weingarten_check(n, 100_000, seed=n):.4f}")
