"""Wigner functions of qutrit states, directly and in Bloch-vector form."""
import numpy as np

from swkernel import DensityMatrix, ModuliPoint, build_kernel, sample_haar_unitary, wigner_cartan, wigner_value
from swkernel.wigner import random_density_matrix, wigner_sweep

point = ModuliPoint.from_angles((0.4,), 3)
rho = random_density_matrix(3, 0)
print("Bloch vector:", np.round(rho.bloch, 4), "norm:", round(float(np.linalg.norm(rho.bloch)), 4))

for seed in range(3):
    u = sample_haar_unitary(3, seed)
    w = wigner_value(rho, build_kernel(point, u))
    wc = wigner_cartan(rho.bloch, point, u)
    print(f"phase point {seed}: W = {w:+.6f}, Bloch form = {wc:+.6f}")

# A pure state reaches negative values somewhere on phase space.
pure = DensityMatrix.pure([1, 1j, 0])
vals = wigner_sweep(pure, point, 20_000, seed=1)
print(f"pure state: min W = {vals.min():+.4f}, max W = {vals.max():+.4f}, mean = {vals.mean():.4f} (1/3 expected)")
