"""Qubit and qutrit kernels from the moduli chart and from closed forms."""
import numpy as np

from swkernel import ModuliPoint, build_kernel, family_spectrum, lucas_traces, sample_haar_unitary
from swkernel.kernels import qutrit_nu_from_angle

np.set_printoptions(precision=6, suppress=True)

# A qubit has no free parameter: the moduli space is a single point.
qubit = build_kernel(ModuliPoint.from_angles((), 2))
print("qubit spectrum:", qubit.spectrum, "stratum:", qubit.stratum.pattern)

# The qutrit moduli space is an arc 0 <= zeta <= pi/3.
for zeta in np.linspace(0, np.pi / 3, 5):
    k = build_kernel(ModuliPoint.from_angles((zeta,), 3))
    nu = qutrit_nu_from_angle(zeta)
    print(f"zeta={zeta:.4f}  nu={nu:+.4f}  spectrum={k.spectrum}  stratum={k.stratum.pattern}")

# Closed form agrees with the chart.
print("closed form at nu=-0.6:", family_spectrum("qutrit", -0.6))

# Conjugating by a unitary moves the kernel along its orbit; the spectrum stays put.
u = sample_haar_unitary(3, 0)
k = build_kernel(ModuliPoint.from_angles((0.5,), 3), u)
print("conjugated eigenvalues:", np.linalg.eigvalsh(k.matrix)[::-1])
print("master equations:", k.master())

# The golden-ratio kernel has a zero eigenvalue and Lucas-number trace powers.
print("golden spectrum:", family_spectrum("golden"))
print("tr(Delta^n):", {n: round(v, 10) for n, v in lucas_traces(10).items()})
