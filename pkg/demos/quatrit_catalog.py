"""Every named quatrit family, its stratum and the Gram-rank check."""
import numpy as np

from swkernel import classify_stratum, family_kernel, gram_matrix, sample_haar_unitary
from swkernel.kernels import FAMILIES, detect_singular

np.set_printoptions(precision=5, suppress=True)

examples = {
    "quatrit-regular": (-0.3, -0.8),
    "quatrit-1|234": (0.1,),
    "quatrit-12|34": (0.2,),
    "quatrit-123|4": (-0.5,),
    "quatrit-1204": (-1.0,),
    "quatrit-1034": (-0.3,),
}

u = sample_haar_unitary(4, 1)
print(f"{'family':18} {'stratum':8} {'orbit':>5} {'rank':>5} {'label':6} spectrum")
for name, spec in FAMILIES.items():
    if spec.dim != 4:
        continue
    params = examples.get(name, ())
    k = family_kernel(name, *params, u=u)
    st = classify_stratum(k)
    rank = gram_matrix(k).rank
    sing = detect_singular(k)
    print(f"{name:18} {st.pattern:8} {st.orbit_dim:5d} {rank:5d} {sing.label:6} {k.spectrum}")
