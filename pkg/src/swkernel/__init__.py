"""Stratonovich-Weyl kernels, their moduli space and finite-dimensional Wigner functions."""
from .algebra import (
    GellMannBasis,
    SpectralDecomposition,
    build_basis,
    haar_unitaries,
    sample_haar_unitary,
    spectral_decompose,
)
from .errors import (
    ConstraintViolationError,
    ContractViolationError,
    DomainError,
    InconsistentStratumError,
    InvalidDimensionError,
    MasterEquationError,
    SWKernelError,
)
from .kernels import (
    FAMILIES,
    KernelFamily,
    SWKernel,
    build_kernel,
    detect_singular,
    family_kernel,
    family_spectrum,
    kernel_from_matrix,
    lucas_traces,
    verify_master,
)
from .moduli import (
    ModuliPoint,
    RegionMembership,
    angles_to_mu,
    check_ordering,
    classify_region,
    mu_to_spectrum,
    sample_moduli_grid,
    spectrum_to_mu,
)
from .orbits import Stratum, classify_stratum, cone_membership, gram_matrix, orbit_cone
from .wigner import (
    DensityMatrix,
    check_sw_postulates,
    reconstruct_mc,
    to_bloch,
    weingarten_check,
    wigner_cartan,
    wigner_value,
)

__version__ = "0.1.0"
