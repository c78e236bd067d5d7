"""Exception hierarchy shared by all swkernel modules."""


class SWKernelError(Exception):
    """Base class for every error raised by this package."""


class InvalidDimensionError(SWKernelError, ValueError):
    pass


class ContractViolationError(SWKernelError, ValueError):
    """Input does not satisfy a structural precondition (e.g. Hermiticity)."""


class ConstraintViolationError(SWKernelError, ValueError):
    """Moduli coefficients are off the unit sphere."""


class DomainError(SWKernelError, ValueError):
    """A family parameter lies outside its validity interval."""


class MasterEquationError(SWKernelError, ValueError):
    """A matrix fails ``tr = 1`` or ``tr^2 = N``."""


class InconsistentStratumError(SWKernelError, RuntimeError):
    """Eigenvalue clustering and Gram rank disagree at the given tolerance."""
