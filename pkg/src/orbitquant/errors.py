"""Exception types shared across the package."""


class OrbitQuantError(Exception):
    """Base class for all package errors."""


class InvalidCartan(OrbitQuantError):
    """Cartan matrix is not of finite type (or not a Cartan matrix at all)."""


class GradingInconsistent(OrbitQuantError):
    """Additive extension of the simple-root markings violates the Z2-grading."""


class DimensionMismatch(OrbitQuantError):
    """Operands live over lattices of different rank."""


class NotDominant(OrbitQuantError):
    """Weight is not dominant for the requested chamber."""


class NotIntegral(OrbitQuantError):
    """Weight has odd doubled coordinates where an integral weight is required."""


class NotDivisible(OrbitQuantError):
    """Exact character division left a nonzero remainder."""


class Singular(OrbitQuantError):
    """Parameter pairs to zero against some root."""


class NotCompatible(OrbitQuantError):
    """Parameter is not strictly dominant for the fixed compact positive system."""


class IdentityViolation(OrbitQuantError):
    """An exact character identity failed; indicates a bug or invalid input."""


class IllConditioned(OrbitQuantError):
    """Singular values cluster at the rank threshold; the answer is ambiguous."""


class UnknownModel(OrbitQuantError):
    """Requested name is not in the catalog."""


class InvariantViolation(OrbitQuantError):
    """A structural invariant failed to validate on load."""


class NotKFixed(OrbitQuantError):
    """Point-case induction requires a K-fixed chamber point."""


class ZeroXi(OrbitQuantError):
    """Chamber point is zero where a nonzero one is required."""


class InvalidSpec(OrbitQuantError):
    """Malformed verification spec."""
