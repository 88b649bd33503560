"""Exception hierarchy shared across the package."""


class CentralityKitError(Exception):
    """Base class for all package errors."""


class NotHermitian(CentralityKitError):
    """Input matrix or element is not Hermitian within tolerance."""


class NotPSD(CentralityKitError):
    """Matrix has a materially negative eigenvalue."""


class NoConvergence(CentralityKitError):
    """Iterative eigensolver exhausted its sweep budget."""


class ShapeMismatch(CentralityKitError):
    """Operands live on different algebra shapes or block dimensions."""


class NotOrthonormal(CentralityKitError):
    """Supplied vectors are not orthonormal within tolerance."""


class NotProjection(CentralityKitError):
    """Element fails p*p = p = p^* within tolerance."""


class NotPositive(CentralityKitError):
    """Functional is not positive (density not PSD) within tolerance."""


class InvalidInputs(CentralityKitError):
    """Condition inputs fail their structural constraint."""


class NotPositiveElement(CentralityKitError):
    """Condition evaluation requires a positive algebra element."""


class NotAViolation(CentralityKitError):
    """Witness construction requires a strict inequality that does not hold."""


class InconsistentMath(CentralityKitError):
    """A condition verdict disagrees with the centrality oracle.

    The equivalence theorems guarantee agreement, so this always signals a
    numerical or logic bug, never a property of the input.
    """


class DerivationFailed(InconsistentMath):
    """Certificate derivation hit a branch the theory rules out."""


class SchemaError(CentralityKitError):
    """File does not match the expected schema."""


class DimensionMismatch(SchemaError):
    """Matrix data in a file is inconsistent with the declared block dims."""
