"""Exception hierarchy for the verifier."""


class VerifierError(ValueError):
    """Base class for every error raised by the verifier."""


class NonInvertibleError(VerifierError):
    """Raised when an element or matrix with vanishing body is inverted."""


class NonInvertibleVielbeinError(NonInvertibleError):
    """Raised when the body of the vielbein matrix is singular."""


class RepresentationSearchFailedError(VerifierError):
    """Raised when the charge-conjugation solve does not yield a unique matrix."""


class NotMajoranaError(VerifierError):
    """Raised when a spinor violates the Majorana constraint."""


class GradingMismatchError(VerifierError):
    """Raised when operands carry incompatible or inhomogeneous gradings."""


class InsufficientJetOrderError(VerifierError):
    """Raised when a computation would need derivatives beyond the stored jet order."""


class UnsupportedTargetError(VerifierError):
    """Raised when an operation is not defined for a field's target type."""


class DegreeOverflowError(VerifierError):
    """Raised when a wedge map would exceed the top form or multivector degree."""


class DegreeUnderflowError(VerifierError):
    """Raised when a bracket map is applied to a multivector degree that is too small."""


class EpsilonCollisionError(VerifierError):
    """Raised when the reserved derivation generator already appears in a configuration."""


class ConvergenceError(VerifierError):
    """Raised when a nilpotent correction fails to terminate."""


class ConfigError(VerifierError):
    """Raised for invalid run configurations."""
