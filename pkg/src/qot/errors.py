"""Exception types shared across the package."""


class QotError(ValueError):
    """Base class for all validation and numerical errors raised here."""


class DimensionMismatch(QotError):
    pass


class NotHermitian(QotError):
    pass


class NoConvergence(QotError):
    pass


class NotUnitTrace(QotError):
    pass


class NotPSD(QotError):
    pass


class InvalidDimension(QotError):
    pass


class InvalidSpin(QotError):
    pass


class IrregularFunction(QotError):
    pass


class MarginalMismatch(QotError):
    pass


class EnsembleMismatch(QotError):
    pass


class ExactnessWarning(UserWarning):
    """Result relies on PPT as a relaxation of separability (d >= 3)."""


class DegenerateEigenbasis(UserWarning):
    """Eigenbasis used for a classical-quantum coupling is not unique."""
