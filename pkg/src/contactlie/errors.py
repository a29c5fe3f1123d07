"""Exception hierarchy shared by every module."""


class ContactLieError(Exception):
    """Base class for all errors raised by contactlie."""


class DimensionError(ContactLieError, ValueError):
    pass


class AntisymmetryError(ContactLieError, ValueError):
    pass


class SingularMetric(ContactLieError, ValueError):
    pass


class NotTwoStep(ContactLieError):
    pass


class InvalidStructure(ContactLieError):
    pass


class NotCosymplectic(ContactLieError):
    pass


class NoStructure(ContactLieError):
    pass


class DependentBasis(ContactLieError, ValueError):
    pass


class NotClosed(ContactLieError):
    """The span is not closed under the bracket.

    ``residual`` is the largest normal component of a bracket of two basis
    columns and ``witness`` the index pair achieving it.
    """

    def __init__(self, residual, witness):
        self.residual = float(residual)
        self.witness = witness
        super().__init__(
            f"subspace not closed under bracket: residual {self.residual:.3g} "
            f"at columns {witness}"
        )


class NotTangent(ContactLieError, ValueError):
    pass


class NotNormal(ContactLieError, ValueError):
    pass


class ZeroVector(ContactLieError, ValueError):
    pass


class InvalidParameter(ContactLieError, ValueError):
    pass


class InputError(ContactLieError):
    """Malformed input document. ``where`` locates the problem."""

    def __init__(self, message, where=None):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
