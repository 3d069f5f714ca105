"""Exception types raised by the library."""


class InvalidInputError(ValueError):
    """Argument outside the domain of an operation."""


class ModelInvalidError(ValueError):
    """Lattice parameters give a potential that is not positive definite."""


class SingularMatrixError(ArithmeticError):
    """A negative or fractional power was requested of a non-positive symbol."""


class ResourceLimitError(MemoryError):
    """A dense block would exceed the configured element budget."""


class NumericalConsistencyError(ArithmeticError):
    """A quantity violated a mathematical guarantee beyond round-off."""
