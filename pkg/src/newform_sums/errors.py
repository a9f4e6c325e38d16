"""Exception types shared across the package."""


class UndefinedInputError(ValueError):
    """An arithmetic function was evaluated where it is undefined (e.g. at 0)."""


class EmptyDomainError(ValueError):
    """A range bound leaves nothing to compute."""


class CapacityError(ValueError):
    """Input exceeds the size the implementation supports."""


class BadReductionError(ValueError):
    def __init__(self, p: int, message: str = ""):
        self.p = p
        super().__init__(message or f"curve has bad reduction at p={p}")


class CoefficientParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IncompleteInputError(ValueError):
    """A coefficient needed for a derived computation is missing."""


class CoverageError(ValueError):
    """A query reaches beyond the range covered by a coefficient table."""


class CoefficientOverflowError(ArithmeticError):
    def __init__(self, n: int, message: str = ""):
        self.n = n
        super().__init__(message or f"value at n={n} exceeds 127-bit magnitude")


class NonUnitError(ValueError):
    """A determinant residue is not a unit."""


class UnsupportedModulusError(ValueError):
    """The modulus h has no supported counting route."""


class ParameterError(ValueError):
    """An experiment parameter violates its precondition."""
