class AlgebraError(ValueError):
    """Base class for every error raised by this package."""


class AlgebraMismatch(AlgebraError):
    """Elements or morphisms combined across incompatible algebras."""


class DegreeError(AlgebraError):
    """An element has the wrong (or no well-defined) degree."""


class DegreeCapExceeded(AlgebraError):
    pass


class NotClosed(AlgebraError):
    pass


class PDValidationError(AlgebraError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class MasseyUndefined(AlgebraError):
    pass


class InvariantViolation(AlgebraError):
    """The inductive quasi-isomorphism invariant of a model stage failed."""
