"""Exception hierarchy shared by the workbench modules."""


class FrhsError(Exception):
    """Base class for every error raised by the workbench."""


class ValidationError(FrhsError):
    """Input data does not describe a valid algebra, metric or model."""


class IndexOutOfRange(ValidationError):
    pass


class AntisymmetryViolation(ValidationError):
    pass


class JacobiViolation(ValidationError):
    def __init__(self, residual, triple):
        self.residual = residual
        self.triple = triple
        super().__init__(
            f"Jacobi identity fails: residual {residual:.3e} at basis triple {triple}"
        )


class NotSubalgebra(ValidationError):
    def __init__(self, residual, pair):
        self.residual = residual
        self.pair = pair
        super().__init__(
            f"[h, h] is not contained in h: m-component {residual:.3e} for pair {pair}"
        )


class NotInvariant(ValidationError):
    def __init__(self, residual, pair):
        self.residual = residual
        self.pair = pair
        super().__init__(
            f"[h, m] is not contained in m: h-component {residual:.3e} for pair {pair}"
        )


class MetricError(ValidationError):
    """Inner product is not symmetric positive definite, or shapes disagree."""


class DomainError(FrhsError):
    """Argument outside the region where the metric function is defined."""


class NearZeroVector(FrhsError):
    pass


class DegenerateFlag(FrhsError):
    pass


class ThetaNearZero(FrhsError):
    pass


class NotNaturallyReductive(FrhsError):
    pass


class UnknownId(FrhsError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
