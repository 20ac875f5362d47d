"""Exception hierarchy shared by all zeroloc modules."""


class ZerolocError(Exception):
    """Base class for every error raised by zeroloc."""


class NotSymmetric(ZerolocError):
    def __init__(self, asymmetry):
        self.asymmetry = float(asymmetry)
        super().__init__(f"matrix is not symmetric (max |A - A^T| = {self.asymmetry:.3e})")


class NotPSD(ZerolocError):
    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(f"matrix is not positive semidefinite (min eigenvalue {self.min_eigenvalue:.3e})")


class KernelDimensionNotOne(ZerolocError):
    def __init__(self, dimension):
        self.dimension = int(dimension)
        super().__init__(f"numerical kernel has dimension {self.dimension}, expected 1")


class LeadingOrTrailingZero(ZerolocError):
    """The first or last kernel coordinate vanishes numerically."""


class RankDeficiencyNotDetected(ZerolocError):
    """A Caratheodory-Fejer decomposition needs a rank-deficient input."""


class IllConditionedNodes(ZerolocError):
    def __init__(self, condition):
        self.condition = float(condition)
        super().__init__(f"node Vandermonde matrix is ill conditioned (cond = {self.condition:.3e})")


class NotSimple(ZerolocError):
    def __init__(self, gap, value=None):
        self.gap = float(gap)
        self.value = value
        super().__init__(f"extremal eigenvalue is not simple (gap = {self.gap:.3e})")


class DimensionMismatch(ZerolocError):
    pass


class NotInKernel(ZerolocError):
    def __init__(self, residual):
        self.residual = float(residual)
        super().__init__(f"vector is not in the kernel (relative residual {self.residual:.3e})")


class NotEven(ZerolocError):
    """The kernel vector is not invariant under the index flip."""


class EtaOrthogonal(ZerolocError):
    """<eta|xi> vanishes, so xi cannot be normalized against the all-ones vector."""


class RepeatedLambda(ZerolocError):
    pass


class DegenerateDegree(ZerolocError):
    """Leading coefficient is numerically zero, so the degree is not certified."""


class DerivativeUnavailable(ZerolocError):
    def __init__(self, order):
        self.order = int(order)
        super().__init__(f"derivative of order {self.order} is not available")


class IdentityMismatch(ZerolocError):
    """Two evaluations of the same identity disagree beyond tolerance."""


class SchemaError(ZerolocError):
    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
