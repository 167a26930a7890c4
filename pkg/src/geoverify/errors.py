"""Exception hierarchy shared by every geoverify module."""


class GeoVerifyError(Exception):
    """Base class for all errors raised by geoverify."""


class ParseError(GeoVerifyError, ValueError):
    """An expression could not be parsed.

    ``offset`` is the byte offset (UTF-8) into the source text.
    """

    location = None

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset

    def __str__(self):
        text = super().__str__()
        return f"{self.location}: {text}" if self.location else text


class ExpressionSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    def __init__(self, name, offset=0):
        super().__init__(f"unknown identifier {name!r}", offset)
        self.name = name


class NonConstantExponent(ParseError):
    def __init__(self, offset=0):
        super().__init__("exponent of '^' depends on a coordinate", offset)


class DomainError(GeoVerifyError, ArithmeticError):
    def __init__(self, function, value):
        super().__init__(f"{function}: argument {value!r} outside the domain")
        self.function = function
        self.value = value


class DegenerateMetric(GeoVerifyError, ArithmeticError):
    def __init__(self, det, threshold):
        super().__init__(f"degenerate metric: |det g| = {abs(det):.3e} <= {threshold:.3e}")
        self.det = det
        self.threshold = threshold


class PreconditionUnmet(GeoVerifyError):
    """Raised when a check is called on data that fails its stated prerequisites."""


class InconsistentEpsilon(GeoVerifyError):
    def __init__(self, measured, epsilon):
        super().__init__(f"g(xi, xi) = {measured!r} does not match declared epsilon = {epsilon}")
        self.measured = measured
        self.epsilon = epsilon


class LightlikeXi(GeoVerifyError):
    def __init__(self, measured):
        super().__init__(f"structure vector field is lightlike: g(xi, xi) = {measured!r}")
        self.measured = measured


class DimensionTooSmall(GeoVerifyError, ValueError):
    def __init__(self, n):
        super().__init__(f"dimension n = {n} must exceed 2")
        self.n = n


class EmptyInput(GeoVerifyError, ValueError):
    pass


class SpecError(GeoVerifyError):
    """A manifold spec file is malformed or lacks a block the suite needs."""


class FileError(GeoVerifyError, OSError):
    pass


class UndeterminedMu(UserWarning):
    """The eta-tensor-eta column of a soliton fit vanishes; only lambda is fitted."""
