"""Exception types raised by the library."""


class MetricError(ValueError):
    """A table fails one of the metric axioms."""


class Asymmetry(MetricError):
    def __init__(self, x, y, dxy, dyx):
        super().__init__(f"d({x},{y})={dxy} but d({y},{x})={dyx}")
        self.points = (x, y)


class NegativeEntry(MetricError):
    def __init__(self, x, y, value):
        super().__init__(f"d({x},{y})={value} is negative")
        self.points = (x, y)


class NonzeroDiagonal(MetricError):
    def __init__(self, x, value):
        super().__init__(f"d({x},{x})={value} must be 0")
        self.points = (x,)


class ZeroOffDiagonal(MetricError):
    """Distinct points at distance zero are rejected, never merged."""

    def __init__(self, x, y):
        super().__init__(f"d({x},{y})=0 for distinct points")
        self.points = (x, y)


class TriangleViolation(MetricError):
    def __init__(self, x, z, y, dxy, dxz, dzy):
        super().__init__(
            f"d({x},{y})={dxy} exceeds d({x},{z})+d({z},{y})={dxz}+{dzy}"
        )
        self.points = (x, z, y)


class UnknownPoint(KeyError):
    def __init__(self, point):
        super().__init__(f"unknown point {point!r}")
        self.point = point


class EmptySubset(ValueError):
    """A virtual distance was requested relative to an empty point set."""


class GammaOutOfRange(ValueError):
    """Split-map weights must be nonnegative and sum to the isolation index."""


class CapExceeded(ValueError):
    """A brute-force oracle was asked to run above its configured size cap."""

    def __init__(self, n, cap):
        super().__init__(f"instance has {n} points, oracle cap is {cap}")
        self.n = n
        self.cap = cap


class ParseError(ValueError):
    """Malformed input document; carries a 1-based line and optional column."""

    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {col}" if col is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.col = col


class RealizationCheckFailed(RuntimeError):
    """A constructed realization violates one of its defining properties.

    Never returned silently: it signals an engine bug or an instance that
    exposes a gap in the construction.
    """
