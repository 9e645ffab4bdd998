"""Exception hierarchy shared by all modules.

Each class name doubles as the machine-readable reason printed by the CLI.
"""


class GeometryError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 2

    @property
    def reason(self) -> str:
        return type(self).__name__


class ZeroVector(GeometryError):
    pass


class OppositeVectors(GeometryError):
    pass


class InvalidPolyline(GeometryError):
    pass


class NotSimple(GeometryError):
    pass


class NotCCW(GeometryError):
    pass


class DegenerateArea(GeometryError):
    pass


class StartsNotAligned(GeometryError):
    pass


class RotationsDiffer(GeometryError):
    pass


class AcoPreconditionViolated(GeometryError):
    pass


class TagMismatch(GeometryError):
    pass


class GeneralPositionFailed(GeometryError):
    pass


class NotGeneralPosition(GeometryError):
    pass


class LoopRotationTooNegative(GeometryError):
    pass


class NotConvex(GeometryError):
    pass


class PointInsidePolygon(GeometryError):
    pass


class SearchExhausted(GeometryError):
    exit_code = 4


class InternalInconsistency(GeometryError):
    exit_code = 4


class ParseError(GeometryError):
    exit_code = 3

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column
