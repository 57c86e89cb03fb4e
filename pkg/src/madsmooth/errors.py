"""Exception types raised across the package.

Every error that callers are expected to branch on gets its own class so the
CLI can map failures to exit codes without string matching.
"""


class MadsmoothError(Exception):
    """Base class for all package errors."""


class DomainError(MadsmoothError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class EmptyColumn(MadsmoothError):
    """The selected CSV column contains no numeric rows."""


class NonNumericCell(MadsmoothError):
    """A cell in the selected column failed to parse as a finite real.

    Attributes:
        row: 1-based data row index of the offending cell.
    """

    def __init__(self, row: int, cell: str):
        self.row = row
        self.cell = cell
        super().__init__(f"row {row}: cannot parse {cell!r} as a finite number")


class TooFewPoints(MadsmoothError):
    """Fewer than three usable observations."""


class TiesPresent(MadsmoothError):
    """The three-point CDF estimate requires a tie-free sample."""


class ZeroSpread(MadsmoothError):
    """All observations are equal; scale-dependent quantities are undefined."""


class DegreeOutOfRange(MadsmoothError):
    """Polynomial degree outside the supported search range [2, 7]."""


class DimensionOutOfRange(MadsmoothError):
    """Spline basis dimension outside the supported search range [2, 12]."""


class InsufficientData(MadsmoothError):
    """Too few observations for the requested basis dimension."""


class SingularDesign(MadsmoothError):
    """Design matrix is rank deficient; the fit cannot be initialized."""


class NoConvergence(MadsmoothError):
    """An iterative routine hit its iteration cap without converging."""


class NoFeasibleModel(MadsmoothError):
    """No candidate dimension satisfies the nonnegative-derivative constraint."""


class DimensionMismatch(MadsmoothError, ValueError):
    """Paired vectors have different lengths."""


class BadSpec(MadsmoothError, ValueError):
    """A mixture specification is malformed."""
