"""Exception taxonomy shared across the package.

Domain errors (everything deriving from :class:`ManifoldCorrError`) map to
exit code 2 in the CLI; file/parse problems map to exit code 1.
"""


class ManifoldCorrError(Exception):
    """Base class for domain errors raised by this package."""


class DegenerateVariance(ManifoldCorrError):
    """A column has zero variance where a positive variance is required."""

    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} has zero variance; correlation is undefined")


class InvalidNoise(ManifoldCorrError):
    """Noise variance exceeds the total variance it is supposed to be part of."""


class NotOrthonormal(ManifoldCorrError):
    """A matrix that must have orthonormal columns does not."""


class RankDeficientA(ManifoldCorrError):
    """The mixing matrix of an elliptical spec does not have full column rank."""


class ModeUnsupported(ManifoldCorrError):
    """The requested sensitivity mode is not available for this manifold."""


class AllSamplesFlagged(ManifoldCorrError):
    """Every sample was excluded from a Monte-Carlo average; no estimate exists."""


class SingularSystem(ManifoldCorrError):
    """The node-position system of an elastic fit is singular (empty nodes, no penalties)."""


class DimensionUnsupported(ManifoldCorrError):
    """The requested intrinsic or ambient dimension is outside the supported range."""


class CsvFormatError(Exception):
    """A CSV file violated the expected numeric-table dialect."""


class RankDeficientWarning(UserWarning):
    """Fewer strictly positive eigenvalues than requested components."""
