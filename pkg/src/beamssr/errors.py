"""Exception hierarchy shared by every beamssr module."""


class BeamSsrError(Exception):
    """Base class for all library errors."""


# trace ingestion / preprocessing

class TraceError(BeamSsrError):
    pass


class MissingColumn(TraceError):
    def __init__(self, column):
        super().__init__(f"required column {column!r} is missing")
        self.column = column


class MalformedRow(TraceError):
    def __init__(self, row, reason):
        super().__init__(f"row {row}: {reason}")
        self.row = row
        self.reason = reason


class EmptyTrace(TraceError):
    pass


class BandConfigError(BeamSsrError):
    pass


class BandwidthOverflow(BandConfigError):
    pass


class UnsortedBeams(BandConfigError):
    pass


# statistics

class DomainError(BeamSsrError, ValueError):
    """Argument outside the mathematical domain of a function."""


class NonConvergence(BeamSsrError, ArithmeticError):
    """An iterative method exhausted its iteration budget."""


class FitError(BeamSsrError):
    pass


class NoBeamData(FitError):
    pass


class DegenerateSample(FitError):
    pass


class EmptySample(FitError):
    pass


class EmptyReport(FitError):
    """Every candidate distribution failed to fit."""


class NoTransitions(FitError):
    """No beam change observed; conditional probabilities are undefined."""

    def __init__(self, message, counts=None):
        super().__init__(message)
        self.counts = dict(counts or {})


# band analytics

class AnalyticsError(BeamSsrError):
    pass


class EmptyInput(AnalyticsError):
    pass


class NoRankData(AnalyticsError):
    pass


class QuantileInLossRegion(AnalyticsError):
    pass


# synthesis

class SynthesisError(BeamSsrError):
    pass


class InfeasibleAdjacency(SynthesisError):
    pass
