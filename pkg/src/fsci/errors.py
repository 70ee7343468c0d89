"""Exception hierarchy.

Validation problems in input files derive from :class:`ValidationError` (CLI
exit code 2); failures inside the numerical or analysis layers derive from
:class:`AnalysisError` (exit code 3).
"""
from __future__ import annotations


class FSCIError(Exception):
    """Base class for every error raised by the engine."""


class ValidationError(FSCIError):
    def __init__(self, message: str, row: int | None = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class DuplicateIndicatorId(ValidationError):
    pass


class UnknownDirection(ValidationError):
    pass


class UnknownWeightKey(ValidationError):
    pass


class UnknownTheme(ValidationError):
    pass


class BadHeader(ValidationError):
    pass


class UnparseableValue(ValidationError):
    pass


class DuplicateCell(ValidationError):
    pass


class UnknownIndicator(ValidationError):
    pass


class UnknownCountry(ValidationError):
    pass


class InvalidCountry(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class AnalysisError(FSCIError):
    pass


class MissingWeightSeries(AnalysisError):
    pass


class InvalidWindow(AnalysisError):
    pass


class ZeroTotalWeight(AnalysisError):
    pass


class LengthMismatch(AnalysisError):
    pass


class NeedTwoPoints(AnalysisError):
    pass


class NeedThreePoints(AnalysisError):
    pass


class EmptyInput(AnalysisError):
    pass


class ProbOutOfRange(AnalysisError):
    pass


class EmptyGroup(AnalysisError):
    pass


class ZeroGroupWeight(AnalysisError):
    pass


class DegenerateDof(AnalysisError):
    pass


class InvalidDof(AnalysisError):
    pass


class TooFewPoints(AnalysisError):
    pass


class ZeroRange(AnalysisError):
    pass


class NegativeComponent(AnalysisError):
    pass


class NonpositiveGDP(AnalysisError):
    pass


class NonpositiveUrbanPop(AnalysisError):
    pass


class EmptySeries(AnalysisError):
    pass


class ZeroGlobalMean(AnalysisError):
    pass


class EmptySubset(AnalysisError):
    pass


class FetchError(FSCIError):
    pass


class NetworkError(FetchError):
    pass


class HttpStatusError(FetchError):
    def __init__(self, code: int, url: str = ""):
        self.code = code
        super().__init__(f"HTTP {code} for {url}" if url else f"HTTP {code}")


class CacheWriteError(FetchError):
    pass
