from __future__ import annotations


class MorreyGateError(ValueError):
    """Base class for every error the toolkit raises on bad input or state."""


class GridError(MorreyGateError):
    pass


class SpecMismatchError(MorreyGateError):
    pass


class PoleError(MorreyGateError):
    pass


class RieszRangeError(MorreyGateError):
    pass


class ZeroModeError(MorreyGateError):
    pass


class OracleError(MorreyGateError):
    pass


class EmptyBallError(MorreyGateError):
    pass


class ExponentError(MorreyGateError):
    pass


class HypothesisError(MorreyGateError):
    def __init__(self, relation: str, message: str | None = None):
        self.relation = relation
        super().__init__(message or f"hypothesis violated: {relation}")


class SingularEvaluationError(MorreyGateError):
    pass


class SupportError(MorreyGateError):
    pass


class FitError(MorreyGateError):
    pass


class ConfigError(MorreyGateError):
    pass


class UnknownSuiteError(MorreyGateError):
    def __init__(self, suite_id: str, valid: list[str]):
        self.suite_id = suite_id
        self.valid = valid
        super().__init__(f"unknown suite '{suite_id}'; valid suites: {', '.join(valid)}")


class OutputCollisionError(MorreyGateError):
    pass


class ReportError(MorreyGateError):
    pass
