"""Exception hierarchy shared across the toolkit.

Every error carries a short machine-readable ``code`` so the CLI can emit
structured error JSON without string-matching messages.
"""


class CurveScoreError(Exception):
    code = "Error"


class ParseError(CurveScoreError):
    code = "ParseError"

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
        self.position = position


class NonFiniteScore(ParseError):
    code = "NonFiniteScore"


class DuplicateCheckpoint(ParseError):
    code = "DuplicateCheckpoint"


class UnknownModelToken(ParseError):
    code = "UnknownModelToken"


class TooFewPoints(CurveScoreError):
    code = "TooFewPoints"


class EmptyIntersection(CurveScoreError):
    code = "EmptyIntersection"


class MissingModel(CurveScoreError):
    code = "MissingModel"


class MixtureMismatch(CurveScoreError):
    code = "MixtureMismatch"


class PartialScore(CurveScoreError):
    code = "PartialScore"

    def __init__(self, message, breakdown=None):
        super().__init__(message)
        self.breakdown = breakdown


class TransportError(CurveScoreError):
    code = "TransportError"


class QuotaExceeded(TransportError):
    code = "QuotaExceeded"


class ConfigError(CurveScoreError):
    code = "ConfigError"


class NoInput(CurveScoreError):
    code = "NoInput"
