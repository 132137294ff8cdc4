"""Exception types.

``ValidationError`` marks malformed input (CLI exit 2); ``HypothesisError``
marks a mathematical hypothesis that does not hold for otherwise valid input
(CLI exit 3).  Both carry a short machine-readable ``reason`` code.
"""


class OkounkovError(ValueError):
    reason = "error"

    def __init__(self, message: str, reason: str | None = None, **details):
        super().__init__(message)
        if reason is not None:
            self.reason = reason
        self.details = details


class ValidationError(OkounkovError):
    reason = "invalid-input"


class HypothesisError(OkounkovError):
    reason = "hypothesis-failed"


class GeometryError(ValidationError):
    reason = "geometry"


class DegenerateError(HypothesisError):
    reason = "degenerate"
