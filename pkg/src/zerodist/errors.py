"""Exception hierarchy with stable machine-readable codes.

The CLI serializes any of these to JSON on stderr; the ``code`` attribute is
part of the public interface and must stay stable.
"""


class ZerodistError(Exception):
    code = "error"


class UsageError(ZerodistError):
    code = "usage"


class ParseError(ZerodistError):
    """Malformed input text; carries a 1-based line number when known."""

    code = "parse"

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(ZerodistError):
    code = "validation"


class DataError(ZerodistError):
    code = "data"


class RangeError(ZerodistError):
    code = "range"


class BudgetError(ZerodistError):
    code = "budget"


class QuadratureError(ZerodistError):
    code = "quadrature"


class FixtureError(ZerodistError):
    code = "fixture"
