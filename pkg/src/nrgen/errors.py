"""Exception hierarchy shared by every module.

Each class carries a short ``kind`` used by the CLI to report a
machine-readable error class and pick an exit code.
"""


class NrgenError(Exception):
    kind = "internal"


class GrammarSyntaxError(NrgenError, ValueError):
    kind = "parse"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class GrammarValidationError(NrgenError, ValueError):
    kind = "validation"

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class NotInLanguageError(NrgenError, ValueError):
    kind = "range"


class RankOutOfRangeError(NrgenError, ValueError):
    kind = "range"


class ExhaustedError(NrgenError, RuntimeError):
    """Every word of the requested length is already forbidden."""

    kind = "exhausted"


class AttemptCapExceeded(NrgenError, RuntimeError):
    kind = "exhausted"

    def __init__(self, attempts):
        self.attempts = attempts
        super().__init__(f"rejection gave up after {attempts} attempts")


class DuplicateWordError(NrgenError, ValueError):
    kind = "internal"


class OverlapError(NrgenError, ValueError):
    kind = "internal"


class InvariantError(NrgenError, AssertionError):
    kind = "internal"
