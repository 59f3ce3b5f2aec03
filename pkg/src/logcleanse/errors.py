"""Exception hierarchy shared across the package."""


class LogCleanseError(Exception):
    """Base class for every error raised by logcleanse."""


class MalformedEntry(LogCleanseError, ValueError):
    """A log line has no recognizable timestamp prefix or no message."""


class PatternCompileError(LogCleanseError, ValueError):
    def __init__(self, row: int, name: str, reason: str):
        super().__init__(f"pattern row {row} ({name!r}) does not compile: {reason}")
        self.row = row
        self.name = name


class DuplicateRank(LogCleanseError, ValueError):
    pass


class SpanMismatch(LogCleanseError, ValueError):
    """A detection's original text no longer sits at its span."""


class PolicyParseError(LogCleanseError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class SeverityOutOfRange(PolicyParseError):
    pass


class EmptyEntry(LogCleanseError, ValueError):
    """Quality fractions are undefined for an entry without terms."""


class UnsupportedLength(LogCleanseError, ValueError):
    pass


class TableCorrupt(LogCleanseError):
    pass


class UnknownKey(LogCleanseError, KeyError):
    pass


class EmptyMatrix(LogCleanseError, ValueError):
    pass
