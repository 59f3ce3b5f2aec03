"""Syslog line parsing and message tokenization.

A line is ``<timestamp> <message>``. The timestamp is either integer epoch
seconds or an ISO datetime ``YYYY-MM-DDThh:mm:ss`` (optionally with fraction
and UTC offset); everything after the single separator is the message,
untouched. Terms are maximal runs of non-whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import MalformedEntry

_EPOCH = re.compile(r"(\d+)(\s)")
_ISO = re.compile(
    r"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2})(\.\d+)?(Z|[+-]\d{2}:?\d{2})?(\s)"
)
_TERM = re.compile(r"\S+")


@dataclass(frozen=True)
class LogEntry:
    timestamp: int
    message: str
    origin: str | None = None
    raw_length: int = -1
    # Timestamp token exactly as it appeared; written back out unmodified.
    stamp: str = ""

    def __post_init__(self):
        if self.raw_length < 0:
            object.__setattr__(self, "raw_length", len(self.message))
        if not self.stamp:
            object.__setattr__(self, "stamp", str(self.timestamp))


@dataclass
class Term:
    text: str
    index: int
    start: int = 0
    sensitive: bool = False
    semantic: bool = False
    is_placeholder: bool = False

    @property
    def end(self) -> int:
        return self.start + len(self.text)


def _iso_to_epoch(base: str, frac: str | None, zone: str | None) -> int:
    dt = datetime.strptime(base, "%Y-%m-%dT%H:%M:%S")
    if zone and zone != "Z":
        sign = 1 if zone[0] == "+" else -1
        digits = zone[1:].replace(":", "")
        offset = sign * (int(digits[:2]) * 3600 + int(digits[2:]) * 60)
    else:
        offset = 0
    return int(dt.replace(tzinfo=timezone.utc).timestamp()) - offset


def parse_line(line: str, origin: str | None = None, lenient: bool = False) -> LogEntry:
    """Split a raw line into timestamp and message.

    Only the trailing newline is stripped; the message is the exact
    remainder after the timestamp and one whitespace separator.
    With ``lenient=True`` a line without a timestamp becomes a message with
    timestamp 0 instead of raising :class:`MalformedEntry`.
    """
    line = line.rstrip("\r\n")
    if not line.strip():
        raise MalformedEntry("empty line")
    m = _EPOCH.match(line)
    if m:
        ts, stamp = int(m.group(1)), m.group(1)
    else:
        m = _ISO.match(line)
        if m:
            try:
                ts = _iso_to_epoch(m.group(1), m.group(2), m.group(3))
            except ValueError as exc:
                raise MalformedEntry(f"bad ISO timestamp: {exc}") from None
            stamp = line[: m.end() - 1]
    if m is None:
        if lenient:
            return LogEntry(0, line, origin, len(line), "0")
        raise MalformedEntry("no recognizable timestamp prefix")
    message = line[m.end():]
    if not message.strip():
        if lenient:
            return LogEntry(0, line, origin, len(line), "0")
        raise MalformedEntry("timestamp without message")
    return LogEntry(ts, message, origin, len(message), stamp)


def tokenize(message: str) -> list[Term]:
    return [Term(m.group(), i, m.start()) for i, m in enumerate(_TERM.finditer(message))]


def join_terms(terms: list[Term]) -> str:
    return " ".join(t.text for t in terms)
