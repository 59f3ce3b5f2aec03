"""Ordered regular-expression detection of variable terms.

Classes are applied in rank order. Characters claimed by an earlier class
are masked before later classes run, so patterns that are subsets of
others (HexNumber inside HardwareAddress, for instance) never double-count.

Each regex may carry a named group ``var``; only that group is the variable
(and only it is masked and replaced). Surrounding context such as the
``for `` in front of a user name stays in the text. Without ``var`` the
whole match is the variable. Matching is case-insensitive.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateRank, PatternCompileError, SpanMismatch

PLACEHOLDER_RE = re.compile(r"#[A-Z0-9]+#")

# Matched by the same character classes as '#', so masked regions behave
# like the placeholder that will later replace them.
_MASK_CHAR = "\ue000"

# The fifteen machine-independent expressions, verbatim, in application order.
TABLE1_PRINTED: list[tuple[str, str]] = [
    ("Path", r"([\(\s\,\>\:\=])([\/][a-z0-9_\.\-\:]*)+"),
    ("Version", r"([\w\.\-]+x86_64)"),
    ("Email", r"([a-z0-9_\-\.]+@([a-z0-9_-]+\.)+[a-z]+)"),
    ("DateTime", r"(\d{4}-\d{2}-\d{2})T(\d{2}:\d{2}:\d{2})"),
    ("IPv4", r"(\d+\.\d+\.\d+\.\d+)"),
    ("Port", r"([\W])(port \d+)"),
    ("Parameter", r"(\$[a-z0-9_]+)"),
    ("URID", r"(uid=[\w\-]+)"),
    ("User", r"(for )((user\ )*[a-z0-9_-]+)"),
    ("Library", r"([a-z0-9_\-]+\.so(\.\d*)*)"),
    ("HardwareAddress", r"(0[x][a-f0-9]+\-0[x][a-f0-9]+)"),
    ("HexNumber", r"(0[x][a-f0-9]+)"),
    ("Percentage", r"(\d+\.*[\d]*\%)"),
    ("SerialNumber", r"((\s)([a-f0-9\.\-]+\:)+(\s))"),
    ("Size", r"([^a-z0-9])(\d+[bkmg])([^a-z0-9])"),
]

# Same expressions with the variable part named. Trailing context is a
# lookahead so that two neighbours can share one delimiter.
DEFAULT_TABLE = """\
# rank\tname\tplaceholder\tregex
0\tPath\t#PATH#\t(?P<pre>[\\(\\s\\,\\>\\:\\=])(?P<var>(?:[\\/][a-z0-9_\\.\\-\\:]*)+)
1\tVersion\t#VER#\t([\\w\\.\\-]+x86_64)
2\tEmail\t#EMAIL#\t([a-z0-9_\\-\\.]+@([a-z0-9_-]+\\.)+[a-z]+)
3\tDateTime\t#DT#\t(\\d{4}-\\d{2}-\\d{2})T(\\d{2}:\\d{2}:\\d{2})
4\tIPv4\t#IP4#\t(\\d+\\.\\d+\\.\\d+\\.\\d+)
5\tPort\t#PORT#\t(?P<pre>[\\W])(?P<var>port \\d+)
6\tParameter\t#PRM#\t(\\$[a-z0-9_]+)
7\tURID\t#UID#\t(uid=[\\w\\-]+)
8\tUser\t#USR#\t(?P<pre>for )(?P<var>(?:user\\ )*[a-z0-9_-]+)
9\tLibrary\t#LIB#\t([a-z0-9_\\-]+\\.so(\\.\\d*)*)
10\tHardwareAddress\t#HWA#\t(0[x][a-f0-9]+\\-0[x][a-f0-9]+)
11\tHexNumber\t#HEX#\t(0[x][a-f0-9]+)
12\tPercentage\t#PCT#\t(\\d+\\.*[\\d]*\\%)
13\tSerialNumber\t#SRN#\t(?P<pre>\\s)(?P<var>(?:[a-f0-9\\.\\-]+\\:)+)(?=\\s)
14\tSize\t#SIZE#\t(?P<pre>[^a-z0-9])(?P<var>\\d+[bkmg])(?=[^a-z0-9])
"""

# Site-specific additions on top of the fifteen: the cron "(user) CMD (...)"
# line keeps its user name in parentheses where the "for " rule cannot see it.
EXTENDED_TABLE = DEFAULT_TABLE + """\
15\tCronUser\t#USR#\t(?P<pre>\\()(?P<var>[a-z0-9_\\.-]+)(?=\\) cmd \\()
"""

PRESETS = {"table1": DEFAULT_TABLE, "extended": EXTENDED_TABLE}


@dataclass(frozen=True)
class VariableClass:
    name: str
    pattern: str
    rank: int
    placeholder: str
    regex: re.Pattern = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not PLACEHOLDER_RE.fullmatch(self.placeholder):
            raise ValueError(f"placeholder {self.placeholder!r} is not of the form #NAME#")
        object.__setattr__(self, "regex", re.compile(self.pattern, re.IGNORECASE))

    def variable_span(self, m: re.Match) -> tuple[int, int]:
        if "var" in self.regex.groupindex:
            return m.span("var")
        return m.span()


@dataclass(frozen=True)
class DetectedVariable:
    class_name: str
    span: tuple[int, int]
    original: str
    placeholder: str

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]


def load_patterns(source: str | Path | None = None, defaults: bool = True) -> list[VariableClass]:
    """Load an ordered class list from pattern-table text.

    ``source`` is table text, a path to a table file, or a preset name
    (``"table1"`` or ``"extended"``). With no source the built-in fifteen-class
    set is returned, or an empty list when ``defaults`` is false.
    """
    if source is None:
        if not defaults:
            return []
        source = DEFAULT_TABLE
    elif isinstance(source, Path):
        source = source.read_text(encoding="utf-8")
    elif source in PRESETS:
        source = PRESETS[source]

    classes: list[VariableClass] = []
    seen: dict[int, str] = {}
    for lineno, line in enumerate(source.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t", 3)
        if len(parts) != 4:
            raise PatternCompileError(lineno, parts[0], "expected rank<TAB>name<TAB>placeholder<TAB>regex")
        rank_s, name, placeholder, pattern = parts
        try:
            rank = int(rank_s)
        except ValueError:
            raise PatternCompileError(lineno, name, f"rank {rank_s!r} is not an integer") from None
        if rank in seen:
            raise DuplicateRank(f"rank {rank} used by both {seen[rank]!r} and {name!r}")
        seen[rank] = name
        try:
            classes.append(VariableClass(name, pattern, rank, placeholder))
        except re.error as exc:
            raise PatternCompileError(lineno, name, str(exc)) from None
        except ValueError as exc:
            raise PatternCompileError(lineno, name, str(exc)) from None
    classes.sort(key=lambda c: c.rank)
    return classes


def detect(message: str, classes: list[VariableClass]) -> list[DetectedVariable]:
    shadow = message
    found: list[DetectedVariable] = []
    for cls in classes:
        claimed: list[tuple[int, int]] = []
        named = "var" in cls.regex.groupindex
        for m in cls.regex.finditer(shadow):
            start, end = m.span("var") if named else m.span()
            if start == end or _MASK_CHAR in shadow[start:end]:
                continue
            found.append(DetectedVariable(cls.name, (start, end), message[start:end], cls.placeholder))
            claimed.append((start, end))
        if claimed:
            for start, end in claimed:
                shadow = shadow[:start] + _MASK_CHAR * (end - start) + shadow[end:]
    found.sort(key=lambda d: d.start)
    return found


def constantify(message: str, detections: list[DetectedVariable], only: set[str] | None = None) -> str:
    """Replace selected detections by their placeholders, right to left."""
    out = message
    for d in sorted(detections, key=lambda d: d.start, reverse=True):
        if only is not None and d.class_name not in only:
            continue
        start, end = d.span
        if out[start:end] != d.original:
            raise SpanMismatch(f"{d.class_name} expected {d.original!r} at {start}:{end}")
        out = out[:start] + d.placeholder + out[end:]
    return out
