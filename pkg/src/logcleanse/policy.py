"""Site policy: which terms are sensitive, which carry semantic, and how much.

Policy files are sectioned, tab-separated text::

    [sensitivity]
    User Name	Y	10
    [semantic]
    accept*	Y	07
    [coefficients]
    1	1	1
    [lexicon]
    taurusi1001	Node Name
    [usefulness]
    *acpi_id*	0

Sensitivity subjects bind to detections either by class name (``User``) or
through the subject names used in the published tables (``User Name`` binds
every class whose placeholder is ``#USR#``). Subjects with no detector, such
as ``Node Name``, only act through ``[lexicon]`` literals.

``[usefulness]`` rows mark terms whose variable value an analysis needs:
any candidate output that constantifies a variable inside a matching term
gets usefulness 0. A ``default<TAB>0|1`` row sets the baseline.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .entry import Term
from .errors import PolicyParseError, SeverityOutOfRange
from .variables import PLACEHOLDER_RE, DetectedVariable

SUBJECT_PLACEHOLDERS: dict[str, frozenset[str]] = {
    "user name": frozenset({"#USR#"}),
    "ip address": frozenset({"#IP4#"}),
    "port number": frozenset({"#PORT#"}),
    "path / url": frozenset({"#PATH#"}),
    "mail addresses (tud addresses)": frozenset({"#EMAIL#"}),
    "user id (identification of unix users)": frozenset({"#UID#"}),
}

_MEMO_LIMIT = 200_000

_SECTIONS = ("sensitivity", "semantic", "coefficients", "lexicon", "usefulness")


def _norm(s: str) -> str:
    return " ".join(s.lower().split())


@dataclass(frozen=True)
class SensitivityRule:
    subject: str
    sensitive: bool
    severity: int

    def __post_init__(self):
        if not 0 <= self.severity <= 10:
            raise SeverityOutOfRange(f"severity {self.severity} for {self.subject!r} outside 0..10")
        if (self.severity == 0) == self.sensitive:
            raise SeverityOutOfRange(
                f"{self.subject!r}: severity must be 0 exactly when the subject is not sensitive"
            )

    def binds(self, detection: DetectedVariable) -> bool:
        subject = _norm(self.subject)
        if subject == _norm(detection.class_name):
            return True
        return detection.placeholder in SUBJECT_PLACEHOLDERS.get(subject, ())


@dataclass(frozen=True)
class SemanticRule:
    glob: str
    semantic: bool
    severity: int

    def __post_init__(self):
        if not self.glob.strip("*"):
            raise PolicyParseError(f"glob {self.glob!r} is empty")
        if not 0 <= self.severity <= 10:
            raise SeverityOutOfRange(f"severity {self.severity} for {self.glob!r} outside 0..10")

    def matches(self, term: str) -> bool:
        return glob_match(self.glob, term)

    @property
    def placeholder(self) -> str:
        body = re.sub(r"[^A-Z0-9]", "", self.glob.upper())
        return f"#{body or 'SEM'}#"


def glob_match(glob: str, term: str) -> bool:
    """``x*`` prefix, ``*x`` suffix, ``*x*`` substring, bare ``x`` equality; case-insensitive."""
    body = glob.strip("*").lower()
    term = term.lower()
    lead, trail = glob.startswith("*"), glob.endswith("*")
    if lead and trail:
        return body in term
    if trail:
        return term.startswith(body)
    if lead:
        return term.endswith(body)
    return term == body


@dataclass(frozen=True)
class PolicyTable:
    sensitivity_rules: tuple[SensitivityRule, ...] = ()
    semantic_rules: tuple[SemanticRule, ...] = ()
    coefficients: tuple[float, float, float] = (1.0, 1.0, 1.0)
    usefulness_default: bool = True
    lexicon: dict[str, str] = field(default_factory=dict)
    usefulness_rules: tuple[tuple[str, bool], ...] = ()
    name: str = ""

    def __post_init__(self):
        if self.lexicon:
            alternatives = "|".join(re.escape(k) for k in sorted(self.lexicon, key=len, reverse=True))
            rx = re.compile(rf"(?<!\w)(?:{alternatives})(?!\w)", re.IGNORECASE)
        else:
            rx = None
        object.__setattr__(self, "_lexicon_rx", rx)
        object.__setattr__(self, "_lexicon_norm", {k.lower(): v for k, v in self.lexicon.items()})
        # Memo tables; terms and classes repeat heavily across a log stream.
        object.__setattr__(self, "_sens_memo", {})
        object.__setattr__(self, "_sem_memo", {})

    def rules_for(self, detection: DetectedVariable) -> list[SensitivityRule]:
        return [r for r in self.sensitivity_rules if r.binds(detection)]

    def _sensitivity(self, detection: DetectedVariable) -> tuple[bool, int]:
        key = (detection.class_name, detection.placeholder)
        hit = self._sens_memo.get(key)
        if hit is None:
            rules = [r for r in self.rules_for(detection) if r.sensitive]
            hit = (bool(rules), max((r.severity for r in rules), default=0))
            self._sens_memo[key] = hit
        return hit

    def is_sensitive(self, detection: DetectedVariable) -> bool:
        return self._sensitivity(detection)[0]

    def severity(self, detection: DetectedVariable) -> int:
        return self._sensitivity(detection)[1]

    def semantic_rule(self, term: str) -> SemanticRule | None:
        """First semantic rule whose glob matches the term, if any."""
        memo = self._sem_memo
        try:
            return memo[term]
        except KeyError:
            pass
        found = None
        for rule in self.semantic_rules:
            if rule.matches(term):
                found = rule
                break
        if len(memo) >= _MEMO_LIMIT:
            memo.clear()
        memo[term] = found
        return found

    def is_semantic(self, term: str) -> bool:
        rule = self.semantic_rule(term)
        return rule is not None and rule.semantic

    def lexicon_detections(self, message: str) -> list[DetectedVariable]:
        if self._lexicon_rx is None:
            return []
        out = []
        for m in self._lexicon_rx.finditer(message):
            subject = self._lexicon_norm[m.group().lower()]
            placeholder = "#" + (re.sub(r"[^A-Z0-9]", "", subject.upper()) or "LEX") + "#"
            out.append(DetectedVariable(subject, m.span(), m.group(), placeholder))
        return out

    def lexicon_sensitive(self, term: str) -> bool:
        return any(self.is_sensitive(d) for d in self.lexicon_detections(term))

    def usefulness_lost(self, term: str) -> bool:
        """True when constantifying a variable inside ``term`` breaks the analysis."""
        return any(not useful and glob_match(g, term) for g, useful in self.usefulness_rules)

    def with_coefficients(self, coefficients: tuple[float, float, float]) -> "PolicyTable":
        _check_coefficients(coefficients, None)
        return PolicyTable(
            self.sensitivity_rules, self.semantic_rules, tuple(coefficients), self.usefulness_default,
            dict(self.lexicon), self.usefulness_rules, self.name,
        )


def _check_coefficients(values, lineno):
    if len(values) != 3 or not all(0 < v <= 1 for v in values):
        raise PolicyParseError(f"coefficients must be three reals in (0, 1], got {values}", lineno)


def _yn(value: str, lineno: int) -> bool:
    v = value.strip().upper()
    if v not in ("Y", "N"):
        raise PolicyParseError(f"expected Y or N, got {value!r}", lineno)
    return v == "Y"


def _severity(value: str, lineno: int) -> int:
    try:
        sev = int(value)
    except ValueError:
        raise PolicyParseError(f"severity {value!r} is not an integer", lineno) from None
    if not 0 <= sev <= 10:
        raise SeverityOutOfRange(f"severity {sev} outside 0..10", lineno)
    return sev


def load_policy(source: str | Path) -> PolicyTable:
    """Parse policy text, a policy file path, or a preset name."""
    name = ""
    if isinstance(source, Path):
        name, source = str(source), source.read_text(encoding="utf-8")
    elif source in PRESETS:
        name, source = source, PRESETS[source]

    sens: list[SensitivityRule] = []
    sem: list[SemanticRule] = []
    coeffs = (1.0, 1.0, 1.0)
    lexicon: dict[str, str] = {}
    useful: list[tuple[str, bool]] = []
    useful_default = True
    section = None
    rows = 0
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise PolicyParseError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise PolicyParseError("row outside any section", lineno)
        cols = [c.strip() for c in raw.split("\t")]
        rows += 1
        try:
            if section == "sensitivity":
                if len(cols) != 3:
                    raise PolicyParseError("expected subject<TAB>Y|N<TAB>severity", lineno)
                sens.append(SensitivityRule(cols[0], _yn(cols[1], lineno), _severity(cols[2], lineno)))
            elif section == "semantic":
                if len(cols) != 3:
                    raise PolicyParseError("expected glob<TAB>Y|N<TAB>severity", lineno)
                sem.append(SemanticRule(cols[0], _yn(cols[1], lineno), _severity(cols[2], lineno)))
            elif section == "coefficients":
                try:
                    values = tuple(float(c) for c in cols)
                except ValueError:
                    raise PolicyParseError("coefficients must be numbers", lineno) from None
                _check_coefficients(values, lineno)
                coeffs = values
            elif section == "lexicon":
                if len(cols) != 2 or not cols[0]:
                    raise PolicyParseError("expected literal<TAB>subject", lineno)
                lexicon[cols[0]] = cols[1]
            else:
                if len(cols) != 2 or cols[1] not in ("0", "1"):
                    raise PolicyParseError("expected glob<TAB>0|1", lineno)
                if cols[0].lower() == "default":
                    useful_default = cols[1] == "1"
                else:
                    useful.append((cols[0], cols[1] == "1"))
        except SeverityOutOfRange as exc:
            if exc.line is None:
                raise SeverityOutOfRange(str(exc), lineno) from None
            raise
        except PolicyParseError as exc:
            if exc.line is None:
                raise PolicyParseError(str(exc), lineno) from None
            raise
    if rows == 0:
        raise PolicyParseError("policy has no rules")
    return PolicyTable(tuple(sens), tuple(sem), coeffs, useful_default, lexicon, tuple(useful), name)


def resolve_policy(spec: str | Path | None) -> PolicyTable:
    """Preset name or file path; falls back to $LOGCLEANSE_POLICY, then ``paper-table2``."""
    if spec is None:
        spec = os.environ.get("LOGCLEANSE_POLICY") or "paper-table2"
    if isinstance(spec, str) and spec in PRESETS:
        return load_policy(spec)
    return load_policy(Path(spec))


def classify_terms(terms: list[Term], detections: list[DetectedVariable], policy: PolicyTable) -> list[Term]:
    """Set the sensitive/semantic/placeholder flags of each term in place."""
    dets = sorted(detections, key=lambda d: d.start)
    use_lexicon = bool(policy.lexicon)
    lo = 0
    for term in terms:
        t_start, t_end = term.start, term.start + len(term.text)
        while lo < len(dets) and dets[lo].end <= t_start:
            lo += 1
        sensitive = False
        for d in dets[lo:]:
            if d.start >= t_end:
                break
            if d.end > t_start and policy.is_sensitive(d):
                sensitive = True
                break
        if not sensitive and use_lexicon:
            sensitive = policy.lexicon_sensitive(term.text)
        placeholder = not sensitive and PLACEHOLDER_RE.search(term.text) is not None
        term.sensitive = sensitive
        term.is_placeholder = placeholder
        if sensitive:
            term.semantic = True
        elif placeholder:
            term.semantic = False
        else:
            term.semantic = policy.is_semantic(term.text)
    return terms


def anonymization_order(detections: list[DetectedVariable], policy: PolicyTable) -> list[DetectedVariable]:
    return sorted(detections, key=lambda d: (-policy.severity(d), d.start))


PAPER_TABLE2 = """\
[sensitivity]
User Name\tY\t10
IP Address\tY\t08
Port Number\tY\t01
Node Name\tY\t03
Node ID\tY\t03
Public Key\tY\t10
App Name\tN\t00
Path / URL\tN\t00

[semantic]
accept*\tY\t07
reject*\tY\t10
close*\tY\t08
*connect*\tY\t09
start*\tY\t02
*key*\tY\t01
session\tY\t07
user*\tY\t05

[coefficients]
1\t1\t1
"""

TUD_TABLE5 = """\
[sensitivity]
Surname\tY\t10
Firstname\tY\t10
Title\tY\t10
User type (employee, student, guest)\tY\t10
User name\tY\t10
Password\tY\t10
Login status (active, disabled)\tY\t10
User ID (identification of Unix users)\tY\t10
Home (Path to home directory)\tY\t10
Shell (default shell)\tY\t10
Group ID (belonging to Unix groups)\tY\t10
Mail addresses (TUD addresses)\tY\t10
IP Address\tY\t08
Port Number\tN\t00
Node Name\tN\t00
Node ID\tN\t00
Public Key\tY\t08
App Name\tN\t00
Path / URL\tY\t01

[coefficients]
1\t1\t1
"""

# The paper-table2 rules plus an analysis profile that needs the raw APIC ids of ACPI
# lines: they count as semantic and encoding them away makes the entry useless.
PAPER_TABLE6 = PAPER_TABLE2 + """\

[semantic]
*acpi_id*\tY\t05
*apic_id*\tY\t05

[usefulness]
*acpi_id*\t0
*apic_id*\t0
"""

PRESETS = {"paper-table2": PAPER_TABLE2, "tud-table5": TUD_TABLE5, "paper-table6": PAPER_TABLE6}
