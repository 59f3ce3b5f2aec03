"""Synthetic syslog corpora with a controllable event-pattern distribution.

Each corpus is built from randomly composed message templates: a daemon
tag, constant words, and typed variable slots (user, address, port, path,
hex id, size, ...). A handful of templates carry most of the entries,
the long tail shares the rest, and some templates hold no variable at all.

Variable values are drawn with lengths centred on their placeholder
lengths (user names of 4 to 7 characters against ``#USR#``, short paths
against ``#PATH#``, and so on), so constantification by itself hardly
changes the byte count. That matches a production corpus where the
anonymized size stays close to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_WORDS = (
    "device link queue worker daemon socket buffer driver module thread request "
    "reply channel cache table record handler monitor job task node partition "
    "controller adapter volume mount filesystem kernel memory page block frame "
    "packet route timer signal process service health sensor fan power thermal "
    "interface reset error warning notice check state update reload sync flush "
    "scan probe enable disable allocate release register unregister complete "
    "timeout retry failed success pending invalid missing found ready busy idle "
    "online offline degraded restored lost recovered dropped queued running "
    "stopped changed detected ignored deferred granted denied opened written read"
).split()
_TAGS = ("kernel:", "sshd:", "slurmd:", "systemd:", "crond:", "ntpd:", "munged:", "smartd:",
         "lustre:", "ib_srp:")
_SLOTS = ("user", "ip", "port", "path", "hex", "size", "pct", "serial", "uid", "lib", "hwaddr")
_SLOT_WEIGHTS = np.array([5, 4, 2, 3, 3, 2, 2, 1, 1, 1, 1], dtype=float)
_SYLL = ("ka", "mo", "ri", "tu", "se", "la", "no", "vi", "he", "zu", "pa", "do")
_PATHS = ("/tmp", "/opt", "/srv", "/dev/sdb", "/var/run", "/etc", "/usr", "/scratch", "/dev/ib0", "/lib")
_LIBS = ("libc", "libm", "libz", "libmlx", "libib", "libnl")

ACPI_TEMPLATES = (
    "ACPI: LAPIC (acpi_id[{hex}] lapic_id[{hex}] disabled)",
    "ACPI: LAPIC (acpi_id[{hex}] lapic_id[{hex}] enabled)",
    "ACPI: X2APIC (apic_id[{hex}] uid[{hex}] enabled)",
    "ACPI: LAPIC_NMI (acpi_id[{hex}] high edge lint[{hex}])",
)


@dataclass
class SyntheticCorpus:
    lines: list[str]
    template_ids: list[int]
    templates: list[str]
    frequent: int
    meta: dict = field(default_factory=dict)


class _Values:
    def __init__(self, rng: np.random.Generator, n_users: int = 400):
        self.rng = rng
        self.users = sorted({self._user() for _ in range(n_users)})

    def _user(self) -> str:
        k = self.rng.integers(1, 3)
        base = "".join(self.rng.choice(_SYLL, size=k))
        return base + str(self.rng.integers(1, 100))

    def draw(self, slot: str) -> str:
        r = self.rng
        if slot == "user":
            return self.users[r.integers(len(self.users))]
        if slot == "ip":
            return "10.%d.%d.%d" % tuple(r.integers(0, 30, size=3))
        if slot == "port":
            return str(r.integers(1, 1000))
        if slot == "path":
            return str(r.choice(_PATHS))
        if slot == "hex":
            return "0x%x" % r.integers(0, 0x3FF)
        if slot == "size":
            return "%d%s" % (r.integers(1, 999), r.choice(list("kmg")))
        if slot == "pct":
            return "%d%%" % r.integers(0, 100)
        if slot == "serial":
            return "%02x:%02x:" % tuple(r.integers(0, 255, size=2))
        if slot == "uid":
            return str(r.integers(0, 99))
        if slot == "lib":
            return str(r.choice(_LIBS))
        if slot == "hwaddr":
            return "0x%x-0x%x" % tuple(r.integers(0, 0xFF, size=2))
        raise ValueError(slot)


_SLOT_TEXT = {
    "user": "for {user}",
    "ip": "from {ip}",
    "port": "port {port}",
    "path": "{path}",
    "hex": "{hex}",
    "size": "{size}",
    "pct": "{pct}",
    "serial": "{serial}",
    "uid": "uid={uid}",
    "lib": "{lib}.so.1",
    "hwaddr": "{hwaddr}",
}


def _make_template(rng: np.random.Generator, n_vars: int) -> str:
    tag = str(rng.choice(_TAGS))
    words = list(rng.choice(_WORDS, size=int(rng.integers(5, 9))))
    slots = list(rng.choice(_SLOTS, size=n_vars, p=_SLOT_WEIGHTS / _SLOT_WEIGHTS.sum()))
    for slot in slots:
        # never last: size and serial need a trailing delimiter
        pos = int(rng.integers(0, len(words)))
        words.insert(pos, _SLOT_TEXT[slot])
    return " ".join([tag] + words)


def generate_corpus(
    n_entries: int = 100_000,
    n_patterns: int = 2_000,
    frequent: int = 40,
    frequent_mass: float = 0.92,
    constant_fraction: float = 0.05,
    acpi_templates: int = 20,
    seed: int = 0,
    start: int = 1454284800,
) -> SyntheticCorpus:
    """Draw ``n_entries`` timestamped lines from ``n_patterns`` templates.

    The first ``frequent`` templates share ``frequent_mass`` of the entries
    (Zipf-like within the group); every tail template appears at least
    once. ``constant_fraction`` of the templates have no variable, and
    ``acpi_templates`` tail templates are ACPI lines whose hex ids are only
    semantic under an analysis profile that needs them.
    """
    rng = np.random.default_rng(seed)
    values = _Values(rng)

    templates: list[str] = []
    seen: set[str] = set()
    while len(templates) < n_patterns:
        i = len(templates)
        if frequent <= i < frequent + acpi_templates:
            base = ACPI_TEMPLATES[(i - frequent) % len(ACPI_TEMPLATES)]
            t = f"{rng.choice(_WORDS)} {base}"
        else:
            n_vars = 0 if rng.random() < constant_fraction else int(rng.integers(1, 4))
            t = _make_template(rng, n_vars)
        if t not in seen:
            seen.add(t)
            templates.append(t)

    n_tail = n_patterns - frequent
    n_frequent = int(round(n_entries * frequent_mass))
    if n_entries - n_frequent < n_tail:
        raise ValueError("too few entries to show every tail template once")
    zipf = 1.0 / np.arange(1, frequent + 1)
    head = rng.multinomial(n_frequent, zipf / zipf.sum())
    tail = 1 + rng.multinomial(n_entries - n_frequent - n_tail, np.full(n_tail, 1.0 / n_tail))
    counts = np.concatenate([head, tail])
    ids = np.repeat(np.arange(n_patterns), counts)
    rng.shuffle(ids)

    stamps = start + np.cumsum(rng.integers(0, 3, size=n_entries))
    lines = []
    for stamp, tid in zip(stamps, ids):
        lines.append(f"{stamp} {_fill(templates[tid], values)}")
    return SyntheticCorpus(lines, ids.tolist(), templates, frequent, {"seed": seed})


def _fill(template: str, values: _Values) -> str:
    out = []
    for piece in template.split("{"):
        if "}" in piece:
            slot, rest = piece.split("}", 1)
            out.append(values.draw(slot) + rest)
        else:
            out.append(piece)
    return "".join(out)
