"""Event-pattern encoding into SHAKE-128 hash-keys and the published reference table."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterator

from .errors import TableCorrupt, UnknownKey, UnsupportedLength

MIN_BITS = 16
MAX_BITS = 256
DEFAULT_BITS = 32


@dataclass(frozen=True)
class EventPattern:
    text: str

    @property
    def term_count(self) -> int:
        return len(self.text.split())


@dataclass(frozen=True)
class HashKey:
    hex: str
    bits: int

    def __str__(self) -> str:
        return self.hex


def _check_bits(bits: int) -> None:
    if not (MIN_BITS <= bits <= MAX_BITS and bits % 8 == 0):
        raise UnsupportedLength(f"{bits} bits: need a multiple of 8 in [{MIN_BITS}, {MAX_BITS}]")


def hash_pattern(pattern: EventPattern | str, bits: int = DEFAULT_BITS) -> HashKey:
    """First ``bits`` bits of SHAKE-128 over the UTF-8 pattern text, as lowercase hex."""
    _check_bits(bits)
    text = pattern.text if isinstance(pattern, EventPattern) else pattern
    return HashKey(hashlib.shake_128(text.encode("utf-8")).hexdigest(bits // 8), bits)


@dataclass
class Row:
    key: str
    bits: int
    pattern: str
    meaning: str
    count: int


class ReferenceTable:
    """Injective mapping hash-key -> (pattern, meaning, frequency).

    Insertions are serialized by an internal lock. A pattern whose key is
    already taken by another pattern is extended 8 bits at a time, which
    the extendable-output hash allows without changing anyone else's key.
    """

    def __init__(self, default_bits: int = DEFAULT_BITS, annotations: dict[str, str] | None = None):
        _check_bits(default_bits)
        self.default_bits = default_bits
        self.annotations = dict(annotations or {})
        self._rows: dict[str, Row] = {}
        self._by_pattern: dict[str, str] = {}
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._rows)

    def __iter__(self) -> Iterator[Row]:
        return iter(list(self._rows.values()))

    def __contains__(self, key: str) -> bool:
        return key in self._rows

    def rows(self) -> list[Row]:
        return sorted(self._rows.values(), key=lambda r: (-r.count, r.key))

    @property
    def total_frequency(self) -> int:
        return sum(r.count for r in self._rows.values())

    def key_for(self, pattern: str) -> str | None:
        return self._by_pattern.get(pattern)

    def _assign(self, pattern: str) -> HashKey:
        bits = self.default_bits
        while True:
            key = hash_pattern(pattern, bits)
            row = self._rows.get(key.hex)
            if row is None or row.pattern == pattern:
                return key
            if bits >= MAX_BITS:
                raise TableCorrupt(f"no free key for {pattern!r} up to {MAX_BITS} bits")
            bits += 8

    def peek(self, pattern: EventPattern | str) -> HashKey:
        """The key ``pattern`` has or would receive, without inserting it."""
        text = pattern.text if isinstance(pattern, EventPattern) else pattern
        with self._lock:
            existing = self._by_pattern.get(text)
            if existing is not None:
                return HashKey(existing, self._rows[existing].bits)
            return self._assign(text)

    def get_or_insert(self, pattern: EventPattern | str, meaning: str | None = None) -> HashKey:
        text = pattern.text if isinstance(pattern, EventPattern) else pattern
        with self._lock:
            existing = self._by_pattern.get(text)
            if existing is not None:
                row = self._rows[existing]
                row.count += 1
                return HashKey(row.key, row.bits)
            key = self._assign(text)
            if meaning is None:
                meaning = self.annotations.get(text, text)
            self._rows[key.hex] = Row(key.hex, key.bits, text, meaning, 1)
            self._by_pattern[text] = key.hex
            return key

    def touch(self, key: str) -> Row:
        """Count one more occurrence of an existing key."""
        with self._lock:
            row = self._rows.get(key)
            if row is None:
                raise UnknownKey(key)
            row.count += 1
            return row

    def lookup(self, key: str) -> tuple[str, str, int]:
        row = self._rows.get(key)
        if row is None:
            raise UnknownKey(key)
        return row.pattern, row.meaning, row.count

    def _add_row(self, row: Row) -> None:
        if len(row.key) * 4 != row.bits:
            raise TableCorrupt(f"key {row.key!r} does not have {row.bits} bits")
        if hash_pattern(row.pattern, row.bits).hex != row.key:
            raise TableCorrupt(f"key {row.key!r} is not the digest of {row.pattern!r}")
        if row.key in self._rows:
            raise TableCorrupt(f"key {row.key!r} maps to more than one pattern")
        if row.pattern in self._by_pattern:
            raise TableCorrupt(f"pattern {row.pattern!r} appears under two keys")
        if row.count < 1:
            raise TableCorrupt(f"key {row.key!r} has frequency {row.count}")
        self._rows[row.key] = row
        self._by_pattern[row.pattern] = row.key

    def to_json(self) -> list[dict]:
        return [
            {"key": r.key, "bits": r.bits, "pattern": r.pattern, "meaning": r.meaning, "count": r.count}
            for r in self.rows()
        ]

    @classmethod
    def from_json(cls, doc: list[dict], default_bits: int = DEFAULT_BITS) -> "ReferenceTable":
        table = cls(default_bits)
        try:
            for item in doc:
                table._add_row(Row(item["key"], int(item["bits"]), item["pattern"], item["meaning"], int(item["count"])))
        except (KeyError, TypeError, ValueError, UnsupportedLength) as exc:
            raise TableCorrupt(f"malformed reference table row: {exc}") from None
        return table

    def save(self, path: str | Path) -> None:
        """Write the table as JSON; temp file then rename, so readers never see half a table."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent or ".")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self.to_json(), fh, indent=1, ensure_ascii=False)
                fh.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    @classmethod
    def load(cls, path: str | Path, default_bits: int = DEFAULT_BITS) -> "ReferenceTable":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise TableCorrupt(f"{path}: {exc}") from None
        if not isinstance(doc, list):
            raise TableCorrupt(f"{path}: expected a JSON array")
        return cls.from_json(doc, default_bits)


def get_or_insert(table: ReferenceTable, pattern: EventPattern | str, meaning: str | None = None) -> HashKey:
    return table.get_or_insert(pattern, meaning)


def lookup(table: ReferenceTable, key: str) -> tuple[str, str, int]:
    return table.lookup(key)


def load_annotations(path: str | Path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        pattern, _, meaning = line.partition("\t")
        out[pattern] = meaning.strip() or pattern
    return out


def encoded_bytes(table: ReferenceTable) -> int:
    return sum(r.count * len(r.key) for r in table)


def optimize_key_lengths(table: ReferenceTable, min_bits: int = MIN_BITS) -> tuple[ReferenceTable, dict[str, str]]:
    """Give the most frequent patterns the shortest unique digest prefixes.

    Patterns are visited by descending frequency (pattern text breaks ties)
    and each takes the shortest prefix, from ``min_bits`` up in 8-bit steps,
    not already taken. If that would make the encoded output larger than
    the current assignment, the table is returned unchanged.

    Returns the new table and the re-emission map ``old key -> new key``.
    """
    _check_bits(min_bits)
    rows = sorted(table, key=lambda r: (-r.count, r.pattern))
    new = ReferenceTable(table.default_bits, table.annotations)
    for row in rows:
        bits = min_bits
        while hash_pattern(row.pattern, bits).hex in new._rows:
            bits += 8
        key = hash_pattern(row.pattern, bits)
        new._add_row(Row(key.hex, bits, row.pattern, row.meaning, row.count))
    if encoded_bytes(new) > encoded_bytes(table):
        same = ReferenceTable(table.default_bits, table.annotations)
        for row in rows:
            same._add_row(Row(**asdict(row)))
        return same, {r.key: r.key for r in rows}
    return new, {row.key: new._by_pattern[row.pattern] for row in rows}
