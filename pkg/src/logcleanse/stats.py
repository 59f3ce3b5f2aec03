"""Corpus-level metrics: term sensitivity, pattern census, size reduction, completeness."""

from __future__ import annotations

import csv
import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path
from typing import Iterable

import numpy as np

from .anonymizer import ErrorRecord, ProcessedEntry
from .codec import ReferenceTable
from .errors import EmptyMatrix
from .quality import State


def _nbytes(stamp: str, text: str) -> int:
    return len(stamp.encode("utf-8")) + 1 + len(text.encode("utf-8")) + 1


@dataclass
class CorpusReport:
    total_entries: int = 0
    error_entries: int = 0
    total_terms: int = 0
    sensitive_terms: int = 0
    output_terms: int = 0
    encoded_entries: int = 0
    kept_entries: int = 0
    zero_quality_entries: int = 0
    bytes_in: int = 0
    bytes_out: int = 0
    bytes_anonymized: int = 0
    grown_entries: int = 0
    census: Counter = field(default_factory=Counter)

    # derived -------------------------------------------------------------

    @property
    def unique_patterns(self) -> int:
        return len(self.census)

    @property
    def sensitive_fraction(self) -> float:
        return self.sensitive_terms / self.total_terms if self.total_terms else 0.0

    @property
    def reduction_pct(self) -> float:
        return 100.0 * (1 - self.bytes_out / self.bytes_in) if self.bytes_in else 0.0

    @property
    def anonymization_reduction_pct(self) -> float:
        return 100.0 * (1 - self.bytes_anonymized / self.bytes_in) if self.bytes_in else 0.0

    @property
    def encoded_fraction(self) -> float:
        return self.encoded_entries / self.total_entries if self.total_entries else 0.0

    @property
    def kept_semantic_fraction(self) -> float:
        return self.kept_entries / self.total_entries if self.total_entries else 0.0

    @property
    def terms_per_entry_before(self) -> float:
        ok = self.total_entries - self.error_entries
        return self.total_terms / ok if ok else 0.0

    @property
    def terms_per_entry_after(self) -> float:
        ok = self.total_entries - self.error_entries
        return self.output_terms / ok if ok else 0.0

    @property
    def coverage_curve(self) -> list[tuple[int, float]]:
        """(rank, cumulative fraction of all entries) over patterns by descending frequency."""
        if not self.total_entries:
            return []
        counts = sorted(self.census.items(), key=lambda kv: (-kv[1], kv[0]))
        cum = np.cumsum([c for _, c in counts]) / self.total_entries
        return [(i + 1, float(f)) for i, f in enumerate(cum)]

    # aggregation ---------------------------------------------------------

    def merge(self, other: "CorpusReport") -> "CorpusReport":
        out = CorpusReport()
        for name in self.__dataclass_fields__:
            if name == "census":
                continue
            setattr(out, name, getattr(self, name) + getattr(other, name))
        out.census = self.census + other.census
        return out

    def as_dict(self) -> dict:
        return {
            "total_entries": self.total_entries,
            "error_entries": self.error_entries,
            "total_terms": self.total_terms,
            "sensitive_terms": self.sensitive_terms,
            "sensitive_fraction": self.sensitive_fraction,
            "unique_patterns": self.unique_patterns,
            "coverage_curve": self.coverage_curve,
            "bytes_in": self.bytes_in,
            "bytes_out": self.bytes_out,
            "bytes_anonymized": self.bytes_anonymized,
            "reduction_pct": self.reduction_pct,
            "anonymization_reduction_pct": self.anonymization_reduction_pct,
            "grown_entries": self.grown_entries,
            "encoded_fraction": self.encoded_fraction,
            "kept_semantic_fraction": self.kept_semantic_fraction,
            "zero_quality_entries": self.zero_quality_entries,
            "terms_per_entry_before": self.terms_per_entry_before,
            "terms_per_entry_after": self.terms_per_entry_after,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def summary(self, top: int = 40) -> str:
        curve = self.coverage_curve
        cover = curve[min(top, len(curve)) - 1][1] if curve else 0.0
        return "\n".join([
            f"entries            {self.total_entries} ({self.error_entries} malformed)",
            f"sensitive terms    {self.sensitive_terms}/{self.total_terms} ({100 * self.sensitive_fraction:.1f}%)",
            f"event patterns     {self.unique_patterns}; top {top} cover {100 * cover:.1f}% of entries",
            f"encoded / kept     {100 * self.encoded_fraction:.1f}% / {100 * self.kept_semantic_fraction:.1f}%",
            f"bytes in -> out    {self.bytes_in} -> {self.bytes_out} ({self.reduction_pct:.1f}% smaller)",
            f"anonymization only {self.anonymization_reduction_pct:+.2f}% smaller",
            f"terms per entry    {self.terms_per_entry_before:.2f} -> {self.terms_per_entry_after:.2f}",
        ])


def accumulate(report: CorpusReport, processed: ProcessedEntry | ErrorRecord) -> CorpusReport:
    report.total_entries += 1
    if isinstance(processed, ErrorRecord):
        report.error_entries += 1
        return report
    entry = processed.entry
    stamp = entry.stamp
    b_in = _nbytes(stamp, entry.message)
    b_out = _nbytes(stamp, processed.final_text)
    report.bytes_in += b_in
    report.bytes_out += b_out
    report.bytes_anonymized += _nbytes(stamp, processed.anonymized_text)
    report.grown_entries += b_out > b_in
    report.total_terms += processed.raw_terms
    report.sensitive_terms += processed.sensitive_terms
    report.output_terms += processed.final_terms
    report.zero_quality_entries += processed.zero_quality
    if processed.state is State.ENCODED:
        report.encoded_entries += 1
        report.census[processed.pattern] += 1
    else:
        report.kept_entries += 1
    return report


def build_report(results: Iterable[ProcessedEntry | ErrorRecord]) -> CorpusReport:
    report = CorpusReport()
    for item in results:
        accumulate(report, item)
    return report


def frequent_pattern_coverage(table: ReferenceTable, k: int) -> float:
    """Share of all encoded entries that belong to the ``k`` most frequent patterns."""
    rows = sorted(table, key=lambda r: (-r.count, r.key))
    total = sum(r.count for r in rows)
    if not total or k <= 0:
        return 0.0
    return sum(r.count for r in rows[:k]) / total


# -- collection completeness ------------------------------------------------


@dataclass
class CompletenessMatrix:
    nodes: list[str]
    days: list[date]
    present: np.ndarray  # bool, shape (len(nodes), len(days))

    @classmethod
    def from_manifest(cls, rows: Iterable[tuple], nodes: list[str] | None = None,
                      days: list[date] | None = None) -> "CompletenessMatrix":
        """Build from ``(node, day[, present])`` rows.

        Unless given, the node list is every node seen and the day list is
        the full calendar range between the first and last day seen, so a
        day on which nothing was collected still counts as missing.
        """
        seen: dict[tuple[str, date], bool] = {}
        for row in rows:
            node, day = row[0], row[1]
            if isinstance(day, str):
                day = date.fromisoformat(day)
            flag = bool(int(row[2])) if len(row) > 2 and row[2] not in ("", None) else True
            seen[(node, day)] = seen.get((node, day), False) or flag
        if nodes is None:
            nodes = sorted({n for n, _ in seen})
        if days is None:
            all_days = {d for _, d in seen}
            if all_days:
                lo, hi = min(all_days), max(all_days)
                days = [lo + timedelta(i) for i in range((hi - lo).days + 1)]
            else:
                days = []
        node_ix = {n: i for i, n in enumerate(nodes)}
        day_ix = {d: j for j, d in enumerate(days)}
        present = np.zeros((len(nodes), len(days)), dtype=bool)
        for (node, day), flag in seen.items():
            if flag and node in node_ix and day in day_ix:
                present[node_ix[node], day_ix[day]] = True
        return cls(list(nodes), list(days), present)

    @classmethod
    def from_csv(cls, text: str) -> "CompletenessMatrix":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        if rows and rows[0][0].strip().lower() == "node":
            rows = rows[1:]
        return cls.from_manifest([tuple(c.strip() for c in r) for r in rows])

    @classmethod
    def from_directory(cls, root: str | Path) -> "CompletenessMatrix":
        """Scan ``root/<node>/<YYYY-MM-DD>*`` log files."""
        rx = re.compile(r"(\d{4}-\d{2}-\d{2})")
        rows = []
        for path in Path(root).glob("*/*"):
            m = rx.match(path.name)
            if path.is_file() and m:
                rows.append((path.parent.name, m.group(1)))
        return cls.from_manifest(rows)


def completeness(matrix: CompletenessMatrix) -> float:
    if matrix.present.size == 0:
        raise EmptyMatrix("no (node, day) cells")
    return float(np.count_nonzero(matrix.present)) / matrix.present.size


def gap_runs(matrix: CompletenessMatrix) -> list[tuple[str, date, date]]:
    """Maximal runs of consecutive missing days per node, as (node, first, last)."""
    runs = []
    for i, node in enumerate(matrix.nodes):
        missing = ~matrix.present[i]
        j = 0
        while j < len(matrix.days):
            if missing[j]:
                k = j
                while k + 1 < len(matrix.days) and missing[k + 1]:
                    k += 1
                runs.append((node, matrix.days[j], matrix.days[k]))
                j = k + 1
            else:
                j += 1
    return runs


def gap_runs_csv(runs: list[tuple[str, date, date]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node", "start_date", "end_date"])
    for node, start, end in runs:
        writer.writerow([node, start.isoformat(), end.isoformat()])
    return buf.getvalue()
