"""Streaming command-line front end.

    logcleanse --mode encode --policy paper-table6 --table ref.json < syslog > out

Data goes to ``--output`` (default stdout); summaries and diagnostics go to
stderr. Exit status: 0 on success, 1 when some lines were malformed, 2 on a
fatal error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, TextIO

from .anonymizer import ErrorRecord, process_stream
from .codec import DEFAULT_BITS, ReferenceTable, load_annotations, optimize_key_lengths
from .errors import LogCleanseError
from .policy import resolve_policy
from .stats import CompletenessMatrix, accumulate, completeness, gap_runs, gap_runs_csv, CorpusReport
from .variables import load_patterns

log = logging.getLogger("logcleanse")

MODES = ("anonymize", "encode", "stats", "completeness")
DEFAULT_TABLE_PATH = "reference-table.json"

EXIT_OK, EXIT_LINE_ERRORS, EXIT_FATAL = 0, 1, 2


@dataclass
class RunConfig:
    mode: str = "encode"
    policy_path: str | None = None
    patterns_path: str | None = "extended"
    hash_bits: int = DEFAULT_BITS
    coefficients: tuple[float, float, float] | None = None
    reference_table_path: str | None = None
    annotations_path: str | None = None
    input: str | None = None  # None or "-" is stdin
    output: str | None = None  # None or "-" is stdout
    lenient_parse: bool = False
    workers: int = 1
    optimize_keys: str | None = None
    gaps_path: str | None = None

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.mode == "encode":
            path = Path(self.reference_table_path or DEFAULT_TABLE_PATH)
            target = path if path.exists() else path.parent.resolve()
            if not os.access(target, os.W_OK):
                raise ValueError(f"reference table {path} is not writable")
        if self.optimize_keys and self.mode != "encode":
            raise ValueError("--optimize-keys needs --mode encode")


def _coefficients(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected n,s,r")
    try:
        values = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not numbers: {text!r}") from None
    if any(not 0 < v <= 1 for v in values):
        raise argparse.ArgumentTypeError("coefficients must lie in (0, 1]")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logcleanse", description="Anonymize and encode syslog streams.")
    p.add_argument("--mode", choices=MODES, default="encode")
    p.add_argument("--policy", help="policy preset or file (default: $LOGCLEANSE_POLICY, then paper-table2)")
    p.add_argument("--patterns", default="extended", help="pattern preset (table1, extended) or file")
    p.add_argument("--hash-bits", type=int, default=DEFAULT_BITS)
    p.add_argument("--coeff", type=_coefficients, help="quality coefficients n,s,r")
    p.add_argument("--table", help=f"reference table JSON (encode default: {DEFAULT_TABLE_PATH})")
    p.add_argument("--annotations", help="pattern<TAB>meaning file for new table rows")
    p.add_argument("--input", help="input file, or - for stdin (completeness: manifest CSV or log directory)")
    p.add_argument("--output", help="output file, or - for stdout")
    p.add_argument("--lenient", action="store_true", help="accept lines without a timestamp")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--optimize-keys", metavar="CSV", help="shorten keys after the run and write the old,new map here")
    p.add_argument("--gaps", metavar="CSV", help="completeness mode: write missing-day runs here")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        mode=args.mode,
        policy_path=args.policy,
        patterns_path=args.patterns,
        hash_bits=args.hash_bits,
        coefficients=args.coeff,
        reference_table_path=args.table,
        annotations_path=args.annotations,
        input=args.input,
        output=args.output,
        lenient_parse=args.lenient,
        workers=args.workers,
        optimize_keys=args.optimize_keys,
        gaps_path=args.gaps,
    )


def _open_in(path: str | None) -> TextIO:
    if path in (None, "-"):
        return sys.stdin
    return open(path, encoding="utf-8", errors="replace", newline="")


def _open_out(path: str | None) -> TextIO:
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _lines(stream: TextIO) -> Iterator[str]:
    for line in stream:
        yield line.rstrip("\r\n")


def _load_table(config: RunConfig) -> ReferenceTable:
    annotations = load_annotations(config.annotations_path) if config.annotations_path else None
    path = config.reference_table_path
    if path and Path(path).exists() and Path(path).stat().st_size:
        table = ReferenceTable.load(path, config.hash_bits)
        if annotations:
            table.annotations.update(annotations)
        return table
    return ReferenceTable(config.hash_bits, annotations)


def _run_stream(config: RunConfig, policy, classes) -> int:
    encode = config.mode != "anonymize"
    table = _load_table(config)
    table_path = config.reference_table_path or (DEFAULT_TABLE_PATH if config.mode == "encode" else None)
    report = CorpusReport()
    src = _open_in(config.input)
    dst = _open_out(config.output) if config.mode != "stats" else None
    try:
        results = process_stream(
            _lines(src), classes, policy, table,
            encode=encode, workers=config.workers, lenient=config.lenient_parse,
        )
        for item in results:
            accumulate(report, item)
            if isinstance(item, ErrorRecord):
                log.debug("line %d rejected", item.lineno)
            if dst is not None:
                dst.write(item.output_line() + "\n")
    except BaseException:
        if config.mode == "encode" and table_path:
            checkpoint = f"{table_path}.checkpoint"
            table.save(checkpoint)
            log.error("run aborted; reference table checkpoint saved to %s", checkpoint)
        raise
    finally:
        if src is not sys.stdin:
            src.close()
        if dst is not None and dst is not sys.stdout:
            dst.close()
        elif dst is not None:
            dst.flush()

    if config.mode == "encode":
        table.save(table_path)
        if config.optimize_keys:
            optimized, remap = optimize_key_lengths(table)
            optimized.save(table_path)
            with open(config.optimize_keys, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(["old", "new"])
                for old, new in sorted(remap.items()):
                    writer.writerow([old, new])
    if config.mode == "stats":
        out = _open_out(config.output)
        out.write(report.to_json() + "\n")
        if out is not sys.stdout:
            out.close()

    print(report.summary(), file=sys.stderr)
    if report.error_entries:
        print(f"{report.error_entries} malformed line(s) replaced by error records", file=sys.stderr)
        return EXIT_LINE_ERRORS
    return EXIT_OK


def _run_completeness(config: RunConfig) -> int:
    import json

    if config.input and Path(config.input).is_dir():
        matrix = CompletenessMatrix.from_directory(config.input)
    else:
        src = _open_in(config.input)
        try:
            matrix = CompletenessMatrix.from_csv(src.read())
        finally:
            if src is not sys.stdin:
                src.close()
    value = completeness(matrix)
    runs = gap_runs(matrix)
    doc = {
        "nodes": len(matrix.nodes),
        "days": len(matrix.days),
        "cells": int(matrix.present.size),
        "missing": int(matrix.present.size - matrix.present.sum()),
        "completeness": value,
        "gap_runs": len(runs),
    }
    out = _open_out(config.output)
    out.write(json.dumps(doc, indent=2) + "\n")
    if out is not sys.stdout:
        out.close()
    if config.gaps_path:
        Path(config.gaps_path).write_text(gap_runs_csv(runs), encoding="utf-8")
    print(f"completeness {value:.3f} over {doc['cells']} node-days", file=sys.stderr)
    return EXIT_OK


def run(config: RunConfig) -> int:
    try:
        config.validate()
        if config.mode == "completeness":
            return _run_completeness(config)
        policy = resolve_policy(config.policy_path)
        if config.coefficients:
            policy = policy.with_coefficients(config.coefficients)
        patterns = config.patterns_path
        if patterns and Path(patterns).is_file():
            patterns = Path(patterns)
        classes = load_patterns(patterns)
        return _run_stream(config, policy, classes)
    except (LogCleanseError, ValueError, OSError) as exc:
        print(f"logcleanse: fatal: {exc}", file=sys.stderr)
        return EXIT_FATAL


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
