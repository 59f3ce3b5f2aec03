"""Privacy-preserving anonymization and hash-key encoding of syslog streams."""

from .anonymizer import ErrorRecord, ProcessedEntry, anonymize, decide, process_stream, quality_ladder
from .codec import (
    EventPattern,
    HashKey,
    ReferenceTable,
    encoded_bytes,
    get_or_insert,
    hash_pattern,
    lookup,
    optimize_key_lengths,
)
from .entry import LogEntry, Term, parse_line, tokenize
from .policy import PolicyTable, classify_terms, load_policy, resolve_policy
from .quality import QualityScore, State, score, score_terms
from .stats import CompletenessMatrix, CorpusReport, build_report, completeness, gap_runs
from .variables import DetectedVariable, VariableClass, constantify, detect, load_patterns

__version__ = "0.1.0"

__all__ = [
    "CompletenessMatrix", "CorpusReport", "DetectedVariable", "ErrorRecord", "EventPattern", "HashKey",
    "LogEntry", "PolicyTable", "ProcessedEntry", "QualityScore", "ReferenceTable", "State", "Term",
    "VariableClass", "anonymize", "build_report", "classify_terms", "completeness", "constantify",
    "decide", "detect", "encoded_bytes", "gap_runs", "get_or_insert", "hash_pattern", "load_patterns",
    "load_policy", "lookup", "optimize_key_lengths", "parse_line", "process_stream", "quality_ladder",
    "resolve_policy", "score", "score_terms", "tokenize",
]
