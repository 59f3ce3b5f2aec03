"""The anonymize-then-encode pipeline for single entries and streams.

Per entry:

1. detect variable terms and classify every term against the policy;
2. replace sensitive variables (highest severity first);
3. replace variables that are neither sensitive nor semantic;
4. score the result, and score the alternative of constantifying whatever
   meaningful variables remain and emitting the pattern's hash-key instead;
5. keep whichever scores higher (encoding wins ties, and an entry with no
   variables left is always encoded).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator

from .codec import ReferenceTable, hash_pattern
from .entry import LogEntry, Term, parse_line, tokenize
from .errors import MalformedEntry
from .policy import PolicyTable, anonymization_order, classify_terms
from .quality import QualityScore, State, reduction, score, score_terms
from .variables import DetectedVariable, VariableClass, detect

MALFORMED_TEXT = "#MALFORMED#"


@dataclass
class ProcessedEntry:
    entry: LogEntry
    state: State
    final_text: str
    quality: QualityScore
    pattern: str | None = None
    key: str | None = None
    anonymized_text: str = ""
    # variables still present in anonymized_text, spans relative to it
    remaining: tuple[DetectedVariable, ...] = ()
    raw_terms: int = 0
    sensitive_terms: int = 0
    final_terms: int = 0
    q_keep: float | None = None
    q_encode: float | None = None
    zero_quality: bool = False
    lineno: int = 0

    def output_line(self) -> str:
        return f"{self.entry.stamp} {self.final_text}"


@dataclass
class ErrorRecord:
    lineno: int
    reason: str
    state: State = State.ERROR
    final_text: str = MALFORMED_TEXT

    def output_line(self) -> str:
        return f"- {self.final_text}"


@dataclass
class LadderStep:
    label: str
    text: str
    terms: list[Term]
    quality: QualityScore
    accepted: bool = True
    key: str | None = None


def find_variables(message: str, classes: list[VariableClass], policy: PolicyTable) -> list[DetectedVariable]:
    """Regex detections plus policy lexicon literals in text no class claimed."""
    found = detect(message, classes)
    extra = [
        d for d in policy.lexicon_detections(message)
        if not any(d.start < o.end and d.end > o.start for o in found)
    ]
    if extra:
        found = sorted(found + extra, key=lambda d: d.start)
    return found


def analyze(text: str, classes: list[VariableClass], policy: PolicyTable) -> tuple[list[Term], list[DetectedVariable]]:
    terms = tokenize(text)
    detections = find_variables(text, classes, policy)
    classify_terms(terms, detections, policy)
    return terms, detections


def _covering(terms: list[Term], d: DetectedVariable) -> list[Term]:
    return [t for t in terms if t.start < d.end and t.end > d.start]


def _is_meaningful(terms: list[Term], d: DetectedVariable, policy: PolicyTable) -> bool:
    return any(policy.is_semantic(t.text) for t in _covering(terms, d))


def _breaks_usefulness(terms: list[Term], dets: Iterable[DetectedVariable], policy: PolicyTable) -> bool:
    return any(policy.usefulness_lost(t.text) for d in dets for t in _covering(terms, d))


def apply_in_order(text: str, detections: list[DetectedVariable]) -> str:
    """Replace detections one by one in the given order, tracking offset shifts."""
    applied: list[tuple[int, int]] = []  # (original start, length delta)
    for d in detections:
        shift = sum(delta for start, delta in applied if start < d.start)
        start, end = d.start + shift, d.end + shift
        text = text[:start] + d.placeholder + text[end:]
        applied.append((d.start, len(d.placeholder) - len(d.original)))
    return text


def _usefulness(policy: PolicyTable, lost: bool) -> int:
    return int(policy.usefulness_default and not lost)


def anonymize(entry: LogEntry, classes: list[VariableClass], policy: PolicyTable) -> ProcessedEntry:
    raw_terms, detections = analyze(entry.message, classes, policy)
    sensitive = [d for d in detections if policy.is_sensitive(d)]
    sensitive_ids = {id(d) for d in sensitive}
    semantic_less = [
        d for d in detections
        if id(d) not in sensitive_ids and not _is_meaningful(raw_terms, d, policy)
    ]
    replaced = anonymization_order(sensitive, policy) + semantic_less
    text = apply_in_order(entry.message, replaced)

    if replaced:
        terms, remaining = analyze(text, classes, policy)
    else:
        terms, remaining = raw_terms, detections
    lost = _breaks_usefulness(raw_terms, replaced, policy)
    quality = score_terms(
        terms, State.ANONYMIZED, entry.raw_length, len(text), policy.coefficients, _usefulness(policy, lost)
    )
    return ProcessedEntry(
        entry=entry,
        state=State.ANONYMIZED,
        final_text=text,
        quality=quality,
        anonymized_text=text,
        remaining=tuple(remaining),
        raw_terms=len(raw_terms),
        sensitive_terms=sum(t.sensitive for t in raw_terms),
        final_terms=len(terms),
        q_keep=quality.q,
        zero_quality=quality.q == 0,
    )


def encode_candidate(processed: ProcessedEntry, policy: PolicyTable) -> tuple[str, int]:
    """Pattern text of the fully constantified entry and its usefulness."""
    text = processed.anonymized_text
    pattern = apply_in_order(text, sorted(processed.remaining, key=lambda d: d.start, reverse=True))
    lost = _breaks_usefulness(tokenize(text), processed.remaining, policy)
    return pattern, int(processed.quality.usefulness and not lost)


def decide(processed: ProcessedEntry, codec: ReferenceTable, policy: PolicyTable) -> ProcessedEntry:
    if processed.state is not State.ANONYMIZED:
        raise ValueError(f"decide() needs an anonymized entry, got {processed.state.value}")
    text = processed.anonymized_text
    coeffs = policy.coefficients

    if text in codec:
        # Already one of this table's keys: pass it through unchanged.
        row = codec.touch(text)
        processed.state = State.ENCODED
        processed.pattern, processed.key = row.pattern, row.key
        processed.final_terms = 1
        return processed

    pattern, usefulness = encode_candidate(processed, policy)
    key = codec.peek(pattern)
    q_encode = score(usefulness, 1.0, 1.0, reduction(State.ENCODED, processed.entry.raw_length, len(key.hex)), coeffs)
    q_keep = processed.quality
    processed.q_keep, processed.q_encode = q_keep.q, q_encode.q

    if processed.remaining and q_keep.q > q_encode.q:
        processed.zero_quality = q_keep.q == 0
        return processed

    key = codec.get_or_insert(pattern)
    processed.state = State.ENCODED
    processed.final_text = key.hex
    processed.pattern, processed.key = pattern, key.hex
    processed.quality = q_encode
    processed.final_terms = 1
    processed.zero_quality = q_encode.q == 0
    return processed


def quality_ladder(
    entry: LogEntry, classes: list[VariableClass], policy: PolicyTable, bits: int = 32
) -> list[LadderStep]:
    """Score every intermediate state of one entry, step by step.

    Sensitive variables are removed one at a time in severity order, then
    semantic-less ones. Next the least important meaningful term (lowest
    semantic severity) is probed: replaced by a constant and kept only if
    quality improves. The rejected probe is still recorded. Last comes the
    encoded form.
    """
    coeffs = policy.coefficients
    raw_terms, detections = analyze(entry.message, classes, policy)
    useful = _usefulness(policy, False)
    steps = [LadderStep("raw", entry.message, raw_terms,
                        score_terms(raw_terms, State.RAW, entry.raw_length, entry.raw_length, coeffs, useful))]

    sensitive = anonymization_order([d for d in detections if policy.is_sensitive(d)], policy)
    semantic_less = [d for d in detections if d not in sensitive and not _is_meaningful(raw_terms, d, policy)]
    order = sensitive + semantic_less
    for i in range(1, len(order) + 1):
        text = apply_in_order(entry.message, order[:i])
        terms, _ = analyze(text, classes, policy)
        lost = _breaks_usefulness(raw_terms, order[:i], policy)
        q = score_terms(terms, State.ANONYMIZED, entry.raw_length, len(text), coeffs, _usefulness(policy, lost))
        steps.append(LadderStep(f"anon#{len(steps)}", text, terms, q))

    current = steps[-1]
    while True:
        candidates = [
            t for t in current.terms
            if t.semantic and not t.sensitive and not t.is_placeholder
        ]
        if not candidates:
            break
        target = min(candidates, key=lambda t: (policy.semantic_rule(t.text).severity
                                                if policy.semantic_rule(t.text) else 0, t.index))
        rule = policy.semantic_rule(target.text)
        placeholder = rule.placeholder if rule else "#SEM#"
        text = current.text[:target.start] + placeholder + current.text[target.end:]
        terms, _ = analyze(text, classes, policy)
        q = score_terms(terms, State.ANONYMIZED, entry.raw_length, len(text), coeffs, current.quality.usefulness)
        improved = q.q > current.quality.q
        steps.append(LadderStep(f"anon#{len(steps)}", text, terms, q, accepted=improved))
        if not improved:
            break
        current = steps[-1]

    _, remaining = analyze(current.text, classes, policy)
    pattern = apply_in_order(current.text, sorted(remaining, key=lambda d: d.start, reverse=True))
    key = hash_pattern(pattern, bits)
    lost = _breaks_usefulness(tokenize(current.text), remaining, policy)
    U = int(current.quality.usefulness and not lost)
    q = score(U, 1.0, 1.0, reduction(State.ENCODED, entry.raw_length, len(key.hex)), coeffs)
    enc_terms = [Term(key.hex, 0, 0, semantic=True)]
    steps.append(LadderStep("encoded", pattern, enc_terms, q, key=key.hex))
    return steps


# Worker-side state, installed once per process by the pool initializer.
_worker_ctx: tuple[list[VariableClass], PolicyTable, bool] | None = None


def _init_worker(classes, policy, lenient):
    global _worker_ctx
    _worker_ctx = (classes, policy, lenient)


def _prepare(item: tuple[int, str]) -> ProcessedEntry | ErrorRecord:
    classes, policy, lenient = _worker_ctx
    return prepare_line(item[0], item[1], classes, policy, lenient)


def prepare_line(lineno: int, line: str, classes, policy, lenient: bool = False) -> ProcessedEntry | ErrorRecord:
    try:
        entry = parse_line(line, lenient=lenient)
    except MalformedEntry as exc:
        return ErrorRecord(lineno, str(exc))
    processed = anonymize(entry, classes, policy)
    processed.lineno = lineno
    return processed


def process_stream(
    lines: Iterable[str],
    classes: list[VariableClass],
    policy: PolicyTable,
    codec: ReferenceTable | None = None,
    *,
    encode: bool = True,
    workers: int = 1,
    lenient: bool = False,
    chunksize: int = 256,
) -> Iterator[ProcessedEntry | ErrorRecord]:
    """Process lines in order, one result per line.

    Anonymization runs on ``workers`` processes; the keep-or-encode step
    runs here, in input order, so reference-table keys never depend on
    scheduling.
    """
    if encode and codec is None:
        raise ValueError("encoding needs a reference table")
    numbered = enumerate(lines, 1)
    if workers <= 1:
        prepared = (prepare_line(n, line, classes, policy, lenient) for n, line in numbered)
        yield from _finish(prepared, codec, policy, encode)
        return
    with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(classes, policy, lenient)) as pool:
        # Bounded window keeps memory flat on unbounded input.
        window = workers * chunksize * 4
        while True:
            batch = list(itertools.islice(numbered, window))
            if not batch:
                break
            yield from _finish(pool.map(_prepare, batch, chunksize=chunksize), codec, policy, encode)


def _finish(prepared, codec, policy, encode):
    for item in prepared:
        if encode and isinstance(item, ProcessedEntry):
            item = decide(item, codec, policy)
        yield item
