"""Generate a synthetic syslog corpus, encode it, and report the size reduction.

    python demos/03_synthetic_corpus.py [n_entries]
"""

import sys
import time

from logcleanse import ReferenceTable, build_report, load_patterns, load_policy, process_stream
from logcleanse.codec import encoded_bytes, optimize_key_lengths
from logcleanse.synth import generate_corpus

n = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
patterns = 2_000 if n >= 40_000 else max(100, n // 20)

t0 = time.perf_counter()
corpus = generate_corpus(n_entries=n, n_patterns=patterns)
print(f"generated {n} lines from {patterns} templates, e.g.")
for line in corpus.lines[:3]:
    print("  ", line)

table = ReferenceTable()
report = build_report(process_stream(corpus.lines, load_patterns("extended"), load_policy("paper-table6"), table))
print(f"\n{report.summary()}")
print(f"({time.perf_counter() - t0:.1f}s)")

# Shorter keys for frequent patterns: what would re-emitting the stream save?
optimized, _ = optimize_key_lengths(table)
print(f"\nkey bytes {encoded_bytes(table)} -> {encoded_bytes(optimized)} after frequency-ordered shortening")
print("most frequent patterns:")
for row in optimized.rows()[:5]:
    print(f"   {row.key:<6} {row.count:>6}  {row.pattern}")
