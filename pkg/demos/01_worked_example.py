"""Walk one sshd entry through every anonymization step and print its quality.

    python demos/01_worked_example.py
"""

from logcleanse import LogEntry, load_patterns, load_policy, quality_ladder
from logcleanse.entry import tokenize
from logcleanse.policy import classify_terms
from logcleanse.variables import detect

MESSAGE = "Accepted publickey for Siavash from 4.3.2.1"

classes = load_patterns("extended")
policy = load_policy("paper-table2")

# Which terms are sensitive, and which carry meaning for analysis?
terms = tokenize(MESSAGE)
classify_terms(terms, detect(MESSAGE, classes), policy)
print(f"{'term':<12} sensitive semantic")
for t in terms:
    print(f"{t.text:<12} {'Y' if t.sensitive else '-':^9} {'Y' if t.semantic else '-':^8}")
print()

# The ladder: remove sensitive values by severity, probe a meaningful
# constant, then compare against the hash-key.
for step in quality_ladder(LogEntry(0, MESSAGE), classes, policy):
    note = "" if step.accepted else "  (probe rejected)"
    shown = step.key or step.text
    print(f"{step.label:<8} Q={step.quality.q:.3f}  {shown}{note}")
