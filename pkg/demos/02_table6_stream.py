"""Stream four mixed lines through the pipeline and look at the reference table.

The ACPI line stays readable because the `paper-table6` profile marks its
APIC ids as meaningful; swap in `paper-table2` to see it encoded too.

    python demos/02_table6_stream.py [policy]
"""

import sys

from logcleanse import ReferenceTable, load_patterns, load_policy, process_stream

LINES = [
    "1454284800 (siavash) cmd (/home/siavash/config.sh > output.stat)",
    "1454284801 pam_unix(sshd:session): session closed for siavash",
    "1454284802 disabling lock debugging due to kernel taint",
    "1454284803 ACPI: LAPIC (acpi_id[0x55] lapic_id[0xff] disabled)",
]

policy = load_policy(sys.argv[1] if len(sys.argv) > 1 else "paper-table6")
classes = load_patterns("extended")
table = ReferenceTable()

print("anonymized:")
for r in process_stream(LINES, classes, policy, encode=False):
    print("  ", r.output_line())

print("\nencoded:")
for r in process_stream(LINES, classes, policy, table):
    q = f"keep {r.q_keep:.3f} / encode {r.q_encode:.3f}"
    print(f"   {r.output_line():<70} {q}")

print("\nreference table:")
for row in table.rows():
    print(f"   {row.key}  x{row.count}  {row.pattern}")
