"""Collection completeness over a node-by-day grid, with the gaps listed.

    python demos/04_completeness.py
"""

from datetime import date, timedelta

import numpy as np

from logcleanse.stats import CompletenessMatrix, completeness, gap_runs, gap_runs_csv

rng = np.random.default_rng(7)
nodes = [f"taurusi{1000 + i}" for i in range(100)]
days = [date(2016, 2, 1) + timedelta(d) for d in range(10)]

# A few nodes were down for a stretch; the rest lost an odd day here and there.
present = np.ones((len(nodes), len(days)), dtype=bool)
present[3, 2:6] = False
present[41, 7:] = False
for i, j in zip(rng.integers(0, 100, 21), rng.integers(0, 10, 21)):
    present[i, j] = False

matrix = CompletenessMatrix(nodes, days, present)
print(f"{matrix.present.size} node-days, {np.count_nonzero(~present)} missing")
print(f"completeness {completeness(matrix):.3f}\n")
print(gap_runs_csv(gap_runs(matrix)[:8]), end="")
