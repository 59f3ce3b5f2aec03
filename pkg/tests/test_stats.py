from datetime import date

import pytest
from hypothesis import given, strategies as st

from logcleanse.anonymizer import process_stream
from logcleanse.codec import ReferenceTable
from logcleanse.errors import EmptyMatrix
from logcleanse.stats import (
    CompletenessMatrix,
    CorpusReport,
    build_report,
    completeness,
    frequent_pattern_coverage,
    gap_runs,
    gap_runs_csv,
)
from logcleanse.synth import generate_corpus
from conftest import E1, TABLE6_LINES


def test_single_e1_bytes(classes, table2):
    r = build_report(process_stream(["1454284800 " + E1], classes, table2, ReferenceTable()))
    stamp = len("1454284800") + 1
    assert r.bytes_in == stamp + 43 + 1
    assert r.bytes_out == stamp + 8 + 1
    assert r.encoded_fraction == 1.0
    assert r.sensitive_fraction == pytest.approx(2 / 6)


def test_table6_report(classes, table6):
    r = build_report(process_stream(TABLE6_LINES + ["bad"], classes, table6, ReferenceTable()))
    assert r.total_entries == 5 and r.error_entries == 1
    assert r.encoded_entries == 3 and r.kept_entries == 1
    assert r.unique_patterns == 3
    assert r.coverage_curve[-1] == (3, pytest.approx(3 / 5))
    assert r.terms_per_entry_after == pytest.approx(8 / 4)
    d = r.as_dict()
    assert d["unique_patterns"] == 3 and "reduction_pct" in d
    assert "event patterns" in r.summary()


def test_merge_is_commutative_and_matches_whole(classes, table2):
    lines = TABLE6_LINES * 3 + ["1 " + E1]
    t = ReferenceTable()
    results = list(process_stream(lines, classes, table2, t))
    whole = build_report(results)
    a, b = build_report(results[:5]), build_report(results[5:])
    assert a.merge(b).as_dict() == b.merge(a).as_dict() == whole.as_dict()


def test_frequent_pattern_coverage():
    t = ReferenceTable()
    for i, n in enumerate([5, 3, 1, 1]):
        for _ in range(n):
            t.get_or_insert(f"p{i}")
    assert frequent_pattern_coverage(t, 2) == pytest.approx(0.8)
    assert frequent_pattern_coverage(t, 0) == 0.0
    assert frequent_pattern_coverage(ReferenceTable(), 3) == 0.0


def manifest(n_nodes, n_days, missing):
    rows = []
    for i in range(n_nodes):
        for j in range(n_days):
            rows.append((f"n{i:03d}", date(2016, 2, 1 + j).isoformat(), 0 if (i, j) in missing else 1))
    return rows


def test_completeness_exact():
    missing = {(i, i % 10) for i in range(30)}
    m = CompletenessMatrix.from_manifest(manifest(100, 10, missing))
    assert m.present.shape == (100, 10)
    assert completeness(m) == 0.970


def test_absent_day_counts_as_missing():
    rows = [("a", "2016-02-01"), ("a", "2016-02-03"), ("b", "2016-02-02")]
    m = CompletenessMatrix.from_manifest(rows)
    assert len(m.days) == 3
    assert completeness(m) == pytest.approx(3 / 6)
    assert gap_runs(m) == [("a", date(2016, 2, 2), date(2016, 2, 2)),
                           ("b", date(2016, 2, 1), date(2016, 2, 1)), ("b", date(2016, 2, 3), date(2016, 2, 3))]


def test_gap_csv_and_sources(tmp_path):
    m = CompletenessMatrix.from_csv("node,day,present\nx,2016-02-01,1\nx,2016-02-02,0\nx,2016-02-03,0\n")
    assert gap_runs_csv(gap_runs(m)) == "node,start_date,end_date\nx,2016-02-02,2016-02-03\n"
    for node, day in [("n1", "2016-02-01"), ("n1", "2016-02-02"), ("n2", "2016-02-02")]:
        (tmp_path / node).mkdir(exist_ok=True)
        (tmp_path / node / f"{day}.log").write_text("x\n")
    d = CompletenessMatrix.from_directory(tmp_path)
    assert d.nodes == ["n1", "n2"] and completeness(d) == 0.75


def test_empty_matrix():
    with pytest.raises(EmptyMatrix):
        completeness(CompletenessMatrix.from_manifest([]))


@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 5)), max_size=30))
def test_completeness_counts_missing_cells(missing):
    m = CompletenessMatrix.from_manifest(manifest(5, 6, missing))
    assert completeness(m) == pytest.approx(1 - len(missing) / 30)
    assert sum((e - s).days + 1 for _, s, e in gap_runs(m)) == len(missing)


def test_synthetic_corpus_shape():
    c = generate_corpus(n_entries=10_000, n_patterns=500, seed=3)
    assert len(c.lines) == 10_000
    assert len(set(c.template_ids)) == 500
    head = sum(1 for t in c.template_ids if t < c.frequent)
    assert head / 10_000 == pytest.approx(0.92, abs=0.001)
    assert c.lines == generate_corpus(n_entries=10_000, n_patterns=500, seed=3).lines
    with pytest.raises(ValueError):
        generate_corpus(n_entries=1000, n_patterns=500)


def test_empty_report():
    r = CorpusReport()
    assert r.coverage_curve == [] and r.reduction_pct == 0.0
