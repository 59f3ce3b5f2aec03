import pytest
from hypothesis import given, strategies as st

from logcleanse.entry import Term, tokenize
from logcleanse.errors import EmptyEntry
from logcleanse.policy import classify_terms
from logcleanse.quality import State, nonsensitivity, reduction, score, score_terms, semantic
from logcleanse.variables import detect
from conftest import E1


def test_table3_fractions(classes, table2):
    terms = tokenize(E1)
    classify_terms(terms, detect(E1, classes), table2)
    assert nonsensitivity(terms) == pytest.approx(4 / 6)
    assert semantic(terms) == pytest.approx(4 / 6)


def test_raw_quality(classes, table2):
    terms = tokenize(E1)
    classify_terms(terms, detect(E1, classes), table2)
    q = score_terms(terms, State.RAW, 43, 43)
    assert q.q == pytest.approx(4 / 6 * 4 / 6 * 0.75)
    assert q.reduction == 0.75


def test_encoded_reduction():
    assert reduction(State.ENCODED, 43, 8) == pytest.approx(1 - 8 / 43)
    assert reduction("encoded", 4, 8) == 0.0
    assert reduction("constantified", 43, 40) == 0.75
    assert score(1, 1, 1, reduction(State.ENCODED, 43, 8)).q == pytest.approx(35 / 43)


def test_usefulness_zero_zeroes_quality():
    assert score(0, 1, 1, 1).q == 0


def test_empty_entry():
    with pytest.raises(EmptyEntry):
        nonsensitivity([])
    with pytest.raises(EmptyEntry):
        semantic([])


def test_state_values():
    assert State("constantified") is State.ANONYMIZED
    with pytest.raises(ValueError):
        State("nope")


flag = st.booleans()


@given(st.lists(st.tuples(flag, flag), min_size=1, max_size=20),
       st.tuples(*(st.floats(0.01, 1) for _ in range(3))))
def test_quality_in_unit_interval(pairs, coeffs):
    terms = [Term(f"t{i}", i, sensitive=s, semantic=s or m) for i, (s, m) in enumerate(pairs)]
    q = score_terms(terms, State.ANONYMIZED, 10, 10, coeffs)
    assert 0 <= q.q <= 1
    assert q.as_dict()["Q"] == q.q
