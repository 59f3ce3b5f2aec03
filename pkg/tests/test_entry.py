import pytest
from hypothesis import given, strategies as st

from logcleanse.entry import LogEntry, parse_line, tokenize
from logcleanse.errors import MalformedEntry
from oracles import whitespace_runs_interior


def test_epoch_line():
    e = parse_line("1454284800 Accepted publickey for Siavash from 4.3.2.1")
    assert e.timestamp == 1454284800
    assert e.message == "Accepted publickey for Siavash from 4.3.2.1"
    assert e.raw_length == 43
    assert e.stamp == "1454284800"


def test_iso_line_keeps_stamp_and_converts_to_utc():
    e = parse_line("2016-02-01T00:00:00+01:00 sshd: hello")
    assert e.timestamp == 1454281200
    assert e.stamp == "2016-02-01T00:00:00+01:00"
    assert e.message == "sshd: hello"
    assert parse_line("2016-02-01T00:00:00.250Z x").timestamp == 1454284800


def test_message_is_exact_remainder():
    e = parse_line("5 a  b \t c ")
    assert e.message == "a  b \t c "


@pytest.mark.parametrize("line", ["", "no timestamp here", "1454284800", "1454284800   ", "abc 1"])
def test_malformed(line):
    with pytest.raises(MalformedEntry):
        parse_line(line)


def test_lenient_keeps_whole_line():
    e = parse_line("no timestamp here", lenient=True)
    assert (e.timestamp, e.message) == (0, "no timestamp here")


def test_tokenize_offsets():
    terms = tokenize("  ab c\tdef ")
    assert [(t.text, t.index, t.start, t.end) for t in terms] == [
        ("ab", 0, 2, 4), ("c", 1, 5, 6), ("def", 2, 7, 10)]


def test_raw_length_defaults_to_message_length():
    assert LogEntry(1, "abc").raw_length == 3


@given(st.text(alphabet=st.sampled_from("ab \t\n"), min_size=0, max_size=40))
def test_term_count_matches_whitespace_runs(message):
    terms = tokenize(message)
    expected = 0 if not message.strip() else whitespace_runs_interior(message) + 1
    assert len(terms) == expected
    for t in terms:
        assert message[t.start:t.end] == t.text
