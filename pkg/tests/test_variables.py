import re

import pytest
from hypothesis import given, strategies as st

from logcleanse.errors import DuplicateRank, PatternCompileError, SpanMismatch
from logcleanse.variables import TABLE1_PRINTED, constantify, detect, load_patterns
from conftest import E1


def spans(message, classes):
    return [(d.class_name, d.original) for d in detect(message, classes)]


def test_table1_has_fifteen_classes_in_order(table1_classes):
    assert [c.name for c in table1_classes] == [n for n, _ in TABLE1_PRINTED]
    assert [c.rank for c in table1_classes] == list(range(15))


def test_extended_adds_cron_user(classes):
    assert classes[-1].name == "CronUser"
    assert len(classes) == 16


def test_e1(classes):
    assert spans(E1, classes) == [("User", "Siavash"), ("IPv4", "4.3.2.1")]
    assert constantify(E1, detect(E1, classes)) == "Accepted publickey for #USR# from #IP4#"


def test_hardware_address_masks_hex(classes):
    assert spans("0x1a2b-0x3c4d then 0xff", classes) == [("HardwareAddress", "0x1a2b-0x3c4d"), ("HexNumber", "0xff")]


def test_no_variables(classes):
    assert detect("disabling lock debugging due to kernel taint", classes) == []


def test_cron_line(classes):
    msg = "(siavash) cmd (/home/siavash/config.sh > output.stat)"
    assert constantify(msg, detect(msg, classes)) == "(#USR#) cmd (#PATH# > output.stat)"
    # the fifteen alone cannot see the parenthesized user
    t1 = load_patterns("table1")
    assert constantify(msg, detect(msg, t1)) == "(siavash) cmd (#PATH# > output.stat)"


def test_session_closed(classes):
    msg = "pam_unix(sshd:session): session closed for siavash"
    assert constantify(msg, detect(msg, classes)) == "pam_unix(sshd:session): session closed for #USR#"


def test_acpi_hex(classes):
    msg = "ACPI: LAPIC (acpi_id[0x55] lapic_id[0xff] disabled)"
    assert spans(msg, classes) == [("HexNumber", "0x55"), ("HexNumber", "0xff")]


def test_port_and_user_keep_literal_group(classes):
    msg = "Failed password for user root from 10.0.0.1 port 22 ssh2"
    assert spans(msg, classes) == [("User", "user root"), ("IPv4", "10.0.0.1"), ("Port", "port 22")]


def test_case_insensitive(classes):
    assert spans("id 0XFF here", classes) == [("HexNumber", "0XFF")]


def test_size_and_serial_share_delimiters(classes):
    msg = "wrote 12k 4m to disk"
    assert [o for _, o in spans(msg, classes)] == ["12k", "4m"]
    assert spans("sn 0a:1b: ok", classes) == [("SerialNumber", "0a:1b:")]


def test_detections_never_overlap(classes):
    msg = "for bob from 1.2.3.4 port 80 /tmp/x 0x1-0x2 0x3 55% 4k uid=7 libc.so.6"
    ds = detect(msg, classes)
    for a, b in zip(ds, ds[1:]):
        assert a.end <= b.start


@pytest.mark.parametrize("name,printed", TABLE1_PRINTED)
def test_named_rewrite_matches_printed_whole_span(table1_classes, name, printed):
    """The named-group rewrite finds the same whole matches as the printed expression."""
    samples = [E1, "Failed password for user root from 10.0.0.1 port 22 ssh2", "open (/var/log/x.log) ok",
               "a 0x1a-0x2b b 0xff c 55.5% d 12k e sn 0a:1b: f", "uid=500 libc.so.6 $HOME x@y.org",
               "2016-02-01T00:00:00 3.10.0-327.el7.x86_64"]
    cls = next(c for c in table1_classes if c.name == name)
    printed_rx = re.compile(printed, re.IGNORECASE)
    for s in samples:
        a = [m.group() for m in printed_rx.finditer(s)]
        b = [m.group() for m in cls.regex.finditer(s)]
        if name in ("SerialNumber", "Size"):
            # trailing delimiter moved into a lookahead
            a = [x[:-1] for x in a]
        assert a == b, (name, s)


def test_load_errors():
    with pytest.raises(PatternCompileError):
        load_patterns("0\tBad\t#BAD#\t(unclosed")
    with pytest.raises(PatternCompileError):
        load_patterns("0\tBad\tnot-a-placeholder\tx")
    with pytest.raises(PatternCompileError):
        load_patterns("only two\tcolumns")
    with pytest.raises(DuplicateRank):
        load_patterns("0\tA\t#A#\ta\n0\tB\t#B#\tb")


def test_load_sorts_by_rank_and_skips_comments(tmp_path):
    p = tmp_path / "t.tsv"
    p.write_text("# c\n5\tB\t#B#\tb\n\n1\tA\t#A#\ta\n")
    assert [c.name for c in load_patterns(p)] == ["A", "B"]
    assert load_patterns(None, defaults=False) == []


def test_constantify_span_mismatch(classes):
    ds = detect(E1, classes)
    with pytest.raises(SpanMismatch):
        constantify("x" + E1, ds)


def test_constantify_only(classes):
    ds = detect(E1, classes)
    assert constantify(E1, ds, only={"IPv4"}) == "Accepted publickey for Siavash from #IP4#"


words = st.sampled_from(["for", "bob", "from", "1.2.3.4", "port", "22", "/tmp/a", "0xff", "50%", "x", "uid=3",
                         "(alice)", "cmd", "(", ")", "12k", "libz.so.1"])


@given(st.lists(words, min_size=1, max_size=12))
def test_constantify_is_idempotent(classes, tokens):
    msg = " ".join(tokens)
    once = constantify(msg, detect(msg, classes))
    twice = constantify(once, detect(once, classes))
    assert once == twice
