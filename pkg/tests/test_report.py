import json

from hypothesis import given
from hypothesis import strategies as st

from arrowkit import __version__
from arrowkit.laws import LawReport, Scan, Verdict
from arrowkit.report import Report, Section


def test_section_ok_and_failure_witness():
    s = Section("C3")
    s.add("a", True, {"ignored": 1})
    assert s.ok and s.verdicts[0].witness is None
    s.add("b", False, {"x": "half"}, checked=3)
    assert not s.ok
    assert s.to_json()["verdicts"][1] == {"law": "b", "ok": False, "checked": 3, "witness": {"x": "half"}}


def test_extend_prefixes_laws():
    laws = LawReport()
    laws.add("mp", True, checked=9)
    s = Section("x")
    s.extend(laws, "separator: ")
    assert s.verdicts == [Verdict("separator: mp", True, None, 9)]


def test_scan_keeps_first_counterexample():
    laws = LawReport()
    scan = Scan(laws, "law")
    for k in range(5):
        scan.check(k < 2, k=k)
    v = scan.done()
    assert not v.ok and v.witness == {"k": 2} and v.checked == 5
    assert laws["law"] is v and laws.failures == [v]


def test_report_exit_code_and_header():
    r = Report("check", {"file": "f"})
    assert r.exit_code == 0 and r.ok
    r.section("A").add("law", False, {})
    assert r.exit_code == 1
    data = json.loads(r.dumps())
    assert list(data)[:6] == ["tool", "version", "command", "inputs", "ok", "sections"]
    assert data["tool"] == "arrowkit" and data["version"] == __version__


def test_timings_omitted_when_none():
    assert "timings" not in Report("x", timings=None).to_json()
    assert Report("x").to_json()["timings"] == {}


_json = st.recursive(
    st.none() | st.booleans() | st.integers(-5, 5) | st.text(max_size=4),
    lambda sub: st.lists(sub, max_size=3) | st.dictionaries(st.text(max_size=3), sub, max_size=3),
    max_leaves=6,
)
_verdicts = st.builds(
    Verdict,
    st.text(min_size=1, max_size=6),
    st.booleans(),
    st.none() | st.dictionaries(st.text(max_size=3), _json, max_size=2),
    st.integers(0, 100),
)
_sections = st.builds(Section, st.text(max_size=6), st.lists(_verdicts, max_size=3), st.dictionaries(st.text(max_size=3), _json, max_size=2))


@given(
    st.text(max_size=8),
    st.dictionaries(st.text(max_size=3), _json, max_size=3),
    st.lists(_sections, max_size=3),
    st.none() | st.dictionaries(st.text(max_size=3), st.floats(0, 10), max_size=2),
)
def test_dumps_loads_round_trip(command, inputs, sections, timings):
    r = Report(command, inputs, sections, timings)
    back = Report.loads(r.dumps())
    assert back == r
    assert back.dumps() == r.dumps()
