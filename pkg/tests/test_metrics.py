import json

import pytest

from aprioriscan.candidates import JoinKind, JoinStrategy, DEFAULT_STRATEGY
from aprioriscan.dataset import parse_dat
from aprioriscan.metrics import (
    ScanLedger,
    compare,
    render_report,
    report_from_json,
)
from aprioriscan.miners import mine_oracle

from conftest import expected_ledger


def test_ledger_totals_and_levels():
    ledger = ScanLedger()
    ledger.add_scans(1, 45)
    ledger.add_scans(2, 10)
    ledger.add_scans(2, 5)
    ledger.open_level(3)
    ledger.add_tid_comparisons(2, 7)
    assert ledger.total_scans == 60
    assert ledger.scans_by_level() == [45, 15, 0]
    assert ledger.tid_comparisons_by_level() == [0, 7, 0]
    assert ledger.total_tid_comparisons == 7
    with pytest.raises(ValueError):
        ledger.add_scans(1, -1)


def test_compare_table1(table1, backend):
    report = compare(table1, 3, DEFAULT_STRATEGY, backend=backend)
    assert report.scan_matrix() == [(45, 54, 36), (45, 25, 14), (45, 0, 0)]
    assert report.totals() == (135, 84, 45)
    assert report.equivalence_verified
    assert report.algorithms["intersect"].frequent == [4, 4, 0]


def oracle_totals(db, s):
    truth = mine_oracle(db, s).support_map()
    classic, filtered = expected_ledger(db, truth, s)
    return sum(classic), sum(filtered)


@pytest.mark.parametrize("s, classic, filtered", [(3, 135, 84), (4, 81, 66), (5, 72, 61)])
def test_compare_other_supports(table1, s, classic, filtered):
    # frozen values come from the oracle-driven recount in expected_ledger
    assert oracle_totals(table1, s) == (classic, filtered)
    report = compare(table1, s)
    assert report.totals() == (classic, filtered, 45)
    assert report.algorithms["intersect"].scans[1:] == [0] * (report.depth - 1)


def test_compare_classic_join_prune(table1):
    strategy = JoinStrategy(JoinKind.CLASSIC_SELF_JOIN, prune=True)
    report = compare(table1, 3, strategy)
    assert report.equivalence_verified
    # C3 = {123} only, so level 3 costs one candidate
    assert report.scan_matrix() == [(45, 54, 9), (45, 25, 5), (45, 0, 0)]
    assert report.totals() != (135, 84, 45)


def test_compare_empty_db():
    report = compare(parse_dat(b""), 1)
    assert report.totals() == (0, 0, 0)
    assert report.equivalence_verified
    assert report.depth == 1


def test_tsv_scan_totals_row(table1):
    text = render_report(compare(table1, 3)).decode()
    lines = text.splitlines()
    assert "scans\tclassic\tfiltered\tintersect" in lines
    assert "L1\t45\t45\t45" in lines
    assert "L2\t54\t25\t0" in lines
    assert "L3\t36\t14\t0" in lines
    assert "total\t135\t84\t45" in lines
    assert "time_ms" not in text
    assert "\r" not in text


def test_tsv_timing_block_only_on_request(table1):
    text = render_report(compare(table1, 3), "tsv", timings=True).decode()
    assert "time_ms\tclassic\tfiltered\tintersect" in text


def test_json_schema_and_order(table1):
    doc = json.loads(render_report(compare(table1, 3), "json"))
    assert list(doc) == [
        "schema", "database", "support", "join", "prune", "levels",
        "equivalence_verified", "algorithms",
    ]
    assert [a["name"] for a in doc["algorithms"]] == ["classic", "filtered", "intersect"]
    assert [a["total_scans"] for a in doc["algorithms"]] == [135, 84, 45]
    assert "time_ms" not in doc["algorithms"][0]


@pytest.mark.parametrize("data", [b"", b"1 2 5\n2 4\n2 4\n1 2 4\n"])
def test_json_round_trip(data):
    report = compare(parse_dat(data), 1)
    again = report_from_json(render_report(report, "json", timings=True))
    assert again == report


def test_rendering_is_deterministic(table1):
    for fmt in ("tsv", "json"):
        a = render_report(compare(table1, 3), fmt)
        b = render_report(compare(table1, 3), fmt)
        assert a == b


def test_unknown_format(table1):
    with pytest.raises(ValueError):
        render_report(compare(table1, 3), "xml")
    with pytest.raises(ValueError):
        report_from_json(b'{"schema": "other"}')
