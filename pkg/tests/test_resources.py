import json
import math

import pytest

from modalqc.processor import GroverPlan
from modalqc.resources import (
    ResourceLedger,
    audit_grover,
    compare_with_classical,
    format_table,
    ledger_for,
)


def test_audit_n8():
    ledger = audit_grover(GroverPlan(8, 3, 2), 100)
    assert (ledger.n_detectors, ledger.readout_steps_per_shot, ledger.oracle_queries) == (3, 3, 2)
    assert ledger.classical_search_steps == 3 and ledger.n_shots == 100


def test_audit_n1024_default():
    ledger = audit_grover(GroverPlan.with_default_iterations(1024, 0), 1)
    assert ledger.n_detectors == 10
    assert ledger.oracle_queries == 25 == round(math.pi / 4 * 32)


def test_audit_n2_zero():
    ledger = audit_grover(GroverPlan(2, 0, 0), 1)
    assert ledger.n_detectors == 1 and ledger.oracle_queries == 0


def test_padding_recorded():
    ledger = audit_grover(GroverPlan(6, 0, 1), 10)
    assert ledger.n_modes == 6 and ledger.n_padded_modes == 2 and ledger.total_modes == 8
    assert ledger.n_detectors == 3
    assert compare_with_classical(ledger).n_modes == 8


def test_ledger_invariants_enforced():
    with pytest.raises(ValueError):
        ResourceLedger(8, 0, 2, 3, 0, 1, 3)
    with pytest.raises(ValueError):
        ResourceLedger(8, 0, 3, 3, -1, 1, 3)
    with pytest.raises(ValueError):
        ResourceLedger(8, 0, 3, 3, 0, 0, 3)


def test_monotone_doubling():
    prev = ledger_for(2).n_detectors
    n = 4
    while n <= 2**20:
        cur = ledger_for(n)
        assert cur.n_detectors == prev + 1 == cur.classical_search_steps
        prev = cur.n_detectors
        n *= 2


def test_compare_n8():
    report = compare_with_classical(audit_grover(GroverPlan(8, 1, 2), 100))
    assert report.classical_unsorted_queries == 8
    assert report.readout_floor == 3 == report.classical_sorted_steps
    assert report.no_end_to_end_speedup


def test_compare_n1024():
    report = compare_with_classical(audit_grover(GroverPlan.with_default_iterations(1024, 7), 1))
    assert report.readout_floor == report.classical_sorted_steps == report.readout_steps == 10


def test_compare_n2():
    report = compare_with_classical(audit_grover(GroverPlan.with_default_iterations(2, 0), 1))
    assert report.classical_unsorted_queries in (1, 2)
    assert report.oracle_queries in (1, 2)
    assert report.readout_floor == 1


def test_report_json_field_names():
    doc = json.loads(compare_with_classical(ledger_for(16, 3, 5)).to_json())
    for key in ("n_modes", "n_detectors", "readout_steps", "oracle_queries", "classical_unsorted_queries", "readout_floor"):
        assert key in doc
    assert doc["n_modes"] == 16 and doc["readout_floor"] == 4


def test_table_alignment():
    text = format_table(("name", "n"), [("a", "1"), ("bbb", "100")])
    assert text.splitlines() == ["name    n", "----  ---", "a       1", "bbb   100"]
