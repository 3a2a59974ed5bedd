"""Mechanical verification scans: statuses, replayability, JSON round-trips.

Counts pinned here are deterministic: every scan derives its work list and
refinement schedule from its arguments alone (plus a fixed seed where random
pairs are drawn), so identical calls must reproduce identical reports.
"""

from fractions import Fraction

from tvals.verify import (
    Finding,
    ScanReport,
    ScanStatus,
    check_phi_conjecture,
    scan_p_sets,
    scan_tail_collisions,
    verify_catalan,
    verify_chain,
    verify_limits,
    verify_monotonicity,
    verify_repeated,
    verify_sum_formula,
    verify_tail_recurrence,
)


# --- identity scans ---------------------------------------------------------

def test_repeated_block_identities_hold():
    report = verify_repeated(n_max=3)
    assert report.status is ScanStatus.ALL_PASSED
    assert report.counts()["pass"] >= 9  # three families, three depths each


def test_sum_formula_identity_holds():
    report = verify_sum_formula(n_max=3)
    assert report.status is ScanStatus.ALL_PASSED
    assert all(f.verdict == "pass" for f in report.findings)


def test_catalan_partial_sums_and_frozen_gap():
    report = verify_catalan(j_max=12)
    assert report.status is ScanStatus.ALL_PASSED
    assert report.counts() == {"pass": 13}
    ceiling = report.findings[-1]
    assert "frozen" in ceiling.subject
    assert "2.441539e-04" in ceiling.detail


def test_tail_recurrence_holds_across_offsets():
    report = verify_tail_recurrence(weight_max=6)
    assert report.status is ScanStatus.ALL_PASSED
    assert report.counts()["pass"] > 0


def test_limit_decay_envelopes():
    for index in ((), (2,), (2, 1)):
        report = verify_limits(index, n_max=8)
        assert report.status is ScanStatus.ALL_PASSED, index


# --- order scans ------------------------------------------------------------

def test_monotonicity_pairs_all_certified():
    report = verify_monotonicity(pair_count=12, weight_max=6)
    assert report.status is ScanStatus.ALL_PASSED
    assert report.counts()["pass"] == 12


def test_chain_blocks_certified():
    report = verify_chain(block_count=3, per_block=4)
    assert report.status is ScanStatus.ALL_PASSED
    assert report.counts()["note"] >= 1  # the divergent top is noted, not checked


def test_collisions_all_separated_at_weight_six():
    report = scan_tail_collisions(weight_max=6)
    assert report.status is ScanStatus.ALL_PASSED
    assert report.counts()["pass"] == 31  # 30 adjacent pairs + transitivity note pair
    assert report.counts()["note"] == 2


# --- threshold-set scans ----------------------------------------------------

def test_p_sets_empty_through_rank_three():
    report = scan_p_sets(rank_max=3)
    assert report.status is ScanStatus.ALL_PASSED
    notes = [f for f in report.findings if f.verdict == "note"]
    assert any("definition" in f.detail for f in notes)


def test_p_sets_nonempty_at_rank_five():
    report = scan_p_sets(rank_max=5)
    assert report.status is ScanStatus.COUNTEREXAMPLE
    fails = [f for f in report.findings if f.verdict == "fail"]
    assert fails
    assert any("2, 1, 1, 1" in f.subject or "2,1,1,1" in f.subject for f in fails)


# --- pairing conjecture -----------------------------------------------------

def test_pairing_smallest_triangle_counts_frozen():
    report = check_phi_conjecture(weight_max=3, n_max=1)
    assert report.status is ScanStatus.COUNTEREXAMPLE
    assert report.counts() == {"pass": 2, "fail": 1, "note": 1}
    (fail,) = [f for f in report.findings if f.verdict == "fail"]
    assert fail.subject == "3,1"
    assert "(4, 1)" in fail.detail and "(4, 2)" in fail.detail


def test_pairing_records_band_escape():
    report = check_phi_conjecture(weight_max=4, n_max=1)
    fails = {f.subject: f for f in report.findings if f.verdict == "fail"}
    escape = fails["2,1,1,1"]
    assert "(5, 1)" in escape.detail and "(4, 1)" in escape.detail
    assert escape.data.get("agrees_b") is False or "reading_b" in escape.data


def test_pairing_scan_is_replayable():
    first = check_phi_conjecture(weight_max=3, n_max=2)
    second = check_phi_conjecture(weight_max=3, n_max=2)
    assert first.to_json() == second.to_json()


# --- report plumbing --------------------------------------------------------

def test_report_json_round_trip():
    report = verify_repeated(n_max=1)
    recovered = ScanReport.from_json(report.to_json())
    assert recovered.scan_id == report.scan_id
    assert recovered.parameters == report.parameters
    assert recovered.status is report.status
    assert len(recovered.findings) == len(report.findings)
    for a, b in zip(recovered.findings, report.findings):
        assert (a.subject, a.verdict, a.detail) == (b.subject, b.verdict, b.detail)


def test_report_status_values_round_trip():
    for status in ScanStatus:
        report = ScanReport(
            scan_id="synthetic",
            parameters={"n": 1},
            findings=[Finding("x", "note", "synthetic finding", {})],
            status=status,
        )
        assert ScanReport.from_json(report.to_json()).status is status


def test_passed_property_tracks_status():
    assert verify_repeated(n_max=1).passed
    assert not scan_p_sets(rank_max=5).passed
