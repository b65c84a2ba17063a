# tests/test_verify.py
import dataclasses
import json

import pytest

import identities
from errors import SamplingExhausted, UnknownIdentity
from retry_utils import RetryStats
from verify import (
    IdentityReport,
    ParamSample,
    reports_frame,
    sample_params,
    summarize,
    sweep,
    verify_identity,
)

REPORT_FIELDS = {
    "id", "seed", "point_index", "params", "q", "lhs", "rhs",
    "abs_resid", "rel_resid", "pass", "reason",
}


# -----------------------
# Sampling
# -----------------------
def test_sampling_is_deterministic():
    first = sample_params("ANDREWS_ASKEY", 7, point_index=3)
    second = sample_params("ANDREWS_ASKEY", 7, point_index=3)
    assert first == second


def test_points_do_not_depend_on_earlier_points():
    reports = sweep("QGAUSS_STEP", num_points=3, seed=5)
    direct = sample_params("QGAUSS_STEP", 5, point_index=2)
    assert reports[2].params == direct.values
    assert reports[2].q == direct.q


def test_different_points_get_different_draws():
    a = sample_params("ASKEY_WILSON", 1, point_index=0)
    b = sample_params("ASKEY_WILSON", 1, point_index=1)
    assert a.values != b.values


def test_samples_stay_inside_radius():
    sample = sample_params("ASKEY_WILSON", 2, radius=0.3)
    assert all(abs(v) <= 0.3 for v in sample.values.values())
    assert 0.1 <= sample.q.real <= 0.7


def test_fixed_q_is_respected():
    assert sample_params("GEN_FUNC", 0, q=0.25).q == 0.25


def test_structure_values_are_stored_as_complex():
    sample = sample_params("MOMENT_W", 0, point_index=4)
    assert sample.values["n"] == 4 + 0j


@pytest.mark.parametrize(
    "kwargs",
    [{"radius": 1.0}, {"radius": 0.0}, {"pole_margin": 0.0}, {"seed": -1}],
)
def test_sampling_rejects_bad_arguments(kwargs):
    args = {"seed": 0, **kwargs}
    with pytest.raises(ValueError):
        sample_params("ANDREWS_ASKEY", **args)


def test_sampling_exhausted_with_infeasible_margin():
    stats = RetryStats()
    with pytest.raises(SamplingExhausted) as info:
        sample_params("ANDREWS_ASKEY", 0, pole_margin=5.0, max_rejections=5, stats=stats)
    assert info.value.attempts == 6
    assert stats.exhausted == 1


def test_unknown_identity_raises():
    with pytest.raises(UnknownIdentity):
        sample_params("NO_SUCH_ID", 0)
    with pytest.raises(UnknownIdentity):
        sweep("NO_SUCH_ID", 1, 0)


# -----------------------
# Evaluation
# -----------------------
def test_pole_becomes_failing_report():
    # b u = 1 puts a zero in the integrand denominator at x = u
    sample = ParamSample("ANDREWS_ASKEY", 0, 0, {"b": 2.0, "c": 0.2, "u": 0.5, "v": -0.6}, 0.5)
    report = verify_identity("ANDREWS_ASKEY", sample)
    assert not report.passed
    assert report.reason.startswith("PoleParameter")
    assert report.lhs is None
    assert report.to_json()["lhs"] is None


def test_tolerance_override():
    sample = ParamSample("QGAUSS_STEP", 0, 0, {"a": 0.3, "b": 0.2, "c": -0.4, "u": 0.5, "v": 0.6}, 0.5)
    report = verify_identity("QGAUSS_STEP", sample, tolerance=0.5)
    assert report.tolerance == 0.5
    assert report.passed


def test_report_json_fields():
    report = sweep("ASKEY_WILSON", num_points=1, seed=3)[0]
    payload = report.to_json()
    assert set(payload) == REPORT_FIELDS
    assert payload["pass"] is True
    assert len(payload["q"]) == 2
    assert all(len(pair) == 2 for pair in payload["params"].values())
    assert json.loads(json.dumps(payload)) == payload


# -----------------------
# Sweeps and summaries
# -----------------------
def test_empty_sweep():
    assert sweep("ASKEY_WILSON", num_points=0, seed=0) == []


def test_exhausted_points_are_reported():
    reports = sweep("ANDREWS_ASKEY", num_points=2, seed=0, pole_margin=5.0, max_rejections=3)
    assert [r.point_index for r in reports] == [0, 1]
    assert all(not r.passed for r in reports)
    assert all(r.reason.startswith("SamplingExhausted") for r in reports)
    assert reports[0].to_json()["q"] is None
    assert reports[0].params == {}


def _report(identity_id, passed, reason=None):
    return IdentityReport(identity_id, 0, 0, {}, 0.5, 1.0, 1.0, 0.0, 0.0, passed, reason)


def test_summarize_counts():
    summary = summarize({
        "A": [_report("A", True), _report("A", False, "PoleParameter: x")],
        "B": [_report("B", True)],
    })
    payload = summary.to_json()
    assert not summary.total_pass
    assert payload["total_points"] == 3
    assert payload["total_passed"] == 2
    assert payload["summary"][0] == {"id": "A", "points": 2, "passed": 1, "failed": 1, "errored": 1}


def test_summarize_all_passing():
    assert summarize({"A": [_report("A", True)]}).total_pass


def test_reports_frame():
    frame = reports_frame([_report("A", True), _report("A", False, "NonConvergence: lhs")])
    assert list(frame["pass"]) == [True, False]
    assert frame.loc[1, "reason"].startswith("NonConvergence")
    assert {"lhs_re", "lhs_im", "rel_resid", "tolerance"} <= set(frame.columns)


def test_unexpected_evaluation_error_becomes_failing_report(monkeypatch):
    def broken(p, ctx):
        raise ValueError("not enough values to unpack")

    identity = identities.get_identity("QGAUSS_STEP")
    monkeypatch.setitem(identities.REGISTRY, "QGAUSS_STEP", dataclasses.replace(identity, lhs=broken))
    reports = sweep("QGAUSS_STEP", num_points=2, seed=0)
    assert [r.point_index for r in reports] == [0, 1]
    assert all(not r.passed for r in reports)
    assert all(r.reason.startswith("ValueError") for r in reports)
    assert summarize({"QGAUSS_STEP": reports}).rows[0]["errored"] == 2
