import json

import pytest

from cohcorr.errors import ValidationError
from cohcorr.serialization import dumps
from cohcorr.verify import PROVED_SUITES, SUITES, replay, run_all, run_suite

FAST_SUITES = [n for n in SUITES if n not in ("theorem3_consistency", "theorem2_creation")]


@pytest.mark.parametrize("name", FAST_SUITES)
def test_suite_runs_and_reports(name):
    report = run_suite(name, 4, seed=3)
    d = report.to_dict()
    assert d["suite"] == name and d["trials"] == 4
    json.loads(dumps(d))
    assert report.kind in ("proved", "reporting", "flagging")


@pytest.mark.parametrize("name", [n for n in PROVED_SUITES if n != "eq5_flag"])
def test_proved_suites_hold_on_small_runs(name):
    report = run_suite(name, 10, seed=11)
    assert report.violations == 0, report.counterexamples[:1]
    assert report.status == "PASS"


def test_slow_suites_smoke():
    r = run_suite("theorem3_consistency", 1, seed=0)
    assert r.kind == "flagging"
    c = run_suite("theorem2_creation", 2, seed=0)
    assert c.violations == 0
    assert c.extra["inconclusive"] + c.extra["certified_creation"] == 2


def test_reports_are_deterministic():
    a = run_suite("theorem1", 5, seed=4).to_dict()
    b = run_suite("theorem1", 5, seed=4).to_dict()
    assert dumps(a) == dumps(b)
    assert dumps(a) != dumps(run_suite("theorem1", 5, seed=5).to_dict())


def test_planted_violation_is_caught_and_replays():
    # a negative tolerance turns every equality into a violation
    r = run_suite("eq4_additivity", 3, seed=2, tol=-1.0)
    assert r.violations == 3 and r.failed and r.status == "FAIL"
    rec = r.counterexamples[0]
    assert replay(rec, "eq4_additivity", tol=-1.0) == rec["margin"]


def test_flagged_mixture_counterexamples_replay():
    r = run_suite("eq5_flag", 30, seed=0)
    for rec in r.counterexamples:
        assert replay(rec, "eq5_flag", dims=(2, 2, 2)) == rec["margin"]
    by_rel = r.extra["violations_by_relation"]
    assert not any(k.startswith("inequality") for k in by_rel)


def test_reporting_suite_never_fails():
    r = run_suite("cf_monotonicity_search", 20, seed=1)
    assert not r.failed
    assert r.status == "REPORT"
    for rec in r.counterexamples:
        assert replay(rec, "cf_monotonicity_search") == rec["margin"]


def test_unknown_suite_and_bad_trials():
    with pytest.raises(ValidationError):
        run_suite("nope", 1)
    with pytest.raises(ValidationError):
        run_suite("theorem1", 0)


def test_other_dims():
    assert run_suite("theorem1", 2, dims=(2, 3), seed=0).dims == (2, 3)
    assert run_suite("eq4_additivity", 3, dims=(4, 4)).violations == 0
