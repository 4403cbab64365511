"""Named suite registry and reports."""

import pytest

from bvbfv.reports import validate_suite_dict
from bvbfv.suites import SUITES, Workspace, list_suites, run_suite


def test_cs_core_is_nine_for_nine(ws):
    suite = run_suite("cs-core", ws)
    assert len(suite.reports) == 9
    assert suite.passed


def test_bf_to_cs(ws):
    suite = run_suite("bf-to-cs", ws)
    assert suite.passed


def test_corrupted_fixture_fails_with_witness(ws):
    suite = run_suite("fixture-corrupt", ws)
    assert not suite.passed
    assert suite.reports[0].witness


def test_suite_dict_schema(ws):
    suite = run_suite("cs-codim1", ws)
    validate_suite_dict(suite.as_dict())


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("no-such-suite")


def test_listing_covers_registry():
    assert set(list_suites()) == set(SUITES)


def test_suite_reports_deterministic_across_workspaces():
    a = run_suite("cs-codim1", Workspace()).as_dict()
    b = run_suite("cs-codim1", Workspace()).as_dict()
    strip = lambda d: [{k: v for k, v in e.items() if k != "millis"} for e in d["entries"]]
    assert strip(a) == strip(b)
