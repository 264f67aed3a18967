from __future__ import annotations

import pytest

from tatek.suites import SUITES, run_suite


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_and_is_deterministic(name):
    a = run_suite(name, 5, 3)
    b = run_suite(name, 5, 3)
    assert a.ok, a.failures[:3]
    assert a.to_json() == b.to_json()


def test_size_zero_runs_nothing():
    assert all(run_suite(name, 1, 0).cases == 0 for name in SUITES)


def test_bad_arguments():
    with pytest.raises(KeyError):
        run_suite("nosuch")
    with pytest.raises(ValueError):
        run_suite("gauss", 0, -1)


def test_malformed_fixture_is_a_failure():
    rep = run_suite("bass", 0, 0, {"expected_r": 1})
    assert [f["case"] for f in rep.failures] == ["fixture:parse"]


def test_timing_only_on_request():
    rep = run_suite("ultrametric", 0, 2)
    assert "wall_time" not in rep.to_json()
    assert "wall_time" in rep.to_json(timing=True)
