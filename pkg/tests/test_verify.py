import pytest

from ncball.verify import SUITES, run_suite


def test_suites_are_nonempty():
    assert set(SUITES) == {"radii", "harnack", "caratheodory", "freemaps", "singlevar"}
    assert all(SUITES.values())


@pytest.mark.parametrize("suite", ["radii", "singlevar"])
def test_suite_passes_and_is_deterministic(suite):
    first = run_suite(suite, seed=7, trials=2)
    assert all(r.ok for r in first)
    again = run_suite(suite, seed=7, trials=2, jobs=2)
    assert [r.as_dict() for r in again] == [r.as_dict() for r in first]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("bogus", 0, 1)


def test_failures_are_counted(monkeypatch):
    monkeypatch.setitem(SUITES, "radii", {"always_false": lambda rng: (False, "no"), "boom": lambda rng: 1 / 0})
    res = {r.name: r for r in run_suite("radii", 0, 3)}
    assert res["always_false"].failed == 3 and not res["always_false"].ok
    assert res["boom"].errors == 3 and "ZeroDivisionError" in res["boom"].failures[0]
