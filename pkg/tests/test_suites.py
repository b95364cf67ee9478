import pytest

from modules import suites
from modules.instances import make_instance
from modules.suites import SUITES, axiom_suite, default_alphabet, exhaustive_suite, run_suite

CASES = [("dense", 5), ("dense", 2), ("heisenberg", 3), ("cyclic", 2)]


@pytest.mark.parametrize("kind, p", CASES)
@pytest.mark.parametrize("suite", [s for s in SUITES if s != "exhaustive"])
def test_suite_passes(kind, p, suite):
    sys = make_instance(kind, p, exponent=3)
    report = run_suite(suite, sys, samples=40, seed=1729, max_level=4, max_length=8)
    assert report["suite"] == suite
    assert report["failures"] == 0, report["examples"]
    assert report["samples"] > 0


def test_exhaustive_over_cyclic_alphabet(cyclic):
    report = exhaustive_suite(cyclic, max_length=4)
    assert report["samples"] == 1 + 6 + 6**2 + 6**3 + 6**4
    assert report["failures"] == 0, report["examples"]


def test_exhaustive_dense_short_words(dense):
    report = exhaustive_suite(dense, max_length=3)
    assert report["failures"] == 0, report["examples"]


def test_alphabet_letters_are_distinct():
    for kind, p in CASES:
        alphabet = default_alphabet(make_instance(kind, p, exponent=3))
        assert len(set(alphabet)) == 6


def test_reports_are_deterministic(dense):
    first = run_suite("axioms", dense, samples=10, seed=3)
    assert run_suite("axioms", dense, samples=10, seed=3) == first


def test_unknown_suite(dense):
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite("bogus", dense, samples=1, seed=0)


def test_axiom_suite_inverts_once_per_sample(dense, monkeypatch):
    calls = []
    real_inv = suites.inv

    def counting_inv(g, sys):
        calls.append(g)
        return real_inv(g, sys)

    monkeypatch.setattr(suites, "inv", counting_inv)
    report = axiom_suite(dense, samples=25, seed=3, max_level=4, max_length=8)
    assert report["failures"] == 0
    assert len(calls) == 25
