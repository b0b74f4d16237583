"""The ten acceptance criteria, each at its stated size, tolerance and time limit.

Every test prints one line ``criterion K: PASS|FAIL ...`` to the terminal,
so the outcome is visible even without ``-v``.
"""

import time

import pytest

from weightkit.counterexamples import EvenComplex, even_obstruction, triple_degeneracy_report, \
    triple_weight_decompose
from weightkit.fixtures import Ma, Pb
from weightkit.oracle import BATTERIES, run_battery
from weightkit.weights import without_weights


@pytest.fixture
def report(capsys):
    def emit(k, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")
    return emit


def _battery(report, k, name, trials, limit, rings=None, min_trials_per_ring=None):
    b = BATTERIES[name]
    t0 = time.perf_counter()
    r = run_battery(name, trials=trials, rings=rings)
    dt = time.perf_counter() - t0
    ok = r.passed and not r.failures and dt < limit
    first = r.failures[0].detail if r.failures else "no violations"
    report(k, ok, f"{name}: {r.checks} checks over {', '.join(rings or b.rings)}; {first}; {dt:.1f} s")
    assert not r.failures, [f.to_json() for f in r.failures]
    assert dt < limit
    return r


def test_criterion_01_even_complex_obstruction(report):
    t0 = time.perf_counter()
    ww = without_weights(Pb(), 0, 0) is not None
    rep = even_obstruction(EvenComplex(Pb()), 0, 0)
    chis = sorted([rep.chi_lower, rep.chi_upper])
    dt = time.perf_counter() - t0
    ok = ww and chis == [-1, 1] and rep.obstructed and dt < 1.0
    report(1, ok, f"without weight 0: {ww}; euler characteristics {rep.chi_lower}, {rep.chi_upper} "
                  f"(expected -1 and 1); obstructed: {rep.obstructed}; {dt:.2f} s")
    assert ww
    assert rep.obstructed
    assert chis == [-1, 1]
    assert dt < 1.0


def test_criterion_02_triple_degeneracy(report):
    t0 = time.perf_counter()
    rep = triple_degeneracy_report(Ma())
    no_recipe = all(triple_weight_decompose(Ma(), n) is None for n in range(-2, 3))
    dt = time.perf_counter() - t0
    ok = (rep.degenerate and (rep.left_parity, rep.right_parity) == (1, 1)
          and not rep.decomposable_in_category and no_recipe and dt < 1.0)
    report(2, ok, f"degenerate: {rep.degenerate}; parities {rep.left_parity}, {rep.right_parity}; "
                  f"decomposable inside: {rep.decomposable_in_category}; {dt:.2f} s")
    assert rep.degenerate
    assert (rep.left_parity, rep.right_parity) == (1, 1)
    assert not rep.decomposable_in_category and no_recipe
    assert dt < 1.0


def test_criterion_03_kill_conditions_agree(report):
    r = _battery(report, 3, "pkillw-equivalence", 500, 60.0, rings=("F2", "Z"))
    assert r.checks >= 1000


def test_criterion_04_hom_formula(report):
    _battery(report, 4, "hom-formula", 200, 60.0)


def test_criterion_05_homology_criteria(report):
    _battery(report, 5, "pd1-criteria", 500, 60.0)


def test_criterion_06_skeleta(report):
    _battery(report, 6, "skeleton", 500, 60.0)


def test_criterion_07_closure_laws(report):
    r = _battery(report, 7, "closure-laws", 200, 60.0)
    assert r.stats.get("componentwise_chains", 0) > 0


def test_criterion_08_conservativity(report):
    _battery(report, 8, "conservativity", 300, 60.0)


def test_criterion_09_tower_invariance(report):
    _battery(report, 9, "tower-invariance", 200, 60.0)


def test_criterion_10_pure_detection(report):
    _battery(report, 10, "pure-detection", 300, 60.0)
