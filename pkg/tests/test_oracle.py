import random

import pytest
from hypothesis import given, strategies as st

from bruteforce import count_complexes_bf, count_complexes_closed
from conftest import D2, F2
from weightkit.complexes import ChainMap
from weightkit.errors import UnknownBattery
from weightkit.fileformat import parse_document
from weightkit.homotopy import is_null_homotopic, weakly_homotopic
from weightkit.oracle import (BATTERIES, DEFAULT_SEED, Battery, GenParams, TrialOutcome, _doc, battery_names,
                              enumerate_small, find_weak_pairs, gen_random, parse_ring_name, random_complex,
                              register, run_battery, run_trial, small_dual_complexes, trial_seed,
                              weak_pair_fixture)
from weightkit.ring_linalg import ZZ


# -- generation ----------------------------------------------------------------------

def test_same_seed_same_output():
    p = GenParams(ZZ, -2, 1, 3, 3, seed=99)
    assert gen_random(p) == gen_random(p)
    assert gen_random(p, with_map=True) == gen_random(p, with_map=True)


def test_zero_max_dim_gives_zero_complex():
    assert random_complex(GenParams(ZZ, -1, 1, 0, seed=5)).is_zero()


def test_parameters_are_validated():
    with pytest.raises(ValueError):
        GenParams(ZZ, 0, 7, 2)
    with pytest.raises(ValueError):
        GenParams(ZZ, 1, 0, 2)


def test_thousand_f2_draws_are_valid():
    for s in range(1000):
        M = random_complex(GenParams(F2, -1, 1, 2, seed=s))
        for i in range(M.lo, M.hi - 1):
            assert (M.d(i + 1) @ M.d(i)).is_zero()


@given(st.integers(0, 2**40), st.integers(-2, 1), st.integers(1, 4))
def test_integer_entries_respect_the_bound(seed, lo, span):
    M = random_complex(GenParams(ZZ, lo, lo + span - 1, 3, 3, seed=seed))
    for d in M.diffs:
        assert all(abs(x) <= 3 for row in d.to_lists() for x in row)


def test_trial_seeds_are_stable_and_distinct():
    assert trial_seed(1, 0, "a") == trial_seed(1, 0, "a")
    assert len({trial_seed(DEFAULT_SEED, i, "x") for i in range(200)}) == 200
    assert trial_seed(1, 0, "a") != trial_seed(1, 0, "b")


def test_ring_names():
    assert parse_ring_name("Z") == ZZ
    assert parse_ring_name("Zeps2") == D2
    with pytest.raises(ValueError):
        parse_ring_name("Zeps4")


# -- enumeration ------------------------------------------------------------------------

def test_enumeration_examples():
    assert len(list(enumerate_small(F2, -1, 0, 1))) == 5
    assert len(list(enumerate_small(F2, -1, 1, 0))) == 1


@pytest.mark.parametrize("lo,hi,max_dim", [(-1, -1, 2), (-1, 0, 1), (-1, 0, 2), (-1, 1, 1), (-1, 1, 2)])
def test_enumeration_counts_match_independent_counts(lo, hi, max_dim):
    span = hi - lo + 1
    cs = list(enumerate_small(F2, lo, hi, max_dim))
    assert len(cs) == count_complexes_bf(span, max_dim) == count_complexes_closed(span, max_dim)
    assert all(cs[a] != cs[b] for a in range(len(cs)) for b in range(a))


def test_enumeration_guards():
    with pytest.raises(ValueError):
        list(enumerate_small(F2, -2, 1, 1))
    with pytest.raises(ValueError):
        list(enumerate_small(ZZ, 0, 0, 1))


def test_weak_pair_search_over_dual_numbers():
    found = find_weak_pairs(D2, small_dual_complexes(), limit=1)
    assert found
    f = found[0]
    assert weakly_homotopic(f, ChainMap.zero(f.src, f.tgt)) is not None
    assert is_null_homotopic(f) is None
    M, g = weak_pair_fixture()
    assert is_null_homotopic(g) is None


# -- batteries ------------------------------------------------------------------------------

def test_unknown_battery():
    with pytest.raises(UnknownBattery) as info:
        run_battery("nonexistent")
    assert "nonexistent" in str(info.value)
    with pytest.raises(UnknownBattery):
        run_trial("nonexistent", "Z", 1)


@pytest.mark.parametrize("name", [n for n in battery_names() if not n.startswith("_")])
def test_every_battery_passes_a_short_run(name):
    r = run_battery(name, trials=8, exhaustive=False)
    assert r.passed, r.to_json()["failures"]
    j = r.to_json()
    assert set(j) == {"battery", "seed", "trials", "checks", "passed", "assertive",
                      "elapsed_seconds", "stats", "failures"}
    assert j["checks"] == 8 * len(BATTERIES[name].rings)


def test_battery_runs_are_deterministic():
    a = run_battery("hom-formula", trials=5, seed=7).to_json()
    b = run_battery("hom-formula", trials=5, seed=7).to_json()
    a.pop("elapsed_seconds"), b.pop("elapsed_seconds")
    assert a == b


def _flaky_trial(rng, ring):
    x = rng.randint(0, 9)
    M = random_complex(GenParams(ring, -1, 0, 1, seed=x))
    return TrialOutcome(x % 3 != 0, f"drew {x}", _doc(ring, {"M": M}))


def test_failures_replay_from_their_seed():
    register(Battery("_flaky", "fails on multiples of three", _flaky_trial, ("Z",), 30))
    try:
        r = run_battery("_flaky", seed=3)
        assert not r.passed and r.failures
        for f in r.failures:
            replay = run_trial("_flaky", f.ring, f.seed)
            assert not replay.ok and replay.detail == f.detail
            doc = parse_document(f.dump)
            assert "M" in doc.complexes
    finally:
        BATTERIES.pop("_flaky")
