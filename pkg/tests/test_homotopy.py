import math

import pytest
from hypothesis import given, strategies as st

from bruteforce import cx_of, is_null_homotopic_bf, map_of, weakly_null_bf
from conftest import F2, maps
from weightkit.complexes import ChainMap, Complex, shift
from weightkit.errors import InvalidRange, SourceTargetMismatch
from weightkit.fixtures import Pb, S, T2, fT, scalar_map
from weightkit.homotopy import (is_null_homotopic, sim_interval, stupid_membership, weakly_homotopic,
                                homotopic)
from weightkit.oracle import enumerate_chain_maps, enumerate_small, find_weak_pairs, weak_pair_fixture
from weightkit.pd_one import homology_map

INF = math.inf


def zero(f):
    return ChainMap.zero(f.src, f.tgt)


# -- null-homotopy -----------------------------------------------------------------

def test_twice_identity_of_t2_is_null_homotopic():
    w = is_null_homotopic(scalar_map(T2(), 2))
    assert w is not None and w.verify()
    assert w.x[0].to_lists() == [[1]]


def test_identity_of_s_is_not_null_homotopic():
    assert is_null_homotopic(ChainMap.identity(S())) is None


def test_zero_map_has_zero_homotopy():
    w = is_null_homotopic(ChainMap.zero(T2(), T2()))
    assert w is not None and all(x.is_zero() for x in w.x.values())


def test_homotopic_checks_endpoints():
    with pytest.raises(SourceTargetMismatch):
        homotopic(ChainMap.identity(S()), ChainMap.identity(T2()))


# -- weak homotopy -------------------------------------------------------------------

def test_weak_homotopy_examples():
    f = fT()
    w = weakly_homotopic(f, f)
    assert w is not None and w.verify()
    assert weakly_homotopic(ChainMap.identity(T2()), ChainMap.zero(T2(), T2())) is None
    assert weakly_homotopic(scalar_map(T2(), 2), ChainMap.zero(T2(), T2())) is not None


def test_weak_pair_fixture_separates_the_relations():
    M, f = weak_pair_fixture()
    w = weakly_homotopic(f, zero(f))
    assert w is not None and w.verify()
    assert is_null_homotopic(f) is None


def test_no_weak_pair_among_small_f2_complexes():
    # over a field weak and strict null-homotopy coincide
    assert find_weak_pairs(F2, enumerate_small(F2, -1, 0, 1), limit=1) == []


SMALL = list(enumerate_small(F2, -1, 0, 2))


@given(st.sampled_from(SMALL), st.sampled_from(SMALL), st.data())
def test_f2_relations_match_enumeration(M, N, data):
    fs = list(enumerate_chain_maps(M, N))
    f = data.draw(st.sampled_from(fs))
    cm, cn, fm = cx_of(M), cx_of(N), map_of(f)
    assert (is_null_homotopic(f) is not None) == is_null_homotopic_bf(cm, cn, fm, 2)
    assert (weakly_homotopic(f, zero(f)) is not None) == weakly_null_bf(cm, cn, fm, 2)


@given(maps())
def test_null_homotopy_implies_weak(f):
    w = is_null_homotopic(f)
    if w is not None:
        assert w.verify()
        assert weakly_homotopic(f, zero(f)) is not None


@given(maps(), st.integers(-3, 2))
def test_weak_homotopy_induces_equal_homology_maps(f, j):
    if weakly_homotopic(f, zero(f)) is not None:
        assert homology_map(f, j).is_zero()


# -- interval relations ------------------------------------------------------------------

def test_interval_examples():
    M = Pb()
    w = sim_interval(ChainMap.identity(M), ChainMap.zero(M, M), 0, 0)
    assert w is not None and w.verify()
    assert sim_interval(fT(), zero(fT()), 0, 0) is not None
    assert sim_interval(fT(), zero(fT()), -1, -1) is None


def test_interval_argument_checks():
    f = fT()
    with pytest.raises(InvalidRange):
        sim_interval(f, zero(f), 1, 0)
    with pytest.raises(InvalidRange):
        sim_interval(f, zero(f), INF, INF)
    with pytest.raises(SourceTargetMismatch):
        sim_interval(f, ChainMap.zero(T2(), T2()), 0, 0)


@given(maps(), st.integers(-3, 2), st.integers(0, 3))
def test_interval_holds_iff_it_holds_pointwise(f, k, length):
    l = k + length
    w = sim_interval(f, zero(f), k, l)
    if w is not None:
        assert w.verify()
    pointwise = all(sim_interval(f, zero(f), i, i) is not None for i in range(k, l + 1))
    assert (w is not None) == pointwise


@given(maps())
def test_full_interval_is_weak_homotopy(f):
    assert (sim_interval(f, zero(f), -INF, INF) is not None) == (weakly_homotopic(f, zero(f)) is not None)


# -- stupid weight classes ----------------------------------------------------------------

def test_membership_examples():
    assert stupid_membership(S(), "ge", 0) is not None
    assert stupid_membership(T2(), "le", 1) is not None
    assert stupid_membership(T2(), "le", 0) is None


def test_membership_of_shifts():
    assert stupid_membership(shift(S(), 1), "ge", 1) is not None
    assert stupid_membership(shift(S(), 1), "le", 0) is None
    assert stupid_membership(Complex.two_term(S().ring, -3, [[1]]), "le", -10) is not None


def test_membership_side_is_validated():
    with pytest.raises(ValueError):
        stupid_membership(S(), "between", 0)
