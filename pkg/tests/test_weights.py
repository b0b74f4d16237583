import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from bruteforce import cx_of, is_null_homotopic_bf, map_of
from conftest import F2, complexes, maps
from weightkit.complexes import (ChainMap, Complex, ElementaryPiece, canonical_decompose, direct_sum,
                                 direct_sum_maps, shift, sum_inclusion, sum_projection)
from weightkit.errors import InvalidChoice, InvalidRange, UnsupportedRing
from weightkit.fixtures import Pb, S, T2, W, fT, scalar_map
from weightkit.homotopy import homotopic, is_null_homotopic
from weightkit.oracle import random_chain_map
from weightkit.ring_linalg import QQ, ZZ, CoeffRing
from weightkit.weights import (MODES, TruncationTriangle, conjugate_complex, connecting_morphism,
                               extend_truncation_diagram, kills_weights, perturbed_truncation,
                               stupid_truncate, avoiding_decomposition, weight_complex_via_tower,
                               weight_range, without_weights)


def pieces(M):
    return canonical_decompose(M).piece_multiset()


def free(j):
    return ElementaryPiece.free(j)


def window(f):
    """A weight window covering both ends of ``f`` with one spare weight on each side."""
    ws = [weight_range(X) for X in (f.src, f.tgt) if not X.is_zero()] or [(0, 0)]
    return min(w[0] for w in ws) - 1, max(w[1] for w in ws) + 1


@st.composite
def map_and_range(draw, ring=ZZ):
    f = draw(maps(ring))
    lo, hi = window(f)
    m = draw(st.integers(lo, hi))
    n = draw(st.integers(m, min(hi, m + 2)))
    return f, m, n


# -- truncations ----------------------------------------------------------------------

def test_truncation_examples():
    t = stupid_truncate(T2(), 0)
    assert t.lower == S() and t.upper == shift(S(), 1)
    t = stupid_truncate(S(), -1)
    assert t.lower.is_zero() and t.upper == S()
    t = stupid_truncate(Pb(), 0)
    assert (t.lower.lo, t.lower.dims) == (0, (2, 2))
    assert (t.upper.lo, t.upper.dims) == (-1, (2,))


@given(complexes(), st.integers(-3, 3))
def test_truncations_are_valid_decompositions(M, n):
    stupid_truncate(M, n).validate()


@given(complexes(), st.integers(-3, 3), st.integers(0, 2**32))
def test_perturbed_truncations_are_valid_decompositions(M, n, seed):
    perturbed_truncation(M, n, random.Random(seed), pads=2).validate()


def test_relabelled_truncation_is_rejected():
    bad = dataclasses.replace(stupid_truncate(T2(), 0), n=-1)
    with pytest.raises(InvalidChoice):
        bad.validate()


# -- extending morphisms --------------------------------------------------------------------

def test_extension_examples():
    d = extend_truncation_diagram(ChainMap.identity(T2()), stupid_truncate(T2(), 0), stupid_truncate(T2(), 1))
    assert d is not None and d.verify()
    assert d.h.src == S() and d.h.tgt == T2()
    assert homotopic(d.h, connecting_morphism(stupid_truncate(T2(), 0), stupid_truncate(T2(), 1))) is not None

    d = extend_truncation_diagram(scalar_map(S(), 2), stupid_truncate(S(), 0), stupid_truncate(S(), 0))
    assert d.h.comp(0).to_lists() == [[2]]

    f = fT()
    d = extend_truncation_diagram(f, stupid_truncate(f.src, 1), stupid_truncate(f.tgt, 1))
    assert d is not None and d.verify()
    assert d.j.is_zero() and d.h.comp(-1).to_lists() == [[1]]


def test_extension_can_fail_downwards():
    f = ChainMap.identity(T2())
    assert extend_truncation_diagram(f, stupid_truncate(T2(), 1), stupid_truncate(T2(), 0)) is None


@given(maps(), st.integers(-3, 2), st.integers(0, 2), st.integers(0, 2**32))
def test_extensions_exist_upwards_and_are_unique_when_strict(f, m, gap, seed):
    n = m + gap
    rng = random.Random(seed)
    rs = perturbed_truncation(f.src, m, rng)
    rt = perturbed_truncation(f.tgt, n, rng)
    d1 = extend_truncation_diagram(f, rs, rt)
    assert d1 is not None and d1.verify()
    if gap:
        d2 = extend_truncation_diagram(f, rs, rt, rng=rng)
        assert is_null_homotopic(d1.h - d2.h) is not None


# -- killing weights --------------------------------------------------------------------------

def test_kill_examples():
    f = fT()
    assert kills_weights(f, 0, 0) is not None
    assert kills_weights(f, 1, 1) is None
    z = ChainMap.zero(T2(), W())
    assert all(kills_weights(z, m, n) is not None for m in range(-2, 3) for n in range(m, 3))
    assert kills_weights(scalar_map(S(), 2), 0, 0) is None


def test_kill_argument_checks():
    with pytest.raises(InvalidRange):
        kills_weights(fT(), 1, 0)
    with pytest.raises(ValueError):
        kills_weights(fT(), 0, 0, mode="2")
    with pytest.raises(InvalidChoice):
        kills_weights(fT(), 0, 0, mode="7", rows=(stupid_truncate(T2(), 1), stupid_truncate(S(), -1)))


@given(st.one_of(map_and_range(ZZ), map_and_range(F2)), st.integers(0, 2**32))
def test_all_conditions_agree(case, seed):
    f, m, n = case
    rng = random.Random(seed)
    answers = {}
    for mode in MODES:
        c = kills_weights(f, m, n, mode=mode, rng=random.Random(seed))
        if c is not None:
            assert c.verify()
        answers[mode] = c is not None
    for _ in range(3):
        rows = (perturbed_truncation(f.src, n, rng), perturbed_truncation(f.tgt, m - 1, rng))
        answers.setdefault("7p", set()).add(kills_weights(f, m, n, mode="7", rows=rows) is not None)
    perturbed = answers.pop("7p")
    assert len(set(answers.values()) | perturbed) == 1, answers


@given(map_and_range(F2))
def test_condition_one_matches_enumerated_homotopies(case):
    f, m, n = case
    A, B = stupid_truncate(f.src, n), stupid_truncate(f.tgt, m - 1)
    comp = B.proj @ f @ A.incl
    brute = is_null_homotopic_bf(cx_of(A.lower), cx_of(B.upper), map_of(comp), 2)
    assert (kills_weights(f, m, n) is not None) == brute


@given(map_and_range(ZZ), complexes(), complexes(), st.integers(0, 2**32))
def test_killing_is_monotone_and_an_ideal(case, X, Y, seed):
    f, m, n = case
    if kills_weights(f, m, n) is None:
        return
    for a in range(m, n + 1):
        for b in range(a, n + 1):
            assert kills_weights(f, a, b) is not None
    rng = random.Random(seed)
    after = random_chain_map(f.tgt, X, rng)
    before = random_chain_map(Y, f.src, rng)
    assert kills_weights(after @ f, m, n) is not None
    assert kills_weights(f @ before, m, n) is not None


@given(map_and_range(ZZ), maps())
def test_direct_sums_kill_iff_both_summands_do(case, g):
    f, m, n = case
    both = kills_weights(f, m, n) is not None and kills_weights(g, m, n) is not None
    assert (kills_weights(direct_sum_maps([f, g]), m, n) is not None) == both


@given(complexes(), complexes(), complexes(), st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2**32))
def test_adjacent_ranges_compose(L, M, N, m, length, seed):
    n = m + length
    rng = random.Random(seed)
    g = random_chain_map(L, M, rng)
    h = random_chain_map(M, N, rng)
    for m2 in range(m - 2, m):
        if kills_weights(g, m, n) is not None and kills_weights(h, m2, m - 1) is not None:
            assert kills_weights(h @ g, m2, n) is not None


# -- objects without weights ------------------------------------------------------------------

def test_without_weights_examples():
    assert without_weights(Pb(), 0, 0) is not None
    assert without_weights(W(), 0, 0) is not None
    assert without_weights(T2(), 1, 1) is None
    assert without_weights(T2(), 0, 0) is None
    assert without_weights(T2(), 2, 3) is not None


@given(complexes(ZZ, 3, 3), st.integers(-3, 2), st.integers(0, 2))
def test_without_weights_methods_agree_and_are_pointwise(M, m, length):
    n = m + length
    a = without_weights(M, m, n)
    b = without_weights(M, m, n, method="sim")
    assert (a is None) == (b is None)
    if b is not None:
        assert b.verify()
    assert (a is not None) == all(without_weights(M, i, i) is not None for i in range(m, n + 1))


# -- avoiding decompositions -------------------------------------------------------------------

def test_avoiding_examples():
    ad = avoiding_decomposition(Pb(), 0, 0)
    assert ad is not None and ad.verify()
    assert pieces(ad.X) == [free(-1)] and pieces(ad.Y) == [free(1)]
    assert sum(ad.X.dims) == 1 and sum(ad.Y.dims) == 1

    ad = avoiding_decomposition(W(), 0, 0)
    assert ad.X == shift(S(), -1) and ad.Y == shift(S(), 1)
    assert avoiding_decomposition(T2(), 0, 0) is None


def test_avoiding_over_dual_numbers_is_unsupported():
    R = CoeffRing.dual_numbers(2)
    with pytest.raises(UnsupportedRing):
        avoiding_decomposition(S(R), 0, 0)


@given(complexes(ZZ, 3, 3), st.integers(-3, 2), st.integers(0, 2))
def test_avoiding_exists_iff_without_weights(M, m, length):
    n = m + length
    ad = avoiding_decomposition(M, m, n)
    assert (ad is not None) == (without_weights(M, m, n) is not None)
    if ad is not None:
        assert ad.verify()


def _as_row(ad, k, X=None, Y=None, a=None, b=None):
    X = X or ad.X
    Y = Y or ad.Y
    return TruncationTriangle(ad.M, k, X, Y, a or ad.a, b or ad.b, ChainMap.zero(Y, shift(X, 1)))


def _perturb(ad, rng):
    """Base-change both sides and add a contractible summand to each, in degrees they admit."""
    ring = ad.M.ring
    X2, _, gx = conjugate_complex(ad.X, rng)
    Y2, fy, _ = conjugate_complex(ad.Y, rng)
    cx = Complex.two_term(ring, -ad.m + 1, [[1]])       # degrees -m+1, -m+2: weights <= m-1
    cy = Complex.two_term(ring, -ad.n - 2, [[1]])       # degrees -n-2, -n-1: weights >= n+1
    X3 = direct_sum([X2, cx], ring)
    Y3 = direct_sum([Y2, cy], ring)
    a = ad.a @ gx @ sum_projection([X2, cx], 0)
    b = sum_inclusion([Y2, cy], 0) @ fy @ ad.b
    return X3, Y3, a, b


@given(complexes(ZZ, 3, 3), st.integers(-3, 2), st.integers(0, 1), st.integers(0, 2**32))
def test_avoiding_decompositions_are_unique(M, m, length, seed):
    n = m + length
    ad = avoiding_decomposition(M, m, n)
    if ad is None:
        return
    X3, Y3, a, b = _perturb(ad, random.Random(seed))
    # each decomposition is at once an (m-1)- and an n-weight decomposition
    for k in (m - 1, n):
        _as_row(ad, k, X3, Y3, a, b).validate()
    idm = ChainMap.identity(M)
    d1 = extend_truncation_diagram(idm, _as_row(ad, m - 1), _as_row(ad, n, X3, Y3, a, b))
    d2 = extend_truncation_diagram(idm, _as_row(ad, m - 1, X3, Y3, a, b), _as_row(ad, n))
    assert d1 is not None and d2 is not None
    assert homotopic(d2.h @ d1.h, ChainMap.identity(ad.X)) is not None
    assert homotopic(d1.h @ d2.h, ChainMap.identity(X3)) is not None
    assert homotopic(d2.j @ d1.j, ChainMap.identity(ad.Y)) is not None
    assert homotopic(d1.j @ d2.j, ChainMap.identity(Y3)) is not None


@given(complexes(ZZ, 3, 3), st.integers(-3, 2), st.integers(1, 2))
def test_idempotent_route(M, m, length):
    # z lifts the n-truncation into the (m-1)-truncation, t maps back; u = t z is idempotent
    n = m + length
    cert = kills_weights(ChainMap.identity(M), m, n, mode="3")
    if cert is None:
        return
    z = cert.maps["h"]
    t = connecting_morphism(stupid_truncate(M, m - 1), stupid_truncate(M, n))
    u = t @ z
    assert homotopic(u @ u, u) is not None
    assert homotopic(t @ z @ t, t) is not None


# -- weight complexes from towers -----------------------------------------------------------------

def test_tower_examples():
    t = weight_complex_via_tower(T2())
    assert t.dims == T2().dims and t.lo == T2().lo and pieces(t) == pieces(T2())
    rng = random.Random(1)
    choices = {n: perturbed_truncation(S(), n, rng) for n in (-1, 0)}
    assert pieces(weight_complex_via_tower(S(), choices)) == [free(0)]
    assert pieces(weight_complex_via_tower(Pb())) == sorted([free(1), free(-1)], key=ElementaryPiece.sort_key)
    assert weight_complex_via_tower(Pb(QQ)).dims == (2, 2, 2)


def test_tower_rejects_bad_choices():
    with pytest.raises(InvalidChoice):
        weight_complex_via_tower(S(), {0: stupid_truncate(S(), -1)})
    with pytest.raises(InvalidChoice):
        weight_complex_via_tower(T2(), {-1: dataclasses.replace(stupid_truncate(T2(), 0), n=-1)})


@given(complexes(ZZ, 3, 2), st.integers(0, 2**32))
def test_tower_is_choice_independent(M, seed):
    rng = random.Random(seed)
    wlo, whi = weight_range(M)
    choices = {n: perturbed_truncation(M, n, rng) for n in range(wlo - 1, whi + 1) if rng.random() < 0.7}
    t = weight_complex_via_tower(M, choices)
    assert pieces(t) == pieces(M)
    if not choices:
        assert t.dims == M.dims
