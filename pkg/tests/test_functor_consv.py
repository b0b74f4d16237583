import random

import pytest
from hypothesis import given, strategies as st

from conftest import D2, complexes, maps
from weightkit.complexes import ChainMap, Complex
from weightkit.errors import InvalidRange, UnsupportedRing
from weightkit.functor_consv import (conservativity_check, reduce_map_mod_eps, reduce_matrix,
                                     reduce_mod_eps, square_zero_on_kernel)
from weightkit.homotopy import stupid_membership
from weightkit.oracle import random_chain_map
from weightkit.ring_linalg import ZZ, CoeffRing, Dual, Matrix
from weightkit.weights import weight_range

F2 = CoeffRing.prime_field(2)
e = Dual(0, 1, 2)


def test_reduction_examples():
    M = Complex(D2, -1, [1, 1], [Matrix(D2, 1, 1, [e])])
    assert reduce_mod_eps(M) == Complex(F2, -1, [1, 1], [Matrix.zeros(F2, 1, 1)])
    assert reduce_matrix(Matrix.identity(D2, 3)) == Matrix.identity(F2, 3)
    A = Matrix(D2, 2, 2, [e, Dual(0, 1, 2) * 1, 0, e])
    assert reduce_matrix(A).is_zero() and (A @ A).is_zero()


def test_reduction_needs_dual_numbers():
    with pytest.raises(UnsupportedRing):
        reduce_mod_eps(Complex.concentrated(ZZ, 0))


@given(complexes(D2, 3, 2), complexes(D2, 3, 2), complexes(D2, 3, 2), st.integers(0, 2**32))
def test_reduction_is_a_functor(L, M, N, seed):
    rng = random.Random(seed)
    f = random_chain_map(L, M, rng)
    g = random_chain_map(M, N, rng)
    assert reduce_map_mod_eps(g @ f) == reduce_map_mod_eps(g) @ reduce_map_mod_eps(f)
    assert reduce_map_mod_eps(ChainMap.identity(M)) == ChainMap.identity(reduce_mod_eps(M))


@given(complexes(D2, 3, 2), st.integers(-3, 3))
def test_reduction_preserves_weight_classes(M, n):
    FM = reduce_mod_eps(M)
    for side in ("le", "ge"):
        if stupid_membership(M, side, n) is not None:
            assert stupid_membership(FM, side, n) is not None


@given(st.integers(1, 3), st.data())
def test_kernel_of_reduction_is_square_zero(n, data):
    bs = data.draw(st.lists(st.integers(0, 1), min_size=n * n, max_size=n * n))
    A = Matrix(D2, n, n, [Dual(0, b, 2) for b in bs])
    assert square_zero_on_kernel(A)
    assert (A @ A).is_zero()


def test_conservativity_examples():
    C = Complex.two_term(D2, -1, [[1]])
    for m in range(-1, 2):
        for n in range(m, 2):
            r = conservativity_check(C, m, n)
            assert r.reduced_without and r.original_without and r.implication_holds

    r = conservativity_check(Complex.concentrated(D2, 0), 0, 0)
    assert r.vacuous and r.implication_holds and not r.original_without


def test_conservativity_with_nonzero_naive_component():
    # (R ->(1+e) R): weight 0 has a nonzero term, but the reduction is contractible
    M = Complex(D2, -1, [1, 1], [Matrix(D2, 1, 1, [Dual(1, 1, 2)])])
    r = conservativity_check(M, 0, 0)
    assert M.dim(0) == 1 and r.reduced_without and r.original_without
    assert r.witness.verify()


def test_conservativity_range_check():
    with pytest.raises(InvalidRange):
        conservativity_check(Complex.concentrated(D2, 0), 1, 0)


@given(complexes(D2, 3, 2))
def test_conservativity_implication_holds(M):
    lo, hi = weight_range(M) if not M.is_zero() else (0, 0)
    for m in range(lo - 1, hi + 2):
        for n in range(m, hi + 2):
            assert conservativity_check(M, m, n).implication_holds
