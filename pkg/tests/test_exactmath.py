from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lievar.exactmath import CONWAY, GF, PRIMES, MultiPoly, Subspace, field, poly_arith, rref, scalar_arith, subspace_query
from lievar.exactmath.poly import random_poly

SMALL_FIELDS = [(p, e) for (p, e) in sorted(CONWAY) if p**e <= 4096]


def test_scalar_examples():
    assert scalar_arith("inv", 2, p=3) == 2
    assert scalar_arith("pow", 1, 6, p=2) == 1
    assert scalar_arith("add", 3, 4, p=5) == 2
    assert scalar_arith("sub", 1, 4, p=5) == 2
    assert scalar_arith("mul", 3, 4, p=7) == 5


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        scalar_arith("inv", 0, p=5)
    with pytest.raises(ZeroDivisionError):
        field(2, 3).inv(0)


def test_out_of_range_scalar_rejected():
    with pytest.raises(ValueError):
        scalar_arith("add", 5, 1, p=5)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_fermat_exhaustive(p):
    for a in range(1, p):
        assert scalar_arith("pow", a, p - 1, p=p) == 1
        assert scalar_arith("pow", a, p, p=p) == a


@pytest.mark.parametrize("p,e", [pe for pe in SMALL_FIELDS if pe[1] > 1])
def test_defining_polynomial_is_primitive(p, e):
    F = field(p, e)
    x = p  # digits (0, 1, 0, ...): the class of the indeterminate
    q = p**e
    assert F.pow(x, q - 1) == 1
    for r in range(2, q):
        if (q - 1) % r == 0:
            assert F.pow(x, (q - 1) // r) != 1, (p, e, r)


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(pe, data):
    F = field(*pe)
    a, b, c = (data.draw(st.integers(0, F.q - 1)) for _ in range(3))
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.q - 1) == 1


@pytest.mark.parametrize("p,e", [(2, 4), (3, 3), (5, 2)])
def test_vectorized_tables_match_scalar_ops(p, e):
    F = field(p, e)
    rng = np.random.default_rng(1)
    a, b = F.random(rng, 200), F.random(rng, 200)
    assert [int(x) for x in F.vadd(a, b)] == [F.add(int(x), int(y)) for x, y in zip(a, b)]
    assert [int(x) for x in F.vmul(a, b)] == [F.mul(int(x), int(y)) for x, y in zip(a, b)]


def test_prime_field_embeds_in_extension():
    F = field(3, 2)
    for a in range(3):
        for b in range(3):
            assert F.add(a, b) == (a + b) % 3
            assert F.mul(a, b) == (a * b) % 3


def test_unsupported_field():
    with pytest.raises(ValueError):
        GF(4)


# polynomials


def t(F, i):
    return MultiPoly.var(F, i)


def test_poly_examples():
    F2, F3 = field(2), field(3)
    s = t(F2, 1) + t(F2, 2)
    assert s * s == MultiPoly.var(F2, 1, 2) + MultiPoly.var(F2, 2, 2)
    assert poly_arith("scale", t(F3, 1) * t(F3, 2), 0).is_zero()
    assert len(poly_arith("scale", t(F3, 1) * t(F3, 2), 0).terms) == 0
    assert s**4 == MultiPoly.var(F2, 1, 4) + MultiPoly.var(F2, 2, 4)


def test_poly_printing_is_graded_lex():
    F = field(3)
    f = t(F, 0) ** 2 * t(F, 1) + t(F, 1) + MultiPoly.const(F, 2)
    assert str(f) == "t0^2*t1 + t1 + 2"


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("pe", [(2, 1), (3, 1), (5, 1), (2, 3)])
def test_poly_ring_laws(seed, pe):
    F = field(*pe)
    rng = random.Random(seed)
    f, g, h = (random_poly(F, 3, 4, 3, rng) for _ in range(3))
    assert f * g == g * f
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f - f == MultiPoly(F)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("seed", range(6))
def test_frobenius_linearity(p, seed):
    F = field(p)
    rng = random.Random(seed)
    f, g = random_poly(F, 3, 3, 2, rng), random_poly(F, 3, 3, 2, rng)
    assert (f + g) ** p == f**p + g**p


def test_poly_evaluate():
    F = field(5)
    f = t(F, 0) ** 2 * t(F, 1) + MultiPoly.const(F, 3)
    assert f.evaluate({0: 2, 1: 3}) == (4 * 3 + 3) % 5


# linear algebra


def test_rref_examples():
    S = rref([[1, 1], [0, 1]], 2)
    assert S.basis.tolist() == [[1, 0], [0, 1]]
    Z = rref([], 2, ambient=3)
    assert Z.dim == 0
    S = rref([[1, 2, 0], [2, 4, 0]], 3)
    assert S.dim == 1 and S.basis.tolist() == [[1, 2, 0]]


def test_rref_dimension_mismatch():
    with pytest.raises(ValueError):
        rref([[1, 0], [1, 0, 1]], 2)
    with pytest.raises(ValueError):
        rref([[1, 0]], 2).contains([1, 0, 0])


def test_subspace_query_examples():
    S = rref([[1, 0]], 2)
    assert subspace_query(S, np.array([0, 1])) is False
    assert subspace_query(Subspace.zero(3, 4), None, "dim") == 0
    assert subspace_query(rref([[1, 1], [1, 0]], 2), Subspace.full(2, 2))
    assert subspace_query(Subspace.full(2, 2), S, "contains")


matrices = st.sampled_from(PRIMES[:4]).flatmap(
    lambda p: st.tuples(
        st.just(p),
        st.lists(st.lists(st.integers(0, p - 1), min_size=5, max_size=5), min_size=0, max_size=6),
    )
)


@given(matrices)
def test_rref_idempotent_and_canonical(pm):
    p, rows = pm
    S = rref(rows, p, 5)
    again = rref(S.basis, p, 5)
    assert np.array_equal(S.basis, again.basis)
    pivots = list(S.pivots)
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    for r, c in enumerate(pivots):
        assert S.basis[r, c] == 1
        assert np.count_nonzero(S.basis[:, c]) == 1
    for row in rows:
        assert S.contains(row)


@given(matrices, st.integers(0, 2**32 - 1))
def test_span_equal_generators_give_identical_bases(pm, seed):
    p, rows = pm
    S = rref(rows, p, 5)
    if S.dim == 0:
        return
    rng = np.random.default_rng(seed)
    while True:
        T = rng.integers(0, p, (S.dim + 2, S.dim))
        if rref(T, p).dim == S.dim:
            break
    other = rref(T @ S.basis % p, p, 5)
    assert other.basis.tobytes() == S.basis.tobytes()
    assert other == S and hash(other) == hash(S)


def test_subspace_sum_and_coordinates():
    A = rref([[1, 0, 0]], 3)
    B = rref([[0, 1, 1]], 3)
    C = A + B
    assert C.dim == 2 and A.issubspace(C) and B.issubspace(C)
    assert C.coordinates(np.array([2, 1, 1])).tolist() == [2, 1]
    with pytest.raises(ValueError):
        C.coordinates(np.array([0, 0, 1]))
