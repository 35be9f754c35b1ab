from __future__ import annotations

import itertools

import numpy as np
import pytest

from lievar.algebra import adjoint, check_axioms, is_derivation, lower_central_series, maps_commute, mul, subalgebra_closure
from lievar.construction import (
    ALL_CFGS,
    DEFAULT_CFG,
    CapError,
    InterpretationConfig,
    b_central_in_C,
    build_A,
    build_B,
    build_C,
    build_derivations,
    c_generator_labels,
    derivation_count,
    dim_A,
    interpretation_audit,
    verify_power_relations,
)
from lievar.exactmath import matrix_power, rref

IN_SCOPE = [(p, n) for p in (2, 3, 5, 7, 11, 13) for n in (1, 2, 3, 4) if dim_A(p, n) <= 500]


def vec(A, label):
    return A.basis_vector(A.index(label))


@pytest.mark.parametrize("p,n", IN_SCOPE)
def test_dimension_formula(p, n):
    A = build_A(p, n)
    assert A.dim == (p + 1) * (p * 2 ** (2 * n - 2) + 1)
    assert len(build_derivations(p, n, check=False)) == derivation_count(p, n) == 2 ** (2 * n - 1) * (p + 1)


def test_dimension_examples():
    assert [build_A(*pn).dim for pn in [(2, 1), (2, 2), (3, 2)]] == [9, 27, 52]


def test_cap():
    with pytest.raises(CapError):
        build_A(7, 5)
    with pytest.raises(CapError):
        build_A(2, 3, cap=50)


def test_product_rule_examples():
    A = build_A(3, 1)
    assert np.array_equal(mul(A, vec(A, "a(1,{},0)"), vec(A, "a(1,{1},0)")), vec(A, "a(2,{1},0)"))
    # sign (-1)^{|sigma|} with sigma the left index: reversed order gives -1
    assert np.array_equal(mul(A, vec(A, "a(1,{1},0)"), vec(A, "a(1,{},0)")), 2 * vec(A, "a(2,{1},0)"))


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_A_axioms_and_antisymmetry_from_rule(p, n):
    A = build_A(p, n)
    rep = check_axioms(A)
    assert rep.ok, rep


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_derivations_commute(p, n):
    A = build_A(p, n)
    maps = build_derivations(p, n, check=False)
    for _, D in maps:
        assert is_derivation(A, D).ok
    for (_, D1), (_, D2) in itertools.combinations(maps, 2):
        assert maps_commute(D1, D2, p)


def test_derivation_labels_n1():
    names = [name for name, _ in build_derivations(2, 1, check=False)]
    assert sorted(names) == sorted([f"g({{1}},{s})" for s in range(3)] + [f"h({{}},{s})" for s in range(3)])


def test_g_parity_readings():
    even = build_B(2, 1, InterpretationConfig("even", "mu"))
    odd = build_B(2, 1, InterpretationConfig("odd", "mu"))
    assert np.array_equal(mul(even, vec(even, "a(1,{},0)"), vec(even, "g({1},0)")), vec(even, "a(1,{1},0)"))
    assert not mul(odd, vec(odd, "a(1,{},0)"), vec(odd, "g({1},0)")).any()


def test_h_action():
    B = build_B(2, 1)
    assert np.array_equal(mul(B, vec(B, "a(1,{},0)"), vec(B, "h({},1)")), vec(B, "a(1,{},1)"))


def test_interpretation_parse():
    assert InterpretationConfig.parse("odd,lambda") == InterpretationConfig("odd", "lambda")
    assert str(DEFAULT_CFG) == "even,mu"
    assert len(ALL_CFGS) == 4
    with pytest.raises(ValueError):
        InterpretationConfig.parse("even")
    with pytest.raises(ValueError):
        InterpretationConfig("triple", "mu")


@pytest.mark.parametrize("p,n,dim", [(2, 1, 15), (2, 2, 51)])
def test_B(p, n, dim):
    B = build_B(p, n)
    assert B.dim == dim and check_axioms(B).ok
    dA = dim_A(p, n)
    for i in range(dA, B.dim):
        for j in range(dA, B.dim):
            assert (i, j) not in B.table


@pytest.mark.parametrize("p,n,dim", [(2, 1, 11), (2, 2, 18), (3, 1, 18)])
def test_C(p, n, dim):
    C, labels = build_C(p, n)
    assert C.dim == dim and check_axioms(C).ok
    assert len(c_generator_labels(n)) == n + 2
    cent = b_central_in_C(C, labels)
    assert cent and all(cent.values())
    dims, cls = lower_central_series(C)
    assert cls == 2 * p + n


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1)])
def test_C_derivation_part_is_generator_span(p, n):
    B = build_B(p, n)
    dA = dim_A(p, n)
    gens = [vec(B, x) for x in c_generator_labels(n)]
    S, _ = subalgebra_closure(B, gens)
    assert rref(S.basis[:, dA:], p) == rref([g[dA:] for g in gens], p)


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1)])
def test_power_relations(p, n):
    rep = verify_power_relations(p, n)
    assert rep.ok, rep.checks


def test_power_relation_examples():
    B = build_B(2, 1)
    g = adjoint(B, vec(B, "g({1},0)"))
    assert not matrix_power(g, 2, 2).any()
    h1, h2 = adjoint(B, vec(B, "h({},1)")), adjoint(B, vec(B, "h({},2)"))
    assert np.array_equal(matrix_power(h1, 2, 2)[:9], h2[:9])


def test_audit_table_and_determinism():
    rows = interpretation_audit(2, 1)
    again = interpretation_audit(2, 1)
    assert [r.as_dict() for r in rows] == [r.as_dict() for r in again]
    by_cfg = {str(r.cfg): r for r in rows}
    assert by_cfg["even,mu"].all_claims
    odd = by_cfg["odd,mu"]
    assert odd.derivations and odd.commute and not odd.eq4_witness
