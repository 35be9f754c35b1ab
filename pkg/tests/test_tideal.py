from __future__ import annotations

import itertools
from math import comb

import numpy as np
import pytest

from lievar.algebra import check_axioms, lower_central_series
from lievar.exactmath import Subspace
from lievar.identities import check_identity, parse_poly, paper_identity
from lievar.tideal import (
    Base,
    VarietySpec,
    blocks_to_subspace,
    brute_rank1_span,
    build_relatively_free,
    commutative_monomials,
    compare_tideals,
    fast_route_shape,
    fixed_point_check,
    frobenius_exponents,
    is_ideal,
    metabelian_count,
    metabelian_words,
    normal_form,
    ordinal_value,
    relatively_free_dim,
    remark_base,
    remark_spec,
    tideal_blocks,
    tideal_span,
    top_degree_dims,
)

R5 = remark_base(5, 2)
R4 = remark_base(4, 2)


def test_relatively_free_examples():
    assert build_relatively_free(R5, 1, 2).algebra.dim == 7
    assert build_relatively_free(R5, 1, 2).algebra.labels == ("z1", "z1^2", "z1^3", "z1^4", "z1^5", "z1^6", "z1^7")
    assert build_relatively_free(R5, 2, 2).algebra.dim == 35
    assert build_relatively_free(R4, 2, 2).algebra.dim == 122


def test_cap_and_rank_errors():
    with pytest.raises(ValueError):
        build_relatively_free(R4, 3, 2, cap=1000)
    with pytest.raises(ValueError):
        build_relatively_free(R5, 0, 2)
    with pytest.raises(ValueError):
        Base("jordan", 3)
    with pytest.raises(ValueError):
        Base("metabelian", 0)


@pytest.mark.parametrize("r", range(1, 5))
@pytest.mark.parametrize("d", range(1, 11))
def test_metabelian_word_count(r, d):
    words = metabelian_words(r, d)
    assert len(words) == len(set(words)) == metabelian_count(r, d)
    if d >= 2:
        assert len(words) == (d - 1) * comb(r + d - 2, d)


def _brute_metabelian_words(r, d):
    out = []
    for w in itertools.product(range(1, r + 1), repeat=d):
        if w[0] > w[1] and all(w[1] <= x for x in w[2:]) and list(w[2:]) == sorted(w[2:]):
            out.append(w)
    return sorted(out)


@pytest.mark.parametrize("r,d", [(2, 4), (3, 3), (3, 5), (4, 4)])
def test_metabelian_words_match_enumeration(r, d):
    assert sorted(metabelian_words(r, d)) == _brute_metabelian_words(r, d)


def test_normal_form_rules():
    assert normal_form(1, 1) == {}
    assert normal_form(2, 1) == {(2, 1): 1}
    assert normal_form(1, 2) == {(2, 1): -1}
    # (z3 z2) z1 = (z3 z1) z2 - (z2 z1) z3
    assert normal_form(3, 2, (1,)) == {(3, 1, 2): 1, (2, 1, 3): -1}


def test_commutative_monomials():
    assert len(commutative_monomials(3, 4)) == comb(6, 4)
    assert relatively_free_dim(Base("commutative", 7), 2) == sum(d + 1 for d in range(1, 8))


FREE_CASES = [
    (Base("metabelian", 5), 2, 2),
    (Base("metabelian", 4), 3, 3),
    (Base("metabelian", 6), 2, 5),
    (Base("commutative", 4), 2, 2),
    (Base("commutative", 3), 3, 3),
    (Base("commutative", 7), 2, 2),
]


@pytest.mark.parametrize("base,r,p", FREE_CASES)
def test_relatively_free_axioms_identities_class(base, r, p):
    F = build_relatively_free(base, r, p)
    A = F.algebra
    assert check_axioms(A).ok
    if base.name == "metabelian":
        assert check_identity(A, parse_poly("(x1 x2)(x3 x4)", p), "span").holds
    else:
        assert check_identity(A, parse_poly("x1 x2 - x2 x1", p, "assoc"), "generic").holds
    assert lower_central_series(A)[1] == base.k


def test_tideal_span_examples():
    F = build_relatively_free(R5, 1, 2)
    for name in ("r5v", "r5w"):
        S = tideal_span(F, [paper_identity(name, 2)])
        assert S.dim == 1 and S.basis.tolist() == [[0, 0, 0, 0, 0, 0, 1]]
    assert tideal_span(F, []) == Subspace.zero(2, 7)


def test_ordinal_examples():
    assert ordinal_value(remark_spec(5, 2, "v"), 1) == 6
    assert ordinal_value(remark_spec(5, 2, "w"), 1) == 6
    for r in (1, 2, 3):
        assert ordinal_value(remark_spec(5, 2, "base"), r) == relatively_free_dim(R5, r)


def test_compare_examples():
    v, w = paper_identity("r5v", 2), paper_identity("r5w", 2)
    assert compare_tideals(R5, v, w, 1, 2).verdict == "equal"
    c = compare_tideals(R5, v, w, 4, 2)
    assert c.verdict == "incomparable" and c.dim_f == c.dim_g == 80
    for r in (1, 3):
        assert compare_tideals(R5, v, v, r, 2).verdict == "equal"
    small = Base("metabelian", 6)
    f, g = parse_poly("x y z^2", 2), parse_poly("x y z^2 u", 2)
    assert compare_tideals(small, f, g, 3, 2).verdict == "g<f"


def test_commutative_class7_tideal_monomials():
    # v-values are degree-7 monomials with some exponent >= 4, w-values those with exactly one odd exponent
    F = build_relatively_free(R5, 4, 2)
    Sv = tideal_span(F, [paper_identity("r5v", 2)])
    Sw = tideal_span(F, [paper_identity("r5w", 2)])
    top = [i for i, e in enumerate(F.words) if sum(e) == 7]
    want_v = {i for i in top if max(F.words[i]) >= 4}
    want_w = {i for i in top if sum(x % 2 for x in F.words[i]) == 1}
    assert {int(np.flatnonzero(row)[0]) for row in Sv.basis} == want_v
    assert {int(np.flatnonzero(row)[0]) for row in Sw.basis} == want_w
    assert all(np.count_nonzero(row) == 1 for row in np.vstack([Sv.basis, Sw.basis]))


IDEAL_CASES = [
    (Base("metabelian", 6), 2, 2, ["x y z^2"]),
    (Base("metabelian", 6), 3, 2, ["x y z^2", "x y z u"]),
    (Base("metabelian", 5), 2, 3, ["x y z^3"]),
    (Base("metabelian", 6), 2, 3, ["x y z x"]),
    (Base("commutative", 5), 2, 2, ["x^2 y"]),
    (Base("commutative", 6), 3, 3, ["x^3 y", "x y z"]),
    (Base("commutative", 7), 2, 2, ["x y z^4"]),
]


def _polys(base, p, texts):
    return [parse_poly(t, p, base.poly_kind) for t in texts]


@pytest.mark.parametrize("base,r,p,texts", IDEAL_CASES)
def test_span_is_ideal_and_fixed_point(base, r, p, texts):
    F = build_relatively_free(base, r, p)
    fs = _polys(base, p, texts)
    S = tideal_span(F, fs)
    assert is_ideal(F, S)
    assert fixed_point_check(F, fs, S)


@pytest.mark.parametrize("base,r,p,texts", IDEAL_CASES)
def test_monotone_and_permutation_invariant(base, r, p, texts):
    F = build_relatively_free(base, r, p)
    fs = _polys(base, p, texts)
    S = tideal_span(F, fs)
    assert tideal_span(F, fs[::-1]) == S
    for f in fs:
        assert tideal_span(F, [f]).issubspace(S)
    extra = parse_poly("x y z" if base.name == "metabelian" else "x y", p, base.poly_kind)
    assert S.issubspace(tideal_span(F, fs + [extra]))


@pytest.mark.parametrize("base,r,p,texts", IDEAL_CASES)
def test_blockwise_equals_global(base, r, p, texts):
    F = build_relatively_free(base, r, p)
    fs = _polys(base, p, texts)
    blocks = tideal_blocks(F, fs)
    S = blocks_to_subspace(F, blocks)
    # each block is a direct summand: its vectors live on its own multidegree
    for md, vecs in blocks.items():
        for v in vecs:
            assert {F.multidegree(k) for k in v} == {md}
    assert sum(len(v) for v in blocks.values()) == S.dim
    assert S == tideal_span(F, fs)


@pytest.mark.parametrize(
    "k,r,p,text",
    [
        (4, 2, 2, "x y z^2"),
        (5, 2, 2, "x y z^2"),
        (6, 2, 2, "x y z^2 u^2"),
        (6, 3, 2, "x y z^2 u^2"),
        (6, 3, 2, "x y z^4"),
        (5, 3, 3, "x y z^3"),
        (6, 2, 3, "x y z^2 u"),
        (6, 3, 5, "x y z u v"),
        (4, 3, 2, "x y"),
    ],
)
def test_fast_route_matches_generic(k, r, p, text):
    F = build_relatively_free(Base("metabelian", k), r, p)
    f = parse_poly(text, p)
    assert fast_route_shape(f) is not None
    assert tideal_span(F, [f], "fast") == tideal_span(F, [f], "generic")


def test_fast_route_shape_detection():
    assert fast_route_shape(parse_poly("x y z^2 u^3", 2)) is not None
    assert fast_route_shape(parse_poly("x y x", 2)) is None
    assert fast_route_shape(parse_poly("x y z u z", 2)) is None
    assert fast_route_shape(parse_poly("x (y z)", 2)) is None
    assert fast_route_shape(parse_poly("x y + y x", 2)) is None


def test_frobenius_exponents():
    assert sorted(frobenius_exponents(4, 2, 2)) == [(0, 4), (4, 0)]
    assert sorted(frobenius_exponents(3, 2, 2)) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert sorted(frobenius_exponents(3, 2, 3)) == [(0, 3), (3, 0)]


@pytest.mark.parametrize(
    "base,p,text",
    [
        (R5, 2, "r5v"),
        (R5, 2, "r5w"),
        (Base("commutative", 6), 3, "x^3 y"),
        (Base("commutative", 5), 2, "x^2 y^2"),
        (Base("commutative", 6), 2, "x y z"),
        (Base("metabelian", 4), 2, "x y"),
    ],
)
def test_rank_one_brute_force_agrees(base, p, text):
    F = build_relatively_free(base, 1, p)
    f = paper_identity(text, p) if text.startswith("r5") else parse_poly(text, p, base.poly_kind)
    assert brute_rank1_span(F, f) == tideal_span(F, [f])
    spec = VarietySpec(base, (f,), p)
    assert ordinal_value(spec, 1) == F.algebra.dim - brute_rank1_span(F, f).dim


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_fourth_power_and_square_varieties_share_ordinals(r):
    assert ordinal_value(remark_spec(5, 2, "v"), r) == ordinal_value(remark_spec(5, 2, "w"), r)


def test_metabelian_class16_rank2_ordinals():
    assert ordinal_value(remark_spec(4, 2, "v"), 2) == ordinal_value(remark_spec(4, 2, "w"), 2) == 114


def test_top_degree_route_matches_full_route():
    for which in ("v", "w"):
        f = paper_identity(f"r4{which}", 2)
        F = build_relatively_free(R4, 3, 2)
        assert sum(top_degree_dims(R4, [f], 3, 2).values()) == tideal_span(F, [f]).dim
    full = compare_tideals(R4, paper_identity("r4v", 2), paper_identity("r4w", 2), 3, 2)
    top = compare_tideals(R4, paper_identity("r4v", 2), paper_identity("r4w", 2), 3, 2, cap=0)
    assert full == top


def test_variety_spec_validation():
    with pytest.raises(ValueError):
        VarietySpec(R5, (parse_poly("x y + x", 2, "assoc"),), 2)
    with pytest.raises(ValueError):
        VarietySpec(R5, (paper_identity("r5v", 3),), 2)
    F = build_relatively_free(R5, 1, 2)
    with pytest.raises(ValueError):
        tideal_span(F, [paper_identity("eq3", 2)])
