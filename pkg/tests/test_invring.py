from __future__ import annotations

import json
import math

import numpy as np
import pytest
from conftest import (BLOCK_SL2_F2, CHAPTER_G_F3, E_UNFAITHFUL_F3, GF4_NEGATIVE, U3_F2, group,
                      pipeline, series, u3)
from hypothesis import given
from hypothesis import strategies as st

from modinv.checks import fixw_coefficients_invariant
from modinv.errors import FieldTooSmall, NoConstructionApplies, NotElementaryFixGroup
from modinv.fuzz import FuzzConfig, sample_instances
from modinv.gf import field_create
from modinv.group import closure, fix_subgroup, transvection_subgroup
from modinv.invring import (SearchFailure, _exceptional_group, binary_case, binary_invariants,
                            certify_polynomial_ring, construct_tg_invariants, dickson_sl2,
                            elementary_generators, fixw_coefficients, fixw_invariant,
                            general_generator_search)
from modinv.linalg import Subspace
from modinv.modstruct import classify_case
from modinv.polyact import GradedPolynomial, act, invariant_dims

E13 = [[1, 0, 1], [0, 1, 0], [0, 0, 1]]


def var(ctx, i, n=3):
    return GradedPolynomial.variable(ctx, n, i)


# -- the p-power orbit recursion ---------------------------------------------

def test_fixw_trivial():
    ctx = field_create(3)
    Fix = closure(ctx, [], dim=3)
    W = Subspace.from_rows(ctx, [[0, 1, 0], [0, 0, 1]])
    z = fixw_invariant(Fix, W, [1, 0, 0])
    assert z == var(ctx, 0)


def test_fixw_single_transvection_f2():
    H = group(2, 1, [E13])
    ctx = H.ctx
    W = Subspace.from_rows(ctx, [[0, 1, 0], [0, 0, 1]])
    z = fixw_invariant(H, W, [1, 0, 0])
    x1, x3 = var(ctx, 0), var(ctx, 2)
    assert z == x1 ** 2 + x3 * x1
    assert act(H.generators[0], z) == z


def test_fixw_u3_order_four():
    G = group(2, 1, U3_F2)
    ctx = G.ctx
    W = Subspace.from_rows(ctx, [[0, 1, 0], [0, 0, 1]])
    Fix = fix_subgroup(G, W)
    z = fixw_invariant(Fix, W, [1, 0, 0])
    assert z.degree == 4
    assert all(act(g, z) == z for g in Fix.elements)
    q1, q2 = fixw_coefficients(z, W, [1, 0, 0])
    assert (q1.degree, q2.degree) == (2, 3)
    # q_i are invariant under G restricted to W
    from modinv.modstruct import restrict_matrix
    for g in G.generators:
        R = restrict_matrix(ctx, g, W.basis)
        assert act(R, q1) == q1 and act(R, q2) == q2


def test_fixw_rejects_bad_groups():
    G = group(2, 1, U3_F2)
    ctx = G.ctx
    W = Subspace.from_rows(ctx, [[0, 1, 0], [0, 0, 1]])
    with pytest.raises(NotElementaryFixGroup):
        fixw_invariant(G, W)  # U3 moves vectors of W
    with pytest.raises(ValueError):
        fixw_invariant(fix_subgroup(G, W), W, [0, 1, 0])


def test_elementary_generators_minimal():
    G = group(3, 1, CHAPTER_G_F3)
    gens = elementary_generators(G.ctx, list(G.elements[1:]))
    assert len(gens) == 2
    assert closure(G.ctx, gens).order == 9


# -- binary invariants --------------------------------------------------------

@pytest.mark.parametrize("p,s,q,degrees", [(2, 1, 2, (3, 2)), (3, 1, 3, (4, 6)),
                                           (2, 2, 4, (5, 12)), (5, 1, 5, (6, 20))])
def test_dickson_degrees(p, s, q, degrees):
    ctx = field_create(p, s)
    u, c = dickson_sl2(ctx, q)
    assert (u.degree, c.degree) == degrees
    assert (q + 1) * (q * q - q) == q * (q * q - 1)


def test_dickson_q2_explicit():
    ctx = field_create(2)
    u, c = dickson_sl2(ctx, 2)
    x1, x2 = var(ctx, 0, 2), var(ctx, 1, 2)
    assert u == x1 ** 2 * x2 + x1 * x2 ** 2
    assert c.degree == 2


def test_dickson_field_too_small():
    with pytest.raises(FieldTooSmall):
        dickson_sl2(field_create(2), 4)
    with pytest.raises(FieldTooSmall):
        dickson_sl2(field_create(3), 9)


def test_binary_case_tags():
    ctx = field_create(2, 2)
    assert binary_case(ctx, closure(ctx, [], dim=2))[0] == "trivial"
    tag, info = binary_case(ctx, closure(ctx, [np.array([[1, 1], [0, 1]])]))
    assert tag == "reducible" and info["n"] == 1
    sl2 = closure(ctx, [np.array([[1, 1], [0, 1]]), np.array([[1, 0], [1, 1]])])
    assert binary_case(ctx, sl2) == ("dickson", {"q": 2})


def test_exceptional_binary_group():
    ctx = field_create(3, 2)
    elems, _ = _exceptional_group(ctx)
    assert elems.shape[0] == 120
    rng = np.random.default_rng(0)
    gens = [elems[i] for i in rng.choice(120, 3, replace=False)]
    H2 = closure(ctx, gens)
    while H2.order != 120:
        gens.append(elems[rng.integers(120)])
        H2 = closure(ctx, gens)
    assert binary_case(ctx, H2)[0] == "exceptional-sl2f5"
    b = binary_invariants(ctx, H2)
    assert b.tag == "exceptional-sl2f5"
    assert sorted((b.f1.degree, b.f2.degree)) == [10, 12]
    for g in H2.generators:
        assert act(g, b.f1) == b.f1 and act(g, b.f2) == b.f2
    dims = invariant_dims(H2, 24)
    assert dims == series((10, 12), 24)


# -- certification --------------------------------------------------------------

def test_certify_trivial():
    ctx = field_create(5)
    H = closure(ctx, [], dim=3)
    cert = certify_polynomial_ring([var(ctx, i) for i in range(3)], H, 8)
    assert cert.passed and cert.product_of_degrees == 1 and cert.hilbert_match_bound == 8


def test_certify_single_transvection():
    H = group(2, 1, [E13])
    ctx = H.ctx
    x1, x2, x3 = (var(ctx, i) for i in range(3))
    cert = certify_polynomial_ring([x1 ** 2 + x1 * x3, x2, x3], H, 10)
    assert cert.passed and cert.independent
    assert invariant_dims(H, 5) == [1, 2, 4, 6, 9, 12]
    bad = certify_polynomial_ring([x2, x3, x2 * x3], H, 10)
    assert not bad.passed
    assert bad.first_mismatch["reason"] == "dimension" and bad.first_mismatch["degree"] == 2
    wrong = certify_polynomial_ring([x1, x2, x3], H, 4)
    assert not wrong.passed and wrong.first_mismatch["reason"] == "product_of_degrees"


# -- greedy search -------------------------------------------------------------

def test_search_examples():
    ctx = field_create(3)
    pres = general_generator_search(closure(ctx, [], dim=3), bound=6)
    assert pres.degrees == [1, 1, 1] and pres.certified
    H = group(3, 1, [E13])
    pres = general_generator_search(H, bound=10)
    assert sorted(pres.degrees) == [1, 1, 3] and pres.certified
    fail = general_generator_search(H, maxdeg=1, bound=10)
    assert isinstance(fail, SearchFailure) and not fail


# -- chapter constructions ----------------------------------------------------

def test_u3_presentation(u3_f2):
    G, cls, T, pres = u3_f2
    assert cls.chapter == "F" and T.order == 8
    assert pres.degrees == [4, 2, 1] and pres.certified
    assert json.dumps(pres.to_json())


@pytest.mark.parametrize("p,degrees", [(2, [4, 2, 1]), (3, [9, 3, 1])])
def test_chapter_f_degrees(p, degrees):
    G, cls, T, pres = pipeline(p, 1, u3(p))
    assert cls.chapter == "F"
    assert pres.degrees == degrees == [p * p, p, 1]


def test_chapter_e_unfaithful_degrees():
    G, cls, T, pres = pipeline(3, 1, E_UNFAITHFUL_F3)
    p = 3
    assert cls.chapter == "E" and pres.construction == "line-quotient"
    assert pres.degrees == [p ** 3 - p ** 2, p * p + p, 1] == [18, 12, 1]
    assert math.prod(pres.degrees) == T.order == 216


def test_chapter_g_degree_matches_fix():
    G, cls, T, pres = pipeline(3, 1, CHAPTER_G_F3)
    assert cls.chapter == "G"
    assert pres.degrees[0] == pres.details["fix_order"] == 9
    assert pres.degrees == [9, 1, 1]


def test_chapter_a_block_dickson():
    G, cls, T, pres = pipeline(2, 1, BLOCK_SL2_F2)
    assert pres.details["binary"] == "dickson" and pres.degrees == [3, 2, 1]


def test_chapter_a_reducible_gf4(gf4_negative):
    G, cls, T, pres = gf4_negative
    assert cls.chapter == "A" and pres.details["binary"] == "reducible"
    assert pres.degrees == [2, 1, 1] and pres.certified


def test_irreducible_has_no_construction():
    gens = [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [1, 0, 0]]]
    G = group(2, 1, gens)
    cls = classify_case(G)
    with pytest.raises(NoConstructionApplies):
        construct_tg_invariants(G, cls)


@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_fuzzed_presentations_certify(p, seed):
    inp = next(sample_instances(FuzzConfig(p=p, seed=seed, max_order=600)))
    G = closure(inp.ctx, inp.generators)
    cls = classify_case(G)
    T = transvection_subgroup(G)
    pres = construct_tg_invariants(G, cls, T)
    assert pres.certified
    assert math.prod(pres.degrees) == T.order
    for f in pres.gens:
        for g in T.generators:
            assert act(g, f) == f
    assert fixw_coefficients_invariant(pres) in (True, None)
