from __future__ import annotations

import numpy as np
import pytest
import sympy
from conftest import group, series
from hypothesis import given
from hypothesis import strategies as st

from modinv.errors import AmbiguousExpression, BoundExceeded, DimMismatch, NotInSubalgebra
from modinv.gf import field_create
from modinv.group import closure
from modinv.polyact import (GradedPolynomial, act, action_matrix, express_linear_part,
                            ideal_fills_degree, invariant_dim, invariant_dims, monomials,
                            subalgebra_degree_basis, subalgebra_dim, substitute)

X = sympy.symbols("x1 x2 x3")


def P(ctx, terms):
    return GradedPolynomial.from_terms(ctx, 3, terms)


def var(ctx, i):
    return GradedPolynomial.variable(ctx, 3, i)


def to_sympy(f):
    """Integer lift of f; sympy's multivariate modular arithmetic is not used."""
    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        expr += c * X[0] ** e[0] * X[1] ** e[1] * X[2] ** e[2]
    return sympy.Poly(expr, *X, domain="ZZ")


def sympy_act(g, f):
    subs = {X[i]: sum(int(g[i, j]) * X[j] for j in range(3)) for i in range(3)}
    expr = to_sympy(f).as_expr().subs(subs, simultaneous=True)
    return sympy.Poly(sympy.expand(expr), *X, domain="ZZ")


def same(a, b, p):
    """Equality of integer polynomials after reducing coefficients mod p."""
    return all(c % p == 0 for c in (a - b).as_dict().values())


def polys(p, maxdeg=3):
    term = st.tuples(st.tuples(*[st.integers(0, maxdeg)] * 3), st.integers(1, p - 1))
    return st.lists(term, max_size=5).map(lambda ts: P(field_create(p), ts))


def matrices(p):
    return st.lists(st.integers(0, p - 1), min_size=9, max_size=9).map(
        lambda xs: np.array(xs, dtype=np.int64).reshape(3, 3))


def test_slice_dimensions():
    assert monomials(3, 0).dim == 1
    assert monomials(3, 2).dim == 6
    assert monomials(3, 24).dim == 325
    exps = monomials(3, 2).exps
    assert exps.sum(axis=1).tolist() == [2] * 6
    assert len({tuple(e) for e in exps}) == 6


def test_act_examples():
    for p, expected in [(2, {(2, 0, 0): 1, (0, 0, 2): 1}),
                        (3, {(2, 0, 0): 1, (1, 0, 1): 2, (0, 0, 2): 1})]:
        ctx = field_create(p)
        sigma = np.array([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
        f = var(ctx, 0) ** 2
        assert act(sigma, f).terms == expected
        assert act(np.eye(3, dtype=np.int64), f) == f


def test_act_composition_convention():
    # act(g) then act(h) on the outside equals act of the product h @ g
    ctx = field_create(5)
    g = np.array([[1, 2, 0], [0, 1, 3], [1, 0, 1]])
    h = np.array([[2, 0, 1], [1, 1, 0], [0, 4, 1]])
    f = P(ctx, [((2, 1, 0), 1), ((0, 1, 2), 3)])
    assert act(g, act(h, f)) == act(ctx.matmul(h, g), f)


def test_act_dim_mismatch():
    ctx = field_create(3)
    with pytest.raises(DimMismatch):
        act(np.eye(2, dtype=np.int64), var(ctx, 0))


@given(st.sampled_from([2, 3, 5, 7]).flatmap(lambda p: st.tuples(polys(p), polys(p))))
def test_multiplication_matches_sympy(pair):
    f, g = pair
    assert same(to_sympy(f * g), to_sympy(f) * to_sympy(g), f.ctx.p)
    assert same(to_sympy(f + g), to_sympy(f) + to_sympy(g), f.ctx.p)


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(matrices(p), polys(p))))
def test_action_matches_sympy(pair):
    g, f = pair
    assert same(to_sympy(act(g, f)), sympy_act(g, f), f.ctx.p)


@given(st.sampled_from([2, 3, 5]).flatmap(
    lambda p: st.tuples(matrices(p), matrices(p), polys(p), polys(p))))
def test_action_laws(args):
    g, h, f, k = args
    ctx = f.ctx
    assert act(g, f * k) == act(g, f) * act(g, k)
    assert act(g, act(h, f)) == act(ctx.matmul(h, g), f)
    for d in f.degrees():
        assert act(g, f).part(d).shape == f.part(d).shape


def test_frobenius_and_power():
    ctx = field_create(3)
    f = var(ctx, 0) + var(ctx, 1)
    assert f.frobenius() == f ** 3
    assert (f ** 3).terms == {(3, 0, 0): 1, (0, 3, 0): 1}


def test_json_roundtrip_and_degree():
    ctx = field_create(5)
    f = P(ctx, [((1, 1, 0), 2), ((3, 0, 0), 1)])
    assert GradedPolynomial.from_json(ctx, 3, f.to_json()) == f
    assert f.homogeneous_degree() == "mixed"
    assert GradedPolynomial.zero(ctx, 3).homogeneous_degree() is None
    with pytest.raises(ValueError):
        f.degree


def test_invariant_dim_examples():
    ctx = field_create(2)
    triv = closure(ctx, [], dim=3)
    assert invariant_dim(triv, 2)[0] == 6
    H = group(2, 1, [[[1, 0, 1], [0, 1, 0], [0, 0, 1]]])
    dim, basis = invariant_dim(H, 1)
    assert dim == 2
    dim, basis = invariant_dim(H, 2)
    assert dim == 4
    z = P(ctx, [((2, 0, 0), 1), ((1, 0, 1), 1)])
    span = np.array([b.part(2) for b in basis])
    from modinv import linalg
    assert linalg.in_row_space(ctx, span, z.part(2))
    for b in basis:
        assert act(H.generators[0], b) == b
    with pytest.raises(BoundExceeded):
        invariant_dim(H, 30, bound=24)


def test_invariant_dim_generating_set_independent():
    g = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
    h = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
    A = group(3, 1, [g, h])
    ctx = A.ctx
    B = closure(ctx, [np.array(g), np.array(h), ctx.matmul(np.array(g), np.array(h)),
                      np.array(g)])
    for d in range(7):
        assert invariant_dim(A, d, with_basis=False)[0] == invariant_dim(B, d, with_basis=False)[0]


def test_polynomial_ring_series_u3():
    G = group(2, 1, [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]])
    assert invariant_dims(G, 12) == series((1, 2, 4), 12)


def test_subalgebra_examples():
    ctx = field_create(2)
    vs = [var(ctx, i) for i in range(3)]
    for d in range(5):
        assert subalgebra_dim(vs, d) == monomials(3, d).dim
    z = P(ctx, [((2, 0, 0), 1), ((1, 0, 1), 1)])
    gens = [vs[1], vs[2], z]
    rows, expr, exps = subalgebra_degree_basis(gens, 2)
    assert rows.shape[0] == 4
    assert subalgebra_dim(gens + [vs[1]], 3) == subalgebra_dim(gens, 3)


def test_express_linear_part():
    ctx = field_create(5)
    x1, x2, x3 = (var(ctx, i) for i in range(3))
    g1, g2, g3 = x1 ** 2, x2, x3
    gens = [g1, g2, g3]
    assert express_linear_part(g1, gens).tolist() == [1, 0, 0]
    assert express_linear_part(g2 * g3, gens).tolist() == [0, 0, 0]
    f = g1.scale(2) + g2 * g3
    assert express_linear_part(f, gens).tolist() == [2, 0, 0]
    with pytest.raises(NotInSubalgebra):
        express_linear_part(x1 * x2, gens)
    with pytest.raises(AmbiguousExpression):
        express_linear_part(x2 * x2, [x2 * x2, x2, x3])


def test_substitute_and_ideal():
    ctx = field_create(3)
    x1, x2, x3 = (var(ctx, i) for i in range(3))
    f = P(ctx, [((1, 1, 0), 1)])
    assert substitute(f, [x2, x3, x1]) == x2 * x3
    assert ideal_fills_degree([x1, x2, x3], 1)
    assert not ideal_fills_degree([x1, x2], 4)
    assert ideal_fills_degree([x1, x2, x3 ** 2], 2)


def test_action_matrix_is_representation():
    ctx = field_create(3)
    g = np.array([[1, 1, 0], [0, 1, 2], [1, 0, 1]])
    h = np.array([[2, 0, 0], [1, 1, 0], [0, 1, 2]])
    for d in (1, 2, 3):
        lhs = action_matrix(ctx, ctx.matmul(h, g), d)
        rhs = ctx.matmul(action_matrix(ctx, h, d), action_matrix(ctx, g, d))
        assert np.array_equal(lhs, rhs)
