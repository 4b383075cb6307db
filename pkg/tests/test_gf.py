"""Finite-field arithmetic, checked against sympy's galoistools as an independent oracle."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import ZZ
from sympy.polys.galoistools import gf_add, gf_gcdex, gf_irreducible_p, gf_mul, gf_rem

from modinv.errors import NonPrime, RangeExceeded
from modinv.gf import FieldElem, elem_pow, field_create, field_from_modulus

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2)]


def to_sympy(ctx, code):
    """Coefficients high-degree first, as galoistools expects."""
    digits = [int(d) for d in ctx.digits[code]]
    while digits and digits[-1] == 0:
        digits.pop()
    return [ZZ(c) for c in reversed(digits)]


def from_sympy(ctx, poly):
    coeffs = [int(c) % ctx.p for c in reversed(poly)]
    return sum(c * ctx.p ** i for i, c in enumerate(coeffs))


def modulus_sympy(ctx):
    return [ZZ(c) for c in reversed(ctx.modulus)]


@pytest.mark.parametrize("p,s", FIELDS)
def test_modulus_is_irreducible_and_smallest(p, s):
    ctx = field_create(p, s)
    assert ctx.q == p ** s
    if s == 1:
        return
    assert gf_irreducible_p(modulus_sympy(ctx), p, ZZ)
    # every monic polynomial that precedes it (constant term first) is reducible
    import itertools
    smaller = [tuple(t) + (1,) for t in itertools.product(range(p), repeat=s)
               if tuple(t) < tuple(ctx.modulus[:-1])]
    for m in smaller:
        assert not gf_irreducible_p([ZZ(c) for c in reversed(m)], p, ZZ)


@pytest.mark.parametrize("p,s", FIELDS)
def test_tables_match_sympy(p, s):
    ctx = field_create(p, s)
    mod = modulus_sympy(ctx)
    codes = np.arange(ctx.q)
    a, b = np.meshgrid(codes, codes, indexing="ij")
    prod = ctx.mul(a, b)
    tot = ctx.add(a, b)
    for x in range(ctx.q):
        for y in range(ctx.q):
            fx, fy = to_sympy(ctx, x), to_sympy(ctx, y)
            assert prod[x, y] == from_sympy(ctx, gf_rem(gf_mul(fx, fy, p, ZZ), mod, p, ZZ))
            assert tot[x, y] == from_sympy(ctx, gf_add(fx, fy, p, ZZ))
    for x in range(1, ctx.q):
        inv, _, h = gf_gcdex(to_sympy(ctx, x), mod, p, ZZ)
        assert h == [ZZ(1)]
        assert int(ctx.inv(x)) == from_sympy(ctx, inv)


@pytest.mark.parametrize("p,s", FIELDS)
def test_matmul_matches_scalar_loop(p, s):
    ctx = field_create(p, s)
    rng = np.random.default_rng(p * 10 + s)
    a = rng.integers(0, ctx.q, size=(4, 3))
    b = rng.integers(0, ctx.q, size=(3, 5))
    out = ctx.matmul(a, b)
    for i in range(4):
        for j in range(5):
            acc = 0
            for k in range(3):
                acc = int(ctx.add(acc, ctx.mul(a[i, k], b[k, j])))
            assert out[i, j] == acc


@pytest.mark.parametrize("p,s", FIELDS)
def test_primitive_generates_units(p, s):
    ctx = field_create(p, s)
    g = ctx.primitive
    seen = {int(ctx.power(g, k)) for k in range(ctx.q - 1)}
    assert seen == set(range(1, ctx.q))


field_and_elems = st.sampled_from(FIELDS).flatmap(
    lambda f: st.tuples(st.just(f), *[st.integers(0, f[0] ** f[1] - 1)] * 3))


@given(field_and_elems)
def test_field_axioms(data):
    (p, s), a, b, c = data
    ctx = field_create(p, s)
    A, B, C = (ctx.elem(x) for x in (a, b, c))
    assert A + B == B + A and A * B == B * A
    assert (A + B) + C == A + (B + C)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A - A == ctx.elem(0)
    if a:
        assert A * A.inverse() == ctx.elem(1)
        assert A ** (ctx.q - 1) == ctx.elem(1)


@given(st.sampled_from(FIELDS), st.integers(0, 300), st.integers(0, 12))
def test_elem_pow_and_frobenius(f, a, k):
    p, s = f
    ctx = field_create(p, s)
    a %= ctx.q
    x = ctx.elem(a)
    ref = ctx.elem(1)
    for _ in range(k):
        ref = ref * x
    assert elem_pow(ctx, a, k) == ref
    # Frobenius is additive
    b = (a * 7 + 3) % ctx.q
    lhs = ctx.power(int(ctx.add(a, b)), p)
    assert lhs == ctx.add(ctx.power(a, p), ctx.power(b, p))


def test_subfield_membership():
    ctx = field_create(2, 4)
    inside = [c for c in range(16) if ctx.is_subfield_elem(c, 2)]
    assert len(inside) == 4 and 0 in inside and 1 in inside
    assert [c for c in range(16) if ctx.is_subfield_elem(c, 1)] == [0, 1]


def test_codes_and_serialization():
    ctx = field_create(3, 2)
    assert ctx.code([1, 2]) == 7
    assert ctx.serialize_elem(7) == [1, 2]
    assert field_create(5).code(-1) == 4
    assert ctx.to_json()["modulus"] == list(ctx.modulus)
    assert isinstance(ctx.elem([1, 1]), FieldElem)


def test_field_from_modulus_validates():
    base = field_create(2, 2)
    assert field_from_modulus(2, 2, base.modulus) is base
    with pytest.raises(ValueError):
        field_from_modulus(2, 2, [0, 0, 1])


def test_errors():
    with pytest.raises(NonPrime):
        field_create(4)
    with pytest.raises(NonPrime):
        field_create(9, 1)
    with pytest.raises(RangeExceeded):
        field_create(2, 9)
    with pytest.raises(ZeroDivisionError):
        field_create(3).inv(0)
