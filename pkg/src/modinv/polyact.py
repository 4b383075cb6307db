"""Graded polynomials over GF(p^s) and the linear action of matrices on them.

A homogeneous polynomial of degree d in n variables is a vector of element
codes indexed by the degree-d monomials in graded-lex order (x_1 > x_2 > ...).
:class:`GradedPolynomial` keeps one such vector per degree.

Action convention: ``act(g, x_i)`` is the linear form given by row i of g,
extended multiplicatively.  With this convention
``act(g, act(h, f)) == act(h @ g, f)``.
"""
from __future__ import annotations

import os
from collections import OrderedDict
from functools import lru_cache
from itertools import product as iproduct

import numpy as np

from . import linalg
from .errors import AmbiguousExpression, BoundExceeded, DimMismatch, NotInSubalgebra
from .gf import FieldCtx

__all__ = [
    "DEFAULT_DEGREE_BOUND", "degree_bound", "GradedPolynomial", "DegreeSlice",
    "monomials", "act", "action_matrix", "invariant_dim", "subalgebra_degree_basis",
    "express_linear_part", "generator_monomials", "substitute", "linear_product",
    "ideal_slice", "ideal_fills_degree", "invariant_slice", "subalgebra_dim", "invariant_dims",
]

DEFAULT_DEGREE_BOUND = 24
MAX_VARS = 5


def degree_bound() -> int:
    """Default degree bound, overridable through MODINV_DEGREE_BOUND."""
    env = os.environ.get("MODINV_DEGREE_BOUND")
    return int(env) if env else DEFAULT_DEGREE_BOUND


# --------------------------------------------------------------------------
# monomial bookkeeping


class DegreeSlice:
    """All exponent vectors of total degree d in n variables, graded-lex order."""

    def __init__(self, n: int, d: int):
        self.n, self.degree = n, d
        exps = _compositions(n, d)
        self.exps = exps
        self.base = d + 1
        self._weights = self.base ** np.arange(n - 1, -1, -1, dtype=np.int64)
        keys = exps @ self._weights
        # keys are strictly decreasing along the graded-lex order
        self._asc = keys[::-1].copy()

    @property
    def dim(self) -> int:
        return self.exps.shape[0]

    def index(self, exps: np.ndarray) -> np.ndarray:
        keys = np.asarray(exps, dtype=np.int64) @ self._weights
        return self.dim - 1 - np.searchsorted(self._asc, keys)

    def __repr__(self):
        return f"DegreeSlice(n={self.n}, d={self.degree}, dim={self.dim})"


def _compositions(n: int, d: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1 if d == 0 else 0, 0), dtype=np.int64)
    if n == 1:
        return np.array([[d]], dtype=np.int64)
    rows = []
    for first in range(d, -1, -1):
        rest = _compositions(n - 1, d - first)
        rows.append(np.concatenate(
            [np.full((rest.shape[0], 1), first, dtype=np.int64), rest], axis=1))
    return np.concatenate(rows)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> DegreeSlice:
    if n > MAX_VARS:
        raise DimMismatch(f"at most {MAX_VARS} variables supported")
    return DegreeSlice(n, d)


@lru_cache(maxsize=None)
def _split_tables(n: int, d: int):
    """For the degree-d slice: first variable of each monomial and index of m / x_first."""
    sl = monomials(n, d)
    first = np.argmax(sl.exps > 0, axis=1)
    parent = sl.exps.copy()
    parent[np.arange(sl.dim), first] -= 1
    return first, monomials(n, d - 1).index(parent)


@lru_cache(maxsize=None)
def _shift_table(n: int, d: int, k: int) -> np.ndarray:
    """Index in slice d+1 of x_k * m for each monomial m of slice d."""
    e = monomials(n, d).exps.copy()
    e[:, k] += 1
    return monomials(n, d + 1).index(e)


# --------------------------------------------------------------------------
# scatter-add helper


def _accumulate(ctx: FieldCtx, size: int, idx: np.ndarray, vals: np.ndarray) -> np.ndarray:
    """out[j] = sum of vals[i] with idx[i] == j, in the field."""
    if ctx.s == 1:
        out = np.bincount(idx, weights=None if vals is None else vals, minlength=size)
        return np.asarray(np.rint(out), dtype=np.int64) % ctx.p if vals is not None else out
    dig = ctx.digits[vals]
    acc = np.zeros((size, ctx.s), dtype=np.int64)
    np.add.at(acc, idx, dig)
    return ctx.encode(acc % ctx.p)


def _accumulate_int(ctx: FieldCtx, size: int, idx: np.ndarray, vals: np.ndarray) -> np.ndarray:
    if ctx.s == 1:
        acc = np.zeros(size, dtype=np.int64)
        np.add.at(acc, idx, vals)
        return acc % ctx.p
    return _accumulate(ctx, size, idx, vals)


# --------------------------------------------------------------------------
# polynomials


class GradedPolynomial:
    """A polynomial stored as homogeneous components (degree -> coefficient vector)."""

    __slots__ = ("ctx", "nvars", "parts")

    def __init__(self, ctx: FieldCtx, nvars: int, parts: dict[int, np.ndarray] | None = None):
        if nvars > MAX_VARS:
            raise DimMismatch(f"at most {MAX_VARS} variables supported")
        self.ctx = ctx
        self.nvars = nvars
        self.parts = {}
        for d, v in (parts or {}).items():
            v = np.asarray(v, dtype=np.int64)
            if v.shape != (monomials(nvars, d).dim,):
                raise ValueError(f"degree {d} part has wrong length {v.shape}")
            if v.any():
                self.parts[d] = v

    # construction ----------------------------------------------------------
    @classmethod
    def zero(cls, ctx, nvars):
        return cls(ctx, nvars)

    @classmethod
    def constant(cls, ctx, nvars, c=1):
        return cls(ctx, nvars, {0: np.array([ctx.code(c)])})

    @classmethod
    def variable(cls, ctx, nvars, i):
        v = np.zeros(nvars, dtype=np.int64)
        v[i] = 1
        return cls(ctx, nvars, {1: v})

    @classmethod
    def linear_form(cls, ctx, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        return cls(ctx, len(coeffs), {1: coeffs})

    @classmethod
    def from_terms(cls, ctx, nvars, terms):
        """Build from an iterable of (exponent vector, coefficient) pairs."""
        parts: dict[int, np.ndarray] = {}
        for exps, c in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise DimMismatch("exponent vector of wrong length")
            d = sum(exps)
            sl = monomials(nvars, d)
            vec = parts.setdefault(d, np.zeros(sl.dim, dtype=np.int64))
            j = int(sl.index(np.array([exps]))[0])
            vec[j] = ctx.add(vec[j], ctx.code(c))
        return cls(ctx, nvars, parts)

    @classmethod
    def homogeneous(cls, ctx, nvars, d, vec):
        return cls(ctx, nvars, {d: vec})

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.parts

    def degrees(self) -> list[int]:
        return sorted(self.parts)

    def homogeneous_degree(self):
        """The common degree, ``None`` for the zero polynomial, or ``"mixed"``."""
        ds = self.degrees()
        if not ds:
            return None
        return ds[0] if len(ds) == 1 else "mixed"

    @property
    def degree(self) -> int:
        d = self.homogeneous_degree()
        if not isinstance(d, int):
            raise ValueError(f"not homogeneous: {d}")
        return d

    def part(self, d: int) -> np.ndarray:
        v = self.parts.get(d)
        return v if v is not None else np.zeros(monomials(self.nvars, d).dim, dtype=np.int64)

    @property
    def terms(self) -> dict[tuple[int, ...], int]:
        """Exponent vector -> coefficient code, nonzero terms only."""
        out = {}
        for d in self.degrees():
            sl = monomials(self.nvars, d)
            v = self.parts[d]
            for j in np.nonzero(v)[0]:
                out[tuple(int(e) for e in sl.exps[j])] = int(v[j])
        return out

    def coefficient(self, exps) -> int:
        exps = tuple(int(e) for e in exps)
        d = sum(exps)
        if d not in self.parts:
            return 0
        j = int(monomials(self.nvars, d).index(np.array([exps]))[0])
        return int(self.parts[d][j])

    def num_terms(self) -> int:
        return sum(int(np.count_nonzero(v)) for v in self.parts.values())

    def to_json(self):
        """List of [exponent vector, coefficient] in graded-lex order (low degree first)."""
        out = []
        for d in self.degrees():
            sl = monomials(self.nvars, d)
            v = self.parts[d]
            for j in np.nonzero(v)[0]:
                out.append([sl.exps[j].tolist(), self.ctx.serialize_elem(int(v[j]))])
        return out

    @classmethod
    def from_json(cls, ctx, nvars, data):
        return cls.from_terms(ctx, nvars, [(e, ctx.code(c)) for e, c in data])

    def __eq__(self, other):
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        if self.nvars != other.nvars or self.ctx != other.ctx:
            return False
        if set(self.parts) != set(other.parts):
            return False
        return all(np.array_equal(self.parts[d], other.parts[d]) for d in self.parts)

    def __hash__(self):
        return hash(tuple((d, self.parts[d].tobytes()) for d in self.degrees()))

    def __repr__(self):
        if not self.parts:
            return "0"
        names = "xyzuw" if self.nvars <= 3 else None
        pieces = []
        for exps, c in self.terms.items():
            coef = self.ctx.serialize_elem(c)
            mono = "*".join(
                (f"{names[i] if names else 'x' + str(i + 1)}" + (f"^{e}" if e > 1 else ""))
                for i, e in enumerate(exps) if e)
            if not mono:
                pieces.append(str(coef))
            elif coef == 1:
                pieces.append(mono)
            else:
                pieces.append(f"{coef}*{mono}")
        return " + ".join(pieces)

    # arithmetic ---------------------------------------------------------------
    def _check(self, other):
        if other.nvars != self.nvars:
            raise DimMismatch("polynomials in different numbers of variables")

    def __add__(self, other):
        self._check(other)
        parts = dict(self.parts)
        for d, v in other.parts.items():
            parts[d] = self.ctx.add(parts[d], v) if d in parts else v
        return GradedPolynomial(self.ctx, self.nvars, parts)

    def __neg__(self):
        return GradedPolynomial(self.ctx, self.nvars,
                                {d: self.ctx.neg(v) for d, v in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GradedPolynomial":
        c = self.ctx.code(c)
        return GradedPolynomial(self.ctx, self.nvars,
                                {d: self.ctx.mul(v, c) for d, v in self.parts.items()})

    def __mul__(self, other):
        if not isinstance(other, GradedPolynomial):
            return self.scale(other)
        self._check(other)
        parts: dict[int, np.ndarray] = {}
        for da, va in self.parts.items():
            for db, vb in other.parts.items():
                prod = _mul_homogeneous(self.ctx, self.nvars, da, va, db, vb)
                d = da + db
                parts[d] = self.ctx.add(parts[d], prod) if d in parts else prod
        return GradedPolynomial(self.ctx, self.nvars, parts)

    __rmul__ = scale

    def frobenius(self) -> "GradedPolynomial":
        """f^p, computed coefficientwise (additivity of the p-th power)."""
        ctx, n = self.ctx, self.nvars
        parts = {}
        for d, v in self.parts.items():
            nz = np.nonzero(v)[0]
            sl = monomials(n, d)
            target = monomials(n, d * ctx.p)
            vec = np.zeros(target.dim, dtype=np.int64)
            vec[target.index(sl.exps[nz] * ctx.p)] = ctx.power(v[nz], ctx.p)
            parts[d * ctx.p] = vec
        return GradedPolynomial(ctx, n, parts)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        if k == 0:
            return GradedPolynomial.constant(self.ctx, self.nvars)
        if k % self.ctx.p == 0:
            return (self ** (k // self.ctx.p)).frobenius()
        result, base = None, self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def restrict_vars(self, keep: int) -> "GradedPolynomial":
        """View a polynomial in the first ``keep`` variables as one in fewer variables."""
        parts = {}
        for d, v in self.parts.items():
            sl = monomials(self.nvars, d)
            if np.any(sl.exps[np.nonzero(v)[0], keep:]):
                raise ValueError("polynomial involves dropped variables")
            small = monomials(keep, d)
            vec = np.zeros(small.dim, dtype=np.int64)
            nz = np.nonzero(v)[0]
            vec[small.index(sl.exps[nz, :keep])] = v[nz]
            parts[d] = vec
        return GradedPolynomial(self.ctx, keep, parts)

    def embed(self, nvars: int, positions) -> "GradedPolynomial":
        """Rename variable i to variable positions[i] in a larger ring."""
        parts = {}
        for d, v in self.parts.items():
            sl = monomials(self.nvars, d)
            nz = np.nonzero(v)[0]
            e = np.zeros((nz.size, nvars), dtype=np.int64)
            e[:, list(positions)] = sl.exps[nz]
            big = monomials(nvars, d)
            vec = np.zeros(big.dim, dtype=np.int64)
            vec[big.index(e)] = v[nz]
            parts[d] = vec
        return GradedPolynomial(self.ctx, nvars, parts)


def _mul_homogeneous(ctx, n, da, va, db, vb) -> np.ndarray:
    sa, sb = monomials(n, da), monomials(n, db)
    ia, ib = np.nonzero(va)[0], np.nonzero(vb)[0]
    target = monomials(n, da + db)
    if ia.size == 0 or ib.size == 0:
        return np.zeros(target.dim, dtype=np.int64)
    if ia.size * ib.size > 4_000_000:
        out = np.zeros(target.dim, dtype=np.int64)
        for chunk in np.array_split(ia, int(np.ceil(ia.size * ib.size / 2_000_000))):
            part = np.zeros(sa.dim, dtype=np.int64)
            part[chunk] = va[chunk]
            out = ctx.add(out, _mul_homogeneous(ctx, n, da, part, db, vb))
        return out
    exps = (sa.exps[ia][:, None, :] + sb.exps[ib][None, :, :]).reshape(-1, n)
    idx = target.index(exps)
    if ctx.s == 1:
        vals = (va[ia][:, None] * vb[ib][None, :]).ravel()
        acc = np.zeros(target.dim, dtype=np.int64)
        np.add.at(acc, idx, vals)
        return acc % ctx.p
    vals = ctx.mul(va[ia][:, None], vb[ib][None, :]).ravel()
    return _accumulate(ctx, target.dim, idx, vals)


# --------------------------------------------------------------------------
# the action


class _MatrixCache:
    """Small LRU cache of per-degree action matrices keyed by (field, matrix)."""

    def __init__(self, maxsize: int = 48):
        self.maxsize = maxsize
        self.data: OrderedDict = OrderedDict()

    def get(self, ctx: FieldCtx, g: np.ndarray) -> list:
        key = (ctx.p, ctx.s, ctx.modulus, g.shape[0], g.astype(np.int32).tobytes())
        mats = self.data.get(key)
        if mats is None:
            n = g.shape[0]
            mats = [np.ones((1, 1), dtype=np.int64), g.copy()]
            self.data[key] = mats
            if len(self.data) > self.maxsize:
                self.data.popitem(last=False)
        else:
            self.data.move_to_end(key)
        return mats


_CACHE = _MatrixCache()
_DENSE_LIMIT = 500


def action_matrix(ctx: FieldCtx, g, d: int) -> np.ndarray:
    """rho_d(g): row m holds the coefficients of act(g, m) for monomial m of degree d."""
    g = np.asarray(g, dtype=np.int64)
    n = g.shape[0]
    mats = _CACHE.get(ctx, g)
    while len(mats) <= d:
        e = len(mats)
        prev = mats[e - 1]
        first, parent = _split_tables(n, e)
        size = monomials(n, e).dim
        out = np.zeros((monomials(n, e).dim, size), dtype=np.int64)
        rows = prev[parent]
        for k in range(n):
            coeff = g[first, k]
            nzr = np.nonzero(coeff)[0]
            if nzr.size == 0:
                continue
            contrib = ctx.mul(coeff[nzr, None], rows[nzr])
            cols = _shift_table(n, e - 1, k)
            out[np.ix_(nzr, cols)] = ctx.add(out[np.ix_(nzr, cols)], contrib)
        mats.append(out)
    return mats[d]


def _act_homogeneous(ctx: FieldCtx, g: np.ndarray, d: int, vec: np.ndarray) -> np.ndarray:
    n = g.shape[0]
    if monomials(n, d).dim <= _DENSE_LIMIT:
        nz = np.nonzero(vec)[0]
        if nz.size == 0:
            return np.zeros_like(vec)
        return ctx.matmul(vec[nz][None, :], action_matrix(ctx, g, d)[nz])[0]
    return _act_by_substitution(ctx, g, d, vec)


def _act_by_substitution(ctx: FieldCtx, g: np.ndarray, d: int, vec: np.ndarray) -> np.ndarray:
    """Horner-style substitution f = x_1 A + B, avoiding the dense action matrix."""
    n = g.shape[0]
    forms = [GradedPolynomial.linear_form(ctx, g[i]) for i in range(n)]

    def rec(k: int, deg: int, v: np.ndarray) -> GradedPolynomial:
        # v: coefficients of a degree-deg polynomial in variables k..n-1
        m = n - k
        if not v.any():
            return GradedPolynomial.zero(ctx, n)
        if deg == 0:
            return GradedPolynomial.constant(ctx, n, int(v[0]))
        if m == 1:
            return forms[k] ** deg * int(v[0])
        sl = monomials(m, deg)
        with_first = sl.exps[:, 0] > 0
        a_exps = sl.exps[with_first].copy()
        a_exps[:, 0] -= 1
        a = np.zeros(monomials(m, deg - 1).dim, dtype=np.int64)
        a[monomials(m, deg - 1).index(a_exps)] = v[with_first]
        b_exps = sl.exps[~with_first][:, 1:]
        b = np.zeros(monomials(m - 1, deg).dim, dtype=np.int64)
        b[monomials(m - 1, deg).index(b_exps)] = v[~with_first]
        return forms[k] * rec(k, deg - 1, a) + rec(k + 1, deg, b)

    return rec(0, d, vec).part(d)


def act(g, f: GradedPolynomial) -> GradedPolynomial:
    """The algebra endomorphism sending x_i to the linear form in row i of g."""
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (f.nvars, f.nvars):
        raise DimMismatch(f"matrix {g.shape} against {f.nvars} variables")
    return GradedPolynomial(f.ctx, f.nvars, {
        d: _act_homogeneous(f.ctx, g, d, v) for d, v in f.parts.items()})


# --------------------------------------------------------------------------
# invariants per degree


def _fixed_space(ctx: FieldCtx, gens, d: int, n: int) -> np.ndarray:
    dim = monomials(n, d).dim
    basis = linalg.identity(dim)
    for g in gens:
        if basis.shape[0] == 0:
            break
        r = action_matrix(ctx, g, d)
        moved = ctx.sub(ctx.matmul(basis, r), basis)
        if not moved.any():
            continue
        coeffs = linalg.left_kernel(ctx, moved)
        basis = ctx.matmul(coeffs, basis) if coeffs.shape[0] else coeffs[:, :0].reshape(0, dim)
    if basis.shape[0]:
        basis = linalg.rref(ctx, basis)[0][: basis.shape[0]]
    return basis


def invariant_dim(H, d: int, bound: int | None = None, with_basis: bool = True):
    """Dimension (and echelon basis) of the degree-d invariants of H.

    Only H's generators are used, which suffices for the fixed space of
    the whole group.  Returns ``(dim, basis)`` with basis a list of
    GradedPolynomial, or ``(dim, None)`` when ``with_basis`` is false.
    """
    bound = degree_bound() if bound is None else bound
    if d > bound:
        raise BoundExceeded(f"degree {d} exceeds bound {bound}")
    ctx, n = H.ctx, H.dim
    gens = H.generators if H.generators else list(H.elements[1:])
    basis = _fixed_space(ctx, gens, d, n)
    if not with_basis:
        return basis.shape[0], None
    return basis.shape[0], [GradedPolynomial(ctx, n, {d: row}) for row in basis]


def invariant_slice(H, d: int) -> np.ndarray:
    """Echelon basis rows of the degree-d invariants (no bound check)."""
    gens = H.generators if H.generators else list(H.elements[1:])
    return _fixed_space(H.ctx, gens, d, H.dim)


# --------------------------------------------------------------------------
# subalgebras generated by homogeneous polynomials


def generator_monomials(degs, d: int) -> list[tuple[int, ...]]:
    """Exponent vectors e with sum(e_i * degs_i) == d."""
    out: list[tuple[int, ...]] = []

    def rec(i, remaining, acc):
        if i == len(degs):
            if remaining == 0:
                out.append(tuple(acc))
            return
        for e in range(remaining // degs[i], -1, -1):
            rec(i + 1, remaining - e * degs[i], acc + [e])

    rec(0, d, [])
    return out


class _PowerCache:
    def __init__(self, gens):
        self.gens = gens
        self.cache: dict[tuple[int, int], GradedPolynomial] = {}

    def power(self, i, e):
        key = (i, e)
        if key not in self.cache:
            if e == 0:
                g = self.gens[i]
                self.cache[key] = GradedPolynomial.constant(g.ctx, g.nvars)
            elif e == 1:
                self.cache[key] = self.gens[i]
            else:
                self.cache[key] = self.gens[i] ** e
        return self.cache[key]

    def monomial(self, exps):
        out = None
        for i, e in enumerate(exps):
            if e:
                t = self.power(i, e)
                out = t if out is None else out * t
        if out is None:
            g = self.gens[0]
            out = GradedPolynomial.constant(g.ctx, g.nvars)
        return out


def _monomial_matrix(gens, d, cache=None):
    degs = [g.degree for g in gens]
    exps = generator_monomials(degs, d)
    cache = cache or _PowerCache(gens)
    n = gens[0].nvars
    rows = np.array([cache.monomial(e).part(d) for e in exps], dtype=np.int64).reshape(
        len(exps), monomials(n, d).dim)
    return exps, rows


def subalgebra_degree_basis(gens, d: int, cache=None):
    """Echelon basis of the degree-d slice of F[gens].

    Returns ``(basis_rows, expressions, exps)``: ``basis_rows`` in RREF,
    and ``expressions[i]`` the coefficients over the generator monomials
    ``exps`` that produce ``basis_rows[i]``.
    """
    ctx = gens[0].ctx
    exps, rows = _monomial_matrix(gens, d, cache)
    if not exps:
        dim = monomials(gens[0].nvars, d).dim
        return np.zeros((0, dim), dtype=np.int64), np.zeros((0, 0), dtype=np.int64), exps
    k = len(exps)
    aug = np.concatenate([rows, linalg.identity(k)], axis=1)
    red, _ = linalg.rref(ctx, aug)
    dim = rows.shape[1]
    keep = red[:, :dim].any(axis=1)
    return red[keep, :dim], red[keep, dim:], exps


def subalgebra_dim(gens, d: int, cache=None) -> int:
    exps, rows = _monomial_matrix(gens, d, cache)
    if not exps:
        return 0
    return linalg.rank(gens[0].ctx, rows)


def express_linear_part(f: GradedPolynomial, gens, cache=None) -> np.ndarray:
    """Coefficients c_j with f = sum c_j gens_j + (products of >= 2 generators).

    Only generators of degree deg(f) can receive nonzero coefficients.
    """
    ctx = f.ctx
    d = f.degree if not f.is_zero() else None
    out = np.zeros(len(gens), dtype=np.int64)
    if d is None:
        return out
    exps, rows = _monomial_matrix(gens, d, cache)
    if not exps:
        raise NotInSubalgebra(f"no generator monomials in degree {d}")
    x = linalg.solve_left(ctx, rows, f.part(d))
    if x is None:
        raise NotInSubalgebra(f"polynomial of degree {d} is not in the subalgebra")
    linear = [i for i, e in enumerate(exps) if sum(e) == 1]
    if linear:
        null = linalg.left_kernel(ctx, rows)
        if null.shape[0] and null[:, linear].any():
            raise AmbiguousExpression("generators are dependent in degree %d" % d)
    for i in linear:
        j = exps[i].index(1)
        out[j] = x[i]
    return out


# --------------------------------------------------------------------------
# substitution and ideals


def substitute(f: GradedPolynomial, polys) -> GradedPolynomial:
    """f(polys[0], ..., polys[k-1]) for f in k variables."""
    if len(polys) != f.nvars:
        raise DimMismatch(f"{len(polys)} substitutes for {f.nvars} variables")
    cache = _PowerCache(list(polys))
    n = polys[0].nvars
    out = GradedPolynomial.zero(f.ctx, n)
    for exps, c in f.terms.items():
        out = out + cache.monomial(exps).scale(c)
    return out


def linear_product(ctx: FieldCtx, vectors) -> GradedPolynomial:
    """Product of the linear forms given by the rows of ``vectors``."""
    vectors = np.asarray(vectors, dtype=np.int64)
    out = GradedPolynomial.constant(ctx, vectors.shape[1])
    for v in vectors:
        out = out * GradedPolynomial.linear_form(ctx, v)
    return out


def ideal_slice(gens, d: int) -> np.ndarray:
    """Rows spanning the degree-d part of the ideal generated by homogeneous gens."""
    ctx, n = gens[0].ctx, gens[0].nvars
    target = monomials(n, d)
    blocks = []
    for f in gens:
        k = d - f.degree
        if k < 0:
            continue
        v = f.part(f.degree)
        nz = np.nonzero(v)[0]
        shifts = monomials(n, k).exps
        rows = np.zeros((shifts.shape[0], target.dim), dtype=np.int64)
        fe = monomials(n, f.degree).exps[nz]
        for j, e in zip(nz, fe):
            cols = target.index(shifts + e[None, :])
            rows[np.arange(shifts.shape[0]), cols] = v[j]
        blocks.append(rows)
    if not blocks:
        return np.zeros((0, target.dim), dtype=np.int64)
    return np.concatenate(blocks)


def ideal_fills_degree(gens, d: int) -> bool:
    """True when the ideal generated by gens contains every form of degree d."""
    rows = ideal_slice(gens, d)
    dim = monomials(gens[0].nvars, d).dim
    return rows.shape[0] >= dim and linalg.rank(gens[0].ctx, rows) == dim


def invariant_dims(H, upto: int) -> list[int]:
    """dims of the invariant slices in degrees 0..upto, memoised on the group object."""
    cache = H.__dict__.setdefault("_invariant_dims", [])
    while len(cache) <= upto:
        d = len(cache)
        cache.append(invariant_slice(H, d).shape[0] if d else 1)
    return cache[: upto + 1]
