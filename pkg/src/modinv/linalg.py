"""Dense exact linear algebra over GF(p^s).

Matrices are numpy int64 arrays of element codes (see :mod:`modinv.gf`).
Vectors are rows and act on the right, so a subspace is spanned by the
rows of its basis matrix and ``kernel(m)`` is the right null space
``{v : m @ v.T = 0}``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotSquare
from .gf import FieldCtx

__all__ = [
    "Subspace", "as_matrix", "identity", "rref", "rank", "det", "det_cofactor",
    "kernel", "left_kernel", "inverse", "solve_left", "in_row_space", "span",
]


def as_matrix(ctx: FieldCtx, rows) -> np.ndarray:
    """Build a code matrix from nested lists of ints / coefficient lists."""
    return np.array([[ctx.code(e) for e in row] for row in rows], dtype=np.int64).reshape(
        len(rows), -1 if len(rows) else 0)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


try:  # compiled elimination for prime fields; numpy fallback below
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None

if njit is not None:
    @njit(cache=True)
    def _rref_prime_kernel(a, p, inv):
        nrows, ncols = a.shape
        piv = np.empty(min(nrows, ncols), dtype=np.int64)
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            k = -1
            for i in range(r, nrows):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(c, ncols):
                    t = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = t
            iv = inv[a[r, c]]
            for j in range(c, ncols):
                a[r, j] = a[r, j] * iv % p
            for i in range(nrows):
                if i != r and a[i, c] != 0:
                    f = p - a[i, c]
                    for j in range(c, ncols):
                        a[i, j] = (a[i, j] + f * a[r, j]) % p
            piv[r] = c
            r += 1
        return piv[:r]
else:  # pragma: no cover
    _rref_prime_kernel = None


def _rref_with_pivots(ctx: FieldCtx, m: np.ndarray):
    a = np.array(m, dtype=np.int64, copy=True)
    if ctx.s == 1 and _rref_prime_kernel is not None and a.size:
        piv = _rref_prime_kernel(a, ctx.p, ctx._inv)
        return a, [int(c) for c in piv]
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        if a[r, c] != 1:
            a[r] = ctx.mul(a[r], ctx.inv(a[r, c]))
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = ctx.sub(a[rows], ctx.mul(col[rows, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a, pivots


def rref(ctx: FieldCtx, m) -> tuple[np.ndarray, int]:
    """Reduced row-echelon form and rank."""
    a, piv = _rref_with_pivots(ctx, np.asarray(m, dtype=np.int64))
    return a, len(piv)


def rank(ctx: FieldCtx, m) -> int:
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return rref(ctx, m)[1]


def det(ctx: FieldCtx, m) -> int:
    """Determinant by elimination; returns an element code."""
    a = np.array(m, dtype=np.int64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"shape {a.shape}")
    n = a.shape[0]
    d = 1
    for c in range(n):
        nz = np.nonzero(a[c:, c])[0]
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            a[[c, k]] = a[[k, c]]
            d = int(ctx.neg(d))
        piv = int(a[c, c])
        d = int(ctx.mul(d, piv))
        if c + 1 < n:
            f = ctx.mul(a[c + 1:, c], ctx.inv(piv))
            a[c + 1:] = ctx.sub(a[c + 1:], ctx.mul(f[:, None], a[c][None, :]))
    return d


def det_cofactor(ctx: FieldCtx, m) -> int:
    """Determinant by Laplace expansion along the first row (small matrices)."""
    a = np.asarray(m, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return 1
    if n == 1:
        return int(a[0, 0])
    total = 0
    for j in range(n):
        if a[0, j] == 0:
            continue
        minor = np.delete(a[1:], j, axis=1)
        term = int(ctx.mul(a[0, j], det_cofactor(ctx, minor)))
        total = int(ctx.sub(total, term) if j % 2 else ctx.add(total, term))
    return total


def det3_batch(ctx: FieldCtx, g: np.ndarray) -> np.ndarray:
    """Determinants of a stack of 3x3 matrices."""
    m = ctx.mul
    t1 = m(g[:, 0, 0], ctx.sub(m(g[:, 1, 1], g[:, 2, 2]), m(g[:, 1, 2], g[:, 2, 1])))
    t2 = m(g[:, 0, 1], ctx.sub(m(g[:, 1, 0], g[:, 2, 2]), m(g[:, 1, 2], g[:, 2, 0])))
    t3 = m(g[:, 0, 2], ctx.sub(m(g[:, 1, 0], g[:, 2, 1]), m(g[:, 1, 1], g[:, 2, 0])))
    return ctx.add(ctx.sub(t1, t2), t3)


def kernel(ctx: FieldCtx, m) -> "Subspace":
    """Right null space {v : m v^T = 0} as a canonical subspace."""
    m = np.asarray(m, dtype=np.int64)
    ncols = m.shape[1]
    if m.shape[0] == 0:
        return Subspace.full(ctx, ncols)
    a, piv = _rref_with_pivots(ctx, m)
    free = np.setdiff1d(np.arange(ncols), piv)
    basis = np.zeros((free.size, ncols), dtype=np.int64)
    basis[np.arange(free.size), free] = 1
    if piv:
        basis[:, piv] = ctx.neg(a[: len(piv)][:, free].T)
    # rows are already in reduced echelon form up to ordering by pivot column
    return Subspace.from_rows(ctx, basis, ncols)


def left_kernel(ctx: FieldCtx, m) -> np.ndarray:
    """Basis rows x (in RREF) with x @ m = 0."""
    m = np.asarray(m, dtype=np.int64)
    return kernel(ctx, m.T).basis


def inverse(ctx: FieldCtx, m) -> np.ndarray:
    m = np.asarray(m, dtype=np.int64)
    n = m.shape[0]
    if m.shape != (n, n):
        raise NotSquare(f"shape {m.shape}")
    a, piv = _rref_with_pivots(ctx, np.concatenate([m, identity(n)], axis=1))
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return a[:, n:]


def solve_left(ctx: FieldCtx, a, b) -> np.ndarray | None:
    """Some x with x @ a = b (b a row vector), or None if none exists."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(1, -1)
    k = a.shape[0]
    aug = np.concatenate([a.T, b.T], axis=1)
    r, piv = _rref_with_pivots(ctx, aug)
    if k in piv:
        return None
    x = np.zeros(k, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = r[row, k]
    return x


def in_row_space(ctx: FieldCtx, basis, v) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    if basis.shape[0] == 0:
        return not np.any(v)
    return rank(ctx, np.vstack([basis, np.asarray(v).reshape(1, -1)])) == rank(ctx, basis)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of ctx^n stored by its reduced row-echelon basis."""

    ctx: FieldCtx
    ambient_dim: int
    basis: np.ndarray

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows, ambient_dim: int | None = None) -> "Subspace":
        rows = np.asarray(rows, dtype=np.int64)
        n = ambient_dim if ambient_dim is not None else rows.shape[1]
        rows = rows.reshape(-1, n)
        if rows.shape[0] == 0:
            return cls(ctx, n, np.zeros((0, n), dtype=np.int64))
        a, r = rref(ctx, rows)
        return cls(ctx, n, a[:r])

    @classmethod
    def full(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, identity(n))

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "Subspace":
        return cls(ctx, n, np.zeros((0, n), dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def key(self) -> tuple:
        return (self.ambient_dim,) + tuple(int(x) for x in self.basis.ravel())

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ctx == other.ctx and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    def contains(self, v) -> bool:
        return in_row_space(self.ctx, self.basis, v)

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def intersect(self, other: "Subspace") -> "Subspace":
        # v = x A = y B  <=>  [x, -y] [A; B] = 0
        a, b = self.basis, other.basis
        if a.shape[0] == 0 or b.shape[0] == 0:
            return Subspace.zero(self.ctx, self.ambient_dim)
        lk = left_kernel(self.ctx, np.vstack([a, b]))
        rows = self.ctx.matmul(lk[:, : a.shape[0]], a) if lk.shape[0] else lk[:, :0]
        return Subspace.from_rows(self.ctx, rows.reshape(-1, self.ambient_dim), self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """{f : v . f = 0 for all v in self}, inside the dual coordinates."""
        if self.dim == 0:
            return Subspace.full(self.ctx, self.ambient_dim)
        return kernel(self.ctx, self.basis)

    def is_stable(self, gens) -> bool:
        """True when v g lies in the subspace for every basis row v and generator g."""
        for g in gens:
            img = self.ctx.matmul(self.basis, g)
            for row in img:
                if not self.contains(row):
                    return False
        return True

    def to_json(self):
        return [[self.ctx.serialize_elem(x) for x in row] for row in self.basis]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={self.basis.tolist()})"


def span(ctx: FieldCtx, *vectors) -> Subspace:
    rows = np.array(vectors, dtype=np.int64)
    return Subspace.from_rows(ctx, rows.reshape(len(vectors), -1))
