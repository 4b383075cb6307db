"""Enumeration of finite matrix groups and their structural subgroups.

Matrices act on row vectors from the right.  A group is enumerated by a
breadth-first product closure; every element is stored once with a byte
key so that membership tests are dictionary lookups.
"""
from __future__ import annotations

import numpy as np

from . import linalg
from .errors import CapExceeded, NotNormal, NotStable, Singular
from .gf import FieldCtx
from .linalg import Subspace

__all__ = [
    "DEFAULT_CAP", "MatrixGroup", "SubgroupHandle", "closure", "is_transvection",
    "is_pseudo_reflection", "transvection_subgroup", "fix_subgroup", "coset_reps",
    "dual_matrix", "dual_group", "subgroup_closure",
]

DEFAULT_CAP = 50_000


def _keys(stack: np.ndarray) -> list[bytes]:
    flat = np.ascontiguousarray(stack.reshape(stack.shape[0], -1).astype(np.int32))
    return [row.tobytes() for row in flat]


def _key(m: np.ndarray) -> bytes:
    return np.ascontiguousarray(m.astype(np.int32)).tobytes()


class MatrixGroup:
    """A finite matrix group with its full element list.

    ``elements[0]`` is always the identity; the remaining order is BFS
    insertion order with the generators tried in the given order.
    """

    def __init__(self, ctx: FieldCtx, dim: int, generators, elements: np.ndarray):
        self.ctx = ctx
        self.dim = dim
        self.generators = [np.asarray(g, dtype=np.int64) for g in generators]
        self.elements = elements
        self._index = {k: i for i, k in enumerate(_keys(elements))}

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    def __len__(self):
        return self.order

    def __contains__(self, m) -> bool:
        return _key(np.asarray(m)) in self._index

    def index(self, m) -> int:
        return self._index[_key(np.asarray(m))]

    def indices(self, stack: np.ndarray) -> list[int | None]:
        return [self._index.get(k) for k in _keys(stack)]

    def contains_all(self, stack: np.ndarray) -> bool:
        return all(k in self._index for k in _keys(stack))

    def __repr__(self):
        return f"MatrixGroup({self.ctx!r}, dim={self.dim}, order={self.order})"


class SubgroupHandle(MatrixGroup):
    """A subgroup of ``parent`` with normality recorded."""

    def __init__(self, parent: MatrixGroup, sub: MatrixGroup, is_normal: bool | None = None):
        super().__init__(sub.ctx, sub.dim, sub.generators, sub.elements)
        self.parent = parent
        self.is_normal = _is_normal(parent, self) if is_normal is None else is_normal
        self.extra: dict = {}


def closure(ctx: FieldCtx, generators, cap: int = DEFAULT_CAP, dim: int | None = None) -> MatrixGroup:
    """Breadth-first closure of the generators under right multiplication."""
    gens = [np.asarray(g, dtype=np.int64) for g in generators]
    if dim is None:
        if not gens:
            raise ValueError("dimension required for an empty generator list")
        dim = gens[0].shape[0]
    for g in gens:
        if g.shape != (dim, dim):
            raise ValueError(f"generator of shape {g.shape}, expected {(dim, dim)}")
        if linalg.det(ctx, g) == 0:
            raise Singular("generator is not invertible")
    ident = linalg.identity(dim)
    chunks = [ident[None]]
    seen = {_key(ident)}
    frontier = ident[None]
    count = 1
    while frontier.shape[0] and gens:
        new = []
        for g in gens:
            prods = ctx.matmul(frontier, g)
            fresh = []
            for i, k in enumerate(_keys(prods)):
                if k not in seen:
                    seen.add(k)
                    fresh.append(i)
            if fresh:
                new.append(prods[fresh])
                count += len(fresh)
                if count > cap:
                    raise CapExceeded(count, cap)
        frontier = np.concatenate(new) if new else np.zeros((0, dim, dim), dtype=np.int64)
        chunks.append(frontier)
    return MatrixGroup(ctx, dim, gens, np.concatenate(chunks))


def subgroup_closure(parent: MatrixGroup, candidates, cap: int = DEFAULT_CAP) -> SubgroupHandle:
    """Subgroup generated by the candidate elements of ``parent``.

    Generators are chosen greedily: a candidate is kept only when it is
    not already in the subgroup generated by the earlier choices.
    """
    gens: list[np.ndarray] = []
    current = closure(parent.ctx, [], cap, dim=parent.dim)
    for c in candidates:
        if c in current:
            continue
        gens.append(np.asarray(c))
        current = closure(parent.ctx, gens, cap, dim=parent.dim)
    return SubgroupHandle(parent, current)


def _displacements(ctx: FieldCtx, stack: np.ndarray) -> np.ndarray:
    n = stack.shape[-1]
    return ctx.sub(stack, linalg.identity(n)[None])


def _rank_le_one(ctx: FieldCtx, d: np.ndarray) -> np.ndarray:
    n = d.shape[-1]
    ok = np.ones(d.shape[0], dtype=bool)
    for i in range(n):
        for k in range(i + 1, n):
            for j in range(n):
                for l in range(j + 1, n):
                    minor = ctx.sub(ctx.mul(d[:, i, j], d[:, k, l]), ctx.mul(d[:, i, l], d[:, k, j]))
                    ok &= minor == 0
    return ok


def _classify_elements(ctx: FieldCtx, stack: np.ndarray):
    d = _displacements(ctx, stack)
    nonzero = d.reshape(d.shape[0], -1).any(axis=1)
    rank1 = nonzero & _rank_le_one(ctx, d)
    sq = ctx.matmul(d, d)
    square_zero = ~sq.reshape(sq.shape[0], -1).any(axis=1)
    return rank1 & square_zero, rank1


def is_transvection(ctx: FieldCtx, g) -> bool:
    """rank(g - I) = 1 and (g - I)^2 = 0."""
    g = np.asarray(g, dtype=np.int64)
    return bool(_classify_elements(ctx, g[None])[0][0])


def is_pseudo_reflection(ctx: FieldCtx, g) -> bool:
    g = np.asarray(g, dtype=np.int64)
    return bool(_classify_elements(ctx, g[None])[1][0])


def _is_normal(parent: MatrixGroup, sub: MatrixGroup) -> bool:
    if sub.order in (1, parent.order):
        return True
    ctx = parent.ctx
    sgens = sub.generators or [e for e in sub.elements[1:]]
    for g in parent.generators:
        ginv = linalg.inverse(ctx, g)
        for h in sgens:
            if ctx.matmul(ctx.matmul(ginv, h), g) not in sub:
                return False
    return True


def transvection_subgroup(G: MatrixGroup, cap: int = DEFAULT_CAP) -> SubgroupHandle:
    """T(G), the subgroup generated by all transvections of G.

    The handle's ``extra`` dict also carries W(G) (generated by all
    pseudo-reflections) and whether the two coincide.
    """
    trans, pseudo = _classify_elements(G.ctx, G.elements)
    T = subgroup_closure(G, G.elements[trans], cap)
    if np.array_equal(trans, pseudo):
        W = T
    else:
        W = subgroup_closure(G, G.elements[pseudo], cap)
    T.extra.update(
        transvection_count=int(trans.sum()),
        pseudo_reflection_count=int(pseudo.sum()),
        reflection_group=W,
        w_equals_t=W.order == T.order,
    )
    return T


def fix_subgroup(G: MatrixGroup, W: Subspace) -> SubgroupHandle:
    """Elements of G acting as the identity on W."""
    ctx = G.ctx
    if not W.is_stable(G.generators):
        raise NotStable("subspace is not stable under the group")
    if W.dim == 0:
        mask = np.ones(G.order, dtype=bool)
    else:
        img = ctx.matmul(W.basis[None], G.elements)
        mask = (img == W.basis[None]).reshape(G.order, -1).all(axis=1)
    elems = G.elements[mask]
    sub = MatrixGroup(ctx, G.dim, [], elems)
    handle = SubgroupHandle(G, sub)
    handle.generators = _greedy_generators(G, elems)
    order = handle.order
    t = 0
    while order % ctx.p == 0:
        order //= ctx.p
        t += 1
    handle.extra["p_exponent"] = t if order == 1 else None
    return handle


def _greedy_generators(parent: MatrixGroup, elems: np.ndarray) -> list[np.ndarray]:
    return subgroup_closure(parent, elems).generators


def coset_reps(G: MatrixGroup, N: MatrixGroup) -> list[np.ndarray]:
    """One representative per coset gN, the earliest in enumeration order."""
    if isinstance(N, SubgroupHandle) and N.parent is G:
        normal = N.is_normal
    else:
        normal = _is_normal(G, N)
    if not normal:
        raise NotNormal("subgroup is not normal")
    covered = np.zeros(G.order, dtype=bool)
    reps = []
    for i in range(G.order):
        if covered[i]:
            continue
        g = G.elements[i]
        reps.append(g)
        for j in G.indices(G.ctx.matmul(g[None], N.elements)):
            covered[j] = True
    return reps


def dual_matrix(ctx: FieldCtx, g) -> np.ndarray:
    """Matrix of g on the dual space: the transpose of g^{-1}."""
    return linalg.inverse(ctx, np.asarray(g, dtype=np.int64)).T.copy()


def dual_group(G: MatrixGroup, cap: int = DEFAULT_CAP) -> MatrixGroup:
    """The contragredient group, generated by the duals of G's generators."""
    if not G.generators:
        return closure(G.ctx, [], cap, dim=G.dim)
    return closure(G.ctx, [dual_matrix(G.ctx, g) for g in G.generators], cap)
