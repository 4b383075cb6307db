"""Submodule structure of V = F^3 under a matrix group and the chapter split.

Chapters follow the standard case analysis of reducible three-dimensional
modules: ``A`` decomposable, ``B`` at least two stable planes, ``D`` one
plane and no line, ``E`` one line and no plane, ``F`` one line inside one
plane, ``G`` at least two lines.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import ClassificationAnomaly, NotSL, NotStable
from .gf import FieldCtx
from .group import MatrixGroup, dual_matrix
from .linalg import Subspace

__all__ = [
    "ModuleClassification", "PerpModule", "stable_subspaces", "stable_lines",
    "stable_hyperplanes", "classify_case", "perp_module", "restrict_matrix",
    "quotient_matrix", "complete_basis", "conjugate", "CHAPTERS",
]

CHAPTERS = ("A", "B", "D", "E", "F", "G", "IRREDUCIBLE")
_SCAN_LIMIT = 81


@dataclass
class ModuleClassification:
    chapter: str
    lines: list[Subspace]
    planes: list[Subspace]
    decomposition: tuple[Subspace, Subspace] | None
    adapted_basis: np.ndarray
    notes: list[str] = field(default_factory=list)

    def to_json(self, ctx: FieldCtx) -> dict:
        return {
            "chapter": self.chapter,
            "lines": [l.to_json() for l in self.lines],
            "planes": [w.to_json() for w in self.planes],
            "decomposition": None if self.decomposition is None else
            {"line": self.decomposition[0].to_json(), "plane": self.decomposition[1].to_json()},
            "adapted_basis": [[ctx.serialize_elem(x) for x in row] for row in self.adapted_basis],
            "notes": list(self.notes),
        }


# --------------------------------------------------------------------------
# small helpers


def _normalized_vectors(ctx: FieldCtx, n: int) -> np.ndarray:
    """One representative (first nonzero entry 1) of every line in F^n."""
    q = ctx.q
    out = []
    for lead in range(n):
        tail = n - lead - 1
        rest = np.array(list(itertools.product(range(q), repeat=tail)), dtype=np.int64).reshape(
            q ** tail, tail)
        block = np.zeros((rest.shape[0], n), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = rest
        out.append(block)
    return np.concatenate(out)


def _parallel(ctx: FieldCtx, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Row-wise test that w lies in the span of v (v nonzero)."""
    n = v.shape[1]
    ok = np.ones(v.shape[0], dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            ok &= ctx.sub(ctx.mul(v[:, i], w[:, j]), ctx.mul(v[:, j], w[:, i])) == 0
    return ok


def _scan_lines(ctx: FieldCtx, gens, n: int) -> list[Subspace]:
    vecs = _normalized_vectors(ctx, n)
    mask = np.ones(vecs.shape[0], dtype=bool)
    for g in gens:
        mask &= _parallel(ctx, vecs, ctx.matmul(vecs, g))
    return sorted(Subspace.from_rows(ctx, v[None], n) for v in vecs[mask])


def _eigen_lines(ctx: FieldCtx, gens, n: int) -> list[Subspace]:
    """Stable lines via eigenspaces of the first non-scalar generator."""
    pivot = None
    for g in gens:
        if not np.array_equal(g, np.where(np.eye(n, dtype=bool), g[0, 0], 0)):
            pivot = g
            break
    if pivot is None:
        return _scan_lines(ctx, gens, n)
    candidates: list[np.ndarray] = []
    for lam in range(ctx.q):
        m = ctx.sub(pivot, np.where(np.eye(n, dtype=bool), lam, 0))
        # v (g - lam I) = 0  <=>  (g - lam I)^T v^T = 0
        space = linalg.kernel(ctx, m.T)
        if space.dim == 0:
            continue
        coeffs = _normalized_vectors(ctx, space.dim)
        candidates.append(ctx.matmul(coeffs, space.basis))
    if not candidates:
        return []
    vecs = np.concatenate(candidates)
    mask = np.ones(vecs.shape[0], dtype=bool)
    for g in gens:
        mask &= _parallel(ctx, vecs, ctx.matmul(vecs, g))
    return sorted({Subspace.from_rows(ctx, v[None], n) for v in vecs[mask]})


def stable_lines(ctx: FieldCtx, gens, n: int, method: str = "auto") -> list[Subspace]:
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    if method == "scan" or (method == "auto" and ctx.q <= _SCAN_LIMIT and n <= 3):
        return _scan_lines(ctx, gens, n)
    return _eigen_lines(ctx, gens, n)


def stable_hyperplanes(ctx: FieldCtx, gens, n: int, method: str = "auto") -> list[Subspace]:
    """Stable hyperplanes, as annihilators of the dual group's stable lines."""
    duals = [dual_matrix(ctx, g) for g in gens]
    return sorted(l.annihilator() for l in stable_lines(ctx, duals, n, method))


def stable_subspaces(G: MatrixGroup, d: int, method: str = "auto") -> list[Subspace]:
    """All G-stable subspaces of dimension d (1 or n - 1)."""
    n = G.dim
    if d == 1:
        return stable_lines(G.ctx, G.generators, n, method)
    if d == n - 1:
        return stable_hyperplanes(G.ctx, G.generators, n, method)
    raise ValueError("only lines and hyperplanes are supported")


def complete_basis(ctx: FieldCtx, rows, n: int) -> np.ndarray:
    """Extend independent rows to a basis with standard basis vectors."""
    rows = [np.asarray(r, dtype=np.int64) for r in rows]
    for i in range(n):
        if len(rows) == n:
            break
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        if linalg.rank(ctx, np.array(rows + [e])) == len(rows) + 1:
            rows.append(e)
    return np.array(rows, dtype=np.int64)


def _vector_outside(ctx: FieldCtx, sub: Subspace, candidates) -> np.ndarray:
    for v in candidates:
        if not sub.contains(v):
            return np.asarray(v, dtype=np.int64)
    raise ValueError("no candidate outside the subspace")


def conjugate(ctx: FieldCtx, basis: np.ndarray, g) -> np.ndarray:
    """Matrix of g in the basis given by the rows of ``basis``: P g P^-1."""
    return ctx.matmul(ctx.matmul(basis, g), linalg.inverse(ctx, basis))


def restrict_matrix(ctx: FieldCtx, g, basis: np.ndarray) -> np.ndarray:
    """R with basis @ g == R @ basis, for a g-stable row space."""
    img = ctx.matmul(basis, g)
    out = []
    for row in img:
        x = linalg.solve_left(ctx, basis, row)
        if x is None:
            raise NotStable("subspace is not stable under the matrix")
        out.append(x)
    return np.array(out, dtype=np.int64).reshape(basis.shape[0], basis.shape[0])


def quotient_matrix(ctx: FieldCtx, g, sub_basis: np.ndarray, complement: np.ndarray) -> np.ndarray:
    """Matrix of g on V / sub in the basis given by the images of ``complement``."""
    full = np.concatenate([complement, sub_basis]) if sub_basis.shape[0] else complement
    k = complement.shape[0]
    img = ctx.matmul(complement, g)
    out = []
    for row in img:
        x = linalg.solve_left(ctx, full, row)
        out.append(x[:k])
    return np.array(out, dtype=np.int64).reshape(k, k)


# --------------------------------------------------------------------------
# classification


def _adapted_basis(ctx, chapter, lines, planes, decomposition, n) -> np.ndarray:
    std = list(linalg.identity(n))
    if chapter == "A":
        line, plane = decomposition
        return np.concatenate([plane.basis, line.basis])
    if chapter == "B":
        w1_space, w2_space = planes[0], planes[1]
        v = w1_space.intersect(w2_space).basis[0]
        fv = Subspace.from_rows(ctx, v[None], n)
        w1 = _vector_outside(ctx, fv, w1_space.basis)
        w2 = _vector_outside(ctx, fv, w2_space.basis)
        return np.array([w2, w1, v])
    if chapter == "D":
        plane = planes[0]
        v = _vector_outside(ctx, plane, std)
        return np.array([v, plane.basis[0], plane.basis[1]])
    if chapter == "E":
        v0 = lines[0].basis[0]
        rest = complete_basis(ctx, [v0], n)[1:]
        return np.array([rest[0], rest[1], v0])
    if chapter == "F":
        v0 = lines[0].basis[0]
        w1 = _vector_outside(ctx, lines[0], planes[0].basis)
        w2 = _vector_outside(ctx, planes[0], std)
        return np.array([w2, w1, v0])
    if chapter == "G":
        w1, w2 = lines[0].basis[0], lines[1].basis[0]
        plane = Subspace.from_rows(ctx, np.array([w1, w2]), n)
        v = _vector_outside(ctx, plane, std)
        return np.array([v, w1, w2])
    return linalg.identity(n)


def _is_sl(ctx: FieldCtx, gens) -> bool:
    return all(linalg.det(ctx, g) == 1 for g in gens)


def classify_case(G: MatrixGroup, require_sl: bool = True) -> ModuleClassification:
    """Chapter tag, stable lines/planes, decomposition and adapted basis."""
    ctx, n = G.ctx, G.dim
    if n != 3:
        raise ValueError("classification is defined for three-dimensional modules")
    if require_sl and not _is_sl(ctx, G.generators):
        raise NotSL("some generator has determinant different from 1")
    lines = stable_subspaces(G, 1)
    planes = stable_subspaces(G, 2)
    decomposition = None
    for w in planes:
        for l in lines:
            if not w.contains_space(l):
                decomposition = (l, w)
                break
        if decomposition:
            break
    notes: list[str] = []
    if decomposition:
        chapter = "A"
    elif len(planes) >= 2 and len(lines) >= 2:
        raise ClassificationAnomaly(
            f"indecomposable with {len(lines)} lines and {len(planes)} planes")
    elif len(planes) >= 2:
        chapter = "B"
    elif len(lines) >= 2:
        chapter = "G"
    elif len(lines) == 1 and len(planes) == 1:
        if not planes[0].contains_space(lines[0]):  # pragma: no cover - decomposable
            raise ClassificationAnomaly("line outside the plane but no decomposition")
        chapter = "F"
    elif len(planes) == 1:
        chapter = "D"
    elif len(lines) == 1:
        chapter = "E"
    else:
        chapter = "IRREDUCIBLE"
    if chapter in ("D", "E", "F") and ctx.s > 1:
        notes.append("closed forms cover prime fields only; results over GF(p^s) rest on the other routes")
    basis = _adapted_basis(ctx, chapter, lines, planes, decomposition, n)
    return ModuleClassification(chapter, lines, planes, decomposition, basis, notes)


# --------------------------------------------------------------------------
# annihilators in the dual


@dataclass
class PerpModule:
    """W^perp inside V* with the contragredient action restricted to it."""

    space: Subspace
    ctx: FieldCtx

    def action(self, g) -> np.ndarray:
        """Matrix of the dual of g on the chosen basis of W^perp."""
        if self.space.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return restrict_matrix(self.ctx, dual_matrix(self.ctx, g), self.space.basis)


def perp_module(G: MatrixGroup, W: Subspace) -> PerpModule:
    """The annihilator of a G-stable subspace W, as a module for the dual group."""
    if not W.is_stable(G.generators):
        raise NotStable("subspace is not stable under the group")
    return PerpModule(W.annihilator(), G.ctx)
