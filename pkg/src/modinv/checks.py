"""Structural identities that every reducible instance must satisfy.

Each check returns True/False (never raises on a mathematical failure), so
they can be tallied over fuzz campaigns.
"""
from __future__ import annotations

import numpy as np

from . import linalg
from .group import MatrixGroup, dual_matrix, fix_subgroup, is_transvection
from .invring import InvariantPresentation, fixw_coefficients
from .linalg import Subspace
from .modstruct import (ModuleClassification, complete_basis, conjugate, quotient_matrix,
                        restrict_matrix)
from .polyact import act

__all__ = [
    "transvections_of", "lines_fixed_pointwise", "elementary_abelian", "fix_conjugation",
    "quotient_dual_pairing", "dual_quotient_pairing", "annihilator_sets_agree",
    "fixw_coefficients_invariant", "perp_complement",
]


def transvections_of(G: MatrixGroup) -> list[np.ndarray]:
    return [g for g in G.elements if is_transvection(G.ctx, g)]


def lines_fixed_pointwise(G: MatrixGroup, lines) -> bool:
    """Every transvection of G fixes every G-stable line pointwise."""
    ctx = G.ctx
    trans = transvections_of(G)
    for L in lines:
        v = L.basis[0]
        for t in trans:
            if not np.array_equal(ctx.matmul(v[None], t)[0], v):
                return False
    return True


def elementary_abelian(H: MatrixGroup) -> bool:
    """All elements commute and x^p = 1."""
    ctx, p = H.ctx, H.ctx.p
    E = H.elements
    ident = linalg.identity(H.dim)
    for g in E:
        x = g
        for _ in range(p - 1):
            x = ctx.matmul(x, g)
        if not np.array_equal(x, ident):
            return False
    gens = H.generators or list(E)
    for a in gens:
        for b in gens:
            if not np.array_equal(ctx.matmul(a, b), ctx.matmul(b, a)):
                return False
    return True


def fix_conjugation(G: MatrixGroup, W: Subspace) -> bool:
    """For a transvection g and h in Fix_G(W), g^-1 h g has top row (1, alpha (g|W)).

    Coordinates are taken in a basis [v, w1, w2] with W = span(w1, w2), in
    which h = [[1, alpha], [0, I]].
    """
    ctx = G.ctx
    if W.dim != 2 or not W.is_stable(G.generators):
        return True
    v = complete_basis(ctx, list(W.basis), 3)[2]
    P = np.vstack([v[None], W.basis])
    Pinv = linalg.inverse(ctx, P)
    Fix = fix_subgroup(G, W)
    for g in transvections_of(G):
        gp = ctx.matmul(ctx.matmul(P, g), Pinv)
        gW = gp[1:, 1:]
        gpinv = linalg.inverse(ctx, gp)
        for h in Fix.elements:
            hp = ctx.matmul(ctx.matmul(P, h), Pinv)
            alpha = hp[0, 1:]
            lhs = ctx.matmul(ctx.matmul(gpinv, hp), gp)
            if lhs[0, 0] != 1 or not np.array_equal(lhs[0, 1:], ctx.matmul(alpha[None], gW)[0]):
                return False
            if not np.array_equal(lhs[1:], hp[1:]):
                return False
    return True


def perp_complement(ctx, W: Subspace) -> np.ndarray:
    """Rows completing the basis of W to a basis of the ambient space."""
    return complete_basis(ctx, list(W.basis), W.ambient_dim)[W.dim:]


def quotient_dual_pairing(G: MatrixGroup, W: Subspace) -> bool:
    """V/W and (W^perp)^* carry the same action under the evaluation pairing.

    With C a complement basis of W and F a basis of W^perp, the pairing
    M = C F^T must satisfy Q_g M D_g^T = M, where Q_g is the action on V/W
    and D_g the dual action restricted to W^perp.
    """
    ctx = G.ctx
    F = W.annihilator().basis
    if F.shape[0] == 0:
        return True
    C = perp_complement(ctx, W)
    M = ctx.matmul(C, F.T)
    if linalg.rank(ctx, M) != M.shape[0]:
        return False
    for g in G.elements:
        Q = quotient_matrix(ctx, g, W.basis, C)
        D = restrict_matrix(ctx, dual_matrix(ctx, g), F)
        if not np.array_equal(ctx.matmul(ctx.matmul(Q, M), D.T), M):
            return False
    return True


def dual_quotient_pairing(G: MatrixGroup, W: Subspace) -> bool:
    """V^*/W^perp and W^* carry the same action under the evaluation pairing."""
    ctx = G.ctx
    if W.dim == 0:
        return True
    perp = W.annihilator()
    Cs = perp_complement(ctx, perp)
    M = ctx.matmul(W.basis, Cs.T)
    if linalg.rank(ctx, M) != M.shape[0]:
        return False
    for g in G.elements:
        R = restrict_matrix(ctx, g, W.basis)
        Qs = quotient_matrix(ctx, dual_matrix(ctx, g), perp.basis, Cs)
        if not np.array_equal(ctx.matmul(ctx.matmul(R, M), Qs.T), M):
            return False
    return True


def annihilator_sets_agree(G: MatrixGroup, W: Subspace) -> bool:
    """{g : (g - I) V in W} equals {g : g acts trivially on W^perp}."""
    ctx = G.ctx
    ident = linalg.identity(G.dim)
    perp = W.annihilator().basis
    for g in G.elements:
        disp = ctx.sub(g, ident)
        left = all(W.contains(r) for r in disp)
        if perp.shape[0]:
            dual_disp = ctx.sub(dual_matrix(ctx, g), ident)
            right = not ctx.matmul(perp, dual_disp).any()
        else:
            right = True
        if left != right:
            return False
    return True


def fixw_coefficients_invariant(pres: InvariantPresentation) -> bool | None:
    """The q_i of the orbit generator are invariant under T|W.

    Returns None when the presentation was not built from a plane.
    """
    info = pres.details.get("fixw")
    if not info:
        return None
    W, v, z = info["plane"], info["vector"], info["z"]
    ctx = z.ctx
    qs = fixw_coefficients(z, W, v)
    for g in pres.subgroup.generators:
        R = restrict_matrix(ctx, g, W.basis)
        for q in qs:
            if act(R, q) != q:
                return False
    return True


def chapter_checks(G: MatrixGroup, cls: ModuleClassification, T: MatrixGroup,
                   pres: InvariantPresentation | None) -> dict[str, bool | None]:
    """All structure checks applicable to one instance; None = not applicable."""
    out: dict[str, bool | None] = {"transvections_fix_lines": lines_fixed_pointwise(G, cls.lines)}
    out["chapter_b_elementary"] = elementary_abelian(T) if cls.chapter == "B" else None
    planes = cls.planes
    out["fix_conjugation"] = all(fix_conjugation(G, W) for W in planes) if planes else None
    spaces = list(cls.planes) + list(cls.lines)
    if spaces:
        out["quotient_dual"] = all(quotient_dual_pairing(G, W) for W in spaces)
        out["dual_quotient"] = all(dual_quotient_pairing(G, W) for W in spaces)
        out["annihilators"] = all(annihilator_sets_agree(G, W) for W in spaces)
    else:
        out["quotient_dual"] = out["dual_quotient"] = out["annihilators"] = None
    out["fixw_coefficients"] = fixw_coefficients_invariant(pres) if pres is not None else None
    return out
