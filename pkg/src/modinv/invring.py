"""Generators for the invariant ring of the transvection subgroup T(G).

Two explicit constructions cover the reducible three-dimensional cases:

* ``hyperplane-orbit``: pick a T-stable plane W.  The restriction T|W is a
  two-dimensional transvection group whose invariants (f1, f2) are known in
  closed form (trivial, reducible, Dickson, monomial-dihedral or the
  exceptional SL(2,5) inside SL(2,9)).  A third generator z is the orbit
  product of a vector outside W whose orbit is exactly its Fix_T(W)-orbit;
  it is built by the p-power recursion of :func:`fixw_invariant`.
* ``line-quotient``: T fixes a line U = F v0 and acts on V/U through
  SL(2, p) with kernel N of order p^2.  The N-orbit products a_i of a basis
  of a complement transform linearly, so Dickson invariants in (a_1, a_2)
  together with v0 generate.

Anything else goes to :func:`general_generator_search`.  Every presentation
returned by :func:`construct_tg_invariants` has passed
:func:`certify_polynomial_ring`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import linalg
from .errors import (CertificationFailed, FieldTooSmall, NoConstructionApplies,
                     NotElementaryFixGroup)
from .gf import FieldCtx, field_create
from .group import MatrixGroup, closure, fix_subgroup, transvection_subgroup
from .linalg import Subspace
from .modstruct import ModuleClassification, quotient_matrix, restrict_matrix, stable_hyperplanes, \
    stable_lines
from .polyact import (GradedPolynomial, _PowerCache, act, degree_bound, generator_monomials,
                      ideal_fills_degree, invariant_dims, invariant_slice, linear_product,
                      subalgebra_degree_basis, subalgebra_dim, substitute)

__all__ = [
    "Certificate", "InvariantPresentation", "SearchFailure", "BinaryInvariants",
    "fixw_invariant", "fixw_coefficients", "elementary_generators", "dickson_sl2",
    "binary_case", "binary_invariants", "construct_tg_invariants",
    "certify_polynomial_ring", "general_generator_search", "orbit_vectors",
]

# above this total degree the hsop saturation check is skipped
_HSOP_DEGREE_CAP = 40
# at most this many complement vectors are tried for the orbit generator
_ORBIT_SEARCH_LIMIT = 4096
_PLANE_ATTEMPTS = 6


@dataclass
class Certificate:
    product_of_degrees: int
    group_order: int
    hilbert_match_bound: int
    independent: bool
    passed: bool
    bound: int
    hsop_degree: int | None = None
    first_mismatch: dict | None = None

    def to_json(self) -> dict:
        return {
            "product_of_degrees": self.product_of_degrees,
            "group_order": self.group_order,
            "hilbert_match_bound": self.hilbert_match_bound,
            "bound": self.bound,
            "independent": self.independent,
            "hsop_degree": self.hsop_degree,
            "passed": self.passed,
            "first_mismatch": self.first_mismatch,
        }


@dataclass
class InvariantPresentation:
    subgroup: MatrixGroup
    gens: list[GradedPolynomial]
    construction: str
    certificate: Certificate | None = None
    details: dict = field(default_factory=dict)

    @property
    def degrees(self) -> list[int]:
        return [g.degree for g in self.gens]

    @property
    def certified(self) -> bool:
        return self.certificate is not None and self.certificate.passed

    def to_json(self) -> dict:
        details = {k: v for k, v in self.details.items() if _jsonable(v)}
        return {
            "construction": self.construction,
            "subgroup_order": self.subgroup.order,
            "degrees": self.degrees,
            "generators": [g.to_json() for g in self.gens],
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "details": details,
        }


@dataclass
class SearchFailure:
    """Returned (not raised) when the greedy search does not close up."""

    reason: str
    degrees: list[int]

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"search_failure": self.reason, "degrees": self.degrees}


def _jsonable(v) -> bool:
    return isinstance(v, (str, int, float, bool, type(None))) or (
        isinstance(v, (list, tuple)) and all(_jsonable(x) for x in v)) or (
        isinstance(v, dict) and all(isinstance(k, str) and _jsonable(x) for k, x in v.items()))


# --------------------------------------------------------------------------
# elementary abelian pieces


def _fp_digits(ctx: FieldCtx, m: np.ndarray) -> np.ndarray:
    """Flatten a code array into its F_p coordinate vector."""
    return ctx.digits[np.asarray(m, dtype=np.int64).ravel()].ravel()


def elementary_generators(ctx: FieldCtx, elements) -> list[np.ndarray]:
    """Minimal generators of an elementary abelian group of the form I + D.

    The displacements D = g - I are echelonized over F_p; the elements
    contributing new pivots are kept.
    """
    prime = field_create(ctx.p)
    n = elements[0].shape[0]
    ident = linalg.identity(n)
    rows: list[np.ndarray] = []
    chosen = []
    rank = 0
    for g in elements:
        vec = _fp_digits(ctx, ctx.sub(g, ident))
        if not vec.any():
            continue
        trial = np.array(rows + [vec])
        r = linalg.rank(prime, trial)
        if r > rank:
            rows.append(vec)
            chosen.append(np.asarray(g))
            rank = r
    return chosen


def _p_exponent(p: int, order: int) -> int | None:
    t = 0
    while order % p == 0:
        order //= p
        t += 1
    return t if order == 1 else None


def _outside_vector(ctx: FieldCtx, W: Subspace) -> np.ndarray:
    for e in linalg.identity(W.ambient_dim):
        if not W.contains(e):
            return e
    raise ValueError("subspace is the whole space")


def fixw_invariant(Fix: MatrixGroup, W: Subspace, v=None) -> GradedPolynomial:
    """The generator z with S(V)^Fix = S(W)[z], by the p-power recursion.

    ``z_1 = v^p - ((s_1 - I) v)^(p-1) v`` and the same step applied to the
    previous z for every further minimal generator s_i.
    """
    ctx, n = Fix.ctx, Fix.dim
    p = ctx.p
    t = _p_exponent(p, Fix.order)
    if t is None:
        raise NotElementaryFixGroup(f"order {Fix.order} is not a power of {p}")
    elems = Fix.elements
    if W.dim:
        img = ctx.matmul(W.basis[None], elems)
        if not (img == W.basis[None]).all():
            raise NotElementaryFixGroup("some element moves a vector of W")
    v = _outside_vector(ctx, W) if v is None else np.asarray(v, dtype=np.int64)
    if W.contains(v):
        raise ValueError("starting vector lies in W")
    disp = ctx.sub(ctx.matmul(v[None, None, :], elems)[:, 0, :], v[None, :])
    for row in disp:
        if not W.contains(row):
            raise NotElementaryFixGroup("an element acts nontrivially on V/W")
    z = GradedPolynomial.linear_form(ctx, v)
    if t == 0:
        return z
    gens = elementary_generators(ctx, list(elems[1:]))
    if len(gens) != t:
        raise NotElementaryFixGroup(f"{len(gens)} independent displacements for order p^{t}")
    for s in gens:
        d = act(s, z) - z
        if d.is_zero():
            raise NotElementaryFixGroup("generator fixes the current polynomial")
        z = z ** p - d ** (p - 1) * z
    check = Fix.generators if Fix.generators else list(elems[1:])
    for g in check:
        if act(g, z) != z:
            raise NotElementaryFixGroup("recursion output is not invariant")
    return z


def fixw_coefficients(z: GradedPolynomial, W: Subspace, v) -> list[GradedPolynomial]:
    """q_1..q_t with z = v^(p^t) + q_1 v^(p^(t-1)) + ... + q_t v.

    The q_i are returned as polynomials in the coordinates of W's basis.
    """
    ctx = z.ctx
    basis = np.vstack([np.asarray(v, dtype=np.int64)[None], W.basis])
    local = act(linalg.inverse(ctx, basis), z)
    deg = z.degree
    t = _p_exponent(ctx.p, deg)
    if t is None:
        raise NotElementaryFixGroup("degree is not a power of p")
    powers = {ctx.p ** (t - i): i for i in range(t + 1)}
    buckets: dict[int, list] = {i: [] for i in range(t + 1)}
    for exps, c in local.terms.items():
        if exps[0] not in powers:
            raise NotElementaryFixGroup(f"unexpected power v^{exps[0]}")
        buckets[powers[exps[0]]].append(((exps[1], exps[2]), c))
    lead = dict(buckets[0])
    if lead != {(0, 0): 1}:
        raise NotElementaryFixGroup("leading coefficient is not v^(p^t)")
    return [GradedPolynomial.from_terms(ctx, 2, buckets[i]) if buckets[i]
            else GradedPolynomial.zero(ctx, 2) for i in range(1, t + 1)]


def orbit_vectors(H: MatrixGroup, v) -> np.ndarray:
    """Distinct images of the row vector v under H."""
    v = np.asarray(v, dtype=np.int64)
    imgs = H.ctx.matmul(v[None, None, :], H.elements)[:, 0, :]
    return np.unique(imgs, axis=0)


# --------------------------------------------------------------------------
# two-variable subproblem


@dataclass
class BinaryInvariants:
    f1: GradedPolynomial
    f2: GradedPolynomial
    tag: str
    details: dict = field(default_factory=dict)


def _subfield_degrees(ctx: FieldCtx):
    return [k for k in range(1, ctx.s + 1) if ctx.s % k == 0]


def binary_case(ctx: FieldCtx, H2: MatrixGroup) -> tuple[str, dict]:
    """Shape of a two-dimensional transvection group.

    Tags: ``trivial``, ``reducible`` (fixes a line pointwise), ``dickson``
    (order of SL(2, q') for a subfield q'), ``monomial-dihedral`` (p = 2,
    order 2d with d odd), ``exceptional-sl2f5`` (p = 3, order 120) and
    ``other``.
    """
    if H2.order == 1:
        return "trivial", {}
    lines = stable_lines(ctx, H2.generators, 2)
    if lines:
        return "reducible", {"line": lines[0], "n": _p_exponent(ctx.p, H2.order)}
    h = H2.order
    for k in _subfield_degrees(ctx):
        q = ctx.p ** k
        if h == q * (q * q - 1):
            return "dickson", {"q": q}
    if ctx.p == 2 and h % 2 == 0 and (h // 2) % 2 == 1 and h > 2:
        return "monomial-dihedral", {"d": h // 2}
    if ctx.p == 3 and ctx.s % 2 == 0 and h == 120:
        return "exceptional-sl2f5", {}
    return "other", {}


def _in_span(ctx: FieldCtx, rows: np.ndarray, v: np.ndarray) -> bool:
    if rows.shape[0] == 0:
        return not v.any()
    return linalg.in_row_space(ctx, rows, v)


def _invariant_outside(H: MatrixGroup, d: int, gens) -> GradedPolynomial | None:
    """First echelon invariant of degree d outside the subalgebra slice of gens."""
    ctx, n = H.ctx, H.dim
    inv = invariant_slice(H, d)
    if gens:
        span = subalgebra_degree_basis(gens, d)[0]
    else:
        span = np.zeros((0, inv.shape[1] if inv.size else 1), dtype=np.int64)
    for row in inv:
        if not _in_span(ctx, span, row):
            return GradedPolynomial(ctx, n, {d: row})
    return None


def _greedy(H: MatrixGroup, maxdeg: int, target: int):
    """Degree-ascending greedy generator search; returns gens or a SearchFailure."""
    ctx, n = H.ctx, H.dim
    gens: list[GradedPolynomial] = []
    for d in range(1, maxdeg + 1):
        inv = invariant_slice(H, d)
        if inv.shape[0] == 0:
            continue
        span = subalgebra_degree_basis(gens, d)[0] if gens else np.zeros((0, inv.shape[1]),
                                                                         dtype=np.int64)
        for row in inv:
            if not _in_span(ctx, span, row):
                gens.append(GradedPolynomial(ctx, n, {d: row}))
                span = np.vstack([span, row[None]])
                if len(gens) > target:
                    return SearchFailure(f"more than {target} generators needed",
                                         [g.degree for g in gens])
        if len(gens) == target and math.prod(g.degree for g in gens) == H.order:
            return gens
    return SearchFailure(f"no closing generator set up to degree {maxdeg}",
                         [g.degree for g in gens])


def _subfield_elements(ctx: FieldCtx, k: int) -> np.ndarray:
    codes = np.arange(ctx.q, dtype=np.int64)
    return codes[ctx.is_subfield_elem(codes, k)]


def _sl2_generators(ctx: FieldCtx, q: int) -> list[np.ndarray]:
    k = round(math.log(q, ctx.p))
    sub = _subfield_elements(ctx, k)
    prime = field_create(ctx.p)
    # an F_p-basis of the subfield
    basis, rows = [], []
    for c in sub:
        if c == 0:
            continue
        vec = ctx.digits[int(c)]
        trial = np.array(rows + [vec])
        if linalg.rank(prime, trial) > len(rows):
            rows.append(vec)
            basis.append(int(c))
    gens = []
    for c in basis:
        gens.append(np.array([[1, c], [0, 1]], dtype=np.int64))
        gens.append(np.array([[1, 0], [c, 1]], dtype=np.int64))
    return gens


def dickson_sl2(ctx: FieldCtx, q: int) -> tuple[GradedPolynomial, GradedPolynomial]:
    """Generators (u, c) of the SL(2, F_q) invariants in two variables.

    Found by brute force at degrees q + 1 and q^2 - q.
    """
    k = round(math.log(q, ctx.p)) if q > 1 else 0
    if q < 2 or ctx.p ** k != q or ctx.s % k:
        raise FieldTooSmall(f"GF({q}) is not a subfield of GF({ctx.q})")
    H = closure(ctx, _sl2_generators(ctx, q))
    u = _invariant_outside(H, q + 1, [])
    c = _invariant_outside(H, q * q - q, [u])
    if u is None or c is None or (q + 1) * (q * q - q) != H.order:
        raise CertificationFailed("Dickson invariants not found", {"order": H.order})
    return u, c


# the exceptional binary forms for SL(2, 5) inside SL(2, 9)
_F10 = [((9, 1), 1), ((1, 9), -1)]
_F12 = [((12, 0), 1), ((10, 2), 1), ((6, 6), -1), ((2, 10), 1), ((0, 12), -1)]


def _exceptional_forms(ctx: FieldCtx):
    f10 = GradedPolynomial.from_terms(ctx, 2, [(e, c % 3) for e, c in _F10])
    f12 = GradedPolynomial.from_terms(ctx, 2, [(e, c % 3) for e, c in _F12])
    return f10, f12


@lru_cache(maxsize=4)
def _exceptional_group(ctx: FieldCtx):
    """Elements of SL(2, 9) fixing both exceptional forms; must be 120 of them."""
    f10, f12 = _exceptional_forms(ctx)
    sub = _subfield_elements(ctx, 2)
    grid = np.array(np.meshgrid(sub, sub, sub, sub, indexing="ij")).reshape(4, -1).T
    mats = grid.reshape(-1, 2, 2)
    dets = ctx.sub(ctx.mul(mats[:, 0, 0], mats[:, 1, 1]), ctx.mul(mats[:, 0, 1], mats[:, 1, 0]))
    keep = [m for m in mats[dets == 1] if act(m, f10) == f10 and act(m, f12) == f12]
    stack = np.array(keep, dtype=np.int64)
    if stack.shape[0] != 120:
        raise CertificationFailed("exceptional forms have the wrong stabilizer",
                                  {"stabilizer_order": int(stack.shape[0])})
    return stack, {m.astype(np.int32).tobytes() for m in stack}


def _inverse2(ctx: FieldCtx, P: np.ndarray) -> np.ndarray:
    det = ctx.sub(ctx.mul(P[:, 0, 0], P[:, 1, 1]), ctx.mul(P[:, 0, 1], P[:, 1, 0]))
    inv = ctx.inv(det)
    out = np.empty_like(P)
    out[:, 0, 0] = ctx.mul(P[:, 1, 1], inv)
    out[:, 1, 1] = ctx.mul(P[:, 0, 0], inv)
    out[:, 0, 1] = ctx.mul(ctx.neg(P[:, 0, 1]), inv)
    out[:, 1, 0] = ctx.mul(ctx.neg(P[:, 1, 0]), inv)
    return out


def _exceptional_invariants(ctx: FieldCtx, H2: MatrixGroup):
    """Transport f10, f12 to H2 by a change of basis P with P H2 P^-1 standard."""
    _, keys = _exceptional_group(ctx)
    sub = _subfield_elements(ctx, 2)
    heads = [np.array([1, b]) for b in sub] + [np.array([0, 1])]
    cands = []
    for h in heads:
        for c in sub:
            for d in sub:
                cands.append([h, [c, d]])
    P = np.array(cands, dtype=np.int64)
    det = ctx.sub(ctx.mul(P[:, 0, 0], P[:, 1, 1]), ctx.mul(P[:, 0, 1], P[:, 1, 0]))
    P = P[det != 0]
    Pinv = _inverse2(ctx, P)
    ok = np.ones(P.shape[0], dtype=bool)
    for g in H2.generators:
        conj = ctx.matmul(ctx.matmul(P, g), Pinv)
        flat = conj.astype(np.int32).reshape(conj.shape[0], -1)
        ok &= np.array([row.tobytes() in keys for row in flat])
    hits = np.nonzero(ok)[0]
    if hits.size == 0:
        return None
    Q = P[hits[0]]
    f10, f12 = _exceptional_forms(ctx)
    return act(Q, f10), act(Q, f12), Q


def binary_invariants(ctx: FieldCtx, H2: MatrixGroup) -> BinaryInvariants | None:
    """Generators of the invariants of a two-dimensional transvection group."""
    tag, info = binary_case(ctx, H2)
    x1 = GradedPolynomial.variable(ctx, 2, 0)
    x2 = GradedPolynomial.variable(ctx, 2, 1)
    if tag == "trivial":
        return BinaryInvariants(x1, x2, tag)
    if tag == "reducible":
        line = info["line"]
        try:
            f2 = fixw_invariant(H2, line)
        except NotElementaryFixGroup:
            return None
        return BinaryInvariants(GradedPolynomial.linear_form(ctx, line.basis[0]), f2, tag,
                                {"n": info["n"]})
    if tag == "dickson":
        q = info["q"]
        u = _invariant_outside(H2, q + 1, [])
        c = _invariant_outside(H2, q * q - q, [u]) if u is not None else None
        if u is not None and c is not None:
            return BinaryInvariants(u, c, tag, {"q": q})
    elif tag == "monomial-dihedral":
        found = _monomial_invariants(ctx, H2, info["d"])
        if found is not None:
            return BinaryInvariants(found[0], found[1], tag, {"d": info["d"]})
    elif tag == "exceptional-sl2f5":
        found = _exceptional_invariants(ctx, H2)
        if found is not None:
            return BinaryInvariants(found[0], found[1], tag,
                                    {"basis": found[2].tolist()})
    gens = _greedy(H2, min(max(H2.order, 2), 2 * H2.order), 2)
    if isinstance(gens, SearchFailure):
        return None
    return BinaryInvariants(gens[0], gens[1], "search", {"shape": tag})


def _monomial_invariants(ctx: FieldCtx, H2: MatrixGroup, d: int):
    """x1 x2 and x1^d + beta x2^d on the two lines permuted by H2."""
    from .modstruct import _normalized_vectors
    reps = _normalized_vectors(ctx, 2)
    pair = None
    for v in reps:
        orbit = orbit_vectors(H2, v)
        lines = {Subspace.from_rows(ctx, r[None], 2) for r in orbit}
        if len(lines) == 2:
            pair = sorted(lines)
            break
    if pair is None:
        return None
    a = GradedPolynomial.linear_form(ctx, pair[0].basis[0])
    b = GradedPolynomial.linear_form(ctx, pair[1].basis[0])
    f1 = a * b
    ad, bd = a ** d, b ** d
    for beta in range(1, ctx.q):
        f2 = ad + bd.scale(beta)
        if all(act(g, f2) == f2 for g in H2.generators) and all(
                act(g, f1) == f1 for g in H2.generators):
            return f1, f2
    return None


# --------------------------------------------------------------------------
# certification


def certify_polynomial_ring(pres, H: MatrixGroup, bound: int | None = None) -> Certificate:
    """Product-of-degrees plus per-degree Hilbert match up to ``bound``.

    ``pres`` may be an :class:`InvariantPresentation` or a list of
    homogeneous generators.  Never raises; the first mismatch is recorded.
    """
    gens = pres.gens if isinstance(pres, InvariantPresentation) else list(pres)
    bound = degree_bound() if bound is None else bound
    degs = [g.degree for g in gens]
    prod = math.prod(degs)
    mismatch = None
    if prod != H.order:
        mismatch = {"reason": "product_of_degrees", "product": prod, "order": H.order}
    for g in gens:
        for s in H.generators:
            if act(s, g) != g:
                mismatch = mismatch or {"reason": "not_invariant", "degree": g.degree}
                break
    dims = invariant_dims(H, bound)
    cache = _PowerCache(gens)
    matched = -1
    dim_mismatch = None
    for d in range(bound + 1):
        series = len(generator_monomials(degs, d))
        sub = subalgebra_dim(gens, d, cache) if d else 1
        if not (series == sub == dims[d]):
            dim_mismatch = {"reason": "dimension", "degree": d, "series": series,
                            "subalgebra": sub, "invariants": dims[d]}
            break
        matched = d
    mismatch = mismatch or dim_mismatch
    hsop = None
    total = sum(degs) - 2
    if len(gens) == H.dim and total <= _HSOP_DEGREE_CAP and dim_mismatch is None:
        if ideal_fills_degree(gens, max(total, 0)):
            hsop = max(total, 0)
    passed = mismatch is None
    return Certificate(prod, H.order, matched, dim_mismatch is None, passed, bound, hsop, mismatch)


# --------------------------------------------------------------------------
# constructions


def _lift(ctx: FieldCtx, f2: GradedPolynomial, basis2: np.ndarray) -> GradedPolynomial:
    """A polynomial in W-coordinates as a polynomial on V."""
    forms = [GradedPolynomial.linear_form(ctx, r) for r in basis2]
    return substitute(f2, forms)


def _orbit_vector(T: MatrixGroup, W: Subspace, size: int):
    """A vector outside W whose T-orbit has exactly ``size`` elements."""
    ctx = T.ctx
    v0 = _outside_vector(ctx, W)
    count = 0
    for coeffs in np.ndindex(*(ctx.q,) * W.dim):
        count += 1
        if count > _ORBIT_SEARCH_LIMIT:
            break
        w = ctx.sum(ctx.mul(np.array(coeffs)[:, None], W.basis), axis=0) if W.dim else 0
        v = ctx.add(v0, w)
        if orbit_vectors(T, v).shape[0] == size:
            return v
    return None


def _candidate_planes(G: MatrixGroup, T: MatrixGroup, cls: ModuleClassification):
    ctx = G.ctx
    tplanes = stable_hyperplanes(ctx, T.generators, 3)
    preferred = [w for w in cls.planes if w in tplanes]
    rest = [w for w in tplanes if w not in preferred]
    return (preferred + rest)[:_PLANE_ATTEMPTS]


def _hyperplane_orbit(T: MatrixGroup, W: Subspace, cls: ModuleClassification):
    ctx = T.ctx
    Fix = fix_subgroup(T, W)
    mats = [restrict_matrix(ctx, g, W.basis) for g in T.generators]
    H2 = closure(ctx, mats, dim=2)
    if H2.order * Fix.order != T.order:
        return None
    binary = binary_invariants(ctx, H2)
    if binary is None:
        return None
    v = _orbit_vector(T, W, Fix.order)
    if v is None:
        return None
    try:
        z = fixw_invariant(Fix, W, v)
    except NotElementaryFixGroup:
        return None
    f1 = _lift(ctx, binary.f1, W.basis)
    f2 = _lift(ctx, binary.f2, W.basis)
    gens = sorted([z, f2, f1], key=lambda f: -f.degree)
    details = {
        "binary": binary.tag,
        "plane": W.to_json(),
        "plane_is_g_stable": W in cls.planes,
        "fix_order": Fix.order,
        "restricted_order": H2.order,
        "orbit_vector": [ctx.serialize_elem(int(x)) for x in v],
        "chapter": cls.chapter,
    }
    details.update({k: val for k, val in binary.details.items() if _jsonable(val)})
    # kept for structure checks; dropped from JSON output
    details["fixw"] = {"plane": W, "vector": v, "z": z, "fix": Fix}
    return InvariantPresentation(T, gens, "hyperplane-orbit", details=details)


def _line_quotient(T: MatrixGroup, cls: ModuleClassification):
    """Chapter-E case: T acts on V/U through SL(2, p) with a kernel of order p^2."""
    ctx = T.ctx
    if cls.chapter != "E" or ctx.s != 1 or not cls.lines:
        return None
    U = cls.lines[0]
    ann = U.annihilator().basis
    ident = linalg.identity(3)
    disp = ctx.sub(T.elements, ident[None])
    trivial = ~ctx.matmul(disp, ann.T).reshape(T.order, -1).any(axis=1)
    N = MatrixGroup(ctx, 3, [], T.elements[trivial])
    if N.order != ctx.p ** 2:
        return None
    comp = cls.adapted_basis[:2]
    a = [linear_product(ctx, orbit_vectors(N, w)) for w in comp]
    mats = [quotient_matrix(ctx, g, U.basis, comp) for g in T.generators]
    Tbar = closure(ctx, mats, dim=2)
    binary = binary_invariants(ctx, Tbar)
    if binary is None or binary.tag != "dickson":
        return None
    A = substitute(binary.f1, a)
    B = substitute(binary.f2, a)
    v0 = GradedPolynomial.linear_form(ctx, U.basis[0])
    details = {"kernel_order": N.order, "quotient_order": Tbar.order, "binary": binary.tag,
               "chapter": cls.chapter}
    return InvariantPresentation(T, [B, A, v0], "line-quotient", details=details)


def general_generator_search(H: MatrixGroup, maxdeg: int | None = None,
                             bound: int | None = None):
    """Greedy degree-ascending search for three generators that certify.

    Returns an :class:`InvariantPresentation` or a :class:`SearchFailure`.
    """
    bound = degree_bound() if bound is None else bound
    maxdeg = bound if maxdeg is None else maxdeg
    found = _greedy(H, maxdeg, H.dim)
    if isinstance(found, SearchFailure):
        return found
    pres = InvariantPresentation(H, found, "search")
    pres.certificate = certify_polynomial_ring(pres, H, bound)
    if not pres.certified:
        return SearchFailure("candidate generators do not certify", pres.degrees)
    return pres


def _variables(T: MatrixGroup) -> InvariantPresentation:
    gens = [GradedPolynomial.variable(T.ctx, T.dim, i) for i in range(T.dim)]
    return InvariantPresentation(T, gens, "trivial")


def construct_tg_invariants(G: MatrixGroup, cls: ModuleClassification, T: MatrixGroup | None = None,
                            bound: int | None = None, search: bool = True) -> InvariantPresentation:
    """A certified polynomial presentation of S(V)^T(G).

    Explicit constructions are tried first; candidates that fail the
    certificate are recorded under ``details["rejected"]``.  When nothing
    certifies and ``search`` is set, the greedy search is the last resort.
    """
    bound = degree_bound() if bound is None else bound
    if cls.chapter == "IRREDUCIBLE":
        raise NoConstructionApplies("no stable subspace to build on")
    T = transvection_subgroup(G) if T is None else T
    rejected: list[dict] = []

    def attempts():
        if T.order == 1:
            yield _variables(T)
            return
        yield _line_quotient(T, cls)
        for W in _candidate_planes(G, T, cls):
            yield _hyperplane_orbit(T, W, cls)

    produced = False
    for pres in attempts():
        if pres is None:
            continue
        produced = True
        pres.certificate = certify_polynomial_ring(pres, T, bound)
        if pres.certified:
            if rejected:
                pres.details["rejected"] = rejected
            return pres
        rejected.append({"construction": pres.construction, "degrees": pres.degrees,
                         "certificate": pres.certificate.to_json()})
    if not search:
        if produced:
            raise CertificationFailed("no construction certified", {"rejected": rejected})
        raise NoConstructionApplies(f"no construction for chapter {cls.chapter}")
    found = general_generator_search(T, bound=bound)
    if isinstance(found, SearchFailure):
        raise CertificationFailed(
            "no certified presentation found",
            {"rejected": rejected, "search": found.to_json()})
    found.details["chapter"] = cls.chapter
    found.details["fallback_reason"] = (
        "constructions failed to certify" if produced else "no construction applies")
    if rejected:
        found.details["rejected"] = rejected
    return found
