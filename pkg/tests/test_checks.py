from __future__ import annotations

from conftest import CHAPTER_G_F3, U3_F2, group, pipeline
from hypothesis import given
from hypothesis import strategies as st

from modinv.analysis import analyze_group
from modinv.checks import (chapter_checks, elementary_abelian, fix_conjugation,
                           lines_fixed_pointwise, transvections_of)
from modinv.fuzz import FuzzConfig, sample_instances
from modinv.linalg import Subspace
from modinv.modstruct import classify_case


def test_u3_checks(u3_f2):
    G, cls, T, pres = u3_f2
    res = chapter_checks(G, cls, T, pres)
    assert res["chapter_b_elementary"] is None
    assert all(v for v in res.values() if v is not None)
    assert len(transvections_of(G)) == 5


def test_checks_detect_failures():
    # SL(2,3) on a block is not elementary abelian
    G = group(3, 1, [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [1, 1, 0], [0, 0, 1]]])
    assert not elementary_abelian(G)
    assert elementary_abelian(group(3, 1, CHAPTER_G_F3))
    # a line not fixed pointwise by the transvection x1 -> x1 + x2
    ctx = G.ctx
    assert not lines_fixed_pointwise(G, [Subspace.from_rows(ctx, [[1, 0, 0]])])


def test_fix_conjugation_u3():
    G = group(2, 1, U3_F2)
    W = Subspace.from_rows(G.ctx, [[0, 1, 0], [0, 0, 1]])
    assert fix_conjugation(G, W)


def test_chapter_g_checks():
    G, cls, T, pres = pipeline(3, 1, CHAPTER_G_F3)
    res = chapter_checks(G, cls, T, pres)
    assert res["fixw_coefficients"] is True and res["fix_conjugation"] is True


@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_checks_hold_on_fuzzed_instances(p, seed):
    inp = next(sample_instances(FuzzConfig(p=p, seed=seed, max_order=400)))
    rep, objs = analyze_group(inp, keep_objects=True)
    res = chapter_checks(objs["G"], objs["cls"], objs["T"], objs.get("pres"))
    assert all(v is not False for v in res.values()), res
    if objs["cls"].chapter == "B":
        assert res["chapter_b_elementary"] is True
