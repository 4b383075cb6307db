from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from modinv.gf import field_create
from modinv.group import closure, transvection_subgroup
from modinv.invring import construct_tg_invariants
from modinv.modstruct import classify_case

settings.register_profile(
    "modinv", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("modinv")


def group(p, s, gens):
    ctx = field_create(p, s)
    return closure(ctx, [np.array(g, dtype=np.int64) for g in gens])


def pipeline(p, s, gens):
    G = group(p, s, gens)
    cls = classify_case(G)
    T = transvection_subgroup(G)
    pres = construct_tg_invariants(G, cls, T)
    return G, cls, T, pres


def series(degrees, upto):
    c = [1] + [0] * upto
    for e in degrees:
        for i in range(e, upto + 1):
            c[i] += c[i - e]
    return c


E13_F2 = [[[1, 0, 1], [0, 1, 0], [0, 0, 1]]]
U3_F2 = [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]]
BLOCK_SL2_F2 = [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [1, 1, 0], [0, 0, 1]]]
# F^3 over GF(3) with T = {I + a E01 + b E02}, two stable lines, indecomposable
CHAPTER_G_F3 = [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 1], [0, 1, 0], [0, 0, 1]]]
# T fixes e3 and acts on the quotient through SL(2,3) with kernel of order 9
E_UNFAITHFUL_F3 = [[[1, 0, 1], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
                   [[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [1, 1, 0], [0, 0, 1]]]
# the GF(4) instance violating a^(p^n - 1) = 1: a transvection on W and the scalar aI
GF4_A = 2  # code of the generator X of GF(4), multiplicative order 3
GF4_NEGATIVE = [[[1, 0, 0], [0, 1, 1], [0, 0, 1]],
                [[GF4_A, 0, 0], [0, GF4_A, 0], [0, 0, GF4_A]]]


def u3(p):
    return [[[1, 1, 0], [0, 1, 0], [0, 0, 1]], [[1, 0, 0], [0, 1, 1], [0, 0, 1]]]


@pytest.fixture(scope="session")
def u3_f2():
    return pipeline(2, 1, U3_F2)


@pytest.fixture(scope="session")
def gf4_negative():
    return pipeline(2, 2, GF4_NEGATIVE)


# criterion number -> (passed, detail); filled by test_acceptance, printed at the end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
