"""Acceptance criteria 1-8; one PASS/FAIL line each in the terminal summary.

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import sys
import time
from collections import Counter, defaultdict

import pytest
from conftest import (ACCEPTANCE, CHAPTER_G_F3, E13_F2, E_UNFAITHFUL_F3, GF4_NEGATIVE, U3_F2,
                      group, pipeline, series, u3)

from modinv.analysis import analyze_group
from modinv.checks import chapter_checks
from modinv.errors import Inconclusive
from modinv.fuzz import FuzzConfig, sample_instances
from modinv.gf import field_create
from modinv.gorenstein import det_criterion, hilbert_truncation, palindrome_oracle
from modinv.invring import certify_polynomial_ring, dickson_sl2

SPLIT = ((2, 167), (3, 167), (5, 166))
SEED = 2024
TIME_BUDGET = 600.0
ORACLE_TARGET = 60
ORACLE_MINIMUM = 50
CHAPTERS = ("A", "B", "D", "E", "F", "G")


def record(n: int, ok: bool, detail: str):
    ACCEPTANCE[n] = (ok, detail)
    print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def campaign():
    """The seeded 500-instance run, keeping the objects for the later criteria."""
    rows = []
    start = time.perf_counter()
    for p, count in SPLIT:
        stream = sample_instances(FuzzConfig(p=p, count=count, seed=SEED))
        for _ in range(count):
            rep, objs = analyze_group(next(stream), seed=SEED, keep_objects=True)
            rows.append((p, rep, objs))
    elapsed = time.perf_counter() - start
    return rows, elapsed


def test_criterion_1_fuzz_all_gorenstein(campaign):
    rows, elapsed = campaign
    per_p = Counter(p for p, _, _ in rows)
    bad = [i for i, (_, rep, _) in enumerate(rows) if rep.verdict("det_criterion") is not True]
    ok = len(rows) == 500 and not bad and elapsed < TIME_BUDGET
    record(1, ok, f"{len(rows)} instances {dict(per_p)}, {len(rows) - len(bad)} Gorenstein by "
                  f"det_criterion, non-Gorenstein/undecided {bad[:5]}, {elapsed:.0f}s "
                  f"(budget {TIME_BUDGET:.0f}s)")


def test_criterion_2_oracle_agreement(campaign):
    rows, _ = campaign
    by_chapter = defaultdict(list)
    for i, (p, rep, objs) in enumerate(rows):
        if "pres" in objs:
            by_chapter[rep.chapter].append((rep.order, p, i))
    queues = {c: sorted(by_chapter[c]) for c in CHAPTERS}
    verdicts, inconclusive, disagree = Counter(), 0, []
    total = 0
    while total < ORACLE_TARGET and any(queues.values()):
        for c in CHAPTERS:
            if not queues[c] or total >= ORACLE_TARGET:
                continue
            _, _, i = queues[c].pop(0)
            _, rep, objs = rows[i]
            try:
                v, _ = palindrome_oracle(objs["G"], pres=objs["pres"])
            except Inconclusive:
                inconclusive += 1
                continue
            total += 1
            verdicts[c] += 1
            if v.gorenstein != rep.verdict("det_criterion"):
                disagree.append(i)
    ok = total >= ORACLE_MINIMUM and not disagree and set(verdicts) == set(CHAPTERS)
    record(2, ok, f"{total} oracle verdicts by chapter {dict(sorted(verdicts.items()))}, "
                  f"{inconclusive} inconclusive skipped, disagreements {disagree}")


def test_criterion_3_chapter_formula(campaign):
    rows, _ = campaign
    applicable, disagree, rules = 0, [], Counter()
    for i, (_, rep, _) in enumerate(rows):
        f = rep.verdict("chapter_formula")
        if f is None:
            continue
        applicable += 1
        rules[rep.chapter] += 1
        if f != rep.verdict("det_criterion"):
            disagree.append(i)
    ok = applicable > 0 and not disagree
    record(3, ok, f"closed form applicable on {applicable}/{len(rows)} "
                  f"({dict(sorted(rules.items()))}), disagreements {disagree}")


def test_criterion_4_degree_tables(campaign):
    got = {}
    for p, s, q in ((2, 1, 2), (3, 1, 3), (2, 2, 4)):
        u, c = dickson_sl2(field_create(p, s), q)
        got[f"dickson q={q}"] = ((u.degree, c.degree), (q + 1, q * q - q))
    for p in (2, 3):
        pres = pipeline(p, 1, u3(p))[3]
        got[f"F-iii p={p}"] = (tuple(pres.degrees), (p * p, p, 1))
    pres = pipeline(3, 1, E_UNFAITHFUL_F3)[3]
    got["E unfaithful p=3"] = (tuple(sorted(pres.degrees)), (1, 12, 18))
    pres = pipeline(3, 1, CHAPTER_G_F3)[3]
    got["G example"] = (pres.degrees[0], pres.details["fix_order"])
    rows, _ = campaign
    g_checked = 0
    for _, rep, objs in rows:
        pres = objs.get("pres")
        if rep.chapter == "G" and pres is not None and "fix_order" in pres.details:
            g_checked += 1
            got[f"G fuzzed #{g_checked}"] = (max(pres.degrees), pres.details["fix_order"])
    bad = {k: v for k, v in got.items() if v[0] != v[1]}
    shown = {k: v[0] for k, v in got.items() if not k.startswith("G fuzzed")}
    record(4, not bad, f"{shown}; chapter G degree = |Fix| on {g_checked} fuzzed instances; "
                       f"mismatches {bad}")


def test_criterion_5_hilbert_goldens():
    u3_dims = hilbert_truncation(group(2, 1, U3_F2), 12)
    e13_dims = hilbert_truncation(group(2, 1, E13_F2), 12)
    ok = u3_dims == series((1, 2, 4), 12) and e13_dims == series((1, 1, 2), 12)
    record(5, ok, f"U3(F2) {u3_dims}; single transvection {e13_dims}")


def test_criterion_6_negative_control():
    G, cls, T, pres = pipeline(2, 2, GF4_NEGATIVE)
    det = det_criterion(G, cls, pres)
    oracle, data = palindrome_oracle(G, pres=pres)
    s = data.secondary_degrees
    palindromic = all(a + b == s[0] + s[-1] for a, b in zip(s, reversed(s)))
    ok = (det.gorenstein is False and "witness" in det.certificate
          and det.certificate["det"] != 1 and oracle.gorenstein is False and not palindromic)
    record(6, ok, f"det_criterion witness {det.certificate.get('witness')} with det "
                  f"{det.certificate.get('det')}; oracle secondaries {s} over hsop "
                  f"{list(data.hsop_degrees)}")


def test_criterion_7_structure_checks(campaign):
    rows, _ = campaign
    tallies = defaultdict(lambda: [0, 0])
    failing = []
    for i, (_, rep, objs) in enumerate(rows):
        res = chapter_checks(objs["G"], objs["cls"], objs["T"], objs.get("pres"))
        for name, val in res.items():
            if val is None:
                continue
            tallies[name][0] += bool(val)
            tallies[name][1] += 1
            if not val:
                failing.append((i, name))
    summary = {k: f"{a}/{b}" for k, (a, b) in sorted(tallies.items())}
    ok = not failing and all(b > 0 for _, b in tallies.values()) and len(tallies) == 7
    record(7, ok, f"{summary}; failures {failing[:5]}")


def test_criterion_8_certification(campaign):
    rows, _ = campaign
    emitted, failed = 0, []
    for i, (_, rep, objs) in enumerate(rows):
        pres = objs.get("pres")
        if pres is None:
            failed.append((i, "no presentation"))
            continue
        emitted += 1
        if not pres.certified:
            failed.append((i, "certificate"))
    named = [pipeline(2, 1, U3_F2), pipeline(3, 1, E_UNFAITHFUL_F3),
             pipeline(3, 1, CHAPTER_G_F3), pipeline(2, 2, GF4_NEGATIVE)]
    for G, cls, T, pres in named:
        emitted += 1
        cert = certify_polynomial_ring(pres, T)
        if not (cert.passed and cert.product_of_degrees == T.order):
            failed.append((cls.chapter, "named example"))
    record(8, not failed, f"{emitted} presentations certified to degree bound "
                          f"{rows[0][1].degree_bound}; failures {failed[:5]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
