"""Seeded sampling of reducible subgroups of SL(3, q) and fuzz campaigns."""
from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import linalg
from .analysis import AnalysisReport, GroupInput, analyze_group
from .errors import CapExceeded
from .gf import FieldCtx, field_create
from .group import closure

__all__ = ["FuzzConfig", "FuzzSummary", "SHAPES", "sample_generators", "sample_instances",
           "fuzz_campaign", "write_report_dir"]

# block shapes: rows act on the right, so "line" fixes span(e3) and "plane" span(e2, e3)
SHAPES = ("line", "plane", "flag")
_DRAWS_PER_INSTANCE = 200


@dataclass
class FuzzConfig:
    p: int
    s: int = 1
    count: int = 10
    seed: int = 0
    max_order: int = 2000
    chapters: tuple[str, ...] | None = None
    oracle: bool = False
    bound: int | None = None


@dataclass
class FuzzSummary:
    config: dict
    instances: int = 0
    gorenstein: int = 0
    not_gorenstein: int = 0
    undecided: int = 0
    chapters: dict = field(default_factory=dict)
    constructions: dict = field(default_factory=dict)
    method_agreement: dict = field(default_factory=dict)
    disagreements: list[int] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)


def _rand_elem(rng, ctx: FieldCtx, nonzero: bool = False) -> int:
    return int(rng.integers(1 if nonzero else 0, ctx.q))


def _rand_block(rng, ctx: FieldCtx) -> np.ndarray:
    """A random invertible 2x2 block: full, triangular or unipotent."""
    kind = rng.integers(3)
    while True:
        if kind == 0:
            m = rng.integers(0, ctx.q, size=(2, 2))
        elif kind == 1:
            m = np.array([[_rand_elem(rng, ctx, True), _rand_elem(rng, ctx)],
                          [0, _rand_elem(rng, ctx, True)]])
        else:
            m = np.array([[1, _rand_elem(rng, ctx)], [0, 1]])
        if linalg.det(ctx, m) != 0:
            return m.astype(np.int64)


def _sample_shaped(rng, ctx: FieldCtx, shape: str) -> np.ndarray:
    g = np.zeros((3, 3), dtype=np.int64)
    if shape == "flag":
        for i in range(3):
            for j in range(i + 1, 3):
                g[i, j] = _rand_elem(rng, ctx)
        a, b = _rand_elem(rng, ctx, True), _rand_elem(rng, ctx, True)
        g[0, 0], g[1, 1] = a, b
        g[2, 2] = int(ctx.inv(ctx.mul(a, b)))
        return g
    block = _rand_block(rng, ctx)
    lam = int(ctx.inv(linalg.det(ctx, block)))
    if shape == "line":
        g[:2, :2] = block
        g[:2, 2] = [_rand_elem(rng, ctx) for _ in range(2)]
        g[2, 2] = lam
    else:
        g[0, 0] = lam
        g[0, 1:] = [_rand_elem(rng, ctx) for _ in range(2)]
        g[1:, 1:] = block
    return g


def _random_invertible(rng, ctx: FieldCtx) -> np.ndarray:
    while True:
        m = rng.integers(0, ctx.q, size=(3, 3)).astype(np.int64)
        if linalg.det(ctx, m) != 0:
            return m


def sample_generators(rng, ctx: FieldCtx) -> list[np.ndarray]:
    """1-3 generators of one random shape, conjugated by a random P."""
    shape = SHAPES[rng.integers(len(SHAPES))] if rng.random() < 0.3 else \
        ("line", "plane")[rng.integers(2)]
    k = int(rng.integers(1, 4))
    gens = [_sample_shaped(rng, ctx, shape) for _ in range(k)]
    P = _random_invertible(rng, ctx)
    Pinv = linalg.inverse(ctx, P)
    return [ctx.matmul(ctx.matmul(Pinv, g), P) for g in gens]


def sample_instances(cfg: FuzzConfig, rng=None):
    """Yield GroupInput draws passing the order filter, deterministically from the seed."""
    ctx = field_create(cfg.p, cfg.s)
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    while True:
        gens = sample_generators(rng, ctx)
        try:
            G = closure(ctx, gens, cap=cfg.max_order)
        except CapExceeded:
            continue
        if G.order == 1:
            continue
        yield GroupInput(ctx, gens)


def fuzz_campaign(cfg: FuzzConfig, progress=None):
    """Analyze ``cfg.count`` sampled instances; returns (summary, reports)."""
    summary = FuzzSummary(config=asdict(cfg))
    reports: list[AnalysisReport] = []
    if cfg.count <= 0:
        return summary, reports
    rng = np.random.default_rng(cfg.seed)
    stream = sample_instances(cfg, rng)
    chapters, constructions = Counter(), Counter()
    agree = Counter()
    draws = 0
    while len(reports) < cfg.count:
        inp = next(stream)
        draws += 1
        if draws > _DRAWS_PER_INSTANCE * cfg.count:
            break
        rep = analyze_group(inp, oracle=cfg.oracle, bound=cfg.bound, seed=cfg.seed)
        if cfg.chapters and rep.chapter not in cfg.chapters:
            continue
        idx = len(reports)
        reports.append(rep)
        chapters[rep.chapter or "error"] += 1
        if rep.presentation and "construction" in rep.presentation:
            constructions[rep.presentation["construction"]] += 1
        det = rep.verdict("det_criterion")
        if det is True:
            summary.gorenstein += 1
        elif det is False:
            summary.not_gorenstein += 1
        else:
            summary.undecided += 1
        others = [m for m in ("chapter_formula", "hilbert_palindrome")
                  if rep.verdict(m) is not None]
        for m in others:
            agree[f"{m}:{'agree' if rep.verdict(m) == det else 'disagree'}"] += 1
        if rep.disagreement:
            summary.disagreements.append(idx)
        if det is not True and cfg.s == 1:
            summary.failures.append(idx)
        if progress:
            progress(idx, rep)
    summary.instances = len(reports)
    summary.chapters = dict(sorted(chapters.items()))
    summary.constructions = dict(sorted(constructions.items()))
    summary.method_agreement = dict(sorted(agree.items()))
    return summary, reports


def write_report_dir(out: Path, summary: FuzzSummary, reports, plots: bool = True) -> list[Path]:
    """Per-instance JSON, summary.json, summary.csv and (optionally) PNG charts."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for i, rep in enumerate(reports):
        path = out / f"instance_{i:04d}.json"
        path.write_text(rep.dumps())
        written.append(path)
    path = out / "summary.json"
    path.write_text(json.dumps(summary.to_json(), indent=2, sort_keys=True))
    written.append(path)
    path = out / "summary.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "order", "t_order", "chapter", "construction", "degrees",
                    "det_criterion", "chapter_formula", "hilbert_palindrome", "disagreement"])
        for i, rep in enumerate(reports):
            pres = rep.presentation or {}
            w.writerow([i, rep.order, rep.transvection_order, rep.chapter,
                        pres.get("construction", ""),
                        " ".join(str(d) for d in pres.get("degrees", [])),
                        rep.verdict("det_criterion"), rep.verdict("chapter_formula"),
                        rep.verdict("hilbert_palindrome"), rep.disagreement])
    written.append(path)
    if plots:
        from .plotting import plot_chapter_distribution, plot_hilbert_function
        written.append(plot_chapter_distribution(summary, out / "chapters.png"))
        with_hilbert = [r for r in reports
                        if "hilbert" in r.verdicts.get("hilbert_palindrome", {})]
        if with_hilbert:
            written.append(plot_hilbert_function(with_hilbert[0], out / "hilbert.png"))
    return written
