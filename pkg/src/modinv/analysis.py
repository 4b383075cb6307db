"""End-to-end analysis of one group: closure, T(G), chapter, invariants, verdicts."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, linalg
from .errors import (CertificationFailed, InputError, Inconclusive, ModinvError,
                     NoConstructionApplies, NoFormulaForCase, NotSL)
from .gf import FieldCtx, field_create, field_from_modulus
from .gorenstein import chapter_formula, det_criterion, palindrome_oracle
from .group import DEFAULT_CAP, MatrixGroup, closure, transvection_subgroup
from .invring import construct_tg_invariants
from .modstruct import classify_case
from .polyact import degree_bound

__all__ = ["GroupInput", "AnalysisReport", "load_input", "parse_input", "analyze_group"]


@dataclass
class GroupInput:
    ctx: FieldCtx
    generators: list[np.ndarray]

    def to_json(self) -> dict:
        return {
            "field": self.ctx.to_json(),
            "generators": [[[self.ctx.serialize_elem(int(x)) for x in row] for row in g]
                           for g in self.generators],
        }


@dataclass
class AnalysisReport:
    input: dict
    order: int | None = None
    transvection_order: int | None = None
    reflection_order: int | None = None
    classification: dict | None = None
    presentation: dict | None = None
    verdicts: dict = field(default_factory=dict)
    disagreement: bool = False
    errors: list[str] = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    version: str = __version__
    degree_bound: int = 0
    seed: int | None = None

    @property
    def chapter(self) -> str | None:
        return None if self.classification is None else self.classification["chapter"]

    def verdict(self, method: str) -> bool | None:
        v = self.verdicts.get(method)
        return None if not v or "gorenstein" not in v else v["gorenstein"]

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "input": self.input,
            "order": self.order,
            "transvection_subgroup_order": self.transvection_order,
            "reflection_subgroup_order": self.reflection_order,
            "classification": self.classification,
            "presentation": self.presentation,
            "verdicts": self.verdicts,
            "disagreement": self.disagreement,
            "errors": self.errors,
            "version": self.version,
            "degree_bound": self.degree_bound,
            "seed": self.seed,
        }
        if timing:
            out["timing"] = self.timing
        return out

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2, sort_keys=True)


def parse_input(data: dict) -> GroupInput:
    """Group JSON: {"field": {"p", "s", "modulus"?}, "generators": [3x3 matrices]}."""
    try:
        fld = data["field"]
        p, s = int(fld["p"]), int(fld.get("s", 1))
        ctx = field_from_modulus(p, s, fld["modulus"]) if fld.get("modulus") else field_create(p, s)
        gens = [linalg.as_matrix(ctx, g) for g in data["generators"]]
    except ModinvError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed group description: {exc}") from exc
    if not gens:
        raise InputError("at least one generator is required")
    for g in gens:
        if g.shape != (3, 3):
            raise InputError(f"generator of shape {g.shape}; 3x3 expected")
    return GroupInput(ctx, gens)


def load_input(path) -> GroupInput:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_input(data)


def _verdict_entry(fn):
    try:
        v = fn()
    except (NoFormulaForCase, Inconclusive) as exc:
        return {"status": "not_applicable", "reason": str(exc)}, None
    except ModinvError as exc:
        return {"status": "error", "reason": str(exc)}, None
    if isinstance(v, tuple):
        verdict, data = v
        entry = verdict.to_json()
        entry["hilbert"] = data.to_json()
        return entry, verdict
    return v.to_json(), v


def analyze_group(inp: GroupInput, oracle: bool = False, bound: int | None = None,
                  seed: int | None = None, cap: int = DEFAULT_CAP,
                  keep_objects: bool = False):
    """Run the full pipeline; errors are recorded in the report, not raised.

    With ``keep_objects`` the return value is ``(report, objects)`` where
    objects holds the group, classification, T(G) and presentation.
    """
    bound = degree_bound() if bound is None else bound
    rep = AnalysisReport(inp.to_json(), degree_bound=bound, seed=seed)
    objs: dict = {}
    clock = time.perf_counter

    def finish():
        return (rep, objs) if keep_objects else rep

    t0 = clock()
    try:
        G = closure(inp.ctx, inp.generators, cap)
    except ModinvError as exc:
        rep.errors.append(str(exc))
        return finish()
    rep.order = G.order
    rep.timing["closure"] = round(clock() - t0, 4)
    objs["G"] = G
    try:
        t0 = clock()
        cls = classify_case(G)
        rep.classification = cls.to_json(inp.ctx)
        rep.timing["classify"] = round(clock() - t0, 4)
        objs["cls"] = cls
    except NotSL as exc:
        rep.errors.append(str(exc))
        return finish()
    except ModinvError as exc:
        rep.errors.append(str(exc))
        return finish()
    t0 = clock()
    T = transvection_subgroup(G, cap)
    objs["T"] = T
    rep.transvection_order = T.order
    rep.reflection_order = T.extra["reflection_group"].order
    try:
        pres = construct_tg_invariants(G, cls, T, bound)
    except (CertificationFailed, NoConstructionApplies) as exc:
        rep.errors.append(str(exc))
        diag = getattr(exc, "diagnostics", {})
        rep.presentation = {"search_failure": str(exc), "diagnostics": diag}
        pres = None
    rep.timing["invariants"] = round(clock() - t0, 4)
    if pres is not None:
        objs["pres"] = pres
        rep.presentation = pres.to_json()
        t0 = clock()
        entry, _ = _verdict_entry(lambda: det_criterion(G, cls, pres))
        rep.verdicts["det_criterion"] = entry
        rep.timing["det_criterion"] = round(clock() - t0, 4)
    t0 = clock()
    entry, _ = _verdict_entry(lambda: chapter_formula(G, cls, pres if pres is not None else T))
    rep.verdicts["chapter_formula"] = entry
    rep.timing["chapter_formula"] = round(clock() - t0, 4)
    if oracle:
        t0 = clock()
        entry, _ = _verdict_entry(lambda: palindrome_oracle(G, pres=pres))
        rep.verdicts["hilbert_palindrome"] = entry
        rep.timing["hilbert_palindrome"] = round(clock() - t0, 4)
    answers = {v["gorenstein"] for v in rep.verdicts.values() if "gorenstein" in v}
    rep.disagreement = len(answers) > 1
    return finish()
