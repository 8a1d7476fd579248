"""Distribution corpora and the batch runner.

Base laws use small integer atoms so that convolution merges equal sums exactly.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ..clt_engine import delta_n as compute_delta
from ..distributions import DiscreteDistribution, make_discrete, two_point
from ..fractions import SumContext, make_context
from .constants import CONSTANTS, GAMMA_STAR, INF
from .harness import NEEDS, BoundReport, InequalityId, Theorem2Report, check_inequality, theorem2_checks

THREADS_ENV = "LINDEBERG_LAB_THREADS"

TABULATED_G = "tabulated:[[0.5, 0.5], [1.0, 0.8], [2.0, 1.2], [4.0, 1.5]]"
G_SPECS = (
    "identity",
    "const",
    "power:0.5",
    "clip-above:B",
    "clip-below:B",
    "scaled:7:power:0.3",
    TABULATED_G,
)


# ---------------------------------------------------------------------------
# base laws


def three_point(a: float, b: float, w: float) -> DiscreteDistribution:
    """Mass ``1 - w`` at 0, the rest on ``{-a, b}`` with zero mean."""
    if w == 1.0:
        return two_point(a, b)
    return make_discrete([(-a, w * b / (a + b)), (0.0, 1.0 - w), (b, w * a / (a + b))])


def symmetric(values: Sequence[float], probs: Sequence[float], zero: float = 0.0) -> DiscreteDistribution:
    atoms = [(0.0, zero)] if zero > 0 else []
    for v, p in zip(values, probs):
        atoms += [(-v, p), (v, p)]
    return make_discrete(atoms)


def _family_sym2(params) -> list[tuple[str, DiscreteDistribution]]:
    return [(f"sym2({a})", symmetric([a], [0.5])) for a in params.get("a", [1.0])]


def _family_asym2(params):
    pairs = params.get("pairs", [[1, 2], [1, 3], [1, 4], [1, 9], [2, 3], [1, 19], [3, 1], [4, 1]])
    return [(f"asym2({a},{b})", two_point(a, b)) for a, b in pairs]


def _family_three_point(params):
    triples = params.get("triples", [[1, 2, 0.5], [1, 4, 0.8], [2, 1, 0.9], [1, 1, 0.5]])
    out = [(f"three({a},{b},{w})", three_point(a, b, w)) for a, b, w in triples]
    if params.get("include_generic", True):
        out.append(("three(-3,1,2)", make_discrete([(-3, 0.3), (1, 0.5), (2, 0.2)])))
    return out


def _family_sym3(params):
    qs = params.get("q", [0.1, 0.25, 0.4])
    out = [(f"sym3({q})", symmetric([1.0], [q], zero=1 - 2 * q)) for q in qs]
    if params.get("include_four_point", True):
        out.append(("sym4(1,3)", symmetric([1.0, 3.0], [0.4, 0.1])))
    return out


def _family_two_point_p(params):
    """``(-p/(1-p), 1)`` with probabilities ``(1-p, p)``: a one-parameter sweep."""
    out = []
    for p in params.get("p", [0.05 * k for k in range(1, 20)]):
        out.append((f"tp(p={p:.4g})", make_discrete([(-p / (1 - p), 1 - p), (1.0, p)])))
    return out


BASE_FAMILIES = {
    "sym2": _family_sym2,
    "asym2": _family_asym2,
    "three-point": _family_three_point,
    "sym3": _family_sym3,
    "two-point-p": _family_two_point_p,
}


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CheckSpec:
    id: str
    g: tuple[str, ...] = ()
    eps_gamma: tuple[tuple[float, float], ...] = ()
    eps: tuple[float, ...] = ()

    def expand(self) -> list[dict]:
        needs = NEEDS[InequalityId(self.id)]
        gs = self.g if "g" in needs else (None,)
        if "gamma" in needs:
            pairs = self.eps_gamma
        elif "eps" in needs:
            pairs = [(e, None) for e in (self.eps or [e for e, _ in self.eps_gamma])]
        else:
            pairs = [(None, None)]
        return [{"g": g, "eps": e, "gamma": gm} for g in gs for e, gm in pairs]


@dataclass(frozen=True)
class CorpusSpec:
    families: tuple[FamilySpec, ...]
    n: tuple[int, ...] = (1, 2, 4)
    checks: tuple[CheckSpec, ...] = ()
    prune_tol: float = 0.0
    mixtures: bool = True
    oscillating: bool = True

    @classmethod
    def from_json(cls, obj: dict) -> "CorpusSpec":
        fams = []
        for f in obj.get("families", []):
            if isinstance(f, str):
                fams.append(FamilySpec(f))
            else:
                fams.append(FamilySpec(f["name"], dict(f.get("params", {}))))
        for f in fams:
            if f.name not in BASE_FAMILIES:
                raise ValueError(f"unknown family {f.name!r}")
        checks = []
        for c in obj.get("checks", []):
            InequalityId(c["id"])
            checks.append(
                CheckSpec(
                    c["id"],
                    tuple(c.get("g", ())),
                    tuple((_num(e), _num(gm)) for e, gm in c.get("eps_gamma", ())),
                    tuple(_num(e) for e in c.get("eps", ())),
                )
            )
        return cls(
            tuple(fams),
            tuple(int(k) for k in obj.get("n", (1, 2, 4))),
            tuple(checks) or default_checks(),
            float(obj.get("prune_tol", 0.0)),
            bool(obj.get("mixtures", True)),
            bool(obj.get("oscillating", True)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "CorpusSpec":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _num(x) -> float:
    if isinstance(x, str):
        if x in ("gamma*", "gstar", "gamma_star"):
            return GAMMA_STAR
        return float(x)  # accepts "inf"
    return float(x)


def default_checks() -> tuple[CheckSpec, ...]:
    ae_pairs = tuple(k for k in CONSTANTS.AE if math.isfinite(k[1])) + ((2.0, 1.0), (4.0, 2.0), (10.0, 0.5))
    ar_pairs = tuple(CONSTANTS.AR) + ((1.0, 1.0), (3.0, 1.0), (0.5, 2.0))
    g_eg = ((1.0, 0.72), (1.0, GAMMA_STAR), (2.0, 1.0), (INF, 0.72), (4.0, 2.0))
    r_eg = ((1.0, GAMMA_STAR), (0.5, GAMMA_STAR), (2.12, GAMMA_STAR), (1.76, 0.4), (5.39, 0.2))
    return (
        CheckSpec("KP", g=G_SPECS),
        CheckSpec("OSIPOV1"),
        CheckSpec("OSIPOV", eps=(0.25, 0.5, 1.0, 2.0, 4.0)),
        CheckSpec("ESSEEN"),
        CheckSpec("ESSEEN_BOUNDED"),
        CheckSpec("ROZOVSKII"),
        CheckSpec("WANG_AHMAD", g=G_SPECS),
        CheckSpec("ESSEEN_GAMMA", eps_gamma=ae_pairs),
        CheckSpec("ROZOVSKII_GAMMA", eps_gamma=ar_pairs),
        CheckSpec("ESSEEN_G", g=G_SPECS, eps=(1.0, 2.0, 4.0, INF)),
        CheckSpec("ROZOVSKII_G", g=G_SPECS, eps=(0.5, 1.0, 1.99, 3.0, 5.0)),
        CheckSpec("ESSEEN_G_GAMMA", g=G_SPECS, eps_gamma=g_eg),
        CheckSpec("ROZOVSKII_G_GAMMA", g=G_SPECS, eps_gamma=r_eg),
    )


DEFAULT_FAMILIES = (
    FamilySpec("sym2"),
    FamilySpec("asym2"),
    FamilySpec("three-point"),
    FamilySpec("sym3"),
)


def default_corpus() -> CorpusSpec:
    return CorpusSpec(DEFAULT_FAMILIES, n=(1, 2, 4), checks=default_checks())


def base_laws(families: Iterable[FamilySpec]) -> list[tuple[str, DiscreteDistribution]]:
    out = []
    for f in families:
        out += BASE_FAMILIES[f.name](f.params)
    return out


def build_contexts(spec: CorpusSpec) -> list[SumContext]:
    """i.i.d. contexts for every base law and n, plus heterogeneous and sign-alternating ones."""
    laws = base_laws(spec.families)
    out = []
    for (label, d), n in itertools.product(laws, spec.n):
        out.append(make_context([d] * n, f"{label}^{n}"))
    multi = [n for n in spec.n if n >= 2]
    if spec.mixtures and multi:
        # neighbouring laws, second one doubled so the magnitudes differ
        for (la, a), (lb, b) in zip(laws, laws[1:]):
            for n in multi[:2]:
                summands = [a if k % 2 == 0 else b.scaled(2.0) for k in range(n)]
                out.append(make_context(summands, f"mix[{la},2*{lb}]x{n}"))
    if spec.oscillating:
        for label, d in laws:
            if d.is_symmetric():
                continue
            for n in [k for k in spec.n if k % 2 == 0][:2]:
                summands = [d if k % 2 == 0 else d.negated() for k in range(n)]
                out.append(make_context(summands, f"osc[{label}]x{n}"))
    return out


def theorem2_contexts() -> list[SumContext]:
    """At least 200 symmetric and asymmetric two/three-point contexts, n in {1, 2, 4}."""
    fams = (
        FamilySpec("sym2", {"a": [1.0, 2.0]}),
        FamilySpec("asym2"),
        FamilySpec("two-point-p"),
        FamilySpec("three-point", {"triples": [[1, 2, 0.5], [1, 4, 0.8], [2, 1, 0.9], [1, 1, 0.5], [1, 3, 0.3], [5, 1, 0.7]]}),
        FamilySpec("sym3", {"q": [0.05, 0.1, 0.25, 0.4, 0.49]}),
    )
    return build_contexts(CorpusSpec(fams, n=(1, 2, 4)))


# ---------------------------------------------------------------------------
# running


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass
class CorpusResult:
    reports: list[BoundReport]
    summary: dict

    def to_json(self) -> dict:
        return {"reports": [r.to_dict() for r in self.reports], "summary": self.summary}


def summarize(reports: Sequence[BoundReport], n_contexts: int) -> dict:
    by_id: dict[str, dict] = {}
    for r in reports:
        s = by_id.setdefault(r.inequality_id, {"checks": 0, "failures": 0, "max_ratio": 0.0, "worst": None})
        s["checks"] += 1
        s["failures"] += not r.passed
        budget = r.ratio / r.constant_used
        if r.ratio > s["max_ratio"]:
            s["max_ratio"] = r.ratio
        if s["worst"] is None or budget > s["worst"]["ratio_over_constant"]:
            s["worst"] = {"ctx": r.ctx, "g": r.g, "eps": r.eps, "gamma": r.gamma, "ratio_over_constant": budget}
    for s in by_id.values():
        if s["worst"]:
            s["worst"] = {k: (v if not isinstance(v, float) or math.isfinite(v) else str(v)) for k, v in s["worst"].items()}
    return {
        "contexts": n_contexts,
        "checks": len(reports),
        "failures": sum(not r.passed for r in reports),
        "by_id": by_id,
    }


def _check_plan(checks: Sequence[CheckSpec], ids: Sequence[str] | None) -> list[tuple[str, dict]]:
    wanted = {InequalityId(i).value for i in ids} if ids else None
    plan = []
    for c in checks:
        if wanted is not None and c.id not in wanted:
            continue
        plan += [(c.id, kw) for kw in c.expand()]
    return plan


def run_contexts(
    contexts: Sequence[SumContext],
    checks: Sequence[CheckSpec],
    ids: Sequence[str] | None = None,
    prune_tol: float = 0.0,
    workers: int | None = None,
) -> CorpusResult:
    plan = _check_plan(checks, ids)

    def one(ctx: SumContext) -> list[BoundReport]:
        delta = compute_delta(ctx, prune_tol)
        return [check_inequality(ctx, ineq, delta=delta, **kw) for ineq, kw in plan]

    workers = workers or default_workers()
    if workers > 1 and len(contexts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(one, contexts))
    else:
        batches = [one(c) for c in contexts]
    reports = [r for batch in batches for r in batch]
    reports.sort(key=lambda r: r.passed)  # stable: failures first
    return CorpusResult(reports, summarize(reports, len(contexts)))


def run_corpus(spec: CorpusSpec, ids: Sequence[str] | None = None, workers: int | None = None) -> CorpusResult:
    contexts = build_contexts(spec) if spec.families else []
    return run_contexts(contexts, spec.checks, ids, spec.prune_tol, workers)


def run_theorem2(
    contexts: Sequence[SumContext],
    eps_grid: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0),
    gamma_grid: Sequence[float] = (0.25, 1.0, 4.0),
) -> list[Theorem2Report]:
    return [theorem2_checks(c, e, g) for c in contexts for e in eps_grid for g in gamma_grid]


def reports_to_csv_rows(reports: Sequence[BoundReport]) -> tuple[list[str], list[list]]:
    if not reports:
        header = list(BoundReport.__dataclass_fields__)
        return header, []
    header = list(reports[0].to_dict())
    return header, [[r.to_dict()[k] for k in header] for r in reports]
