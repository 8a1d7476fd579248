"""Search parametrised families for large ``Delta_n / fraction`` ratios.

Whatever is found is a lower bound for the corresponding constant and is
never claimed to be optimal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..distributions import DistributionError, make_discrete
from ..fractions import make_context
from .harness import check_inequality

LO, HI = 1e-4, 1 - 1e-4


def _two_point(theta):
    (p,) = theta
    return make_discrete([(-p / (1 - p), 1 - p), (1.0, p)])


def _three_point(theta):
    p, w = theta
    return make_discrete([(-p / (1 - p), (1 - p) * w), (0.0, 1 - w), (1.0, p * w)])


FAMILIES: dict[str, tuple[int, Callable]] = {
    "two-point": (1, _two_point),
    "three-point": (2, _three_point),
}


@dataclass(frozen=True)
class SearchFamily:
    name: str = "two-point"
    n: int = 1


@dataclass(frozen=True)
class SearchResult:
    best_ratio: float
    best_theta: tuple[float, ...]
    descriptor: str
    evaluations: int


class _Budget(Exception):
    pass


def compass_search(
    f: Callable[[np.ndarray], float],
    x0: Sequence[float],
    step: float,
    min_step: float = 1e-10,
    lo: float = LO,
    hi: float = HI,
) -> tuple[np.ndarray, float]:
    """Maximise ``f`` over a box by polling +-step along each axis; halve the step on failure."""
    x = np.clip(np.asarray(x0, dtype=float), lo, hi)
    fx = f(x)
    while step >= min_step:
        best_x, best_f = None, fx
        for i, sign in itertools.product(range(len(x)), (1.0, -1.0)):
            y = x.copy()
            y[i] = min(max(y[i] + sign * step, lo), hi)
            if y[i] == x[i]:
                continue
            fy = f(y)
            if fy > best_f:
                best_x, best_f = y, fy
        if best_x is None:
            step /= 2
        else:
            x, fx = best_x, best_f
    return x, fx


def lower_bound_search(
    ineq: str,
    family: SearchFamily = SearchFamily(),
    budget: int = 10_000,
    g: str | None = None,
    eps: float | None = None,
    gamma: float | None = None,
    restarts: int = 3,
    seed: int = 0,
    coarse: int | None = None,
) -> SearchResult:
    """Coarse grid over the family parameters, then compass search from the best
    grid point and from ``restarts`` random starts, all within ``budget`` evaluations
    beyond the grid."""
    dim, make = FAMILIES[family.name]
    state = {"evals": 0, "limit": None, "best": (-math.inf, None)}

    def ratio(theta) -> float:
        if state["limit"] is not None and state["evals"] >= state["limit"]:
            raise _Budget
        state["evals"] += 1
        try:
            d = make(tuple(float(t) for t in theta))
        except DistributionError:
            return -math.inf
        ctx = make_context([d] * family.n)
        r = check_inequality(ctx, ineq, g=g, eps=eps, gamma=gamma).ratio
        if r > state["best"][0]:
            state["best"] = (r, tuple(float(t) for t in theta))
        return r

    per_axis = coarse or (64 if dim == 1 else 16)
    axis = np.linspace(LO, HI, per_axis + 2)[1:-1]
    for theta in itertools.product(axis, repeat=dim):
        ratio(theta)
    grid_best = state["best"][1]

    state["limit"] = state["evals"] + budget
    rng = np.random.default_rng(seed)
    starts = [grid_best] + [tuple(rng.uniform(LO, HI, dim)) for _ in range(restarts)]
    try:
        for x0 in starts:
            if budget <= 0:
                break
            compass_search(ratio, x0, step=(HI - LO) / per_axis)
    except _Budget:
        pass

    best_ratio, theta = state["best"]
    desc = f"{family.name}{tuple(round(t, 6) for t in theta)}^{family.n}"
    return SearchResult(best_ratio, theta, desc, state["evals"])
