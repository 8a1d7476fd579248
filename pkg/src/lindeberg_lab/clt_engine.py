"""Exact law of the normalised sum and its Kolmogorov distance to the normal law."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fractions import SumContext

MAX_SUPPORT = 10**7
_SQRT2 = math.sqrt(2.0)


class SupportTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class SumDistribution:
    """Atoms of ``S_n / B_n`` (strictly increasing values) plus the pruned mass."""

    values: np.ndarray
    probs: np.ndarray
    dropped_mass: float = 0.0

    def __post_init__(self):
        for arr in (self.values, self.probs):
            arr.setflags(write=False)

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.values.tolist(), self.probs.tolist()))

    def __len__(self) -> int:
        return len(self.values)


def _merge(values: np.ndarray, probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inverse = np.unique(values, return_inverse=True)
    return uniq, np.bincount(inverse.ravel(), weights=probs.ravel(), minlength=len(uniq))


def convolve(ctx: SumContext, prune_tol: float = 0.0) -> SumDistribution:
    """Distribution of ``sum X_k / B_n`` by sequential pairwise convolution.

    Raw sums are merged by exact float equality before the final division by
    ``B_n``; dyadic atom values therefore collide exactly.  Atoms lighter than
    ``prune_tol`` are dropped after each step and their mass is reported.
    """
    if prune_tol < 0:
        raise ValueError("prune_tol must be non-negative")
    summands = sorted(ctx.summands, key=len)
    vals = np.zeros(1)
    probs = np.ones(1)
    dropped = 0.0
    for d in summands:
        dv = np.array(d.values, dtype=float)
        dp = np.array(d.probs, dtype=float)
        if len(vals) * len(dv) > MAX_SUPPORT:
            raise SupportTooLarge(
                f"convolution would need {len(vals) * len(dv)} atoms (limit {MAX_SUPPORT})"
            )
        vals, probs = _merge(np.add.outer(vals, dv), np.multiply.outer(probs, dp))
        if prune_tol > 0:
            keep = probs >= prune_tol
            if not keep.all():
                dropped += float(probs[~keep].sum())
                vals, probs = vals[keep], probs[keep]
    scaled = vals / ctx.bn
    if len(np.unique(scaled)) != len(scaled):
        scaled, probs = _merge(scaled, probs)
    return SumDistribution(scaled, probs, dropped)


def normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function (no cancellation in either tail)."""
    return 0.5 * math.erfc(-x / _SQRT2)


def kolmogorov_delta_at(s: SumDistribution) -> tuple[float, float]:
    """``(sup_x |P(S < x) - Phi(x)|, argsup)``.

    Both one-sided values of the step CDF are compared with Phi at every atom;
    between atoms the CDF is flat and Phi monotone, so nothing else can win.
    """
    if len(s) == 0:
        return 0.0, math.nan
    cdf_right = np.cumsum(s.probs)
    cdf_left = np.concatenate(([0.0], cdf_right[:-1]))
    phi = np.array([normal_cdf(x) for x in s.values.tolist()])
    gap = np.maximum(np.abs(cdf_left - phi), np.abs(cdf_right - phi))
    i = int(np.argmax(gap))
    return float(gap[i]), float(s.values[i])


def kolmogorov_delta(s: SumDistribution) -> float:
    return kolmogorov_delta_at(s)[0]


def delta_n(ctx: SumContext, prune_tol: float = 0.0) -> tuple[float, float]:
    """``(Delta_n, dropped_mass)`` for a context."""
    s = convolve(ctx, prune_tol)
    return kolmogorov_delta(s), s.dropped_mass
