"""Lindeberg-type fractions of a sum of independent discrete summands.

All sups are exact.  Between consecutive atom magnitudes the Lindeberg tail
and the truncated third moments are constant; splitting further at the knots
of g leaves pieces ``g(t) = a + b t**delta`` with ``a, b >= 0`` on which the
objective ``g(t) * (w |S3| / t + S2)`` is quasi-convex (it is either
``alpha/t + beta*t + const`` or ``A t**(delta-1) + C t**delta``).  Its sup over
a segment is therefore one of the two one-sided endpoint limits, so the
engine only ever evaluates those.

Everything internal runs in raw units ``t = z * B_n``; normalised arguments
``z`` only appear at the public surface.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .distributions import DiscreteDistribution
from .gclass import GFunction, GFunctionDomain, Identity

ATTAINED = "attained"
RIGHT_LIMIT = "right-limit"  # z* from above, e.g. "0+"
LEFT_LIMIT = "left-limit"  # z* from below, e.g. "eps-"


class ContextError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    """Where a supremum is reached: at ``z`` itself or as a one-sided limit."""

    z: float
    kind: str = ATTAINED

    def label(self) -> str:
        if self.kind == RIGHT_LIMIT:
            return f"{self.z!r}+"
        if self.kind == LEFT_LIMIT:
            return f"{self.z!r}-"
        return repr(self.z)


@dataclass(frozen=True)
class MomentProfile:
    """Step-function data for one or more summands.

    ``mags`` are the distinct nonzero atom magnitudes in ascending order.
    Segment ``i`` is ``(mags[i-1], mags[i]]`` (with ``mags[-1] = 0`` and
    ``mags[K] = inf``); on it the raw second-moment tail is ``tail2[i]``
    and the raw truncated third moments are ``below3[i]`` (signed) and
    ``below3abs[i]``.
    """

    mags: tuple[float, ...]
    tail2: tuple[float, ...]
    below3: tuple[float, ...]
    below3abs: tuple[float, ...]

    @classmethod
    def from_summands(cls, summands: Sequence[DiscreteDistribution]) -> "MomentProfile":
        c2: dict[float, list[float]] = {}
        c3: dict[float, list[float]] = {}
        for d in summands:
            for v, p in d.atoms:
                if v == 0.0:
                    continue
                m = abs(v)
                c2.setdefault(m, []).append(v * v * p)
                c3.setdefault(m, []).append(v * v * v * p)
        mags = tuple(sorted(c2))
        sq = [term for m in mags for term in c2[m]]
        cube = [term for m in mags for term in c3[m]]
        # index of first term belonging to magnitude i
        starts = [0]
        for m in mags:
            starts.append(starts[-1] + len(c2[m]))
        k = len(mags)
        tail2 = tuple(math.fsum(sq[starts[i]:]) for i in range(k + 1))
        below3 = tuple(math.fsum(cube[: starts[i]]) for i in range(k + 1))
        below3abs = tuple(math.fsum(abs(x) for x in cube[: starts[i]]) for i in range(k + 1))
        return cls(mags, tail2, below3, below3abs)

    def segment(self, t: float) -> int:
        """Index of the segment containing ``t > 0`` (left-continuous convention)."""
        return bisect.bisect_left(self.mags, t)


@dataclass(frozen=True)
class SumContext:
    summands: tuple[DiscreteDistribution, ...]
    bn2: float
    profile: MomentProfile = field(repr=False)
    label: str = ""

    @property
    def bn(self) -> float:
        return math.sqrt(self.bn2)

    @property
    def n(self) -> int:
        return len(self.summands)

    @cached_property
    def breakpoints(self) -> tuple[float, ...]:
        b = self.bn
        return tuple(m / b for m in self.profile.mags)

    def segment_of(self, z: float) -> int:
        """Profile segment holding the normalised point ``z``.

        Compared against ``|x| / B_n`` rather than ``z * B_n`` against ``|x|`` so
        that a breakpoint reported as a witness lands on its own atom.
        """
        return bisect.bisect_left(self.breakpoints, z)

    @property
    def total_atoms(self) -> int:
        return sum(len(d) for d in self.summands)

    def m_vanishes(self) -> bool:
        """True when every truncated third-moment sum is exactly zero (e.g. symmetric summands)."""
        return all(x == 0.0 for x in self.profile.below3)

    def describe(self) -> str:
        return self.label or f"n={self.n}"


def make_context(summands: Sequence[DiscreteDistribution], label: str = "") -> SumContext:
    summands = tuple(summands)
    if not summands:
        raise ContextError("context needs at least one summand")
    profile = MomentProfile.from_summands(summands)
    # the total tail equals sum of variances; using it keeps L_n(0+) == 1 bit-exact
    bn2 = profile.tail2[0] if profile.mags else 0.0
    if not bn2 > 0:
        raise ContextError("B_n^2 must be positive: all summands are degenerate at 0")
    return SumContext(summands, bn2, profile, label)


def iid_context(d: DiscreteDistribution, n: int, label: str = "") -> SumContext:
    return make_context([d] * n, label)


@dataclass(frozen=True)
class FractionParams:
    g: GFunction
    eps: float
    gamma: float

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class FractionResult:
    """A fraction value together with its decomposition.

    ``m_term`` is the part carrying ``|M_n|``; ``l_term`` the Lindeberg part.
    For the Esseen kind both are read off at the witness.
    """

    value: float
    witness: Witness
    m_term: float
    l_term: float

    def __float__(self) -> float:
        return self.value


# ---------------------------------------------------------------------------
# pointwise quantities


def lindeberg_L(ctx: SumContext, z: float) -> float:
    if z < 0:
        raise ValueError("z must be non-negative")
    if z == 0:
        return 1.0
    p = ctx.profile
    return p.tail2[ctx.segment_of(z)] / ctx.bn2


def M(ctx: SumContext, z: float) -> float:
    if z < 0:
        raise ValueError("z must be non-negative")
    if z == 0:
        return 0.0
    p = ctx.profile
    return p.below3[ctx.segment_of(z)] / (ctx.bn2 * ctx.bn)


def Lambda(ctx: SumContext, eps: float) -> float:
    if not eps > 0:
        raise ValueError("eps must be positive")
    p = ctx.profile
    return p.below3abs[ctx.segment_of(eps)] / (ctx.bn2 * ctx.bn)


def katz_petrov_fraction(ctx: SumContext, g: GFunction) -> float:
    total = []
    for d in ctx.summands:
        for v, p in d.atoms:
            if v == 0.0:
                continue
            gv = g(abs(v))
            if not (gv > 0 and math.isfinite(gv)):
                raise GFunctionDomain(f"g({abs(v)!r}) = {gv!r}")
            total.append(v * v * gv * p)
    return math.fsum(total) / (ctx.bn2 * g(ctx.bn))


def osipov_fraction(ctx: SumContext, eps: float) -> float:
    return lindeberg_L(ctx, eps) + Lambda(ctx, eps)


# ---------------------------------------------------------------------------
# the sup engine


def _mterm(w: float, s3: float) -> float:
    # w may be inf (gamma = inf); 0 * inf must stay 0 when the moment vanishes
    return 0.0 if s3 == 0.0 else w * abs(s3)


def segment_sup(
    profile: MomentProfile,
    g: GFunction,
    upper: float,
    weight: float,
    g_ref: float,
    norm: float,
) -> tuple[float, float, str, int]:
    """``sup_{0 < t < upper} (g(t)/g_ref) * (weight*|S3(t)|/t + S2(t)) / norm``.

    ``upper`` may be ``inf``.  Returns ``(value, t_star, kind, segment)``.
    """
    mags = profile.mags
    pts = [0.0]
    pts += [m for m in mags if m < upper]
    knots = [k for k in g.knots() if k < upper]
    if knots:
        pts = sorted(set(pts) | set(knots))
    finite_end = math.isfinite(upper)
    if finite_end:
        pts.append(upper)
    mag_set = set(mags)
    pieces = g.pieces()
    piece_lo = [pc.lo for pc in pieces[1:]]

    best = (-math.inf, 0.0, RIGHT_LIMIT, 0)

    def consider(value, t, kind, seg):
        nonlocal best
        if value > best[0]:
            best = (value, t, kind, seg)

    def objective(piece, t, s2, s3):
        if t == 0.0:
            # only the first segment reaches 0 and there S3 == 0
            return piece(0.0) / g_ref * s2 / norm
        gt = piece(t)
        return gt / g_ref * (_mterm(weight, s3) / t + s2) / norm

    n_seg = len(pts) - 1 if finite_end else len(pts)
    for j in range(n_seg):
        lo = pts[j]
        hi = pts[j + 1] if j + 1 < len(pts) else math.inf
        seg = profile.segment(hi) if math.isfinite(hi) else len(mags)
        s2, s3 = profile.tail2[seg], profile.below3[seg]
        mid = lo + 1.0 if not math.isfinite(hi) else 0.5 * (lo + hi)
        piece = pieces[bisect.bisect_left(piece_lo, mid)]
        lo_kind = RIGHT_LIMIT if (lo == 0.0 or lo in mag_set) else ATTAINED
        consider(objective(piece, lo, s2, s3), lo, lo_kind, seg)
        if math.isfinite(hi):
            hi_kind = LEFT_LIMIT if (finite_end and j + 1 == len(pts) - 1) else ATTAINED
            consider(objective(piece, hi, s2, s3), hi, hi_kind, seg)
        # on an unbounded last segment S2 == 0 and g(t)/t is non-increasing,
        # so the left endpoint already dominates
    return best


def _result_from(ctx, g, eps, weight, gamma_for_terms, g_ref) -> FractionResult:
    prof = ctx.profile
    norm = ctx.bn2
    upper = eps * ctx.bn
    value, t, kind, seg = segment_sup(prof, g, upper, weight, g_ref, norm)
    b = ctx.bn
    piece_val = g.limit_at_zero() if t == 0.0 else g(t)
    ratio = piece_val / g_ref
    s2, s3 = prof.tail2[seg], prof.below3[seg]
    m_term = 0.0 if t == 0.0 else ratio * _mterm(gamma_for_terms, s3) / t / norm
    l_term = ratio * s2 / norm
    # report eps itself rather than (eps * B) / B at the open right end
    z = t / b if t != upper else eps
    return FractionResult(value, Witness(z, kind), m_term, l_term)


def esseen_fraction(ctx: SumContext, p: FractionParams) -> FractionResult:
    """``sup_{0<z<eps} g(zB)/(z g(B)) * (gamma |M_n(z)| + z L_n(z))``."""
    g_ref = _g_at_bn(ctx, p.g)
    return _result_from(ctx, p.g, p.eps, p.gamma, p.gamma, g_ref)


def rozovskii_fraction(ctx: SumContext, p: FractionParams) -> FractionResult:
    """``gamma g(eps B)/(eps g(B)) |M_n(eps)| + sup_{0<z<eps} g(zB)/g(B) L_n(z)``."""
    g = p.g
    g_ref = _g_at_bn(ctx, g)
    prof = ctx.profile
    upper = p.eps * ctx.bn
    sup = _result_from(ctx, g, p.eps, 0.0, 0.0, g_ref)
    if math.isfinite(upper):
        s3 = prof.below3[ctx.segment_of(p.eps)]
        ratio_over_t = g(upper) / g_ref / upper
    else:
        s3 = prof.below3[-1]
        ratio_over_t = g.slope_at_infinity() / g_ref
    m_term = 0.0 if s3 == 0.0 else p.gamma * ratio_over_t * abs(s3) / ctx.bn2
    return FractionResult(m_term + sup.value, sup.witness, m_term, sup.value)


def sup_zL(ctx: SumContext, eps: float) -> tuple[float, Witness]:
    """``sup_{0<z<eps} z L_n(z)`` with its witness."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    res = _result_from(ctx, Identity(), eps, 0.0, 0.0, ctx.bn)
    return res.value, res.witness


def _g_at_bn(ctx: SumContext, g: GFunction) -> float:
    gb = g(ctx.bn)
    if not (gb > 0 and math.isfinite(gb)):
        raise GFunctionDomain(f"g(B_n) = {gb!r}")
    return gb


# ---------------------------------------------------------------------------
# per-summand classical fractions (sum outside the sup)


def _summand_sup(d: DiscreteDistribution, g: GFunction, upper: float, weight: float) -> float:
    prof = MomentProfile.from_summands([d])
    if not prof.mags:
        return 0.0
    value, *_ = segment_sup(prof, g, upper, weight, 1.0, 1.0)
    return value


def esseen_classic_fraction(ctx: SumContext) -> float:
    """``B^-3 sum_k sup_{z>0} (|mu_k(z)| + z sigma_k^2(z))``."""
    g = Identity()
    return math.fsum(_summand_sup(d, g, math.inf, 1.0) for d in ctx.summands) / (ctx.bn2 * ctx.bn)


def esseen_bounded_fraction(ctx: SumContext) -> float:
    """As :func:`esseen_classic_fraction` with ``0 < z < B_n``."""
    g = Identity()
    return math.fsum(_summand_sup(d, g, ctx.bn, 1.0) for d in ctx.summands) / (ctx.bn2 * ctx.bn)


def rozovskii_classic_fraction(ctx: SumContext) -> float:
    """``B^-3 sum_k (|mu_k(B)| + sup_{0<z<B} z sigma_k^2(z))``."""
    g = Identity()
    b = ctx.bn
    terms = []
    for d in ctx.summands:
        prof = MomentProfile.from_summands([d])
        if not prof.mags:
            continue
        terms.append(abs(prof.below3[prof.segment(b)]))
        terms.append(segment_sup(prof, g, b, 0.0, 1.0, 1.0)[0])
    return math.fsum(terms) / (ctx.bn2 * b)


def wang_ahmad_fraction(ctx: SumContext, g: GFunction) -> float:
    """``(B^2 g(B))^-1 sum_k sup_{z>0} g(z)/z (|mu_k(z)| + z sigma_k^2(z))``."""
    g_ref = _g_at_bn(ctx, g)
    return math.fsum(_summand_sup(d, g, math.inf, 1.0) for d in ctx.summands) / (ctx.bn2 * g_ref)

