"""Check a single inequality or the extremal-g identities on one context."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

from .. import fractions as fr
from ..clt_engine import delta_n as compute_delta
from ..gclass import ClipAbove, ClipBelow, GFunction, Identity, parse_member
from .constants import CONSTANTS, ConstantsTable, NoConstantAvailable

REL_SLACK = 1e-12
# "identically one" clauses are compared up to a few ulps
UNIT_TOL = 4 * math.ulp(1.0)


class InequalityId(str, enum.Enum):
    KP = "KP"
    OSIPOV1 = "OSIPOV1"
    OSIPOV = "OSIPOV"
    ESSEEN = "ESSEEN"
    ESSEEN_BOUNDED = "ESSEEN_BOUNDED"
    ROZOVSKII = "ROZOVSKII"
    WANG_AHMAD = "WANG_AHMAD"
    ESSEEN_GAMMA = "ESSEEN_GAMMA"
    ROZOVSKII_GAMMA = "ROZOVSKII_GAMMA"
    ESSEEN_G = "ESSEEN_G"
    ROZOVSKII_G = "ROZOVSKII_G"
    ESSEEN_G_GAMMA = "ESSEEN_G_GAMMA"
    ROZOVSKII_G_GAMMA = "ROZOVSKII_G_GAMMA"


I = InequalityId

# which of (g, eps, gamma) each inequality consumes
NEEDS = {
    I.KP: ("g",),
    I.OSIPOV1: (),
    I.OSIPOV: ("eps",),
    I.ESSEEN: (),
    I.ESSEEN_BOUNDED: (),
    I.ROZOVSKII: (),
    I.WANG_AHMAD: ("g",),
    I.ESSEEN_GAMMA: ("eps", "gamma"),
    I.ROZOVSKII_GAMMA: ("eps", "gamma"),
    I.ESSEEN_G: ("g", "eps"),
    I.ROZOVSKII_G: ("g", "eps"),
    I.ESSEEN_G_GAMMA: ("g", "eps", "gamma"),
    I.ROZOVSKII_G_GAMMA: ("g", "eps", "gamma"),
}


def _enc(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _dec(x):
    return float(x) if x in ("inf", "-inf") else x


@dataclass(frozen=True)
class BoundReport:
    inequality_id: str
    ctx: str
    g: str | None
    eps: float | None
    gamma: float | None
    fraction_value: float
    constant_used: float
    constant_source: str
    delta_n: float
    delta_uncertainty: float
    ratio: float
    passed: bool

    def to_dict(self) -> dict:
        return {k: _enc(v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        return cls(**{k: _dec(v) for k, v in d.items()})


def constant_for(
    ineq: InequalityId, eps: float | None, gamma: float | None, table: ConstantsTable = CONSTANTS
) -> tuple[float, str]:
    """The constant a bound may use, with a note on which table entry supplied it."""
    ineq = I(ineq)
    if ineq in (I.KP, I.OSIPOV1, I.OSIPOV):
        return table.A1_upper, "A1<=1.87"
    if ineq is I.ESSEEN:
        return table.AE_inf_1, "A3<=2.66"
    if ineq is I.ESSEEN_BOUNDED:
        return table.AE_1_1, "A4<=2.73"
    if ineq is I.ROZOVSKII:
        return table.AR_1_1, "A5<=2.73"
    if ineq is I.WANG_AHMAD:
        return table.AE_1_1, "A6<=2.73"
    if ineq is I.ESSEEN_GAMMA:
        v, key = table.esseen(eps, gamma)
        return v, f"AE{key}"
    if ineq in (I.ESSEEN_G, I.ESSEEN_G_GAMMA):
        gam = 1.0 if ineq is I.ESSEEN_G else gamma
        v, key = table.esseen(min(eps, 1.0), gam)
        return v, f"AE{key}"
    if ineq is I.ROZOVSKII_GAMMA:
        v, key = table.rozovskii(eps, gamma)
        return v, f"AR{key}"
    if ineq in (I.ROZOVSKII_G, I.ROZOVSKII_G_GAMMA):
        if math.isinf(eps):
            raise NoConstantAvailable("C_R(inf, .) is infinite")
        gam = 1.0 if ineq is I.ROZOVSKII_G else gamma
        v, key = table.rozovskii(eps, gam)
        factor = max(1.0, eps)
        return factor * v, f"{factor!r}*AR{key}"
    raise ValueError(f"unknown inequality {ineq}")


def fraction_for(ctx: fr.SumContext, ineq: InequalityId, g: GFunction | None, eps, gamma) -> float:
    ineq = I(ineq)
    if ineq is I.KP:
        return fr.katz_petrov_fraction(ctx, g)
    if ineq is I.OSIPOV1:
        return fr.osipov_fraction(ctx, 1.0)
    if ineq is I.OSIPOV:
        return fr.osipov_fraction(ctx, eps)
    if ineq is I.ESSEEN:
        return fr.esseen_classic_fraction(ctx)
    if ineq is I.ESSEEN_BOUNDED:
        return fr.esseen_bounded_fraction(ctx)
    if ineq is I.ROZOVSKII:
        return fr.rozovskii_classic_fraction(ctx)
    if ineq is I.WANG_AHMAD:
        return fr.wang_ahmad_fraction(ctx, g)
    if ineq in (I.ESSEEN_GAMMA, I.ROZOVSKII_GAMMA):
        g = Identity()
    if ineq in (I.ESSEEN_G, I.ROZOVSKII_G):
        gamma = 1.0
    params = fr.FractionParams(g, eps, gamma)
    if ineq.name.startswith("ESSEEN"):
        return fr.esseen_fraction(ctx, params).value
    return fr.rozovskii_fraction(ctx, params).value


def resolve_g(ctx: fr.SumContext, g: GFunction | str | None) -> GFunction | None:
    if g is None or isinstance(g, GFunction):
        return g
    return parse_member(g, ctx.bn)


def check_inequality(
    ctx: fr.SumContext,
    ineq: InequalityId | str,
    g: GFunction | str | None = None,
    eps: float | None = None,
    gamma: float | None = None,
    delta: tuple[float, float] | None = None,
    table: ConstantsTable = CONSTANTS,
) -> BoundReport:
    """Evaluate one bound ``Delta_n <= C * fraction`` on ``ctx``.

    ``delta`` is ``(Delta_n, dropped_mass)`` if already known.  A report fails
    only when the violation exceeds the pruned mass.
    """
    ineq = I(ineq)
    needs = NEEDS[ineq]
    given = {"g": g, "eps": eps, "gamma": gamma}
    for name in needs:
        if given[name] is None:
            raise ValueError(f"{ineq.value} needs {name}")
    g_spec = None
    if "g" in needs:
        g_spec = g if isinstance(g, str) else g.spec()
    eps = eps if "eps" in needs else None
    gamma = gamma if "gamma" in needs else None
    const, source = constant_for(ineq, eps, gamma, table)
    gf = resolve_g(ctx, g) if "g" in needs else None
    value = fraction_for(ctx, ineq, gf, eps, gamma)
    if delta is None:
        delta = compute_delta(ctx)
    dn, unc = delta
    ratio = dn / value if value > 0 else math.inf
    passed = dn - unc <= const * value
    return BoundReport(ineq.value, ctx.describe(), g_spec, eps, gamma, value, const, source, dn, unc, ratio, passed)


@dataclass
class Theorem2Report:
    ctx: str
    eps: float
    gamma: float
    values: dict = field(default_factory=dict)
    clauses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    def to_dict(self) -> dict:
        return {
            "ctx": self.ctx,
            "eps": _enc(self.eps),
            "gamma": _enc(self.gamma),
            "values": {k: _enc(v) for k, v in self.values.items()},
            "clauses": dict(self.clauses),
            "passed": self.passed,
        }


def _leq(a: float, b: float) -> bool:
    return a <= b + REL_SLACK * abs(b)


def theorem2_checks(ctx: fr.SumContext, eps: float, gamma: float) -> Theorem2Report:
    """Representation for g0, two-sided bounds for g1, and the identically-one clauses."""
    b = ctx.bn
    g0, g1 = ClipAbove(b), ClipBelow(b)
    p0 = fr.FractionParams(g0, eps, gamma)
    p1 = fr.FractionParams(g1, eps, gamma)
    r_g0 = fr.rozovskii_fraction(ctx, p0).value
    rep_rhs = gamma / max(eps, 1.0) * abs(fr.M(ctx, eps)) + fr.sup_zL(ctx, min(eps, 1.0))[0]
    e_g1 = fr.esseen_fraction(ctx, p1).value
    r_g1 = fr.rozovskii_fraction(ctx, p1).value

    rep = Theorem2Report(ctx.describe(), eps, gamma)
    rep.values.update(rozovskii_g0=r_g0, representation=rep_rhs, esseen_g1=e_g1, rozovskii_g1=r_g1)
    rep.clauses["rozovskii_g0_representation"] = abs(r_g0 - rep_rhs) <= 1e-10 * max(abs(r_g0), abs(rep_rhs))
    rep.clauses["esseen_g1_lower"] = _leq(1.0, e_g1)
    rep.clauses["esseen_g1_upper"] = _leq(e_g1, max(eps, 1.0) * max(gamma, 1.0))
    rep.clauses["rozovskii_g1_lower"] = _leq(1.0, r_g1)
    rep.clauses["rozovskii_g1_upper"] = _leq(r_g1, max(eps, 1.0) * (gamma + 1.0))
    if gamma <= 1 and eps <= 1:
        rep.clauses["esseen_g1_unit"] = abs(e_g1 - 1.0) <= UNIT_TOL
    if ctx.m_vanishes() and eps <= 1:
        rep.clauses["symmetric_unit"] = abs(e_g1 - 1.0) <= UNIT_TOL and abs(r_g1 - 1.0) <= UNIT_TOL
    return rep
