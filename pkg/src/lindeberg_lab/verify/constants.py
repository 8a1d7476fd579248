"""Published constants and the two derived ones that can be recomputed here."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from scipy import optimize

from ..clt_engine import normal_cdf

INF = math.inf


class NoConstantAvailable(LookupError):
    pass


class RootNotBracketed(ArithmeticError):
    pass


def _x0_equation(x: float) -> float:
    return 8 * (math.cos(x) - 1) + 8 * x * math.sin(x) - 4 * x * x * math.cos(x) - x**3 * math.sin(x)


def gamma_star_constants() -> tuple[float, float, float]:
    """``(x0, kappa, gamma_star)``: root on (pi, 2 pi) by bisection, then direct evaluation."""
    lo, hi = math.pi, 2 * math.pi
    if _x0_equation(lo) * _x0_equation(hi) >= 0:
        raise RootNotBracketed("x0 equation has no sign change on (pi, 2pi)")
    x0 = optimize.bisect(_x0_equation, lo, hi, xtol=1e-13, rtol=4 * 2.0**-52, maxiter=200)
    kappa = math.hypot(math.cos(x0) - 1 + x0 * x0 / 2, math.sin(x0) - x0) / (x0 * x0)
    return x0, kappa, 1 / math.sqrt(6 * kappa)


def _a1_gap(x: float) -> float:
    return abs(1 / (1 + x * x) - normal_cdf(-x))


def a1_lower_bound(scan_hi: float = 20.0, scan_points: int = 2001) -> tuple[float, float]:
    """``(x*, sup_{x>0} |1/(1+x^2) - Phi(-x)|)``.

    A coarse scan picks the bracketing cell, golden-section refines it.
    """
    step = scan_hi / (scan_points - 1)
    grid = [k * step for k in range(1, scan_points)]
    k = max(range(len(grid)), key=lambda i: _a1_gap(grid[i]))
    lo = grid[k - 1] if k > 0 else grid[0] / 2
    hi = grid[min(k + 1, len(grid) - 1)]
    x_star = optimize.golden(lambda x: -_a1_gap(x), brack=(lo, grid[k], hi), tol=1e-12)
    return float(x_star), _a1_gap(float(x_star))


GAMMA_STAR = gamma_star_constants()[2]

# (eps, gamma) -> upper bound for A_E(eps, gamma); entries with gamma* use the computed value
_AE = {
    (1.21, 0.2): 2.8904,
    (1.24, 0.2): 2.8900,
    (INF, 0.2): 2.8846,
    (1.76, 0.4): 2.7360,
    (5.94, 0.4): 2.7300,
    (INF, 0.4): 2.7299,
    (1.0, GAMMA_STAR): 2.7367,
    (1.87, GAMMA_STAR): 2.6999,
    (INF, GAMMA_STAR): 2.6919,
    (1.0, 0.72): 2.7298,
    (1.0, INF): 2.7286,
    (4.35, 1.0): 2.6600,
    (INF, 1.0): 2.6588,
    (INF, 0.97): 2.6599,
    (2.56, INF): 2.6500,
    (2.62, 5.0): 2.6500,
    (2.65, 4.0): 2.6500,
    (2.74, 3.0): 2.6500,
    (3.13, 2.0): 2.6500,
    (4.0, 1.62): 2.6500,
    (5.37, 1.5): 2.6500,
    (INF, 1.43): 2.6500,
    (INF, INF): 2.6409,
}

_AR = {
    (1.21, 0.2): 2.8700,
    (5.39, 0.2): 2.8635,
    (1.76, 0.4): 2.6999,
    (2.63, 0.4): 2.6933,
    (0.5, GAMMA_STAR): 3.0396,
    (1.0, GAMMA_STAR): 2.7286,
    (1.99, GAMMA_STAR): 2.6600,
    (2.12, GAMMA_STAR): 2.6593,
    (3.0, GAMMA_STAR): 2.6769,
    (5.0, GAMMA_STAR): 2.7562,
}


@dataclass(frozen=True)
class ConstantsTable:
    A1_upper: float = 1.87
    A1_upper_iid_BE: float = 0.4690
    A1_upper_BE: float = 0.5583
    A1_lower: float = 0.54093
    AE_1_1: float = 2.73
    AE_inf_1: float = 2.66
    AR_1_1: float = 2.73
    gamma_star: float = 0.5599
    kappa: float = 0.5315
    x0: float = 5.487414
    AE: Mapping[tuple[float, float], float] = field(default_factory=lambda: MappingProxyType(dict(_AE)))
    AR: Mapping[tuple[float, float], float] = field(default_factory=lambda: MappingProxyType(dict(_AR)))

    def esseen(self, eps: float, gamma: float) -> tuple[float, tuple[float, float]]:
        """Smallest tabulated A_E(eps', gamma') with eps' <= eps and gamma' <= gamma.

        Valid because A_E decreases in both arguments.
        """
        hits = [(v, key) for key, v in self.AE.items() if key[0] <= eps and key[1] <= gamma]
        if not hits:
            raise NoConstantAvailable(f"no A_E entry dominates (eps={eps}, gamma={gamma})")
        return min(hits)

    def rozovskii(self, eps: float, gamma: float) -> tuple[float, tuple[float, float]]:
        """Smallest tabulated A_R(eps, gamma') with gamma' <= gamma and the same eps.

        A_R is only known to decrease in gamma, so eps must match a table row.
        """
        hits = [(v, key) for key, v in self.AR.items() if key[0] == eps and key[1] <= gamma]
        if not hits:
            raise NoConstantAvailable(f"no A_R entry for eps={eps} with gamma' <= {gamma}")
        return min(hits)

    def rozovskii_eps_values(self) -> list[float]:
        return sorted({e for e, _ in self.AR})


CONSTANTS = ConstantsTable()
