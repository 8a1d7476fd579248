"""Independent brute-force oracles used only by the tests.

Nothing here imports the fraction engine or the convolution code; L_n, M_n and
g are re-derived straight from their definitions.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

import mpmath
import numpy as np

from lindeberg_lab import gclass


def atoms_of(ctx):
    vals = np.array([v for d in ctx.summands for v, _ in d.atoms], dtype=float)
    probs = np.array([p for d in ctx.summands for _, p in d.atoms], dtype=float)
    return vals, probs


def g_vec(g, t):
    """Evaluate a built-in g on an array, from its textbook definition."""
    t = np.asarray(t, dtype=float)
    if isinstance(g, gclass.Identity):
        return t.copy()
    if isinstance(g, gclass.ConstantOne):
        return np.ones_like(t)
    if isinstance(g, gclass.Power):
        return t**g.delta
    if isinstance(g, gclass.ClipAbove):
        return np.minimum(t, g.a)
    if isinstance(g, gclass.ClipBelow):
        return np.maximum(t, g.a)
    if isinstance(g, gclass.Scaled):
        return g.c * g_vec(g.inner, t)
    if isinstance(g, gclass.Tabulated):
        zs = np.array([z for z, _ in g.points])
        gs = np.array([v for _, v in g.points])
        if len(zs) == 1:
            return np.full_like(t, gs[0])
        out = np.interp(t, zs, gs)
        lo_s = (gs[1] - gs[0]) / (zs[1] - zs[0])
        hi_s = (gs[-1] - gs[-2]) / (zs[-1] - zs[-2])
        out = np.where(t < zs[0], gs[0] + lo_s * (t - zs[0]), out)
        return np.where(t > zs[-1], gs[-1] + hi_s * (t - zs[-1]), out)
    raise TypeError(g)


def brute_LM(vals, probs, bn, z, right=False):
    """L_n(z), M_n(z) on an array of z; ``right=True`` gives the right limits."""
    z = np.atleast_1d(np.asarray(z, dtype=float))
    # compare in z-space so that breakpoints |x|/bn hit their own atoms exactly
    t = z[:, None]
    a = (np.abs(vals) / bn)[None, :]
    tail = a > t if right else a >= t
    below = ~tail
    bn2 = float(np.sum(vals**2 * probs))
    L = np.sum(np.where(tail, vals**2 * probs, 0.0), axis=1) / bn2
    M = np.sum(np.where(below & (a > 0), vals**3 * probs, 0.0), axis=1) / (bn2 * bn)
    return L, M


class OracleGrid:
    """L_n and M_n on a dense geometric grid in (0, eps) plus the atom breakpoints.

    Built once per (ctx, eps) so that many g and gamma can reuse it.
    """

    def __init__(self, ctx, eps, grid_points=100_000):
        self.vals, self.probs = atoms_of(ctx)
        self.eps = eps
        self._cache = {}
        self.bn = math.sqrt(float(np.sum(self.vals**2 * self.probs)))
        self.bps = np.unique(np.abs(self.vals[self.vals != 0])) / self.bn
        top = eps if math.isfinite(eps) else 1e6 * max(self.bps.max(), 1.0)
        grid = np.geomspace(top * 1e-9, top * (1 - 1e-15), grid_points)
        self.z, self.L, self.M = self._with_limits(grid, self.bps)
        if math.isfinite(eps):
            L, Mv = brute_LM(self.vals, self.probs, self.bn, [eps])  # left limit at eps
            self.z = np.append(self.z, eps)
            self.L, self.M = np.append(self.L, L), np.append(self.M, Mv)

    def _with_limits(self, grid, exact):
        exact = exact[(exact > 0) & (exact < self.eps)]
        parts = [(grid, False)]
        if len(exact):
            parts += [(exact, False), (exact, True)]  # values (left limits) and right limits
        zs, Ls, Ms = [], [], []
        for pts, right in parts:
            L, Mv = brute_LM(self.vals, self.probs, self.bn, pts, right=right)
            zs.append(pts), Ls.append(L), Ms.append(Mv)
        return np.concatenate(zs), np.concatenate(Ls), np.concatenate(Ms)

    def candidates(self, g):
        """(z, L, M, g(zB)/g(B)) over all candidate points for this g."""
        key = g.spec()
        if key not in self._cache:
            z, L, Mv = self.z, self.L, self.M
            knots = np.array(g.knots(), dtype=float) / self.bn
            if len(knots):
                zk, Lk, Mk = self._with_limits(np.empty(0), knots)
                z, L, Mv = np.concatenate([z, zk]), np.concatenate([L, Lk]), np.concatenate([Mv, Mk])
            gb = g_vec(g, [self.bn])[0]
            self._cache[key] = (z, L, Mv, g_vec(g, z * self.bn) / gb)
        return self._cache[key]


def esseen_oracle(ctx, g, eps, gamma, grid=None):
    grid = grid or OracleGrid(ctx, eps)
    z, L, Mv, ratio = grid.candidates(g)
    gb = g_vec(g, [grid.bn])[0]
    mt = np.where(Mv == 0, 0.0, gamma * np.abs(Mv))
    obj = ratio / z * mt + ratio * L
    # z -> 0+: L -> 1, M -> 0
    g0 = float(g_vec(g, [1e-300])[0])
    return max(float(obj.max()), g0 / gb)


def rozovskii_oracle(ctx, g, eps, gamma, grid=None):
    grid = grid or OracleGrid(ctx, eps)
    _, L, _, ratio = grid.candidates(g)
    bn = grid.bn
    gb = g_vec(g, [bn])[0]
    sup = max(float(np.max(ratio * L)), float(g_vec(g, [1e-300])[0]) / gb)
    vals, probs = grid.vals, grid.probs
    if math.isfinite(eps):
        _, m_eps = brute_LM(vals, probs, bn, [eps])
        lead = g_vec(g, [eps * bn])[0] / (eps * gb)
        m = abs(m_eps[0])
    else:
        m = abs(float(np.sum(vals**3 * probs))) / bn**3
        big = 1e30
        lead = g_vec(g, [big * bn])[0] / (big * gb)
    return (gamma * lead * m if m else 0.0) + sup


def enumerate_sum(ctx):
    """Exact law of S_n / B_n by walking every outcome path."""
    out = defaultdict(float)
    for combo in itertools.product(*[d.atoms for d in ctx.summands]):
        s = 0.0
        p = 1.0
        for v, q in combo:
            s += v
            p *= q
        out[s] += p
    bn = math.sqrt(math.fsum(v * v * p for d in ctx.summands for v, p in d.atoms))
    return sorted((s / bn, p) for s, p in out.items())


mpmath.mp.dps = 50


def phi_series(x: float) -> float:
    """Phi(x) from 1/2 + phi(x) * sum x^(2k+1)/(2k+1)!!, evaluated in 50-digit arithmetic."""
    xm = mpmath.mpf(x)
    ax = abs(xm)
    term = ax
    total = ax
    k = 0
    while True:
        k += 1
        term = term * ax * ax / (2 * k + 1)
        total += term
        if term <= mpmath.mpf(10) ** -45 * total:
            break
    half_gap = mpmath.exp(-ax * ax / 2) / mpmath.sqrt(2 * mpmath.pi) * total
    val = mpmath.mpf(1) / 2 + half_gap
    return float(val if x >= 0 else 1 - val)


def phi_lower_tail_asymptotic(x: float, terms: int = 6) -> float:
    """Phi(-x) for large x from the Mills-ratio expansion."""
    s, term = 1.0, 1.0
    for k in range(1, terms):
        term *= -(2 * k - 1) / (x * x)
        s += term
    return math.exp(-x * x / 2) / (x * math.sqrt(2 * math.pi)) * s
