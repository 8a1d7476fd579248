"""Members of the Katz class: positive g on (0, inf) with g and z/g(z) both non-decreasing.

Every built-in member is piecewise of the form ``g(t) = a + b * t**delta`` with
``a, b >= 0``.  The sup engine in :mod:`lindeberg_lab.fractions` works on that
piece list directly, so it never has to sample g.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

REL_SLACK = 1e-12


class DomainError(ValueError):
    """g was asked for a value at a non-positive argument."""


class GFunctionDomain(ValueError):
    """g produced an unusable value (non-positive or non-finite) where one was needed."""


class GSpecError(ValueError):
    """Unparseable g-function spec string."""


@dataclass(frozen=True)
class Piece:
    """``g(t) = a + b * t**delta`` on ``[lo, hi]``."""

    lo: float
    hi: float
    a: float
    b: float
    delta: float

    def __call__(self, t: float) -> float:
        if self.b == 0.0:
            return self.a
        return self.a + self.b * t**self.delta


class GFunction:
    """Base class; subclasses provide :meth:`pieces` and a spec string."""

    def pieces(self) -> tuple[Piece, ...]:
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    def knots(self) -> tuple[float, ...]:
        """Interior points where the piece formula changes."""
        return tuple(p.lo for p in self.pieces()[1:])

    def __call__(self, z: float) -> float:
        if not z > 0:
            raise DomainError(f"g is only defined for z > 0, got {z!r}")
        ps = self.pieces()
        if len(ps) == 1:
            return ps[0](z)
        i = bisect.bisect_left(self.knots(), z)
        return ps[i](z)

    def limit_at_zero(self) -> float:
        """``g(0+)``."""
        return self.pieces()[0](0.0)

    def slope_at_infinity(self) -> float:
        """``lim g(t)/t`` as ``t -> inf``."""
        last = self.pieces()[-1]
        return last.b if last.delta == 1.0 else 0.0

    def probe_grid(self) -> list[float]:
        """A grid on which :func:`validate_gclass` is exact for this kind."""
        base = [10.0**k for k in range(-6, 7)]
        extra: list[float] = []
        for k in self.knots():
            extra += [k * 0.5, k, k * 2.0]
        return sorted(set(base + extra))

    def __repr__(self) -> str:
        return f"<g {self.spec()}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, GFunction) and self.spec() == other.spec()

    def __hash__(self) -> int:
        return hash(self.spec())


_INF = math.inf


class Identity(GFunction):
    def pieces(self):
        return (Piece(0.0, _INF, 0.0, 1.0, 1.0),)

    def spec(self):
        return "identity"


class ConstantOne(GFunction):
    def pieces(self):
        return (Piece(0.0, _INF, 1.0, 0.0, 1.0),)

    def spec(self):
        return "const"


@dataclass(frozen=True, eq=False, repr=False)
class Power(GFunction):
    delta: float

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"power exponent must lie in [0, 1], got {self.delta}")

    def pieces(self):
        if self.delta == 0.0:
            return (Piece(0.0, _INF, 1.0, 0.0, 1.0),)
        return (Piece(0.0, _INF, 0.0, 1.0, self.delta),)

    def spec(self):
        return f"power:{self.delta!r}"


@dataclass(frozen=True, eq=False, repr=False)
class ClipAbove(GFunction):
    """``min(z, a)``; with ``a = B_n`` this is the minimal extremal member g0."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("clip level must be positive")

    def pieces(self):
        return (Piece(0.0, self.a, 0.0, 1.0, 1.0), Piece(self.a, _INF, self.a, 0.0, 1.0))

    def spec(self):
        return f"clip-above:{self.a!r}"


@dataclass(frozen=True, eq=False, repr=False)
class ClipBelow(GFunction):
    """``max(z, a)``; with ``a = B_n`` this is the maximal extremal member g1."""

    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("clip level must be positive")

    def pieces(self):
        return (Piece(0.0, self.a, self.a, 0.0, 1.0), Piece(self.a, _INF, 0.0, 1.0, 1.0))

    def spec(self):
        return f"clip-below:{self.a!r}"


@dataclass(frozen=True, eq=False, repr=False)
class Scaled(GFunction):
    c: float
    inner: GFunction

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("scale factor must be positive")

    def pieces(self):
        return tuple(Piece(p.lo, p.hi, self.c * p.a, self.c * p.b, p.delta) for p in self.inner.pieces())

    def spec(self):
        return f"scaled:{self.c!r}:{self.inner.spec()}"


@dataclass(frozen=True, eq=False, repr=False)
class Tabulated(GFunction):
    """Linear interpolation through ``knots``; the end segments are extended as lines.

    Membership is not enforced at construction; use :func:`validate_gclass`.
    """

    points: tuple[tuple[float, float], ...]
    source: str | None = None

    def __post_init__(self):
        pts = tuple((float(z), float(g)) for z, g in self.points)
        if not pts:
            raise ValueError("tabulated g needs at least one knot")
        zs = [z for z, _ in pts]
        if any(z <= 0 for z in zs) or any(b <= a for a, b in zip(zs, zs[1:])):
            raise ValueError("knot abscissae must be positive and strictly increasing")
        object.__setattr__(self, "points", pts)

    def pieces(self):
        pts = self.points
        if len(pts) == 1:
            return (Piece(0.0, _INF, pts[0][1], 0.0, 1.0),)
        lines = []
        for (z0, g0), (z1, g1) in zip(pts, pts[1:]):
            slope = (g1 - g0) / (z1 - z0)
            lines.append((g0 - slope * z0, slope))
        bounds = [0.0] + [z for z, _ in pts[1:-1]] + [_INF]
        return tuple(Piece(lo, hi, a, b, 1.0) for (lo, hi), (a, b) in zip(zip(bounds, bounds[1:]), lines))

    def probe_grid(self):
        zs = [z for z, _ in self.points]
        mids = [(a + b) / 2 for a, b in zip(zs, zs[1:])]
        return sorted(set([zs[0] / 4, zs[0] / 2] + zs + mids + [zs[-1] * 2, zs[-1] * 4]))

    def spec(self):
        if self.source:
            return f"tabulated:@{self.source}"
        return "tabulated:" + json.dumps([list(p) for p in self.points])


def find_gclass_violation(g: GFunction, grid: Sequence[float]) -> tuple[float, float] | None:
    """First consecutive grid pair breaking positivity or either monotonicity, else None."""
    zs = list(grid)
    if len(zs) < 2:
        raise ValueError("probe grid needs at least two points")
    prev_z = prev_g = None
    for z in zs:
        gz = g(z)
        if not (gz > 0 and math.isfinite(gz)):
            return (prev_z if prev_z is not None else z, z)
        if prev_z is not None:
            if gz < prev_g * (1 - REL_SLACK):
                return (prev_z, z)
            if z / gz < (prev_z / prev_g) * (1 - REL_SLACK):
                return (prev_z, z)
        prev_z, prev_g = z, gz
    return None


def validate_gclass(g: GFunction, grid: Sequence[float] | None = None) -> bool:
    if grid is None:
        grid = g.probe_grid()
    return find_gclass_violation(g, grid) is None


def parse_member(text: str, bn: float | None = None) -> GFunction:
    """:func:`parse_gspec` that also rejects functions outside the class."""
    g = parse_gspec(text, bn)
    bad = find_gclass_violation(g, g.probe_grid())
    if bad is not None:
        raise GSpecError(f"{text!r} is not increasing with z/g(z) increasing: fails between z={bad[0]!r} and z={bad[1]!r}")
    return g


def envelope_check(g: GFunction, a: float, z: float) -> bool:
    """``min(z/a, 1) <= g(z)/g(a) <= max(z/a, 1)`` up to relative slack."""
    r = g(z) / g(a)
    lo, hi = min(z / a, 1.0), max(z / a, 1.0)
    return lo * (1 - REL_SLACK) <= r <= hi * (1 + REL_SLACK)


def _parse_number(text: str, bn: float | None) -> float:
    if text == "B":
        if bn is None:
            raise GSpecError("'B' needs a context to resolve against")
        return bn
    try:
        value = float(text)
    except ValueError as exc:
        raise GSpecError(f"not a number: {text!r}") from exc
    if not math.isfinite(value):
        raise GSpecError(f"not a finite number: {text!r}")
    return value


def parse_gspec(text: str, bn: float | None = None) -> GFunction:
    """Parse a CLI g spec (``identity``, ``const``, ``power:d``, ``clip-above:a``,
    ``clip-below:a``, ``scaled:c:<inner>``, ``tabulated:@file.json``).

    The literal ``B`` in place of a number resolves to ``bn``.
    """
    head, _, rest = text.strip().partition(":")
    try:
        if head == "identity" and not rest:
            return Identity()
        if head == "const" and not rest:
            return ConstantOne()
        if head == "power":
            return Power(_parse_number(rest, bn))
        if head == "clip-above":
            return ClipAbove(_parse_number(rest, bn))
        if head == "clip-below":
            return ClipBelow(_parse_number(rest, bn))
        if head == "scaled":
            c, _, inner = rest.partition(":")
            if not inner:
                raise GSpecError("scaled needs 'scaled:c:<inner>'")
            return Scaled(_parse_number(c, bn), parse_gspec(inner, bn))
        if head == "tabulated":
            if rest.startswith("@"):
                path = Path(rest[1:])
                try:
                    data = json.loads(path.read_text(encoding="utf-8"))
                except (OSError, json.JSONDecodeError) as exc:
                    raise GSpecError(f"cannot read knots from {path}: {exc}") from exc
                return Tabulated(tuple(map(tuple, data)), source=str(path))
            return Tabulated(tuple(map(tuple, json.loads(rest))))
    except GSpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise GSpecError(f"invalid g spec {text!r}: {exc}") from exc
    raise GSpecError(f"unknown g spec {text!r}")


def needs_bn(text: str) -> bool:
    return any(tok == "B" for tok in text.split(":"))
