"""Zero-mean finite discrete random variables and their truncated moments.

Indicator conventions are deliberate and must not be "harmonised":
the second-moment tail keeps atoms with ``|x| >= z`` while both third-moment
truncations keep atoms with ``|x| < z``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

MASS_TOL = 1e-12
MEAN_TOL = 1e-12


class DistributionError(ValueError):
    """Base class for invalid distribution input."""


class EmptyAtomList(DistributionError):
    pass


class NonUnitMass(DistributionError):
    pass


class NonZeroMean(DistributionError):
    pass


@dataclass(frozen=True)
class DiscreteDistribution:
    """Atoms ``(value, prob)`` sorted by value, values pairwise distinct.

    Build instances through :func:`make_discrete`; the constructor trusts its
    input.
    """

    atoms: tuple[tuple[float, float], ...]

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.atoms)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def is_symmetric(self) -> bool:
        table = dict(self.atoms)
        return all(table.get(-v) == p for v, p in self.atoms)

    def scaled(self, c: float) -> "DiscreteDistribution":
        if c <= 0:
            raise ValueError("scale must be positive")
        return DiscreteDistribution(tuple((c * v, p) for v, p in self.atoms))

    def negated(self) -> "DiscreteDistribution":
        return DiscreteDistribution(tuple((-v, p) for v, p in reversed(self.atoms)))

    def to_json(self) -> dict:
        return {"atoms": [[v, p] for v, p in self.atoms]}


def make_discrete(raw_atoms: Iterable[Sequence[float]]) -> DiscreteDistribution:
    """Validate, merge and sort raw ``(value, prob)`` pairs.

    Equal values are merged by exact float equality.  Raises
    :class:`EmptyAtomList`, :class:`NonUnitMass` or :class:`NonZeroMean`.
    """
    merged: dict[float, list[float]] = {}
    for item in raw_atoms:
        if len(item) != 2:
            raise DistributionError(f"atom must be a (value, prob) pair, got {item!r}")
        v, p = float(item[0]), float(item[1])
        if not math.isfinite(v) or not math.isfinite(p):
            raise DistributionError(f"non-finite atom ({v}, {p})")
        if p <= 0:
            raise DistributionError(f"probabilities must be positive, got {p}")
        merged.setdefault(v + 0.0, []).append(p)  # + 0.0 folds -0.0 into 0.0
    if not merged:
        raise EmptyAtomList("distribution needs at least one atom")

    atoms = tuple(sorted((v, math.fsum(ps)) for v, ps in merged.items()))
    total = math.fsum(p for _, p in atoms)
    if abs(total - 1.0) > MASS_TOL:
        raise NonUnitMass(f"probabilities sum to {total!r}, not 1")
    mean = math.fsum(v * p for v, p in atoms)
    scale = math.fsum(abs(v) * p for v, p in atoms)
    if abs(mean) > MEAN_TOL * scale:
        raise NonZeroMean(f"mean is {mean!r}, expected 0")
    return DiscreteDistribution(atoms)


def two_point(a: float, b: float) -> DiscreteDistribution:
    """Zero-mean law on ``{-a, b}`` (``a, b > 0``)."""
    return make_discrete([(-a, b / (a + b)), (b, a / (a + b))])


def point_mass_zero() -> DiscreteDistribution:
    return DiscreteDistribution(((0.0, 1.0),))


def variance(d: DiscreteDistribution) -> float:
    return math.fsum(v * v * p for v, p in d.atoms)


def truncated_second(d: DiscreteDistribution, z: float) -> float:
    """``E X^2 1(|X| >= z)``."""
    return math.fsum(v * v * p for v, p in d.atoms if abs(v) >= z)


def truncated_third_alg(d: DiscreteDistribution, z: float) -> float:
    """``E X^3 1(|X| < z)``, signed."""
    return math.fsum(v * v * v * p for v, p in d.atoms if abs(v) < z)


def truncated_third_abs(d: DiscreteDistribution, z: float) -> float:
    """``E |X|^3 1(|X| < z)``."""
    return math.fsum(abs(v) ** 3 * p for v, p in d.atoms if abs(v) < z)


def moment_g(d: DiscreteDistribution, g) -> float:
    """``E X^2 g(|X|)``; zero atoms contribute nothing and ``g(0)`` is never called."""
    return math.fsum(v * v * g(abs(v)) * p for v, p in d.atoms if v != 0.0)


def parse_distribution(obj) -> DiscreteDistribution:
    """Parse ``{"atoms": [[value, prob], ...]}``; entries may be numbers or decimal strings."""
    if not isinstance(obj, dict) or "atoms" not in obj:
        raise DistributionError('expected an object with an "atoms" list')
    atoms = obj["atoms"]
    if not isinstance(atoms, list):
        raise DistributionError('"atoms" must be a list')
    try:
        pairs = [(float(v), float(p)) for v, p in atoms]
    except (TypeError, ValueError) as exc:
        raise DistributionError(f"bad atom entry: {exc}") from exc
    return make_discrete(pairs)


def load_distribution(path: str | Path) -> DiscreteDistribution:
    with open(path, encoding="utf-8") as fh:
        return parse_distribution(json.load(fh))
