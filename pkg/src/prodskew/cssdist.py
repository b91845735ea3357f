"""Characteristic scores and scale: self-truncating means and the five-category partition."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

CATEGORY_LABELS = ("up", "lp", "fp", "hp", "vhp")

DEGENERATE_NONE = "none"
DEGENERATE_MU2 = "mu2_undefined"
DEGENERATE_MU3_EMPTY = "mu3_undefined"
DEGENERATE_MU3_SINGLETON = "mu3_singleton"

# Hand-entered share triples rounded to one decimal may miss 1 by a few
# thousandths, so the sum check is loose; triples built from counts are tested
# against a much tighter tolerance.
_TRIPLE_SUM_TOL = 5e-3


def _as_scores(scores: Sequence[float]) -> np.ndarray:
    arr = np.asarray(scores, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("scores must be a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("scores must be finite")
    if np.any(arr < 0):
        raise ValueError("scores must be non-negative")
    return arr


@dataclass(frozen=True)
class CharacteristicScores:
    """mu1 = mean of all scores, mu2 = mean above mu1, mu3 = mean above mu2.

    When a truncation step finds nothing strictly above the previous level the
    missing mean repeats the level below it and degenerate_level says which
    step collapsed; mu3_singleton flags a defined mu3 resting on one score.
    """

    mu1: float
    mu2: float
    mu3: float
    degenerate_level: str


def characteristic_scores(scores: Sequence[float]) -> CharacteristicScores:
    arr = _as_scores(scores)
    mu1 = float(np.mean(arr))
    above1 = arr[arr > mu1]
    if above1.size == 0:
        return CharacteristicScores(mu1, mu1, mu1, DEGENERATE_MU2)
    mu2 = float(np.mean(above1))
    above2 = arr[arr > mu2]
    if above2.size == 0:
        return CharacteristicScores(mu1, mu2, mu2, DEGENERATE_MU3_EMPTY)
    mu3 = float(np.mean(above2))
    level = DEGENERATE_MU3_SINGLETON if above2.size == 1 else DEGENERATE_NONE
    return CharacteristicScores(mu1, mu2, mu3, level)


def category_labels(scores: Sequence[float], cs: CharacteristicScores) -> tuple[str, ...]:
    """Per-score category: up (zero), lp, fp, hp, vhp by the mu boundaries."""
    arr = _as_scores(scores)
    conditions = [arr == 0, arr <= cs.mu1, arr <= cs.mu2, arr <= cs.mu3]
    choices = ["up", "lp", "fp", "hp"]
    labels = np.select(conditions, choices, default="vhp")
    return tuple(str(label) for label in labels)


@dataclass(frozen=True)
class CssPartition:
    up: int
    lp: int
    fp: int
    hp: int
    vhp: int

    @property
    def counts(self) -> tuple[int, int, int, int, int]:
        return (self.up, self.lp, self.fp, self.hp, self.vhp)

    @property
    def population_size(self) -> int:
        return sum(self.counts)

    @property
    def shares(self) -> tuple[float, float, float, float, float]:
        n = self.population_size
        return tuple(c / n for c in self.counts)  # type: ignore[return-value]


def partition(scores: Sequence[float], cs: CharacteristicScores) -> CssPartition:
    """Count scores per category; counts always conserve the population size."""
    labels = category_labels(scores, cs)
    counts = {name: 0 for name in CATEGORY_LABELS}
    for label in labels:
        counts[label] += 1
    part = CssPartition(**counts)
    assert part.population_size == len(labels)
    return part


@dataclass(frozen=True)
class PartitionTriple:
    """Three-way share split of a population; shares ordered low to high."""

    shares: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.shares) != 3:
            raise ValueError("a partition triple needs exactly three shares")
        shares = tuple(float(s) for s in self.shares)
        if any(s < 0 for s in shares):
            raise ValueError("shares must be non-negative")
        if abs(sum(shares) - 1.0) > _TRIPLE_SUM_TOL:
            raise ValueError(f"shares must sum to 1, got {sum(shares)!r}")
        object.__setattr__(self, "shares", shares)


def triple_a(part: CssPartition) -> PartitionTriple:
    """Whole-population triple: {up+lp, fp, hp+vhp} over everyone."""
    n = part.population_size
    if n == 0:
        raise ValueError("cannot build a triple over an empty population")
    return PartitionTriple(((part.up + part.lp) / n, part.fp / n, (part.hp + part.vhp) / n))


@dataclass(frozen=True)
class SubpopulationB:
    """Scores strictly above mu1, with their {fp, hp, vhp} triple.

    triple is None exactly when the subpopulation is empty (constant data).
    """

    values: tuple[float, ...]
    triple: PartitionTriple | None

    @property
    def empty(self) -> bool:
        return not self.values


def subpopulation_b(scores: Sequence[float], cs: CharacteristicScores) -> SubpopulationB:
    arr = _as_scores(scores)
    values = arr[arr > cs.mu1]
    if values.size == 0:
        return SubpopulationB(values=(), triple=None)
    labels = category_labels(values, cs)
    n = values.size
    fp = labels.count("fp")
    hp = labels.count("hp")
    vhp = labels.count("vhp")
    assert fp + hp + vhp == n  # everything above mu1 lands in the top three bins
    return SubpopulationB(
        values=tuple(float(v) for v in values),
        triple=PartitionTriple((fp / n, hp / n, vhp / n)),
    )
