"""Decay ratios across partition categories and the cross-field fractal screen."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .cssdist import PartitionTriple
from .skewstats import quantile


def _shares(triple: PartitionTriple | Sequence[float]) -> tuple[float, float, float]:
    if isinstance(triple, PartitionTriple):
        return triple.shares
    values = tuple(float(v) for v in triple)
    if len(values) != 3:
        raise ValueError("a partition triple needs exactly three shares")
    return values  # type: ignore[return-value]


@dataclass(frozen=True)
class FractalAssessment:
    """Share decay ratios of the whole population (a) and its upper tail (b).

    dr1 moves from the lowest category to the middle one, dr2 from the middle
    to the top; ddr values compare the two populations.  A zero denominator
    leaves the ratio and anything built on it undefined (None).
    """

    dr1_a: float | None
    dr2_a: float | None
    dr1_b: float | None
    dr2_b: float | None
    ddr1: float | None
    ddr2: float | None

    @property
    def assessable(self) -> bool:
        return self.ddr1 is not None and self.ddr2 is not None


def _ratio(numerator: float, denominator: float) -> float | None:
    if denominator == 0.0:
        return None
    return numerator / denominator


def decay_ratios(
    triple_a: PartitionTriple | Sequence[float],
    triple_b: PartitionTriple | Sequence[float],
) -> FractalAssessment:
    a1, a2, a3 = _shares(triple_a)
    b1, b2, b3 = _shares(triple_b)
    dr1_a = _ratio(a2, a1)
    dr2_a = _ratio(a3, a2)
    dr1_b = _ratio(b2, b1)
    dr2_b = _ratio(b3, b2)
    ddr1 = abs(dr1_a - dr1_b) if dr1_a is not None and dr1_b is not None else None
    ddr2 = abs(dr2_a - dr2_b) if dr2_a is not None and dr2_b is not None else None
    return FractalAssessment(dr1_a, dr2_a, dr1_b, dr2_b, ddr1, ddr2)


@dataclass(frozen=True)
class FieldClassification:
    """Median split of the (ddr1, ddr2) plane across fields.

    flags maps field code to True (candidate: both ddr values at or below the
    medians), False, or None for fields whose ddr pair is undefined.
    """

    median_ddr1: float
    median_ddr2: float
    flags: Mapping[str, bool | None]
    n_fields: int
    assessable_count: int
    candidate_count: int
    size_threshold: float | None = None

    @property
    def candidate_share(self) -> float:
        return self.candidate_count / self.assessable_count

    def to_mapping(self) -> dict:
        return {
            "median_ddr1": self.median_ddr1,
            "median_ddr2": self.median_ddr2,
            "n_fields": self.n_fields,
            "assessable_count": self.assessable_count,
            "candidate_count": self.candidate_count,
            "candidate_share": self.candidate_share,
            "size_threshold": self.size_threshold,
        }


def classify_fields(assessments: Mapping[str, FractalAssessment]) -> FieldClassification:
    """Flag fields whose decay profile is stable between the two populations."""
    assessable = {
        code: a for code, a in assessments.items() if a.assessable
    }
    if len(assessable) < 2:
        raise ValueError(
            f"classification needs at least 2 assessable fields, got {len(assessable)}"
        )
    ddr1_values = [a.ddr1 for a in assessable.values()]
    ddr2_values = [a.ddr2 for a in assessable.values()]
    median1 = quantile(ddr1_values, 0.5)
    median2 = quantile(ddr2_values, 0.5)
    flags: dict[str, bool | None] = {}
    candidates = 0
    for code in sorted(assessments):
        assessment = assessments[code]
        if not assessment.assessable:
            flags[code] = None
            continue
        is_candidate = assessment.ddr1 <= median1 and assessment.ddr2 <= median2
        flags[code] = is_candidate
        candidates += int(is_candidate)
    return FieldClassification(
        median_ddr1=median1,
        median_ddr2=median2,
        flags=flags,
        n_fields=len(assessments),
        assessable_count=len(assessable),
        candidate_count=candidates,
    )


def size_restricted_classification(
    assessments: Mapping[str, FractalAssessment],
    field_sizes: Mapping[str, int],
    size_quantile: float,
) -> FieldClassification:
    """Re-run the screen over fields at or above the given size quantile (ties kept)."""
    if not 0.0 < size_quantile < 1.0:
        raise ValueError(f"size quantile must lie in (0, 1), got {size_quantile}")
    missing = sorted(set(assessments) - set(field_sizes))
    if missing:
        raise ValueError(f"no size recorded for fields: {', '.join(missing)}")
    sizes = [float(field_sizes[code]) for code in assessments]
    threshold = quantile(sizes, size_quantile)
    subset = {
        code: a for code, a in assessments.items() if field_sizes[code] >= threshold
    }
    result = classify_fields(subset)
    return FieldClassification(
        median_ddr1=result.median_ddr1,
        median_ddr2=result.median_ddr2,
        flags=result.flags,
        n_fields=result.n_fields,
        assessable_count=result.assessable_count,
        candidate_count=result.candidate_count,
        size_threshold=threshold,
    )
