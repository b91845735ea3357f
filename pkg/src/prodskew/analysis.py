"""Per-field distribution analysis: characteristic scores, partitions, skewness, decay."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from . import cssdist, fractal, skewstats


@dataclass(frozen=True)
class FieldAnalysis:
    """Everything the report layer needs about one field's score distribution."""

    field_code: str
    discipline_code: str
    n: int
    scores: tuple[float, ...]
    css: cssdist.CharacteristicScores
    partition: cssdist.CssPartition
    triple_a: cssdist.PartitionTriple
    subpop_b: cssdist.SubpopulationB
    gm_a: skewstats.SkewnessResult
    gm_b: skewstats.SkewnessResult | None
    assessment: fractal.FractalAssessment | None


def analyze_field(
    field_code: str, discipline_code: str, values: Sequence[float]
) -> FieldAnalysis:
    scores = tuple(float(v) for v in values)
    css = cssdist.characteristic_scores(scores)
    part = cssdist.partition(scores, css)
    t_a = cssdist.triple_a(part)
    sub_b = cssdist.subpopulation_b(scores, css)
    gm_a = skewstats.gm_index(scores)
    gm_b = None if sub_b.empty else skewstats.gm_index(sub_b.values)
    assessment = None
    if sub_b.triple is not None:
        assessment = fractal.decay_ratios(t_a, sub_b.triple)
    return FieldAnalysis(
        field_code=field_code,
        discipline_code=discipline_code,
        n=len(scores),
        scores=scores,
        css=css,
        partition=part,
        triple_a=t_a,
        subpop_b=sub_b,
        gm_a=gm_a,
        gm_b=gm_b,
        assessment=assessment,
    )


def analyze_fields(
    scores_by_field: Mapping[str, Sequence[float]],
    disciplines: Mapping[str, str],
) -> dict[str, FieldAnalysis]:
    """Analyze every field, keyed and ordered by field code."""
    missing = sorted(set(scores_by_field) - set(disciplines))
    if missing:
        raise ValueError(f"no discipline recorded for fields: {', '.join(missing)}")
    return {
        code: analyze_field(code, disciplines[code], scores_by_field[code])
        for code in sorted(scores_by_field)
    }


def assessments_of(
    analyses: Mapping[str, FieldAnalysis],
) -> dict[str, fractal.FractalAssessment]:
    """Fractal assessments for fields whose upper tail exists."""
    return {
        code: fa.assessment for code, fa in analyses.items() if fa.assessment is not None
    }


def consistency_check(fa: FieldAnalysis) -> bool:
    """Recompute the field from its stored scores and compare; used as a self-audit."""
    redone = analyze_field(fa.field_code, fa.discipline_code, fa.scores)
    return (
        redone.css == fa.css
        and redone.partition == fa.partition
        and redone.triple_a == fa.triple_a
        and redone.subpop_b == fa.subpop_b
        and redone.gm_a == fa.gm_a
        and redone.gm_b == fa.gm_b
        and redone.assessment == fa.assessment
    )
