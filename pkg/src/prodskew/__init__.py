"""Productivity scoring and distribution-shape analysis for publication corpora."""

from __future__ import annotations

__version__ = "0.1.0"

from .analysis import FieldAnalysis, analyze_field, analyze_fields
from .baseline import (
    BaselineError,
    CitationBaseline,
    build_baseline,
    read_baseline_csv,
    scaling_factor,
    write_baseline_csv,
)
from .corpus import (
    AuthorSlot,
    Corpus,
    CorpusError,
    ObservationConfig,
    Publication,
    Researcher,
    filter_fields,
    load_corpus,
    load_corpus_files,
)
from .cssdist import (
    CharacteristicScores,
    CssPartition,
    PartitionTriple,
    SubpopulationB,
    characteristic_scores,
    partition,
    subpopulation_b,
    triple_a,
)
from .fractal import (
    FieldClassification,
    FractalAssessment,
    classify_fields,
    decay_ratios,
    size_restricted_classification,
)
from .report import (
    DisciplineSummary,
    GrandSummary,
    aggregate_discipline,
    grand_summary,
    render_tables,
    summarize_disciplines,
)
from .scoring import (
    ScoreRecord,
    WeightScheme,
    compute_fss,
    compute_po,
    fractional_contribution,
    position_class,
    score_corpus,
    score_field,
)
from .skewstats import (
    BoxplotSummary,
    HistogramSummary,
    ShapiroWilkResult,
    SkewnessResult,
    boxplot_summary,
    coefficient_of_variation,
    gm_index,
    histogram,
    pearson,
    quantile,
    shapiro_wilk,
)
from .synth import CitationModel, PositiveDist, SynthSpec, generate_corpus, generate_scores
