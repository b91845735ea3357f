"""End-to-end orchestration: load, filter, score, analyze, classify, render, manifest."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from collections.abc import Mapping
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .analysis import FieldAnalysis, analyze_fields, assessments_of
from .baseline import (
    CitationBaseline,
    build_baseline,
    read_baseline_file,
    write_baseline_csv,
)
from .corpus import (
    Corpus,
    ObservationConfig,
    filter_fields,
    load_corpus_files,
    parse_publications,
)
from .cssdist import characteristic_scores, partition, subpopulation_b, triple_a
from .fractal import FieldClassification, classify_fields, size_restricted_classification
from .plots import render_plots
from .report import (
    GrandSummary,
    TableSpec,
    build_all_tables,
    build_fractal_table,
    grand_summary,
    render_table,
    render_tables,
    summarize_disciplines,
)
from .scoring import WeightScheme, score_corpus, write_scores_csv, read_scores_csv


class StageError(RuntimeError):
    """An error tagged with the pipeline stage that produced it."""

    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


@contextmanager
def _stage(name: str):
    try:
        yield
    except StageError:
        raise
    except (ValueError, OSError, KeyError) as exc:
        raise StageError(name, str(exc)) from exc


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class PipelineResult:
    out_dir: Path
    analyses: dict[str, FieldAnalysis]
    classification: FieldClassification | None
    restricted: FieldClassification | None
    grand: GrandSummary
    tables: dict[str, Path]
    plots: dict[str, Path]
    manifest_path: Path
    excluded_fields: tuple[str, ...] = ()
    warnings: dict[str, int] = field(default_factory=dict)


def _classify(
    analyses: Mapping[str, FieldAnalysis], size_quantile: float | None
) -> tuple[FieldClassification | None, FieldClassification | None, dict[str, int]]:
    notes: dict[str, int] = {}
    assessments = assessments_of(analyses)
    try:
        classification = classify_fields(assessments)
    except ValueError:
        # fewer than two assessable fields; tables fall back to not_assessable
        notes["classification_skipped"] = 1
        return None, None, notes
    restricted = None
    if size_quantile is not None:
        sizes = {code: analyses[code].n for code in assessments}
        try:
            restricted = size_restricted_classification(assessments, sizes, size_quantile)
        except ValueError:
            # too few assessable fields survive the size cut; recorded, not fatal
            notes["size_restricted_skipped"] = 1
    return classification, restricted, notes


def _analyze_and_render(
    scores_by_field: Mapping[str, list],
    disciplines: Mapping[str, str],
    config: ObservationConfig,
    out_dir: Path,
    fmt: str,
    size_quantile: float | None,
) -> PipelineResult:
    with _stage("analyze"):
        values = {
            code: [record.value for record in records]
            for code, records in scores_by_field.items()
        }
        analyses = analyze_fields(values, disciplines)
    with _stage("classify"):
        classification, restricted, notes = _classify(analyses, size_quantile)
    with _stage("aggregate"):
        summaries = summarize_disciplines(analyses)
        grand = grand_summary(analyses, summaries)
    with _stage("render"):
        tables = build_all_tables(analyses, classification, summaries, grand)
        table_paths = render_tables(tables, fmt, out_dir)
        if restricted is not None:
            restricted_table = build_fractal_table(analyses, restricted)
            restricted_table = TableSpec(
                name="fractal_restricted",
                columns=restricted_table.columns,
                formats=restricted_table.formats,
                rows=tuple(
                    row
                    for row in restricted_table.rows
                    if row[0] in restricted.flags
                ),
            )
            table_paths["fractal_restricted"] = render_table(restricted_table, fmt, out_dir)
        plot_paths = render_plots(
            analyses,
            assessments_of(analyses),
            classification,
            summaries,
            grand,
            config.histogram_bin_width,
            out_dir,
        )
    return PipelineResult(
        out_dir=out_dir,
        analyses=analyses,
        classification=classification,
        restricted=restricted,
        grand=grand,
        tables=table_paths,
        plots=plot_paths,
        manifest_path=out_dir / "run_manifest.json",
        warnings=notes,
    )


def _write_manifest(
    result: PipelineResult,
    command: str,
    config: ObservationConfig,
    scheme: WeightScheme,
    inputs: Mapping[str, Path],
    counts: Mapping[str, object],
) -> None:
    manifest = {
        "version": __version__,
        "command": command,
        "config": config.to_mapping(),
        "weight_scheme": scheme.describe(),
        "inputs": {
            name: {"path": str(path), "sha256": _sha256(path)}
            for name, path in sorted(inputs.items())
        },
        "counts": dict(counts),
        "classification": None
        if result.classification is None
        else result.classification.to_mapping(),
        "size_restricted": None
        if result.restricted is None
        else result.restricted.to_mapping(),
        "outputs": sorted(
            [p.name for p in result.tables.values()]
            + [f"plots/{p.name}" for p in result.plots.values()]
        ),
        "warnings": dict(result.warnings),
    }
    with open(result.manifest_path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_reference_baseline(
    reference_path: Path, config: ObservationConfig
) -> CitationBaseline:
    """Build a baseline from a separate publication stream, whitelist applied."""
    with open(reference_path, encoding="utf-8") as handle:
        pubs = parse_publications(handle)
    eligible = [p for p in pubs if p.doc_type in config.doc_types]
    return build_baseline(eligible)


def run_pipeline(
    roster_path: str | Path,
    publications_path: str | Path,
    config: ObservationConfig,
    out_dir: str | Path,
    *,
    indicator: str | None = None,
    reference_path: str | Path | None = None,
    baseline_path: str | Path | None = None,
    fmt: str = "csv",
    size_quantile: float | None = 0.75,
    po_fractional: bool = False,
    recompute_css_at_uda: bool = False,
    command: str = "analyze",
) -> PipelineResult:
    """Full run from raw inputs to tables, plots, scores, and manifest."""
    roster_path = Path(roster_path)
    publications_path = Path(publications_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    indicator = indicator or config.indicator
    with _stage("load"):
        corpus = load_corpus_files(roster_path, publications_path, config)
    with _stage("filter"):
        corpus, excluded = filter_fields(corpus)
    fallback_counter: Counter[str] = Counter()
    baseline = None
    inputs = {"roster": roster_path, "publications": publications_path}
    if indicator == "fss":
        with _stage("baseline"):
            if baseline_path is not None:
                baseline = read_baseline_file(Path(baseline_path))
                inputs["baseline"] = Path(baseline_path)
            elif reference_path is not None:
                baseline = load_reference_baseline(Path(reference_path), config)
                inputs["reference"] = Path(reference_path)
            else:
                baseline = build_baseline(corpus.publications)
            write_baseline_csv(baseline, out / "baseline.csv")
    with _stage("score"):
        scheme = WeightScheme.from_config(config.weight_scheme)
        scores = score_corpus(
            corpus,
            indicator,
            baseline,
            scheme,
            po_fractional=po_fractional,
            fallback_counter=fallback_counter,
        )
        disciplines = {code: corpus.discipline_of(code) for code in scores}
        write_scores_csv(scores, disciplines, out / "scores.csv")
    result = _analyze_and_render(scores, disciplines, config, out, fmt, size_quantile)
    if recompute_css_at_uda:
        with _stage("render"):
            _render_recomputed_uda(result.analyses, fmt, out, result.tables)
    result.excluded_fields = excluded
    counts = {
        "researchers": len(corpus.researchers),
        "publications": len(corpus.publications),
        "fields_retained": len(corpus.field_codes()),
        "fields_excluded": list(excluded),
        "indicator": indicator,
        "load": corpus.stats.to_mapping(),
        "load_warnings": corpus.stats.warning_count,
        "baseline_fallbacks": fallback_counter.get("missing_category", 0),
    }
    with _stage("render"):
        _write_manifest(result, command, config, scheme, inputs, counts)
    return result


def _render_recomputed_uda(
    analyses: Mapping[str, FieldAnalysis], fmt: str, out_dir: Path, table_paths: dict
) -> None:
    """Alternative discipline table: CSS recomputed on pooled raw scores.

    The standard discipline summary pools field-level counts; this variant
    re-derives the thresholds at discipline level for comparison.
    """
    rows = []
    groups: dict[str, list[float]] = {}
    for fa in analyses.values():
        groups.setdefault(fa.discipline_code, []).extend(fa.scores)
    for code in sorted(groups):
        pooled = groups[code]
        css = characteristic_scores(pooled)
        part = partition(pooled, css)
        a = triple_a(part)
        sub = subpopulation_b(pooled, css)
        b_shares = (None, None, None) if sub.triple is None else sub.triple.shares
        rows.append((code, len(pooled), *a.shares, len(sub.values), *b_shares))
    table = TableSpec(
        name="discipline_summary_recomputed",
        columns=(
            "discipline_code",
            "n",
            "a_up_lp",
            "a_fp",
            "a_hp_vhp",
            "b_n",
            "b_fp",
            "b_hp",
            "b_vhp",
        ),
        formats=("str", "int", "pct", "pct", "pct", "int", "pct", "pct", "pct"),
        rows=tuple(rows),
    )
    table_paths["discipline_summary_recomputed"] = render_table(table, fmt, out_dir)


def run_report(
    scores_path: str | Path,
    config: ObservationConfig,
    out_dir: str | Path,
    *,
    indicator: str | None = None,
    fmt: str = "csv",
    size_quantile: float | None = 0.75,
    min_field_size: int | None = None,
) -> PipelineResult:
    """Analysis and rendering from a precomputed scores table."""
    scores_path = Path(scores_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with _stage("load"):
        with open(scores_path, encoding="utf-8", newline="") as handle:
            scores, disciplines = read_scores_csv(handle)
        indicators = {
            record.indicator for records in scores.values() for record in records
        }
        wanted = indicator or config.indicator
        if indicators != {wanted}:
            raise StageError(
                "load",
                f"scores table carries indicator(s) {sorted(indicators)}, expected {wanted}",
            )
    with _stage("filter"):
        threshold = min_field_size if min_field_size is not None else config.min_field_size
        kept = {code: records for code, records in scores.items() if len(records) >= threshold}
        if not kept:
            raise StageError("filter", f"every field falls below the minimum size {threshold}")
        excluded = tuple(sorted(set(scores) - set(kept)))
        disciplines = {code: disciplines[code] for code in kept}
    result = _analyze_and_render(kept, disciplines, config, out, fmt, size_quantile)
    result.excluded_fields = excluded
    scheme = WeightScheme.from_config(config.weight_scheme)
    counts = {
        "researchers": sum(len(records) for records in kept.values()),
        "fields_retained": len(kept),
        "fields_excluded": list(excluded),
        "indicator": wanted,
    }
    with _stage("render"):
        _write_manifest(result, "report", config, scheme, {"scores": scores_path}, counts)
    return result
