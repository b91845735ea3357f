"""Command-line interface: validate, baseline, score, analyze, report, synth."""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from pathlib import Path

from .baseline import build_baseline, read_baseline_file, write_baseline_csv
from .corpus import ObservationConfig, filter_fields, load_corpus_files
from .pipeline import (
    StageError,
    load_reference_baseline,
    run_pipeline,
    run_report,
)
from .scoring import WeightScheme, score_corpus, write_scores_csv
from .synth import SynthSpec, generate_corpus, write_synth_corpus


def _read_json(path: str) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _resolve_config(args: argparse.Namespace) -> ObservationConfig:
    data = _read_json(args.config) if args.config else {}
    overrides = {
        "window_start": getattr(args, "window_start", None),
        "window_end": getattr(args, "window_end", None),
        "min_field_size": getattr(args, "min_field_size", None),
        "indicator": getattr(args, "indicator", None),
        "histogram_bin_width": getattr(args, "bin_width", None),
        "rng_seed": getattr(args, "seed", None),
    }
    if "window_start" not in data and overrides["window_start"] is None:
        # report-style commands run without a corpus window
        data.setdefault("window_start", 1)
        data.setdefault("window_end", 1)
    return ObservationConfig.from_mapping(data, **overrides)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file mirroring the observation config")
    parser.add_argument("--window-start", type=int, dest="window_start")
    parser.add_argument("--window-end", type=int, dest="window_end")
    parser.add_argument("--min-field-size", type=int, dest="min_field_size")
    parser.add_argument("--indicator", choices=("fss", "po"))
    parser.add_argument("--bin-width", type=float, dest="bin_width")
    parser.add_argument("--seed", type=int)


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--roster", required=True, help="researchers.csv")
    parser.add_argument("--publications", required=True, help="publications.jsonl")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prodskew",
        description=(
            "Score researcher productivity and characterize the shape of the "
            "per-field score distributions."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="parse inputs and report counts")
    _add_corpus_flags(p_validate)
    _add_config_flags(p_validate)

    p_baseline = sub.add_parser("baseline", help="build the citation baseline table")
    p_baseline.add_argument("--publications", help="publication stream to average")
    p_baseline.add_argument("--reference", help="separate reference stream")
    p_baseline.add_argument("--out-dir", required=True)
    _add_config_flags(p_baseline)

    p_score = sub.add_parser("score", help="write per-researcher scores")
    _add_corpus_flags(p_score)
    p_score.add_argument("--reference", help="reference stream for the baseline")
    p_score.add_argument("--baseline", help="precomputed baseline.csv")
    p_score.add_argument("--out-dir", required=True)
    p_score.add_argument("--po-fractional", action="store_true")
    _add_config_flags(p_score)

    p_analyze = sub.add_parser("analyze", help="full pipeline: tables, plots, manifest")
    _add_corpus_flags(p_analyze)
    p_analyze.add_argument("--reference")
    p_analyze.add_argument("--baseline")
    p_analyze.add_argument("--out-dir", required=True)
    p_analyze.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    p_analyze.add_argument("--size-quantile", type=float, default=0.75)
    p_analyze.add_argument("--po-fractional", action="store_true")
    p_analyze.add_argument(
        "--recompute-css-at-uda",
        action="store_true",
        help="also emit discipline thresholds recomputed on pooled scores",
    )
    _add_config_flags(p_analyze)

    p_report = sub.add_parser("report", help="tables and plots from a scores.csv")
    p_report.add_argument("--scores", required=True)
    p_report.add_argument("--out-dir", required=True)
    p_report.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    p_report.add_argument("--size-quantile", type=float, default=0.75)
    _add_config_flags(p_report)

    p_synth = sub.add_parser("synth", help="generate a synthetic corpus")
    p_synth.add_argument("--spec", required=True, help="JSON synthesis spec")
    p_synth.add_argument("--out-dir", required=True)
    p_synth.add_argument("--seed", type=int, help="override the seed from the --spec file")
    return parser


def _cmd_validate(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    corpus = load_corpus_files(args.roster, args.publications, config)
    retained, excluded = filter_fields(corpus)
    stats = corpus.stats
    print(
        "ok "
        f"researchers={len(corpus.researchers)} "
        f"publications={len(corpus.publications)} "
        f"fields={len(corpus.field_codes())} "
        f"fields_retained={len(retained.field_codes())} "
        f"fields_excluded={len(excluded)} "
        f"warnings={stats.warning_count} "
        f"unknown_author_refs={stats.unknown_author_refs}"
    )
    return 0


def _cmd_baseline(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    source = args.reference or args.publications
    if not source:
        raise StageError("baseline", "baseline needs --publications or --reference")
    baseline = load_reference_baseline(Path(source), config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_baseline_csv(baseline, out / "baseline.csv")
    print(f"wrote {out / 'baseline.csv'}")
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    indicator = args.indicator or config.indicator
    corpus = load_corpus_files(args.roster, args.publications, config)
    corpus, _ = filter_fields(corpus)
    baseline = None
    if indicator == "fss":
        if args.baseline:
            baseline = read_baseline_file(args.baseline)
        elif args.reference:
            baseline = load_reference_baseline(Path(args.reference), config)
        else:
            baseline = build_baseline(corpus.publications)
    scheme = WeightScheme.from_config(config.weight_scheme)
    counter: Counter[str] = Counter()
    scores = score_corpus(
        corpus,
        indicator,
        baseline,
        scheme,
        po_fractional=args.po_fractional,
        fallback_counter=counter,
    )
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    disciplines = {code: corpus.discipline_of(code) for code in scores}
    write_scores_csv(scores, disciplines, out / "scores.csv")
    if baseline is not None:
        write_baseline_csv(baseline, out / "baseline.csv")
    print(f"wrote {out / 'scores.csv'}")
    return 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    result = run_pipeline(
        args.roster,
        args.publications,
        config,
        args.out_dir,
        indicator=args.indicator,
        reference_path=args.reference,
        baseline_path=args.baseline,
        fmt=args.format,
        size_quantile=args.size_quantile,
        po_fractional=args.po_fractional,
        recompute_css_at_uda=args.recompute_css_at_uda,
    )
    print(
        f"analyzed {len(result.analyses)} fields -> {result.out_dir} "
        f"(tables={len(result.tables)}, plots={len(result.plots)})"
    )
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    result = run_report(
        args.scores,
        config,
        args.out_dir,
        indicator=args.indicator,
        fmt=args.format,
        size_quantile=args.size_quantile,
    )
    print(
        f"reported {len(result.analyses)} fields -> {result.out_dir} "
        f"(tables={len(result.tables)}, plots={len(result.plots)})"
    )
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    data = _read_json(args.spec)
    if args.seed is not None:
        data["seed"] = args.seed
    spec = SynthSpec.from_mapping(data)
    synth = generate_corpus(spec)
    paths = write_synth_corpus(synth, args.out_dir)
    print(
        f"generated researchers={len(synth.researchers)} "
        f"publications={len(synth.publications)} -> {Path(args.out_dir)}"
    )
    for path in paths.values():
        print(f"  {path}")
    return 0


_COMMANDS = {
    "validate": ("load", _cmd_validate),
    "baseline": ("baseline", _cmd_baseline),
    "score": ("score", _cmd_score),
    "analyze": ("pipeline", _cmd_analyze),
    "report": ("pipeline", _cmd_report),
    "synth": ("synth", _cmd_synth),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    stage, handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except StageError as exc:
        print(f"error: stage={exc.stage}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: stage={stage}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
