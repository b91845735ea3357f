"""Figure analogs: partition bars, decay scatter, and skewness panels as SVG + CSV."""

from __future__ import annotations

import csv
from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import FieldAnalysis
from .fractal import FieldClassification, FractalAssessment
from .report import DisciplineSummary, GrandSummary
from .skewstats import BoxplotSummary, boxplot_summary, histogram

# Deterministic SVG output: fixed id salt, no embedded creation date.
plt.rcParams["svg.hashsalt"] = "prodskew"

_A_LABELS = ("up+lp", "fp", "hp+vhp")
_B_LABELS = ("fp", "hp", "vhp")
_A_COLORS = ("#c6dbef", "#6baed6", "#2171b5")
_B_COLORS = ("#fdd0a2", "#fd8d3c", "#d94801")


def _save(fig, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        for row in rows:
            writer.writerow(["" if v is None else v for v in row])


def _stacked_bars(ax, codes, share_rows, labels, colors) -> None:
    y = np.arange(len(codes))
    left = np.zeros(len(codes))
    for index, (label, color) in enumerate(zip(labels, colors)):
        widths = np.array([100.0 * row[index] for row in share_rows])
        ax.barh(y, widths, left=left, height=0.8, label=label, color=color)
        left += widths
    ax.set_yticks(y)
    ax.set_yticklabels(codes, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlim(0, 100)
    ax.set_xlabel("share of researchers (%)")


def partition_bars_a(
    analyses: Mapping[str, FieldAnalysis], svg_path: Path, csv_path: Path
) -> None:
    """Per-field stacked A-triples with dashed guides at the mean end shares."""
    codes = sorted(analyses)
    rows = [analyses[code].triple_a.shares for code in codes]
    mean_first = float(np.mean([r[0] for r in rows]))
    mean_last = float(np.mean([r[2] for r in rows]))
    fig, ax = plt.subplots(figsize=(7, max(2.5, 0.28 * len(codes))))
    _stacked_bars(ax, codes, rows, _A_LABELS, _A_COLORS)
    ax.axvline(100.0 * mean_first, linestyle="--", color="black", linewidth=0.8)
    ax.axvline(100.0 - 100.0 * mean_last, linestyle="--", color="black", linewidth=0.8)
    ax.legend(loc="lower right", fontsize=7)
    ax.set_title("Category shares per field, whole population")
    fig.tight_layout()
    _save(fig, svg_path)
    _write_csv(
        csv_path,
        ("field_code", "up_lp", "fp", "hp_vhp", "mean_first_share", "mean_last_share"),
        [
            (code, repr(r[0]), repr(r[1]), repr(r[2]), repr(mean_first), repr(mean_last))
            for code, r in zip(codes, rows)
        ],
    )


def partition_bars_ab(
    analyses: Mapping[str, FieldAnalysis], svg_path: Path, csv_path: Path
) -> None:
    """Paired stacked bars: the whole population and its upper tail per field."""
    codes = sorted(analyses)
    height = 0.38
    fig, ax = plt.subplots(figsize=(7, max(3.0, 0.5 * len(codes))))
    y = np.arange(len(codes))
    csv_rows = []
    for offset, (kind, labels, colors) in (
        (height / 2 + 0.02, ("a", _A_LABELS, _A_COLORS)),
        (-height / 2 - 0.02, ("b", _B_LABELS, _B_COLORS)),
    ):
        for index, (label, color) in enumerate(zip(labels, colors)):
            lefts = []
            widths = []
            for code in codes:
                fa = analyses[code]
                shares = (
                    fa.triple_a.shares
                    if kind == "a"
                    else (fa.subpop_b.triple.shares if fa.subpop_b.triple else None)
                )
                if shares is None:
                    lefts.append(0.0)
                    widths.append(0.0)
                else:
                    lefts.append(100.0 * sum(shares[:index]))
                    widths.append(100.0 * shares[index])
            ax.barh(
                y + offset,
                widths,
                left=lefts,
                height=height,
                label=f"{kind}: {label}",
                color=color,
            )
    for code in codes:
        fa = analyses[code]
        b_shares = fa.subpop_b.triple.shares if fa.subpop_b.triple else (None, None, None)
        csv_rows.append(
            (
                code,
                *(repr(s) for s in fa.triple_a.shares),
                *("" if s is None else repr(s) for s in b_shares),
            )
        )
    ax.set_yticks(y)
    ax.set_yticklabels(codes, fontsize=7)
    ax.invert_yaxis()
    ax.set_xlim(0, 100)
    ax.set_xlabel("share of researchers (%)")
    ax.legend(loc="lower right", fontsize=6, ncol=2)
    ax.set_title("Category shares per field, whole population vs upper tail")
    fig.tight_layout()
    _save(fig, svg_path)
    _write_csv(
        csv_path,
        ("field_code", "a_up_lp", "a_fp", "a_hp_vhp", "b_fp", "b_hp", "b_vhp"),
        csv_rows,
    )


def ddr_scatter(
    assessments: Mapping[str, FractalAssessment],
    classification: FieldClassification,
    svg_path: Path,
    csv_path: Path,
) -> None:
    """DDR1 vs DDR2 per assessable field with median crosshairs."""
    codes = [code for code in sorted(assessments) if assessments[code].assessable]
    xs = np.array([assessments[code].ddr1 for code in codes])
    ys = np.array([assessments[code].ddr2 for code in codes])
    flags = [bool(classification.flags.get(code)) for code in codes]
    fig, ax = plt.subplots(figsize=(6, 5))
    candidate_mask = np.array(flags)
    if candidate_mask.any():
        ax.scatter(
            xs[candidate_mask],
            ys[candidate_mask],
            s=18,
            color="#2171b5",
            label="candidate",
        )
    if (~candidate_mask).any():
        ax.scatter(
            xs[~candidate_mask],
            ys[~candidate_mask],
            s=18,
            color="#969696",
            label="other",
        )
    ax.axvline(classification.median_ddr1, linestyle="--", color="black", linewidth=0.8)
    ax.axhline(classification.median_ddr2, linestyle="--", color="black", linewidth=0.8)
    ax.set_xlabel("ddr1")
    ax.set_ylabel("ddr2")
    ax.legend(fontsize=7)
    ax.set_title("Decay-ratio differences across fields")
    fig.tight_layout()
    _save(fig, svg_path)
    _write_csv(
        csv_path,
        ("field_code", "ddr1", "ddr2", "fractal_candidate", "median_ddr1", "median_ddr2"),
        [
            (
                code,
                repr(float(x)),
                repr(float(y)),
                str(flag).lower(),
                repr(classification.median_ddr1),
                repr(classification.median_ddr2),
            )
            for code, x, y, flag in zip(codes, xs, ys, flags)
        ],
    )


def _bxp_dict(summary: BoxplotSummary, label: str) -> dict:
    return {
        "label": label,
        "med": summary.q2,
        "q1": summary.q1,
        "q3": summary.q3,
        "whislo": summary.whisker_low,
        "whishi": summary.whisker_high,
        "fliers": list(summary.outliers),
    }


def gm_panels(
    analyses: Mapping[str, FieldAnalysis],
    bin_width: float,
    svg_path: Path,
    values_csv: Path,
    bins_csv: Path,
    box_csv: Path,
) -> None:
    """Histogram plus boxplot of the per-field skewness index for both populations."""
    codes = sorted(analyses)
    gm_a = {code: analyses[code].gm_a.gm for code in codes}
    gm_b = {code: analyses[code].gm_b.gm for code in codes if analyses[code].gm_b is not None}
    populations = [("a", gm_a)]
    if gm_b:
        populations.append(("b", gm_b))
    fig, axes = plt.subplots(
        len(populations), 2, figsize=(8, 3.2 * len(populations)), squeeze=False
    )
    bin_rows = []
    box_rows = []
    for row_index, (kind, values_map) in enumerate(populations):
        values = [values_map[code] for code in sorted(values_map)]
        hist = histogram(values, bin_width)
        box = boxplot_summary(values)
        ax_hist = axes[row_index][0]
        centers = [
            (hist.edges[i] + hist.edges[i + 1]) / 2.0 for i in range(len(hist.counts))
        ]
        ax_hist.bar(centers, hist.counts, width=hist.bin_width * 0.92, color="#6baed6")
        ax_hist.set_xlabel(f"gm ({kind})")
        ax_hist.set_ylabel("fields")
        ax_box = axes[row_index][1]
        ax_box.bxp(
            [_bxp_dict(box, f"gm ({kind})")], showfliers=True, orientation="horizontal"
        )
        for index in range(len(hist.counts)):
            bin_rows.append(
                (
                    kind,
                    repr(hist.edges[index]),
                    repr(hist.edges[index + 1]),
                    hist.counts[index],
                )
            )
        outlier_fields = sorted(
            code for code, value in values_map.items() if value in box.outliers
        )
        box_rows.append(
            (
                kind,
                repr(box.q1),
                repr(box.q2),
                repr(box.q3),
                repr(box.iqr),
                repr(box.whisker_low),
                repr(box.whisker_high),
                ";".join(outlier_fields),
            )
        )
    fig.suptitle("Skewness of per-field score distributions")
    fig.tight_layout()
    _save(fig, svg_path)
    _write_csv(
        values_csv,
        ("field_code", "gm_a", "gm_b"),
        [
            (code, repr(gm_a[code]), repr(gm_b[code]) if code in gm_b else "")
            for code in codes
        ],
    )
    _write_csv(bins_csv, ("population", "bin_left", "bin_right", "count"), bin_rows)
    _write_csv(
        box_csv,
        (
            "population",
            "q1",
            "q2",
            "q3",
            "iqr",
            "whisker_low",
            "whisker_high",
            "outlier_fields",
        ),
        box_rows,
    )


def discipline_bars(
    summaries: Sequence[DisciplineSummary],
    grand: GrandSummary,
    variant: str,
    svg_path: Path,
    csv_path: Path,
) -> None:
    """Discipline-level stacked bars; variant picks pooled counts or field means."""
    if variant not in ("pooled", "field_mean"):
        raise ValueError(f"unknown discipline bar variant {variant!r}")
    codes = [s.discipline_code for s in summaries]
    if variant == "pooled":
        rows_a = [s.shares_a for s in summaries]
        rows_b = [s.shares_b for s in summaries]
    else:
        rows_a = [s.field_mean_shares_a for s in summaries]
        rows_b = [s.field_mean_shares_b for s in summaries]
    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(10, max(2.5, 0.45 * len(codes))))
    _stacked_bars(ax_a, codes, rows_a, _A_LABELS, _A_COLORS)
    ax_a.set_title(f"whole population ({variant})")
    ax_a.legend(fontsize=6)
    present = [(code, row) for code, row in zip(codes, rows_b) if row is not None]
    if present:
        _stacked_bars(
            ax_b,
            [code for code, _ in present],
            [row for _, row in present],
            _B_LABELS,
            _B_COLORS,
        )
        ax_b.legend(fontsize=6)
    ax_b.set_title(f"upper tail ({variant})")
    fig.tight_layout()
    _save(fig, svg_path)
    csv_rows = []
    for code, row_a, row_b in zip(codes, rows_a, rows_b):
        b_cells = ("", "", "") if row_b is None else tuple(repr(v) for v in row_b)
        csv_rows.append((code, *(repr(v) for v in row_a), *b_cells))
    grand_a = (
        grand.total.shares_a if variant == "pooled" else grand.total.field_mean_shares_a
    )
    grand_b = (
        grand.total.shares_b if variant == "pooled" else grand.total.field_mean_shares_b
    )
    b_cells = ("", "", "") if grand_b is None else tuple(repr(v) for v in grand_b)
    csv_rows.append(("ALL", *(repr(v) for v in grand_a), *b_cells))
    _write_csv(
        csv_path,
        ("discipline_code", "a_up_lp", "a_fp", "a_hp_vhp", "b_fp", "b_hp", "b_vhp"),
        csv_rows,
    )


def render_plots(
    analyses: Mapping[str, FieldAnalysis],
    assessments: Mapping[str, FractalAssessment],
    classification: FieldClassification | None,
    summaries: Sequence[DisciplineSummary],
    grand: GrandSummary,
    bin_width: float,
    out_dir: str | Path,
) -> dict[str, Path]:
    """Render every figure analog under out_dir/plots; returns the SVG paths."""
    plots_dir = Path(out_dir) / "plots"
    plots_dir.mkdir(parents=True, exist_ok=True)
    outputs: dict[str, Path] = {}
    outputs["partition_bars_a"] = plots_dir / "partition_bars_a.svg"
    partition_bars_a(analyses, outputs["partition_bars_a"], plots_dir / "partition_bars_a.csv")
    outputs["partition_bars_ab"] = plots_dir / "partition_bars_ab.svg"
    partition_bars_ab(analyses, outputs["partition_bars_ab"], plots_dir / "partition_bars_ab.csv")
    if classification is not None and assessments:
        outputs["ddr_scatter"] = plots_dir / "ddr_scatter.svg"
        ddr_scatter(
            assessments, classification, outputs["ddr_scatter"], plots_dir / "ddr_scatter.csv"
        )
    outputs["gm_panels"] = plots_dir / "gm_panels.svg"
    gm_panels(
        analyses,
        bin_width,
        outputs["gm_panels"],
        plots_dir / "gm_values.csv",
        plots_dir / "gm_hist_bins.csv",
        plots_dir / "gm_box.csv",
    )
    for variant in ("pooled", "field_mean"):
        key = f"discipline_bars_{variant}"
        outputs[key] = plots_dir / f"{key}.svg"
        discipline_bars(summaries, grand, variant, outputs[key], plots_dir / f"{key}.csv")
    return outputs
