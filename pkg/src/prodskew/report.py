"""Discipline-level aggregation and rendering of the table analogs."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import FieldAnalysis
from .cssdist import CATEGORY_LABELS
from .fractal import FieldClassification
from .skewstats import coefficient_of_variation

TABLE_FORMATS = ("csv", "markdown", "json")

_EXTENSIONS = {"csv": "csv", "markdown": "md", "json": "json"}


@dataclass(frozen=True)
class Extreme:
    value: float
    field_code: str


def _extremes(pairs: Iterable[tuple[float, str]]) -> tuple[Extreme, Extreme]:
    items = list(pairs)
    low = min(items, key=lambda item: (item[0], item[1]))
    high = max(items, key=lambda item: (item[0], item[1]))
    return Extreme(*low), Extreme(*high)


def _maybe_cv(values: Iterable[float]) -> float | None:
    items = [v for v in values]
    if len(items) < 2:
        return None
    try:
        return coefficient_of_variation(items)
    except ValueError:
        return None


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


@dataclass(frozen=True)
class DisciplineSummary:
    """Pooled category counts plus cross-field spread for one discipline.

    Pooling sums the member fields' integer counts; characteristic scores are
    never recomputed on merged score lists here.
    """

    discipline_code: str
    n_fields: int
    n: int
    n_b: int
    counts_a: tuple[int, int, int]
    counts_b: tuple[int, int, int]
    category_counts: tuple[int, int, int, int, int]
    field_mean_shares_a: tuple[float, float, float]
    field_mean_shares_b: tuple[float, float, float] | None
    mu_extremes: Mapping[str, tuple[Extreme, Extreme]]
    share_extremes: Mapping[str, tuple[Extreme, Extreme]]
    gm_a_extremes: tuple[Extreme, Extreme]
    gm_b_extremes: tuple[Extreme, Extreme] | None
    cv_mu: tuple[float | None, float | None, float | None]
    cv_gm_a: float | None
    cv_gm_b: float | None
    cv_category_shares: tuple[float | None, ...]

    @property
    def shares_a(self) -> tuple[float, float, float]:
        return tuple(c / self.n for c in self.counts_a)  # type: ignore[return-value]

    @property
    def shares_b(self) -> tuple[float, float, float] | None:
        if self.n_b == 0:
            return None
        return tuple(c / self.n_b for c in self.counts_b)  # type: ignore[return-value]


def _aggregate(code: str, members: Sequence[FieldAnalysis]) -> DisciplineSummary:
    if not members:
        raise ValueError("cannot aggregate zero fields")
    n = sum(fa.n for fa in members)
    counts_a = (
        sum(fa.partition.up + fa.partition.lp for fa in members),
        sum(fa.partition.fp for fa in members),
        sum(fa.partition.hp + fa.partition.vhp for fa in members),
    )
    counts_b = (
        sum(fa.partition.fp for fa in members),
        sum(fa.partition.hp for fa in members),
        sum(fa.partition.vhp for fa in members),
    )
    n_b = sum(counts_b)
    category_counts = tuple(
        sum(fa.partition.counts[i] for fa in members) for i in range(5)
    )
    field_mean_shares_a = tuple(
        _mean([fa.triple_a.shares[i] for fa in members]) for i in range(3)
    )
    with_b = [fa for fa in members if fa.subpop_b.triple is not None]
    field_mean_shares_b = None
    if with_b:
        field_mean_shares_b = tuple(
            _mean([fa.subpop_b.triple.shares[i] for fa in with_b]) for i in range(3)
        )
    mu_extremes = {
        "mu1": _extremes((fa.css.mu1, fa.field_code) for fa in members),
        "mu2": _extremes((fa.css.mu2, fa.field_code) for fa in members),
        "mu3": _extremes((fa.css.mu3, fa.field_code) for fa in members),
    }
    share_extremes = {
        label: _extremes(
            (fa.partition.shares[i], fa.field_code) for fa in members
        )
        for i, label in enumerate(CATEGORY_LABELS)
    }
    gm_a_extremes = _extremes((fa.gm_a.gm, fa.field_code) for fa in members)
    gm_b_pairs = [(fa.gm_b.gm, fa.field_code) for fa in members if fa.gm_b is not None]
    gm_b_extremes = _extremes(gm_b_pairs) if gm_b_pairs else None
    cv_mu = (
        _maybe_cv(fa.css.mu1 for fa in members),
        _maybe_cv(fa.css.mu2 for fa in members),
        _maybe_cv(fa.css.mu3 for fa in members),
    )
    cv_gm_a = _maybe_cv(fa.gm_a.gm for fa in members)
    cv_gm_b = _maybe_cv(fa.gm_b.gm for fa in members if fa.gm_b is not None)
    cv_category_shares = tuple(
        _maybe_cv(fa.partition.shares[i] for fa in members) for i in range(5)
    )
    return DisciplineSummary(
        discipline_code=code,
        n_fields=len(members),
        n=n,
        n_b=n_b,
        counts_a=counts_a,
        counts_b=counts_b,
        category_counts=category_counts,  # type: ignore[arg-type]
        field_mean_shares_a=field_mean_shares_a,  # type: ignore[arg-type]
        field_mean_shares_b=field_mean_shares_b,  # type: ignore[arg-type]
        mu_extremes=mu_extremes,
        share_extremes=share_extremes,
        gm_a_extremes=gm_a_extremes,
        gm_b_extremes=gm_b_extremes,
        cv_mu=cv_mu,
        cv_gm_a=cv_gm_a,
        cv_gm_b=cv_gm_b,
        cv_category_shares=cv_category_shares,
    )


def aggregate_discipline(members: Sequence[FieldAnalysis]) -> DisciplineSummary:
    codes = {fa.discipline_code for fa in members}
    if len(codes) != 1:
        raise ValueError(f"fields span several disciplines: {sorted(codes)}")
    return _aggregate(codes.pop(), members)


def summarize_disciplines(
    analyses: Mapping[str, FieldAnalysis],
) -> list[DisciplineSummary]:
    groups: dict[str, list[FieldAnalysis]] = {}
    for fa in analyses.values():
        groups.setdefault(fa.discipline_code, []).append(fa)
    return [aggregate_discipline(groups[code]) for code in sorted(groups)]


@dataclass(frozen=True)
class GrandSummary:
    """Whole-corpus pooled row plus unweighted means of discipline shares."""

    total: DisciplineSummary
    discipline_mean_shares_a: tuple[float, float, float]
    discipline_mean_shares_b: tuple[float, float, float] | None


def grand_summary(
    analyses: Mapping[str, FieldAnalysis],
    summaries: Sequence[DisciplineSummary] | None = None,
) -> GrandSummary:
    if summaries is None:
        summaries = summarize_disciplines(analyses)
    if not summaries:
        raise ValueError("cannot summarize zero disciplines")
    total = _aggregate("ALL", list(analyses.values()))
    mean_a = tuple(_mean([s.shares_a[i] for s in summaries]) for i in range(3))
    with_b = [s for s in summaries if s.shares_b is not None]
    mean_b = None
    if with_b:
        mean_b = tuple(_mean([s.shares_b[i] for s in with_b]) for i in range(3))
    return GrandSummary(
        total=total,
        discipline_mean_shares_a=mean_a,  # type: ignore[arg-type]
        discipline_mean_shares_b=mean_b,  # type: ignore[arg-type]
    )


# ---------------------------------------------------------------------------
# Table rendering.  Values stay at full precision until this point; rendering
# rounds percentages to one decimal and scores, GM, and ratios to two.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TableSpec:
    name: str
    columns: tuple[str, ...]
    formats: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self) -> None:
        if len(self.columns) != len(self.formats):
            raise ValueError("columns and formats must align")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"table {self.name}: row width mismatch")


def _format_cell(value, fmt: str) -> str:
    if value is None:
        return ""
    if fmt == "str":
        return str(value)
    if fmt == "int":
        return str(int(value))
    if fmt == "pct":
        return f"{100.0 * value:.1f}"
    return f"{value:.2f}"


def _json_cell(value, fmt: str):
    if value is None:
        return None
    if fmt == "str":
        return str(value)
    if fmt == "int":
        return int(value)
    if fmt == "pct":
        return round(100.0 * value, 1)
    return round(float(value), 2)


def build_field_summary(analyses: Mapping[str, FieldAnalysis]) -> TableSpec:
    rows = []
    for code in sorted(analyses):
        fa = analyses[code]
        rows.append(
            (
                fa.field_code,
                fa.discipline_code,
                fa.n,
                fa.css.mu1,
                fa.css.mu2,
                fa.css.mu3,
                fa.gm_a.gm,
                None if fa.gm_b is None else fa.gm_b.gm,
                fa.css.degenerate_level,
            )
        )
    return TableSpec(
        name="field_summary",
        columns=(
            "field_code",
            "discipline_code",
            "n",
            "mu1",
            "mu2",
            "mu3",
            "gm_a",
            "gm_b",
            "degenerate_level",
        ),
        formats=("str", "str", "int", "score", "score", "score", "score", "score", "str"),
        rows=tuple(rows),
    )


def build_partitions(analyses: Mapping[str, FieldAnalysis]) -> TableSpec:
    rows = []
    for code in sorted(analyses):
        fa = analyses[code]
        b = fa.subpop_b
        b_shares = (None, None, None) if b.triple is None else b.triple.shares
        rows.append(
            (
                fa.field_code,
                fa.n,
                fa.css.mu1,
                fa.css.mu2,
                fa.css.mu3,
                *fa.partition.counts,
                *fa.partition.shares,
                len(b.values),
                *b_shares,
                fa.css.degenerate_level,
            )
        )
    return TableSpec(
        name="partitions",
        columns=(
            "field_code",
            "n",
            "mu1",
            "mu2",
            "mu3",
            "up",
            "lp",
            "fp",
            "hp",
            "vhp",
            "up_share",
            "lp_share",
            "fp_share",
            "hp_share",
            "vhp_share",
            "b_n",
            "b_fp_share",
            "b_hp_share",
            "b_vhp_share",
            "degenerate_level",
        ),
        formats=(
            "str",
            "int",
            "score",
            "score",
            "score",
            "int",
            "int",
            "int",
            "int",
            "int",
            "pct",
            "pct",
            "pct",
            "pct",
            "pct",
            "int",
            "pct",
            "pct",
            "pct",
            "str",
        ),
        rows=tuple(rows),
    )


def build_char_score_extremes(summaries: Sequence[DisciplineSummary]) -> TableSpec:
    columns: list[str] = ["discipline_code", "n_fields"]
    formats: list[str] = ["str", "int"]
    for mu in ("mu1", "mu2", "mu3"):
        columns += [f"{mu}_min", f"{mu}_min_field", f"{mu}_max", f"{mu}_max_field", f"cv_{mu}"]
        formats += ["score", "str", "score", "str", "ratio"]
    rows = []
    for s in summaries:
        row: list = [s.discipline_code, s.n_fields]
        for index, mu in enumerate(("mu1", "mu2", "mu3")):
            low, high = s.mu_extremes[mu]
            row += [low.value, low.field_code, high.value, high.field_code, s.cv_mu[index]]
        rows.append(tuple(row))
    return TableSpec(
        name="char_score_extremes",
        columns=tuple(columns),
        formats=tuple(formats),
        rows=tuple(rows),
    )


def build_share_extremes(summaries: Sequence[DisciplineSummary]) -> TableSpec:
    rows = []
    for s in summaries:
        for index, label in enumerate(CATEGORY_LABELS):
            low, high = s.share_extremes[label]
            rows.append(
                (
                    s.discipline_code,
                    label,
                    low.value,
                    low.field_code,
                    high.value,
                    high.field_code,
                    s.cv_category_shares[index],
                )
            )
    return TableSpec(
        name="share_extremes",
        columns=(
            "discipline_code",
            "category",
            "min_share",
            "min_field",
            "max_share",
            "max_field",
            "cv",
        ),
        formats=("str", "str", "pct", "str", "pct", "str", "ratio"),
        rows=tuple(rows),
    )


def build_fractal_table(
    analyses: Mapping[str, FieldAnalysis],
    classification: FieldClassification | None,
) -> TableSpec:
    rows = []
    for code in sorted(analyses):
        fa = analyses[code]
        a = fa.assessment
        if a is None:
            values = (None, None, None, None, None, None)
        else:
            values = (a.dr1_a, a.dr2_a, a.dr1_b, a.dr2_b, a.ddr1, a.ddr2)
        flag = None if classification is None else classification.flags.get(code)
        candidate = "not_assessable" if flag is None else str(bool(flag)).lower()
        rows.append((code, *values, candidate))
    return TableSpec(
        name="fractal",
        columns=(
            "field_code",
            "dr1_a",
            "dr2_a",
            "dr1_b",
            "dr2_b",
            "ddr1",
            "ddr2",
            "fractal_candidate",
        ),
        formats=("str", "ratio", "ratio", "ratio", "ratio", "ratio", "ratio", "str"),
        rows=tuple(rows),
    )


def build_gm_extremes(summaries: Sequence[DisciplineSummary]) -> TableSpec:
    rows = []
    for s in summaries:
        a_low, a_high = s.gm_a_extremes
        if s.gm_b_extremes is None:
            b_cells: tuple = (None, None, None, None)
        else:
            b_low, b_high = s.gm_b_extremes
            b_cells = (b_low.value, b_low.field_code, b_high.value, b_high.field_code)
        rows.append(
            (
                s.discipline_code,
                s.n_fields,
                a_low.value,
                a_low.field_code,
                a_high.value,
                a_high.field_code,
                s.cv_gm_a,
                *b_cells,
                s.cv_gm_b,
            )
        )
    return TableSpec(
        name="gm_extremes",
        columns=(
            "discipline_code",
            "n_fields",
            "gm_a_min",
            "gm_a_min_field",
            "gm_a_max",
            "gm_a_max_field",
            "cv_gm_a",
            "gm_b_min",
            "gm_b_min_field",
            "gm_b_max",
            "gm_b_max_field",
            "cv_gm_b",
        ),
        formats=(
            "str",
            "int",
            "score",
            "str",
            "score",
            "str",
            "ratio",
            "score",
            "str",
            "score",
            "str",
            "ratio",
        ),
        rows=tuple(rows),
    )


def build_discipline_summary(
    summaries: Sequence[DisciplineSummary], grand: GrandSummary
) -> TableSpec:
    def row_of(s: DisciplineSummary) -> tuple:
        shares_b = s.shares_b or (None, None, None)
        return (
            s.discipline_code,
            s.n_fields,
            s.n,
            *s.shares_a,
            s.n_b,
            *shares_b,
        )

    rows = [row_of(s) for s in summaries]
    rows.append(row_of(grand.total))
    return TableSpec(
        name="discipline_summary",
        columns=(
            "discipline_code",
            "n_fields",
            "n",
            "a_up_lp",
            "a_fp",
            "a_hp_vhp",
            "b_n",
            "b_fp",
            "b_hp",
            "b_vhp",
        ),
        formats=("str", "int", "int", "pct", "pct", "pct", "int", "pct", "pct", "pct"),
        rows=tuple(rows),
    )


def build_share_variability(analyses: Mapping[str, FieldAnalysis]) -> TableSpec:
    rows = []
    ordered = [analyses[code] for code in sorted(analyses)]
    a_labels = ("up_lp", "fp", "hp_vhp")
    for index, label in enumerate(a_labels):
        values = [fa.triple_a.shares[index] for fa in ordered]
        rows.append(
            (
                "a",
                label,
                float(np.mean(values)),
                float(np.std(values, ddof=1)) if len(values) > 1 else None,
                _maybe_cv(values),
            )
        )
    b_fields = [fa for fa in ordered if fa.subpop_b.triple is not None]
    for index, label in enumerate(("fp", "hp", "vhp")):
        values = [fa.subpop_b.triple.shares[index] for fa in b_fields]
        if not values:
            rows.append(("b", label, None, None, None))
            continue
        rows.append(
            (
                "b",
                label,
                float(np.mean(values)),
                float(np.std(values, ddof=1)) if len(values) > 1 else None,
                _maybe_cv(values),
            )
        )
    return TableSpec(
        name="share_variability",
        columns=("population", "category", "mean_share", "std_share", "cv"),
        formats=("str", "str", "pct", "pct", "ratio"),
        rows=tuple(rows),
    )


def build_all_tables(
    analyses: Mapping[str, FieldAnalysis],
    classification: FieldClassification | None,
    summaries: Sequence[DisciplineSummary],
    grand: GrandSummary,
) -> tuple[TableSpec, ...]:
    return (
        build_field_summary(analyses),
        build_partitions(analyses),
        build_char_score_extremes(summaries),
        build_share_extremes(summaries),
        build_fractal_table(analyses, classification),
        build_gm_extremes(summaries),
        build_discipline_summary(summaries, grand),
        build_share_variability(analyses),
    )


def render_table(table: TableSpec, fmt: str, out_dir: str | Path) -> Path:
    if fmt not in TABLE_FORMATS:
        raise ValueError(f"unknown table format {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{table.name}.{_EXTENSIONS[fmt]}"
    if fmt == "json":
        payload = [
            {
                column: _json_cell(value, cell_fmt)
                for column, cell_fmt, value in zip(table.columns, table.formats, row)
            }
            for row in table.rows
        ]
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return path
    formatted = [
        [_format_cell(value, cell_fmt) for cell_fmt, value in zip(table.formats, row)]
        for row in table.rows
    ]
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(table.columns)
            writer.writerows(formatted)
        return path
    lines = [
        "| " + " | ".join(table.columns) + " |",
        "| " + " | ".join("---" for _ in table.columns) + " |",
    ]
    for row in formatted:
        lines.append("| " + " | ".join(row) + " |")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def render_tables(
    tables: Sequence[TableSpec], fmt: str, out_dir: str | Path
) -> dict[str, Path]:
    return {table.name: render_table(table, fmt, out_dir) for table in tables}
