"""Discipline aggregation and table rendering."""

import csv
import dataclasses
import json
import statistics

import pytest

from prodskew.analysis import analyze_field, analyze_fields
from prodskew.cssdist import PartitionTriple
from prodskew.fractal import classify_fields, decay_ratios
from prodskew.report import (
    TableSpec,
    aggregate_discipline,
    build_all_tables,
    build_fractal_table,
    build_partitions,
    grand_summary,
    render_table,
    render_tables,
    summarize_disciplines,
)

# engineered so the third A-bucket (above mu2) holds exactly 1 then 5 members
FIELD_X = [0, 0, 0, 0, 0, 1, 1, 1, 3, 9]
FIELD_Y = [0] * 10 + [1] * 12 + [4, 4, 4, 10, 10, 11, 11, 12]


def _analyses(scores_by_field, discipline="D1"):
    return analyze_fields(scores_by_field, {code: discipline for code in scores_by_field})


def test_pooled_share_is_count_ratio():
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y})
    assert analyses["FX"].partition.hp + analyses["FX"].partition.vhp == 1
    assert analyses["FY"].partition.hp + analyses["FY"].partition.vhp == 5
    summary = aggregate_discipline(list(analyses.values()))
    assert summary.n == 40
    assert summary.counts_a[2] == 6
    assert summary.shares_a[2] == 6 / 40


def test_single_field_discipline_equals_field():
    analyses = _analyses({"FX": FIELD_X})
    summary = aggregate_discipline(list(analyses.values()))
    assert summary.shares_a == analyses["FX"].triple_a.shares
    assert summary.n == analyses["FX"].n
    assert summary.category_counts == analyses["FX"].partition.counts


def test_pooled_counts_conserve_population():
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y, "FZ": [0, 1, 2, 5, 5, 9]})
    summary = aggregate_discipline(list(analyses.values()))
    assert sum(summary.category_counts) == summary.n
    assert sum(summary.counts_a) == summary.n
    assert sum(summary.counts_b) == summary.n_b


def test_mixed_disciplines_rejected():
    a = analyze_field("FA", "D1", FIELD_X)
    b = analyze_field("FB", "D2", FIELD_Y)
    with pytest.raises(ValueError):
        aggregate_discipline([a, b])


def test_grand_summary_single_discipline_total_matches():
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y})
    summaries = summarize_disciplines(analyses)
    grand = grand_summary(analyses, summaries)
    assert grand.total.counts_a == summaries[0].counts_a
    assert grand.discipline_mean_shares_a == summaries[0].shares_a


def test_grand_summary_averages_discipline_shares():
    # D1 pools to (0.6, 0.3, 0.1), D2 to (0.8, 0.1, 0.1)
    d1 = analyze_field("FA", "D1", [0, 0, 0, 1, 1, 1, 4, 4, 4, 16])
    d2 = analyze_field("FB", "D2", [0, 0, 0, 0, 1, 1, 1, 1, 5, 20])
    assert d1.triple_a.shares == pytest.approx((0.6, 0.3, 0.1), abs=1e-15)
    assert d2.triple_a.shares == pytest.approx((0.8, 0.1, 0.1), abs=1e-15)
    analyses = {"FA": d1, "FB": d2}
    summaries = summarize_disciplines(analyses)
    grand = grand_summary(analyses, summaries)
    assert grand.discipline_mean_shares_a == pytest.approx((0.7, 0.2, 0.1), abs=1e-15)


def test_field_mean_shares_average_triples():
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y})
    summary = aggregate_discipline(list(analyses.values()))
    for i in range(3):
        want = statistics.fmean(fa.triple_a.shares[i] for fa in analyses.values())
        assert summary.field_mean_shares_a[i] == pytest.approx(want, abs=1e-15)


def test_extremes_attribute_fields():
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y})
    summary = aggregate_discipline(list(analyses.values()))
    lo, hi = summary.mu_extremes["mu1"]
    assert lo.value <= hi.value
    assert {lo.field_code, hi.field_code} <= {"FX", "FY"}


# rendering


def _full_table_set():
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y, "FZ": [0, 1, 2, 5, 5, 9]})
    classification = classify_fields(
        {code: fa.assessment for code, fa in analyses.items() if fa.assessment}
    )
    summaries = summarize_disciplines(analyses)
    grand = grand_summary(analyses, summaries)
    return analyses, build_all_tables(analyses, classification, summaries, grand)


def test_build_all_tables_names():
    _, tables = _full_table_set()
    assert [t.name for t in tables] == [
        "field_summary",
        "partitions",
        "char_score_extremes",
        "share_extremes",
        "fractal",
        "gm_extremes",
        "discipline_summary",
        "share_variability",
    ]


def test_markdown_and_csv_carry_identical_values(tmp_path):
    _, tables = _full_table_set()
    for table in tables:
        csv_path = render_table(table, "csv", tmp_path)
        md_path = render_table(table, "markdown", tmp_path)
        with open(csv_path, encoding="utf-8", newline="") as handle:
            csv_rows = list(csv.reader(handle))
        md_lines = md_path.read_text(encoding="utf-8").strip().splitlines()
        md_rows = [
            [cell.strip() for cell in line.strip().strip("|").split("|")]
            for line in md_lines
        ]
        del md_rows[1]  # separator row
        assert md_rows == csv_rows


def test_percentages_one_decimal_scores_two(tmp_path):
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y})
    path = render_table(build_partitions(analyses), "csv", tmp_path)
    with open(path, encoding="utf-8", newline="") as handle:
        rows = list(csv.DictReader(handle))
    fx = next(r for r in rows if r["field_code"] == "FX")
    assert fx["up_share"] == "50.0"
    assert fx["mu1"] == "1.50"
    assert fx["b_vhp_share"] == "0.0"


def test_json_rendering_round_trips(tmp_path):
    _, tables = _full_table_set()
    path = render_table(tables[1], "json", tmp_path)
    rows = json.loads(path.read_text(encoding="utf-8"))
    assert rows
    for row in rows:
        assert set(row) == set(tables[1].columns)
        assert isinstance(row["n"], int)
        assert isinstance(row["up_share"], float)


def test_fractal_rows_reproduce_their_own_arithmetic(tmp_path):
    _, tables = _full_table_set()
    fractal = next(t for t in tables if t.name == "fractal")
    path = render_table(fractal, "csv", tmp_path)
    with open(path, encoding="utf-8", newline="") as handle:
        for row in csv.DictReader(handle):
            if row["fractal_candidate"] == "not_assessable":
                continue
            # rendered at two decimals, so allow the stacked rounding error
            ddr1 = abs(float(row["dr1_a"]) - float(row["dr1_b"]))
            assert abs(ddr1 - float(row["ddr1"])) <= 0.02
            ddr2 = abs(float(row["dr2_a"]) - float(row["dr2_b"]))
            assert abs(ddr2 - float(row["ddr2"])) <= 0.02


def test_reference_fixture_renders_quoted_ratios(tmp_path):
    analyses = _analyses({"FX": FIELD_X, "FY": FIELD_Y})
    fixture = decay_ratios(
        PartitionTriple((0.714, 0.214, 0.071)),
        PartitionTriple((0.750, 0.083, 0.167)),
    )
    analyses = dict(analyses)
    analyses["FX"] = dataclasses.replace(analyses["FX"], assessment=fixture)
    path = render_table(build_fractal_table(analyses, None), "csv", tmp_path)
    with open(path, encoding="utf-8", newline="") as handle:
        row = next(r for r in csv.DictReader(handle) if r["field_code"] == "FX")
    quoted = {"dr1_a": 0.3, "dr2_a": 0.3, "dr1_b": 0.1, "dr2_b": 2.0, "ddr1": 0.2, "ddr2": 1.7}
    for column, value in quoted.items():
        assert round(float(row[column]), 1) == value


def test_discipline_summary_has_total_row(tmp_path):
    _, tables = _full_table_set()
    summary = next(t for t in tables if t.name == "discipline_summary")
    codes = [row[0] for row in summary.rows]
    assert codes[-1] == "ALL"


def test_share_variability_covers_both_populations():
    _, tables = _full_table_set()
    variability = next(t for t in tables if t.name == "share_variability")
    populations = {row[0] for row in variability.rows}
    assert populations == {"a", "b"}


def test_render_tables_writes_every_file(tmp_path):
    _, tables = _full_table_set()
    paths = render_tables(tables, "csv", tmp_path)
    assert set(paths) == {t.name for t in tables}
    for path in paths.values():
        assert path.exists() and path.stat().st_size > 0


def test_table_spec_validates_row_width():
    with pytest.raises(ValueError):
        TableSpec(
            name="bad",
            columns=("a", "b"),
            formats=("str", "int"),
            rows=(("only-one",),),
        )


def test_unknown_format_rejected(tmp_path):
    _, tables = _full_table_set()
    with pytest.raises(ValueError):
        render_table(tables[0], "xml", tmp_path)
