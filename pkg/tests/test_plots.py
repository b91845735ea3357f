"""Figure analogs: every chart ships its data as CSV; checks tie CSV to math."""

import csv
import statistics

import pytest

from prodskew.analysis import analyze_fields, assessments_of
from prodskew.fractal import classify_fields
from prodskew.plots import render_plots
from prodskew.report import grand_summary, summarize_disciplines
from prodskew.skewstats import boxplot_summary

SCORES = {
    "FA": [0, 0, 0, 1, 1, 2, 3, 8, 9],
    "FB": [0, 0.5, 0.5, 1, 2, 2, 4, 12],
    "FC": [0, 0, 1, 1, 1, 2, 6, 7, 20],
    "FD": [0, 1, 1, 2, 2, 3, 3, 10],
}
DISCIPLINES = {"FA": "D1", "FB": "D1", "FC": "D2", "FD": "D2"}


@pytest.fixture(scope="module")
def rendered(tmp_path_factory):
    out = tmp_path_factory.mktemp("plots")
    analyses = analyze_fields(SCORES, DISCIPLINES)
    assessments = assessments_of(analyses)
    classification = classify_fields(assessments)
    summaries = summarize_disciplines(analyses)
    grand = grand_summary(analyses, summaries)
    paths = render_plots(
        analyses, assessments, classification, summaries, grand, 0.1, out
    )
    return analyses, classification, out, paths


def _read(path):
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def test_every_figure_and_data_file_exists(rendered):
    _, _, out, paths = rendered
    expected = {
        "partition_bars_a",
        "partition_bars_ab",
        "ddr_scatter",
        "gm_panels",
        "discipline_bars_pooled",
        "discipline_bars_field_mean",
    }
    assert set(paths) == expected
    for key, svg in paths.items():
        assert svg.suffix == ".svg" and svg.stat().st_size > 0, key
    for name in (
        "partition_bars_a.csv",
        "partition_bars_ab.csv",
        "ddr_scatter.csv",
        "gm_values.csv",
        "gm_hist_bins.csv",
        "gm_box.csv",
        "discipline_bars_pooled.csv",
        "discipline_bars_field_mean.csv",
    ):
        assert (out / "plots" / name).stat().st_size > 0


def test_bar_guides_equal_mean_shares(rendered):
    analyses, _, out, _ = rendered
    rows = _read(out / "plots" / "partition_bars_a.csv")
    want_first = statistics.fmean(fa.triple_a.shares[0] for fa in analyses.values())
    want_last = statistics.fmean(fa.triple_a.shares[2] for fa in analyses.values())
    for row in rows:
        assert float(row["mean_first_share"]) == pytest.approx(want_first, abs=1e-12)
        assert float(row["mean_last_share"]) == pytest.approx(want_last, abs=1e-12)
    assert {row["field_code"] for row in rows} == set(SCORES)


def test_scatter_crosshairs_equal_classification_medians(rendered):
    _, classification, out, _ = rendered
    rows = _read(out / "plots" / "ddr_scatter.csv")
    for row in rows:
        assert float(row["median_ddr1"]) == classification.median_ddr1
        assert float(row["median_ddr2"]) == classification.median_ddr2
        flag = classification.flags[row["field_code"]]
        assert row["fractal_candidate"] == str(bool(flag)).lower()


def test_gm_histogram_counts_cover_all_fields(rendered):
    _, _, out, _ = rendered
    rows = _read(out / "plots" / "gm_hist_bins.csv")
    total_a = sum(int(r["count"]) for r in rows if r["population"] == "a")
    assert total_a == len(SCORES)


def test_gm_box_matches_boxplot_summary(rendered):
    analyses, _, out, _ = rendered
    rows = {r["population"]: r for r in _read(out / "plots" / "gm_box.csv")}
    values = [fa.gm_a.gm for fa in analyses.values()]
    box = boxplot_summary(values)
    assert float(rows["a"]["q2"]) == box.q2
    assert float(rows["a"]["iqr"]) == box.iqr
    assert float(rows["a"]["whisker_high"]) == box.whisker_high


def test_gm_values_cover_every_field(rendered):
    analyses, _, out, _ = rendered
    rows = _read(out / "plots" / "gm_values.csv")
    assert {r["field_code"] for r in rows} == set(SCORES)
    for row in rows:
        assert float(row["gm_a"]) == analyses[row["field_code"]].gm_a.gm


def test_discipline_bars_include_total_row(rendered):
    _, _, out, _ = rendered
    rows = _read(out / "plots" / "discipline_bars_pooled.csv")
    assert [r["discipline_code"] for r in rows][-1] == "ALL"


def test_svg_output_is_deterministic(rendered, tmp_path):
    analyses, classification, out, _ = rendered
    assessments = assessments_of(analyses)
    summaries = summarize_disciplines(analyses)
    grand = grand_summary(analyses, summaries)
    render_plots(analyses, assessments, classification, summaries, grand, 0.1, tmp_path)
    first = (out / "plots" / "ddr_scatter.svg").read_bytes()
    second = (tmp_path / "plots" / "ddr_scatter.svg").read_bytes()
    assert first == second
