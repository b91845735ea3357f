"""Citation baselines: cited-only means, fallbacks, and the CSV round trip."""

import io
import math
import random
from collections import Counter

import pytest

from prodskew.baseline import (
    BaselineError,
    build_baseline,
    read_baseline_csv,
    scaling_factor,
    write_baseline_csv,
)
from prodskew.corpus import parse_publications

from conftest import author, pub_line


def _pubs(*specs):
    """specs of (pub_id, year, categories, citations)."""
    lines = [
        pub_line(pid, [author(1, "r1")], year=year, categories=cats, citations=cites)
        for pid, year, cats, cites in specs
    ]
    return parse_publications(lines)


def test_cited_only_mean():
    baseline = build_baseline(
        _pubs(("p1", 2010, ["ChemA"], 0), ("p2", 2010, ["ChemA"], 2), ("p3", 2010, ["ChemA"], 4))
    )
    entry = baseline.entries[(2010, "ChemA")]
    assert entry.mean_cited_citations == 3.0
    assert entry.n_cited == 2


def test_single_cited_pub():
    baseline = build_baseline(_pubs(("p1", 2011, ["A"], 5)))
    assert baseline.entries[(2011, "A")].mean_cited_citations == 5.0


def test_uncited_category_absent_falls_back():
    baseline = build_baseline(
        _pubs(("p1", 2010, ["A"], 4), ("p2", 2010, ["B"], 0))
    )
    assert (2010, "B") not in baseline.entries
    mean, used_fallback = baseline.category_mean(2010, "B")
    assert used_fallback
    assert mean == 4.0  # year fallback averages the year's cited pubs


def test_multi_category_pub_feeds_every_category():
    baseline = build_baseline(_pubs(("p1", 2010, ["A", "B"], 6)))
    assert baseline.entries[(2010, "A")].mean_cited_citations == 6.0
    assert baseline.entries[(2010, "B")].mean_cited_citations == 6.0


def test_no_cited_pubs_is_error():
    with pytest.raises(BaselineError):
        build_baseline(_pubs(("p1", 2010, ["A"], 0)))


def test_scaling_single_category():
    baseline = build_baseline(_pubs(("p1", 2010, ["A"], 3)))
    assert scaling_factor(baseline, 2010, ["A"]) == 3.0


def test_scaling_multi_category_mean_of_means():
    baseline = build_baseline(
        _pubs(("p1", 2010, ["A"], 2), ("p2", 2010, ["B"], 4))
    )
    assert scaling_factor(baseline, 2010, ["A", "B"]) == 3.0


def test_scaling_missing_category_counts_warning():
    baseline = build_baseline(
        _pubs(("p1", 2010, ["A"], 2), ("p2", 2010, ["A"], 3))
    )
    counter = Counter()
    value = scaling_factor(baseline, 2010, ["Unknown"], counter)
    assert value == 2.5
    assert counter["missing_category"] == 1


def test_scaling_missing_year_names_year():
    baseline = build_baseline(_pubs(("p1", 2010, ["A"], 2)))
    with pytest.raises(BaselineError, match="1999"):
        scaling_factor(baseline, 1999, ["A"])


def test_reorder_invariance():
    specs = [
        (f"p{i}", 2010 + (i % 3), [random.Random(i).choice("ABC")], i % 7)
        for i in range(60)
    ]
    shuffled = specs[::-1]
    random.Random(99).shuffle(shuffled)
    assert build_baseline(_pubs(*specs)) == build_baseline(_pubs(*shuffled))


def test_citation_mass_conserved_when_all_cited_single_category():
    rng = random.Random(4)
    specs = [
        (f"p{i}", 2010, [rng.choice("ABCD")], rng.randint(1, 40)) for i in range(50)
    ]
    baseline = build_baseline(_pubs(*specs))
    total = sum(c for _, _, _, c in specs)
    recovered = sum(e.mean_cited_citations * e.n_cited for e in baseline.entries.values())
    assert recovered == pytest.approx(total, abs=1e-9)


def test_every_scaling_factor_positive():
    rng = random.Random(11)
    specs = [
        (f"p{i}", 2010 + rng.randrange(3), [rng.choice("ABC")], rng.randint(0, 9))
        for i in range(80)
    ]
    baseline = build_baseline(_pubs(*specs))
    for year in (2010, 2011, 2012):
        for cats in (["A"], ["B", "C"], ["Zzz"]):
            assert scaling_factor(baseline, year, cats) > 0


def test_csv_roundtrip_exact(tmp_path):
    baseline = build_baseline(
        _pubs(
            ("p1", 2010, ["A"], 3),
            ("p2", 2010, ["B"], 7),
            ("p3", 2011, ["A", "B"], 1),
            ("p4", 2010, ["A"], 0),
        )
    )
    path = tmp_path / "baseline.csv"
    write_baseline_csv(baseline, path)
    with open(path, encoding="utf-8", newline="") as handle:
        loaded = read_baseline_csv(handle)
    assert loaded == baseline


def test_read_without_fallback_rows_reconstructs_weighted_mean():
    text = "\n".join(
        [
            "year,category,mean_cited_citations,n_cited",
            "2010,A,2.0,3",
            "2010,B,5.0,1",
        ]
    )
    baseline = read_baseline_csv(io.StringIO(text))
    # citation-weighted: (2*3 + 5*1) / 4
    assert math.isclose(baseline.year_fallback[2010], 11 / 4, rel_tol=1e-12)


def test_read_rejects_bad_header():
    with pytest.raises(BaselineError):
        read_baseline_csv(io.StringIO("year,category,mean\n2010,A,2.0\n"))
