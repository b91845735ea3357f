"""Citation scaling baselines: mean citations of cited publications per year and category."""

from __future__ import annotations

import csv
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

from .corpus import Publication

# Year-level fallback rows are stored in baseline.csv under this pseudo-category.
YEAR_FALLBACK_CATEGORY = "*"

BASELINE_COLUMNS = ("year", "category", "mean_cited_citations", "n_cited")


class BaselineError(ValueError):
    """Baseline construction or lookup failed."""


@dataclass(frozen=True)
class BaselineEntry:
    mean_cited_citations: float
    n_cited: int


@dataclass(frozen=True)
class CitationBaseline:
    """Cited-only citation means; immutable, safe for concurrent lookups."""

    entries: Mapping[tuple[int, str], BaselineEntry]
    year_fallback: Mapping[int, float]

    def category_mean(self, year: int, category: str) -> tuple[float, bool]:
        """Return (mean, used_fallback); a year with no coverage at all is a hard error."""
        entry = self.entries.get((year, category))
        if entry is not None:
            return entry.mean_cited_citations, False
        fallback = self.year_fallback.get(year)
        if fallback is None:
            raise BaselineError(f"no baseline coverage for year {year}")
        return fallback, True

    def years(self) -> tuple[int, ...]:
        return tuple(sorted(self.year_fallback))


def build_baseline(reference_publications: Iterable[Publication]) -> CitationBaseline:
    """Average citations over cited publications only, per (year, category).

    Uncited publications are excluded from every denominator.  A publication
    listed under several categories contributes its full citation count to each
    of them.  Citation totals are integers, so the result does not depend on
    stream order.
    """
    cat_totals: dict[tuple[int, str], int] = {}
    cat_counts: Counter[tuple[int, str]] = Counter()
    year_totals: dict[int, int] = {}
    year_counts: Counter[int] = Counter()
    for pub in reference_publications:
        if pub.citations <= 0:
            continue
        year_totals[pub.year] = year_totals.get(pub.year, 0) + pub.citations
        year_counts[pub.year] += 1
        for category in pub.categories:
            key = (pub.year, category)
            cat_totals[key] = cat_totals.get(key, 0) + pub.citations
            cat_counts[key] += 1
    if not year_counts:
        raise BaselineError("reference stream contains no cited publications")
    entries = {
        key: BaselineEntry(total / cat_counts[key], cat_counts[key])
        for key, total in cat_totals.items()
    }
    fallback = {year: total / year_counts[year] for year, total in year_totals.items()}
    return CitationBaseline(entries=entries, year_fallback=fallback)


def scaling_factor(
    baseline: CitationBaseline,
    year: int,
    categories: Sequence[str],
    fallback_counter: Counter[str] | None = None,
) -> float:
    """Expected citations for a publication of the given year and categories.

    Multi-category publications take the arithmetic mean of the per-category
    baselines; a category absent from the baseline falls back to the year mean.
    """
    if not categories:
        raise BaselineError("scaling_factor requires at least one category")
    values = []
    for category in categories:
        mean, used_fallback = baseline.category_mean(year, category)
        if used_fallback and fallback_counter is not None:
            fallback_counter["missing_category"] += 1
        values.append(mean)
    return sum(values) / len(values)


def write_baseline_csv(baseline: CitationBaseline, path: str | Path) -> None:
    """Snapshot the baseline; year fallbacks are stored under category '*'."""
    rows = []
    for year in sorted(baseline.year_fallback):
        rows.append((year, YEAR_FALLBACK_CATEGORY, baseline.year_fallback[year], 0))
    for (year, category), entry in sorted(baseline.entries.items()):
        rows.append((year, category, entry.mean_cited_citations, entry.n_cited))
    rows.sort(key=lambda r: (r[0], r[1]))
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(BASELINE_COLUMNS)
        for year, category, mean, n_cited in rows:
            writer.writerow([year, category, repr(float(mean)), n_cited])


def read_baseline_csv(lines: Iterable[str]) -> CitationBaseline:
    """Load a precomputed baseline table.

    Rows with category '*' supply the year fallbacks; when they are absent the
    fallback is reconstructed as the citation-weighted mean of the year's
    category rows.
    """
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise BaselineError("baseline table is empty") from None
    if tuple(h.strip() for h in header) != BASELINE_COLUMNS:
        raise BaselineError(f"baseline header must be {','.join(BASELINE_COLUMNS)}")
    entries: dict[tuple[int, str], BaselineEntry] = {}
    fallback: dict[int, float] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 4:
            raise BaselineError(f"baseline line {line_no}: expected 4 columns")
        try:
            year = int(row[0])
            mean = float(row[2])
            n_cited = int(row[3])
        except ValueError:
            raise BaselineError(f"baseline line {line_no}: malformed numeric column") from None
        category = row[1].strip()
        if not category:
            raise BaselineError(f"baseline line {line_no}: empty category")
        if mean <= 0:
            raise BaselineError(f"baseline line {line_no}: mean must be positive")
        if category == YEAR_FALLBACK_CATEGORY:
            fallback[year] = mean
            continue
        if n_cited < 1:
            raise BaselineError(f"baseline line {line_no}: n_cited must be >= 1")
        key = (year, category)
        if key in entries:
            raise BaselineError(f"baseline line {line_no}: duplicate entry for {key}")
        entries[key] = BaselineEntry(mean, n_cited)
    if not entries and not fallback:
        raise BaselineError("baseline table has no data rows")
    years_without_fallback = {year for year, _ in entries} - set(fallback)
    for year in years_without_fallback:
        total = sum(
            entry.mean_cited_citations * entry.n_cited
            for (y, _), entry in entries.items()
            if y == year
        )
        count = sum(entry.n_cited for (y, _), entry in entries.items() if y == year)
        fallback[year] = total / count
    return CitationBaseline(entries=entries, year_fallback=fallback)


def read_baseline_file(path: str | Path) -> CitationBaseline:
    with open(path, encoding="utf-8", newline="") as handle:
        return read_baseline_csv(handle)
