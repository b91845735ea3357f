"""Fractional author credit and per-researcher productivity indicators."""

from __future__ import annotations

import csv
import math
from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .baseline import CitationBaseline, scaling_factor
from .corpus import AuthorSlot, Corpus, Publication, Researcher

POSITION_CLASSES = ("first", "last", "second", "second_to_last", "other")

# Default byline weights before normalization: ends of the byline carry the
# most credit, their neighbours a bit less, everyone else a common base.
DEFAULT_BYLINE_WEIGHTS: dict[str, float] = {
    "first": 2.0,
    "last": 2.0,
    "second": 1.5,
    "second_to_last": 1.5,
    "other": 1.0,
}

SCORES_COLUMNS = (
    "researcher_id",
    "field_code",
    "discipline_code",
    "indicator",
    "value",
    "n_publications",
)


def position_class(position: int, byline_size: int) -> str:
    """Map a byline position to its weight class.

    When classes overlap on short bylines the earlier rule wins:
    first, last, second, second_to_last, other.
    """
    if not 1 <= position <= byline_size:
        raise ValueError(f"position {position} outside byline of size {byline_size}")
    if position == 1:
        return "first"
    if position == byline_size:
        return "last"
    if position == 2:
        return "second"
    if position == byline_size - 1:
        return "second_to_last"
    return "other"


@dataclass(frozen=True)
class WeightScheme:
    """How a byline's unit of credit is split among its authors.

    byline_weighted mode keys raw weights by (position class, intramural flag)
    and normalizes them within each byline so realized shares sum to one.
    """

    mode: str
    weight_table: Mapping[tuple[str, bool], float] | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("uniform", "byline_weighted"):
            raise ValueError(f"unknown weight scheme mode {self.mode!r}")
        if self.mode == "uniform":
            if self.weight_table is not None:
                raise ValueError("uniform scheme takes no weight table")
            return
        if self.weight_table is None:
            raise ValueError("byline_weighted scheme requires a weight table")
        table = dict(self.weight_table)
        for cls in POSITION_CLASSES:
            for intramural in (False, True):
                if (cls, intramural) not in table:
                    raise ValueError(f"weight table missing entry for ({cls}, {intramural})")
        for key, value in table.items():
            if value < 0:
                raise ValueError(f"weight for {key} must be non-negative")
        object.__setattr__(self, "weight_table", table)

    @classmethod
    def uniform(cls) -> "WeightScheme":
        return cls(mode="uniform")

    @classmethod
    def byline_weighted(
        cls, weights: Mapping[str, Any] | None = None
    ) -> "WeightScheme":
        """Build a table from per-class weights.

        Each value is either a number (applied to both intramural flags) or a
        mapping {"intramural": x, "extramural": y}.
        """
        source = dict(DEFAULT_BYLINE_WEIGHTS)
        if weights:
            unknown = sorted(set(weights) - set(POSITION_CLASSES))
            if unknown:
                raise ValueError(f"unknown position classes: {', '.join(unknown)}")
            source.update(weights)
        table: dict[tuple[str, bool], float] = {}
        for cls_name in POSITION_CLASSES:
            value = source[cls_name]
            if isinstance(value, Mapping):
                table[(cls_name, False)] = float(value["extramural"])
                table[(cls_name, True)] = float(value["intramural"])
            else:
                table[(cls_name, False)] = float(value)
                table[(cls_name, True)] = float(value)
        return cls(mode="byline_weighted", weight_table=table)

    @classmethod
    def from_config(cls, data: Mapping[str, Any] | None) -> "WeightScheme":
        if data is None:
            return cls.uniform()
        mode = data.get("mode", "uniform")
        if mode == "uniform":
            return cls.uniform()
        if mode == "byline_weighted":
            return cls.byline_weighted(data.get("weight_table"))
        raise ValueError(f"unknown weight scheme mode {mode!r}")

    def describe(self) -> dict[str, Any]:
        """JSON-friendly description recorded in run manifests."""
        if self.mode == "uniform":
            return {"mode": "uniform"}
        assert self.weight_table is not None
        table: dict[str, dict[str, float]] = {}
        for (cls_name, intramural), weight in sorted(self.weight_table.items()):
            entry = table.setdefault(cls_name, {})
            entry["intramural" if intramural else "extramural"] = weight
        return {"mode": "byline_weighted", "weight_table": table}


def _raw_weight(slot: AuthorSlot, byline_size: int, scheme: WeightScheme) -> float:
    assert scheme.weight_table is not None
    cls_name = position_class(slot.position, byline_size)
    return scheme.weight_table[(cls_name, slot.intramural)]


def fractional_contribution(
    byline: Sequence[AuthorSlot],
    slot: AuthorSlot,
    scheme: WeightScheme,
    pub_id: str | None = None,
) -> float:
    """Share of one publication credited to the given byline slot."""
    n = len(byline)
    if n == 0:
        raise ValueError("empty byline")
    if slot not in byline:
        raise ValueError(f"slot at position {slot.position} is not part of the byline")
    if scheme.mode == "uniform":
        return 1.0 / n
    raw = [_raw_weight(s, n, scheme) for s in byline]
    total = math.fsum(raw)
    if total == 0.0:
        where = f" in publication {pub_id}" if pub_id else ""
        raise ValueError(f"all byline weights are zero{where}")
    return _raw_weight(slot, n, scheme) / total


@dataclass(frozen=True)
class ScoreRecord:
    researcher_id: str
    indicator: str
    value: float
    n_publications: int


def _own_slots(researcher: Researcher, pub: Publication) -> list[AuthorSlot]:
    return [s for s in pub.authors if s.researcher_id == researcher.researcher_id]


def compute_fss(
    researcher: Researcher,
    publications: Sequence[Publication],
    baseline: CitationBaseline,
    scheme: WeightScheme,
    fallback_counter: Counter[str] | None = None,
) -> ScoreRecord:
    """Yearly field-normalized citation impact.

    Each publication contributes citations scaled by the expected citations of
    its year and categories, times the researcher's fractional share of the
    byline; the total is averaged over years active.  fsum keeps the result
    independent of publication order.
    """
    terms = []
    for pub in publications:
        factor = scaling_factor(baseline, pub.year, pub.categories, fallback_counter)
        for slot in _own_slots(researcher, pub):
            share = fractional_contribution(pub.authors, slot, scheme, pub_id=pub.pub_id)
            terms.append((pub.citations / factor) * share)
    value = math.fsum(terms) / researcher.years_active
    return ScoreRecord(researcher.researcher_id, "fss", value, len(publications))


def compute_po(
    researcher: Researcher,
    publications: Sequence[Publication],
    fractional: bool = False,
    scheme: WeightScheme | None = None,
) -> ScoreRecord:
    """Publications per year active; full counting unless fractional is set."""
    if fractional:
        scheme = scheme or WeightScheme.uniform()
        terms = []
        for pub in publications:
            for slot in _own_slots(researcher, pub):
                terms.append(fractional_contribution(pub.authors, slot, scheme, pub.pub_id))
        total = math.fsum(terms)
    else:
        total = float(len(publications))
    return ScoreRecord(
        researcher.researcher_id, "po", total / researcher.years_active, len(publications)
    )


def score_field(
    corpus: Corpus,
    field_code: str,
    indicator: str,
    baseline: CitationBaseline | None = None,
    scheme: WeightScheme | None = None,
    po_fractional: bool = False,
    fallback_counter: Counter[str] | None = None,
) -> list[ScoreRecord]:
    """Score every roster member of one field; unproductive members score zero."""
    if indicator not in ("fss", "po"):
        raise ValueError(f"unknown indicator {indicator!r}")
    if indicator == "fss" and baseline is None:
        raise ValueError("fss scoring requires a citation baseline")
    scheme = scheme or WeightScheme.from_config(corpus.config.weight_scheme)
    records = []
    for researcher in corpus.researchers_in_field(field_code):
        pubs = corpus.publications_of(researcher.researcher_id)
        if indicator == "fss":
            assert baseline is not None
            record = compute_fss(researcher, pubs, baseline, scheme, fallback_counter)
        else:
            record = compute_po(researcher, pubs, fractional=po_fractional, scheme=scheme)
        records.append(record)
    return records


def score_corpus(
    corpus: Corpus,
    indicator: str,
    baseline: CitationBaseline | None = None,
    scheme: WeightScheme | None = None,
    po_fractional: bool = False,
    fallback_counter: Counter[str] | None = None,
) -> dict[str, list[ScoreRecord]]:
    """Score all fields, keyed by field code in sorted order."""
    return {
        code: score_field(
            corpus, code, indicator, baseline, scheme, po_fractional, fallback_counter
        )
        for code in corpus.field_codes()
    }


def write_scores_csv(
    scores: Mapping[str, list[ScoreRecord]],
    disciplines: Mapping[str, str],
    path: str | Path,
) -> None:
    """Write one row per researcher at full float precision."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(SCORES_COLUMNS)
        for field_code in sorted(scores):
            for record in scores[field_code]:
                writer.writerow(
                    [
                        record.researcher_id,
                        field_code,
                        disciplines[field_code],
                        record.indicator,
                        repr(record.value),
                        record.n_publications,
                    ]
                )


def read_scores_csv(lines) -> tuple[dict[str, list[ScoreRecord]], dict[str, str]]:
    """Read a scores table back; returns (records by field, discipline by field)."""
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("scores table is empty") from None
    if tuple(h.strip() for h in header) != SCORES_COLUMNS:
        raise ValueError(f"scores header must be {','.join(SCORES_COLUMNS)}")
    scores: dict[str, list[ScoreRecord]] = {}
    disciplines: dict[str, str] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(SCORES_COLUMNS):
            raise ValueError(f"scores line {line_no}: expected {len(SCORES_COLUMNS)} columns")
        rid, field_code, discipline_code, indicator, value_raw, n_raw = row
        try:
            value = float(value_raw)
            n_publications = int(n_raw)
        except ValueError:
            raise ValueError(f"scores line {line_no}: malformed numeric column") from None
        prior = disciplines.setdefault(field_code, discipline_code)
        if prior != discipline_code:
            raise ValueError(f"scores line {line_no}: field {field_code} changes discipline")
        scores.setdefault(field_code, []).append(
            ScoreRecord(rid, indicator, value, n_publications)
        )
    if not scores:
        raise ValueError("scores table has no data rows")
    return scores, disciplines
