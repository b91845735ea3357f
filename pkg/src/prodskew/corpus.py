"""Domain model, input parsing, and field-size filtering for researcher/publication corpora."""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

DEFAULT_DOC_TYPES = ("article", "review", "letter", "proceedings")
DEFAULT_MIN_FIELD_SIZE = 30
DEFAULT_HISTOGRAM_BIN_WIDTH = 0.1
QUARTILE_METHOD = "linear-interpolation-between-closest-ranks"
INDICATORS = ("fss", "po")

ROSTER_COLUMNS = ("researcher_id", "field_code", "discipline_code", "years_active")


class CorpusError(ValueError):
    """Input data violates the corpus contract."""


@dataclass(frozen=True)
class Researcher:
    """One roster member, attached to exactly one field and discipline."""

    researcher_id: str
    field_code: str
    discipline_code: str
    years_active: float


@dataclass(frozen=True)
class AuthorSlot:
    """One byline position; external co-authors carry no researcher_id."""

    position: int
    researcher_id: str | None = None
    intramural: bool = False

    @property
    def external(self) -> bool:
        return self.researcher_id is None


@dataclass(frozen=True)
class Publication:
    pub_id: str
    year: int
    doc_type: str
    categories: tuple[str, ...]
    citations: int
    authors: tuple[AuthorSlot, ...]

    @property
    def cited(self) -> bool:
        return self.citations > 0


@dataclass(frozen=True)
class ObservationConfig:
    """Run-level parameters shared by every downstream stage.

    weight_scheme is kept as the raw mapping from the config file; the scoring
    layer parses it.  quartile_method is a fixed label naming the only
    interpolation rule this package implements.
    """

    window_start: int
    window_end: int
    min_field_size: int = DEFAULT_MIN_FIELD_SIZE
    indicator: str = "fss"
    weight_scheme: Mapping[str, Any] | None = None
    quartile_method: str = QUARTILE_METHOD
    histogram_bin_width: float = DEFAULT_HISTOGRAM_BIN_WIDTH
    rng_seed: int = 0
    doc_types: tuple[str, ...] = DEFAULT_DOC_TYPES

    def __post_init__(self) -> None:
        if self.window_start > self.window_end:
            raise CorpusError(
                f"window_start {self.window_start} exceeds window_end {self.window_end}"
            )
        if self.min_field_size < 1:
            raise CorpusError(f"min_field_size must be >= 1, got {self.min_field_size}")
        if self.indicator not in INDICATORS:
            raise CorpusError(f"unknown indicator {self.indicator!r}")
        if self.quartile_method != QUARTILE_METHOD:
            raise CorpusError(f"unsupported quartile method {self.quartile_method!r}")
        if not self.histogram_bin_width > 0:
            raise CorpusError("histogram_bin_width must be positive")
        if not self.doc_types:
            raise CorpusError("doc_types whitelist must not be empty")
        object.__setattr__(self, "doc_types", tuple(self.doc_types))

    @property
    def window_years(self) -> float:
        """Length of the observation window in whole years, inclusive ends."""
        return float(self.window_end - self.window_start + 1)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], **overrides: Any) -> "ObservationConfig":
        merged: dict[str, Any] = dict(data)
        for key, value in overrides.items():
            if value is not None:
                merged[key] = value
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = sorted(set(merged) - known)
        if unknown:
            raise CorpusError(f"unknown config keys: {', '.join(unknown)}")
        if "window_start" not in merged or "window_end" not in merged:
            raise CorpusError("config requires window_start and window_end")
        if "doc_types" in merged:
            merged["doc_types"] = tuple(merged["doc_types"])
        return cls(**merged)

    def to_mapping(self) -> dict[str, Any]:
        return {
            "window_start": self.window_start,
            "window_end": self.window_end,
            "min_field_size": self.min_field_size,
            "indicator": self.indicator,
            "weight_scheme": dict(self.weight_scheme) if self.weight_scheme else None,
            "quartile_method": self.quartile_method,
            "histogram_bin_width": self.histogram_bin_width,
            "rng_seed": self.rng_seed,
            "doc_types": list(self.doc_types),
        }


@dataclass(frozen=True)
class LoadStats:
    """Counters collected while loading; dropped rows are warnings, not errors."""

    roster_rows: int = 0
    publication_rows: int = 0
    dropped_outside_window: int = 0
    dropped_doc_type: int = 0
    unknown_author_refs: int = 0

    @property
    def warning_count(self) -> int:
        return self.dropped_outside_window + self.dropped_doc_type

    def to_mapping(self) -> dict[str, int]:
        return {
            "roster_rows": self.roster_rows,
            "publication_rows": self.publication_rows,
            "dropped_outside_window": self.dropped_outside_window,
            "dropped_doc_type": self.dropped_doc_type,
            "unknown_author_refs": self.unknown_author_refs,
        }


@dataclass(frozen=True)
class Corpus:
    """Validated roster plus publications; immutable after load, safe for concurrent reads."""

    researchers: tuple[Researcher, ...]
    publications: tuple[Publication, ...]
    config: ObservationConfig
    stats: LoadStats = LoadStats()
    _by_field: dict[str, tuple[Researcher, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _pubs_by_researcher: dict[str, tuple[Publication, ...]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )
    _field_discipline: dict[str, str] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self) -> None:
        by_field: dict[str, list[Researcher]] = {}
        discipline: dict[str, str] = {}
        for r in self.researchers:
            by_field.setdefault(r.field_code, []).append(r)
            prior = discipline.setdefault(r.field_code, r.discipline_code)
            if prior != r.discipline_code:
                raise CorpusError(
                    f"field {r.field_code} mapped to disciplines {prior} and {r.discipline_code}"
                )
        ids = {r.researcher_id for r in self.researchers}
        pubs: dict[str, list[Publication]] = {}
        for pub in self.publications:
            for slot in pub.authors:
                if slot.researcher_id is not None and slot.researcher_id in ids:
                    pubs.setdefault(slot.researcher_id, []).append(pub)
        object.__setattr__(self, "_by_field", {k: tuple(v) for k, v in by_field.items()})
        # per-researcher lists kept in pub_id order so downstream sums are input-order free
        object.__setattr__(
            self,
            "_pubs_by_researcher",
            {k: tuple(sorted(v, key=lambda p: p.pub_id)) for k, v in pubs.items()},
        )
        object.__setattr__(self, "_field_discipline", discipline)

    def field_codes(self) -> tuple[str, ...]:
        return tuple(sorted(self._by_field))

    def field_sizes(self) -> dict[str, int]:
        return {code: len(members) for code, members in self._by_field.items()}

    def researchers_in_field(self, field_code: str) -> tuple[Researcher, ...]:
        try:
            return self._by_field[field_code]
        except KeyError:
            raise CorpusError(f"unknown field code {field_code!r}") from None

    def discipline_of(self, field_code: str) -> str:
        try:
            return self._field_discipline[field_code]
        except KeyError:
            raise CorpusError(f"unknown field code {field_code!r}") from None

    def publications_of(self, researcher_id: str) -> tuple[Publication, ...]:
        return self._pubs_by_researcher.get(researcher_id, ())


def parse_roster(lines: Iterable[str]) -> tuple[Researcher, ...]:
    """Parse roster CSV rows; duplicate ids and malformed rows are hard errors."""
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise CorpusError("roster is empty") from None
    if tuple(h.strip() for h in header) != ROSTER_COLUMNS:
        raise CorpusError(
            f"roster header must be {','.join(ROSTER_COLUMNS)}, got {','.join(header)}"
        )
    seen: set[str] = set()
    researchers: list[Researcher] = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(ROSTER_COLUMNS):
            raise CorpusError(f"roster line {line_no}: expected {len(ROSTER_COLUMNS)} columns")
        rid, field_code, discipline_code, years_raw = (cell.strip() for cell in row)
        if not rid or not field_code or not discipline_code:
            raise CorpusError(f"roster line {line_no}: empty identifier column")
        if rid in seen:
            raise CorpusError(f"roster line {line_no}: duplicate researcher_id {rid!r}")
        seen.add(rid)
        try:
            years = float(years_raw)
        except ValueError:
            raise CorpusError(
                f"roster line {line_no}: years_active {years_raw!r} is not a number"
            ) from None
        researchers.append(Researcher(rid, field_code, discipline_code, years))
    if not researchers:
        raise CorpusError("roster contains no researchers")
    return tuple(researchers)


def _parse_author(obj: Any, line_no: int, pub_id: str) -> AuthorSlot:
    if not isinstance(obj, dict):
        raise CorpusError(f"publication line {line_no} ({pub_id}): author entry is not an object")
    position = obj.get("position")
    if not isinstance(position, int) or isinstance(position, bool) or position < 1:
        raise CorpusError(f"publication line {line_no} ({pub_id}): bad author position")
    intramural = obj.get("intramural", False)
    if not isinstance(intramural, bool):
        raise CorpusError(f"publication line {line_no} ({pub_id}): intramural must be boolean")
    if obj.get("external", False) is True:
        return AuthorSlot(position=position, researcher_id=None, intramural=intramural)
    rid = obj.get("researcher_id")
    if not isinstance(rid, str) or not rid:
        raise CorpusError(
            f"publication line {line_no} ({pub_id}): author needs researcher_id or external=true"
        )
    return AuthorSlot(position=position, researcher_id=rid, intramural=intramural)


def _parse_publication(text: str, line_no: int) -> Publication:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"publication line {line_no}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict):
        raise CorpusError(f"publication line {line_no}: record is not an object")
    pub_id = obj.get("pub_id")
    if not isinstance(pub_id, str) or not pub_id:
        raise CorpusError(f"publication line {line_no}: missing pub_id")
    year = obj.get("year")
    if not isinstance(year, int) or isinstance(year, bool):
        raise CorpusError(f"publication line {line_no} ({pub_id}): year must be an integer")
    doc_type = obj.get("doc_type")
    if not isinstance(doc_type, str) or not doc_type:
        raise CorpusError(f"publication line {line_no} ({pub_id}): missing doc_type")
    categories = obj.get("categories")
    if (
        not isinstance(categories, list)
        or not categories
        or not all(isinstance(c, str) and c for c in categories)
    ):
        raise CorpusError(
            f"publication line {line_no} ({pub_id}): categories must be a non-empty string list"
        )
    citations = obj.get("citations")
    if not isinstance(citations, int) or isinstance(citations, bool) or citations < 0:
        raise CorpusError(
            f"publication line {line_no} ({pub_id}): citations must be a non-negative integer"
        )
    authors_raw = obj.get("authors")
    if not isinstance(authors_raw, list) or not authors_raw:
        raise CorpusError(f"publication line {line_no} ({pub_id}): authors must be non-empty")
    authors = tuple(_parse_author(a, line_no, pub_id) for a in authors_raw)
    positions = sorted(a.position for a in authors)
    if positions != list(range(1, len(authors) + 1)):
        raise CorpusError(
            f"publication line {line_no} ({pub_id}): byline positions must be 1..n with no gaps"
        )
    return Publication(
        pub_id=pub_id,
        year=year,
        doc_type=doc_type,
        categories=tuple(categories),
        citations=citations,
        authors=tuple(sorted(authors, key=lambda a: a.position)),
    )


def parse_publications(lines: Iterable[str]) -> tuple[Publication, ...]:
    """Parse a JSONL publication stream without applying any corpus filter."""
    pubs: list[Publication] = []
    seen: set[str] = set()
    for line_no, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        pub = _parse_publication(text, line_no)
        if pub.pub_id in seen:
            raise CorpusError(f"publication line {line_no}: duplicate pub_id {pub.pub_id!r}")
        seen.add(pub.pub_id)
        pubs.append(pub)
    return tuple(pubs)


def load_corpus(
    roster_lines: Iterable[str],
    publication_lines: Iterable[str],
    config: ObservationConfig,
) -> Corpus:
    """Build a validated corpus.

    Publications outside the window or with a non-whitelisted doc_type are
    dropped with a counted warning; byline references to ids missing from the
    roster are kept as external slots.
    """
    researchers = parse_roster(roster_lines)
    for r in researchers:
        if not r.years_active > 0:
            raise CorpusError(f"researcher {r.researcher_id}: years_active must be positive")
        if r.years_active > config.window_years:
            raise CorpusError(
                f"researcher {r.researcher_id}: years_active {r.years_active} exceeds "
                f"window length {config.window_years:.0f}"
            )
    parsed = parse_publications(publication_lines)
    known_ids = {r.researcher_id for r in researchers}
    kept: list[Publication] = []
    dropped_window = 0
    dropped_doc_type = 0
    unknown_refs = 0
    for pub in parsed:
        if not (config.window_start <= pub.year <= config.window_end):
            dropped_window += 1
            continue
        if pub.doc_type not in config.doc_types:
            dropped_doc_type += 1
            continue
        slots = []
        for slot in pub.authors:
            if slot.researcher_id is not None and slot.researcher_id not in known_ids:
                unknown_refs += 1
                slot = AuthorSlot(slot.position, None, slot.intramural)
            slots.append(slot)
        kept.append(replace(pub, authors=tuple(slots)))
    stats = LoadStats(
        roster_rows=len(researchers),
        publication_rows=len(parsed),
        dropped_outside_window=dropped_window,
        dropped_doc_type=dropped_doc_type,
        unknown_author_refs=unknown_refs,
    )
    return Corpus(
        researchers=researchers, publications=tuple(kept), config=config, stats=stats
    )


def load_corpus_files(
    roster_path: str | Path, publications_path: str | Path, config: ObservationConfig
) -> Corpus:
    with open(roster_path, encoding="utf-8", newline="") as roster:
        researchers = list(roster)
    with open(publications_path, encoding="utf-8") as pubs:
        lines = list(pubs)
    return load_corpus(researchers, lines, config)


def filter_fields(
    corpus: Corpus, min_field_size: int | None = None
) -> tuple[Corpus, tuple[str, ...]]:
    """Drop every field with fewer researchers than the threshold.

    Publications are retained untouched: they still feed baseline construction,
    but excluded researchers are never scored.  Idempotent.
    """
    threshold = corpus.config.min_field_size if min_field_size is None else min_field_size
    if threshold < 1:
        raise CorpusError(f"min_field_size must be >= 1, got {threshold}")
    sizes = corpus.field_sizes()
    excluded = tuple(sorted(code for code, n in sizes.items() if n < threshold))
    if len(excluded) == len(sizes):
        raise CorpusError(f"every field falls below the minimum size {threshold}")
    if not excluded:
        return corpus, ()
    gone = set(excluded)
    kept = tuple(r for r in corpus.researchers if r.field_code not in gone)
    filtered = Corpus(
        researchers=kept,
        publications=corpus.publications,
        config=corpus.config,
        stats=corpus.stats,
    )
    return filtered, excluded
