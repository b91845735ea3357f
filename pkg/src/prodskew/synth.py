"""Seeded synthetic rosters, publications, and score populations for desk-scale runs.

All draws go through numpy's default_rng (PCG64), so a spec with the same seed
regenerates byte-identical corpora.
"""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from .corpus import (
    DEFAULT_MIN_FIELD_SIZE,
    AuthorSlot,
    ObservationConfig,
    Publication,
    Researcher,
)

POSITIVE_KINDS = ("lognormal", "pareto", "exponential")

DOC_TYPE_CHOICES = ("article", "review", "letter", "proceedings")
DOC_TYPE_WEIGHTS = (0.80, 0.10, 0.05, 0.05)


@dataclass(frozen=True)
class PositiveDist:
    """Positive-part score distribution: lognormal(loc, scale), pareto(xmin, alpha),
    or exponential(rate)."""

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in POSITIVE_KINDS:
            raise ValueError(f"unknown positive-part kind {self.kind!r}")
        params = dict(self.params)
        defaults = {
            "lognormal": {"loc": 0.0, "scale": 1.0},
            "pareto": {"xmin": 1.0, "alpha": 2.0},
            "exponential": {"rate": 1.0},
        }[self.kind]
        unknown = sorted(set(params) - set(defaults))
        if unknown:
            raise ValueError(f"unknown {self.kind} parameters: {', '.join(unknown)}")
        merged = {**defaults, **{k: float(v) for k, v in params.items()}}
        if self.kind == "lognormal" and merged["scale"] <= 0:
            raise ValueError("lognormal scale must be positive")
        if self.kind == "pareto" and (merged["xmin"] <= 0 or merged["alpha"] <= 0):
            raise ValueError("pareto xmin and alpha must be positive")
        if self.kind == "exponential" and merged["rate"] <= 0:
            raise ValueError("exponential rate must be positive")
        object.__setattr__(self, "params", merged)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "lognormal":
            return rng.lognormal(mean=self.params["loc"], sigma=self.params["scale"], size=size)
        if self.kind == "pareto":
            return self.params["xmin"] * (1.0 + rng.pareto(self.params["alpha"], size=size))
        return rng.exponential(1.0 / self.params["rate"], size=size)


@dataclass(frozen=True)
class CitationModel:
    """Negative-binomial-style citation counts with an extra point mass at zero."""

    dispersion: float = 1.2
    mean: float = 4.0
    zero_inflation: float = 0.3

    def __post_init__(self) -> None:
        if self.dispersion <= 0 or self.mean <= 0:
            raise ValueError("dispersion and mean must be positive")
        if not 0.0 <= self.zero_inflation < 1.0:
            raise ValueError("zero_inflation must lie in [0, 1)")

    def sample(self, rng: np.random.Generator, ability: float) -> int:
        if rng.random() < self.zero_inflation:
            return 0
        mu = self.mean * ability
        p = self.dispersion / (self.dispersion + mu)
        return int(rng.negative_binomial(self.dispersion, p))


@dataclass(frozen=True)
class SynthSpec:
    n_fields: int
    researchers_per_field: tuple[int, int]
    zero_share: float
    positive_part: PositiveDist
    pubs_per_researcher: tuple[int, int]
    citation_model: CitationModel
    seed: int
    window_start: int = 2016
    window_end: int = 2020
    field_zero_shares: tuple[float, ...] | None = None
    fields_per_discipline: int = 4
    authors_mean: float = 2.5
    categories_per_field: int = 2
    multi_category_rate: float = 0.25
    internal_coauthor_rate: float = 0.35
    min_field_size: int | None = None

    def __post_init__(self) -> None:
        if self.n_fields < 1:
            raise ValueError("n_fields must be >= 1")
        for name in ("researchers_per_field", "pubs_per_researcher"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise ValueError(f"{name} must be a (lo, hi) range with 0 <= lo <= hi")
        if not 0.0 <= self.zero_share <= 1.0:
            raise ValueError("zero_share must lie in [0, 1]")
        if self.field_zero_shares is not None:
            shares = tuple(float(s) for s in self.field_zero_shares)
            if len(shares) != self.n_fields:
                raise ValueError("field_zero_shares must list one share per field")
            if any(not 0.0 <= s <= 1.0 for s in shares):
                raise ValueError("field zero shares must lie in [0, 1]")
            object.__setattr__(self, "field_zero_shares", shares)
        if self.window_start > self.window_end:
            raise ValueError("window_start exceeds window_end")
        if self.fields_per_discipline < 1:
            raise ValueError("fields_per_discipline must be >= 1")
        if self.researchers_per_field[0] < 1:
            raise ValueError("researchers_per_field lower bound must be >= 1")
        if not 0.0 <= self.multi_category_rate <= 1.0:
            raise ValueError("multi_category_rate must lie in [0, 1]")
        if not 0.0 <= self.internal_coauthor_rate <= 1.0:
            raise ValueError("internal_coauthor_rate must lie in [0, 1]")
        if self.authors_mean < 0:
            raise ValueError("authors_mean must be non-negative")
        if self.categories_per_field < 1:
            raise ValueError("categories_per_field must be >= 1")

    def field_zero_share(self, index: int) -> float:
        if self.field_zero_shares is not None:
            return self.field_zero_shares[index]
        return self.zero_share

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "SynthSpec":
        payload = dict(data)
        positive = payload.pop("positive_part", None)
        if not isinstance(positive, Mapping) or "kind" not in positive:
            raise ValueError("synth spec needs positive_part with a kind")
        positive = dict(positive)
        kind = positive.pop("kind")
        payload["positive_part"] = PositiveDist(kind=kind, params=positive)
        citation = payload.pop("citation_model", {})
        if not isinstance(citation, Mapping):
            raise ValueError("citation_model must be a mapping")
        payload["citation_model"] = CitationModel(**citation)
        for name in ("researchers_per_field", "pubs_per_researcher"):
            if name in payload:
                payload[name] = tuple(payload[name])
        if "field_zero_shares" in payload and payload["field_zero_shares"] is not None:
            payload["field_zero_shares"] = tuple(payload["field_zero_shares"])
        known = {f.name for f in cls.__dataclass_fields__.values()}  # type: ignore[attr-defined]
        unknown = sorted(set(payload) - known)
        if unknown:
            raise ValueError(f"unknown synth spec keys: {', '.join(unknown)}")
        return cls(**payload)


def generate_scores(spec: SynthSpec) -> dict[str, np.ndarray]:
    """Draw raw score populations per field: zero with probability p0, else the
    positive part.  Bypasses the corpus machinery entirely."""
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.researchers_per_field
    out: dict[str, np.ndarray] = {}
    for index in range(spec.n_fields):
        n = int(rng.integers(lo, hi + 1))
        zeros = rng.random(n) < spec.field_zero_share(index)
        values = spec.positive_part.sample(rng, n)
        out[f"F{index + 1:02d}"] = np.where(zeros, 0.0, values)
    return out


@dataclass(frozen=True)
class SynthCorpus:
    researchers: tuple[Researcher, ...]
    publications: tuple[Publication, ...]
    config: ObservationConfig


def _byline(
    rng: np.random.Generator,
    focal_id: str,
    pool: list[str],
    authors_mean: float,
    internal_rate: float,
) -> tuple[AuthorSlot, ...]:
    n = 1 + int(rng.poisson(authors_mean))
    n = min(n, 20)
    focal_position = 1 + int(rng.integers(n))
    slots = []
    for position in range(1, n + 1):
        if position == focal_position:
            slots.append(AuthorSlot(position, focal_id, intramural=True))
        elif pool and rng.random() < internal_rate:
            other = pool[int(rng.integers(len(pool)))]
            slots.append(AuthorSlot(position, other, intramural=True))
        else:
            slots.append(AuthorSlot(position, None, intramural=False))
    return tuple(slots)


def generate_corpus(spec: SynthSpec) -> SynthCorpus:
    """Generate a roster and publication stream that satisfy the corpus contract.

    Unproductive researchers author nothing and never appear as co-authors, so
    a field's configured zero share survives into its score distribution.
    """
    rng = np.random.default_rng(spec.seed)
    lo, hi = spec.researchers_per_field
    window_years = float(spec.window_end - spec.window_start + 1)
    researchers: list[Researcher] = []
    publications: list[Publication] = []
    pub_counter = 0
    for index in range(spec.n_fields):
        field_code = f"F{index + 1:02d}"
        discipline_code = f"D{index // spec.fields_per_discipline + 1}"
        home_categories = [
            f"C{index * spec.categories_per_field + j + 1:03d}"
            for j in range(spec.categories_per_field)
        ]
        n_members = int(rng.integers(lo, hi + 1))
        p0 = spec.field_zero_share(index)
        members = []
        productive: list[str] = []
        abilities: dict[str, float] = {}
        for k in range(n_members):
            rid = f"{field_code}-R{k + 1:04d}"
            members.append(rid)
            researchers.append(Researcher(rid, field_code, discipline_code, window_years))
            if rng.random() >= p0:
                productive.append(rid)
                abilities[rid] = float(spec.positive_part.sample(rng, 1)[0])
        for rid in productive:
            n_pubs = int(rng.integers(spec.pubs_per_researcher[0], spec.pubs_per_researcher[1] + 1))
            pool = [p for p in productive if p != rid]
            for _ in range(n_pubs):
                pub_counter += 1
                year = int(rng.integers(spec.window_start, spec.window_end + 1))
                doc_type = str(rng.choice(DOC_TYPE_CHOICES, p=DOC_TYPE_WEIGHTS))
                categories = [home_categories[int(rng.integers(len(home_categories)))]]
                if len(home_categories) > 1 and rng.random() < spec.multi_category_rate:
                    second = home_categories[int(rng.integers(len(home_categories)))]
                    if second not in categories:
                        categories.append(second)
                citations = spec.citation_model.sample(rng, abilities[rid])
                publications.append(
                    Publication(
                        pub_id=f"P{pub_counter:07d}",
                        year=year,
                        doc_type=doc_type,
                        categories=tuple(categories),
                        citations=citations,
                        authors=_byline(
                            rng, rid, pool, spec.authors_mean, spec.internal_coauthor_rate
                        ),
                    )
                )
    min_field_size = spec.min_field_size
    if min_field_size is None:
        min_field_size = max(1, min(DEFAULT_MIN_FIELD_SIZE, lo))
    config = ObservationConfig(
        window_start=spec.window_start,
        window_end=spec.window_end,
        min_field_size=min_field_size,
        rng_seed=spec.seed,
    )
    return SynthCorpus(tuple(researchers), tuple(publications), config)


def write_synth_corpus(synth: SynthCorpus, out_dir: str | Path) -> dict[str, Path]:
    """Write researchers.csv, publications.jsonl, and config.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    roster_path = out / "researchers.csv"
    with open(roster_path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["researcher_id", "field_code", "discipline_code", "years_active"])
        for r in synth.researchers:
            years = r.years_active
            years_text = repr(int(years)) if float(years).is_integer() else repr(years)
            writer.writerow([r.researcher_id, r.field_code, r.discipline_code, years_text])
    pubs_path = out / "publications.jsonl"
    with open(pubs_path, "w", encoding="utf-8") as handle:
        for pub in synth.publications:
            authors = []
            for slot in pub.authors:
                entry: dict[str, Any] = {"position": slot.position, "intramural": slot.intramural}
                if slot.external:
                    entry["external"] = True
                else:
                    entry["researcher_id"] = slot.researcher_id
                authors.append(entry)
            record = {
                "pub_id": pub.pub_id,
                "year": pub.year,
                "doc_type": pub.doc_type,
                "categories": list(pub.categories),
                "citations": pub.citations,
                "authors": authors,
            }
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    config_path = out / "config.json"
    with open(config_path, "w", encoding="utf-8") as handle:
        json.dump(synth.config.to_mapping(), handle, indent=2, sort_keys=True)
        handle.write("\n")
    return {"researchers": roster_path, "publications": pubs_path, "config": config_path}
