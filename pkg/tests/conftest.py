"""Shared builders for corpus fixtures used across the test modules."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from prodskew.corpus import ObservationConfig, load_corpus

ROSTER_HEADER = "researcher_id,field_code,discipline_code,years_active"


def roster_lines(rows):
    """rows of (researcher_id, field_code, discipline_code, years_active)."""
    lines = [ROSTER_HEADER]
    for rid, field, disc, years in rows:
        lines.append(f"{rid},{field},{disc},{years}")
    return lines


def author(position, researcher_id=None, intramural=True, external=False):
    entry = {"position": position, "intramural": intramural}
    if external or researcher_id is None:
        entry["external"] = True
    else:
        entry["researcher_id"] = researcher_id
    return entry


def pub_line(
    pub_id,
    authors,
    year=2018,
    doc_type="article",
    categories=("C1",),
    citations=0,
):
    return json.dumps(
        {
            "pub_id": pub_id,
            "year": year,
            "doc_type": doc_type,
            "categories": list(categories),
            "citations": citations,
            "authors": authors,
        }
    )


def make_config(**overrides) -> ObservationConfig:
    base = dict(window_start=2016, window_end=2020, min_field_size=1)
    base.update(overrides)
    return ObservationConfig(**base)


def build_corpus(roster_rows, pub_lines, config=None):
    config = config or make_config()
    return load_corpus(roster_lines(roster_rows), pub_lines, config)


def write_corpus_files(tmp_path: Path, roster_rows, pub_lines):
    roster = tmp_path / "researchers.csv"
    roster.write_text("\n".join(roster_lines(roster_rows)) + "\n", encoding="utf-8")
    pubs = tmp_path / "publications.jsonl"
    pubs.write_text("\n".join(pub_lines) + ("\n" if pub_lines else ""), encoding="utf-8")
    return roster, pubs


@pytest.fixture
def basic_rows():
    return [
        ("r1", "FA", "D1", 5.0),
        ("r2", "FA", "D1", 5.0),
        ("r3", "FB", "D1", 2.5),
    ]


@pytest.fixture
def basic_pubs():
    return [
        pub_line("p1", [author(1, "r1"), author(2, "r2")], citations=4),
        pub_line("p2", [author(1, "r3")], year=2019, citations=0),
    ]
