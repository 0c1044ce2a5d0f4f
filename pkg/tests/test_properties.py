"""Property suites: randomized constitutions, corpora, and tasks."""

from __future__ import annotations

import dataclasses
import datetime

from hypothesis import given, settings
from hypothesis import strategies as st

from conlaw.constitution import (
    Amendment,
    Category,
    Constitution,
    Principle,
    parse_constitution,
    required_bump,
    serialize_constitution,
    validate_constitution,
)
from conlaw.scanner import Corpus, make_source_file
from conlaw.selector import select
from conlaw.traceability import build_matrix

_WORDS = (
    "account", "transfer", "token", "session", "audit", "schema", "query",
    "password", "origin", "decimal", "balance", "customer", "endpoint",
    "validation", "encrypt", "redact", "hash", "scope", "limit", "claims",
)

_token = st.sampled_from(_WORDS)
_text = st.lists(_token, min_size=1, max_size=6).map(" ".join)


@st.composite
def constitutions(draw, min_principles: int = 1, max_principles: int = 16):
    n_categories = draw(st.integers(min_value=1, max_value=6))
    categories = tuple(
        Category(id=f"cat-{i}", title=f"Category {i}") for i in range(n_categories)
    )
    n_principles = draw(st.integers(min_value=min_principles, max_value=max_principles))
    principles = []
    for i in range(n_principles):
        principles.append(
            Principle(
                id=f"AB-{i:03d}",
                cwe=tuple(draw(st.lists(st.integers(1, 999), min_size=1, max_size=3))),
                level=draw(st.sampled_from(["MUST", "SHOULD", "MAY"])),
                category=draw(st.sampled_from([c.id for c in categories])),
                title=draw(_text),
                constraint=draw(_text),
                pattern=draw(_text),
                rationale=draw(_text),
                tags=tuple(draw(st.lists(_token, max_size=4, unique=True))),
                detectors=(),
            )
        )
    amendments = (
        Amendment("1.0.0", datetime.date(2025, 1, 1), "major", "initial", ("board",)),
    )
    return Constitution(
        name="Randomized Constitution",
        version="1.0.0",
        categories=categories,
        principles=tuple(principles),
        amendments=amendments,
    )


@settings(max_examples=60, deadline=None)
@given(constitutions())
def test_generated_constitutions_validate(c):
    assert validate_constitution(c) == []


@settings(max_examples=60, deadline=None)
@given(constitutions())
def test_serialize_parse_round_trip(c):
    assert parse_constitution(serialize_constitution(c)) == c


@settings(max_examples=60, deadline=None)
@given(constitutions())
def test_required_bump_reflexivity(c):
    assert required_bump(c, c).required == "none"


@settings(max_examples=60, deadline=None)
@given(constitutions(min_principles=2), st.data())
def test_removal_addition_duality(c, data):
    victim = data.draw(st.sampled_from([p.id for p in c.principles]))
    smaller = dataclasses.replace(
        c, principles=tuple(p for p in c.principles if p.id != victim)
    )
    assert required_bump(c, smaller).required == "major"
    assert required_bump(smaller, c).required in ("minor", "major")


@settings(max_examples=40, deadline=None)
@given(constitutions(min_principles=3), st.data())
def test_bump_is_maximum_of_individual_edits(c, data):
    ids = [p.id for p in c.principles]
    targets = data.draw(
        st.lists(st.sampled_from(ids), min_size=1, max_size=3, unique=True)
    )
    kinds = [data.draw(st.sampled_from(["remove", "rationale", "title"])) for _ in targets]
    order = {"none": 0, "patch": 1, "minor": 2, "major": 3}

    def apply(base, target, kind):
        if kind == "remove":
            return dataclasses.replace(
                base, principles=tuple(p for p in base.principles if p.id != target)
            )
        return dataclasses.replace(
            base,
            principles=tuple(
                dataclasses.replace(p, **{kind: getattr(p, kind) + " reworded"})
                if p.id == target
                else p
                for p in base.principles
            ),
        )

    combined = c
    singles = []
    for target, kind in zip(targets, kinds):
        combined = apply(combined, target, kind)
        singles.append(required_bump(c, apply(c, target, kind)).required)
    expected = max(singles, key=order.__getitem__)
    assert required_bump(c, combined).required == expected


# --- selector bounds: 200 randomized (constitution, task) cases -----------------


@settings(max_examples=200, deadline=None)
@given(constitutions(min_principles=5), _text | st.just(""))
def test_selection_bounds_and_determinism(c, task):
    full = select(c, task, "full")
    relevant = select(c, task, "relevant")
    hierarchical = select(c, task, "hierarchical")

    assert len(full.items) == len(c.principles)
    assert 3 <= len(relevant.items) <= 5
    assert 5 <= len(hierarchical.items) <= 8

    ids = set(p.id for p in c.principles)
    for selection in (full, relevant, hierarchical):
        chosen = [pid for pid, _ in selection.items]
        assert len(chosen) == len(set(chosen))
        assert set(chosen) <= ids
        assert select(c, task, selection.strategy) == selection


@settings(max_examples=60, deadline=None)
@given(constitutions(min_principles=5), _text, st.integers(min_value=1, max_value=9))
def test_score_scaling_preserves_ordering(c, task, k):
    selection = select(c, task, "relevant")
    order = {p.id: i for i, p in enumerate(c.principles)}
    scaled = sorted(selection.items, key=lambda item: (-item[1] * k, order[item[0]]))
    assert list(selection.items) == scaled


# --- traceability partition and monotonicity -------------------------------------


@st.composite
def annotated_corpora(draw, c):
    ids = [p.id for p in c.principles] + ["ZZ-999"]
    n_files = draw(st.integers(min_value=1, max_value=4))
    files = []
    for i in range(n_files):
        markers = draw(st.lists(st.sampled_from(ids), max_size=5))
        chunks = []
        for pid in markers:
            chunks.append(f"# [{pid}] technique")
            chunks.append("code = 1")
            chunks.append("")
        files.append(make_source_file(f"file_{i}.py", "\n".join(chunks) + "\n"))
    return Corpus(root=".", files=tuple(files))


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_partition_over_random_annotations(data):
    c = data.draw(constitutions(min_principles=1, max_principles=8))
    corpus = data.draw(annotated_corpora(c))
    matrix = build_matrix(c, corpus)
    implemented = {e.principle_id for e in matrix.entries}
    all_ids = set(p.id for p in c.principles)
    assert implemented | set(matrix.gaps) == all_ids
    assert implemented & set(matrix.gaps) == set()
    assert matrix.summary.principles_implemented + matrix.summary.gaps == len(all_ids)
    assert matrix.summary.locations_mapped == len(matrix.entries)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_adding_annotation_never_increases_gaps(data):
    c = data.draw(constitutions(min_principles=1, max_principles=8))
    corpus = data.draw(annotated_corpora(c))
    extra_pid = data.draw(st.sampled_from([p.id for p in c.principles]))
    extra = make_source_file("extra.py", f"# [{extra_pid}] added\ncode = 1\n")
    grown = Corpus(root=".", files=corpus.files + (extra,))
    before = build_matrix(c, corpus)
    after = build_matrix(c, grown)
    assert len(after.gaps) <= len(before.gaps)
    assert set(after.gaps) <= set(before.gaps)
