"""Compliance matrix construction, gap detection, and reference propagation.

The matrix is built from in-source annotations (see conlaw.scanner): one
TraceEntry per annotation whose principle exists in the active constitution.
"Locations mapped" therefore counts annotations, not distinct files or
principles. Principles with zero entries are compliance gaps.

CWE accounting is scoped to the MITRE Top 25 catalog snapshot below: a CWE is
"in scope" when some principle carrying it has a detector or at least one
matrix entry, and "addressed" when some principle carrying it has at least
one entry.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from conlaw.constitution import PRINCIPLE_ID_RE, Constitution
from conlaw.detectors import list_detectors
from conlaw.scanner import Corpus, Diagnostic, extract_annotations

__all__ = [
    "ComplianceMatrix",
    "DocumentRefs",
    "MITRE_TOP_25_CWES",
    "ReferenceReport",
    "TraceEntry",
    "VerificationSummary",
    "build_matrix",
    "detect_gaps",
    "render_matrix_markdown",
    "verify_refs",
]

# CWE ids of the MITRE Top 25 snapshot the shipped constitution was written
# against. Principle CWEs outside this catalog are tracked in entries but not
# counted by the in-scope/addressed tallies.
MITRE_TOP_25_CWES = frozenset(
    {
        20, 22, 77, 78, 79, 89, 94, 119, 125, 190, 269, 276, 287, 306, 352,
        362, 416, 434, 476, 502, 787, 798, 862, 863, 918,
    }
)


@dataclass(frozen=True)
class TraceEntry:
    principle_id: str
    cwe: tuple[int, ...]
    file: str
    line_start: int
    line_end: int
    technique: str


@dataclass(frozen=True)
class VerificationSummary:
    principles_defined: int
    principles_implemented: int
    locations_mapped: int
    cwe_in_scope: int
    cwe_addressed: int
    gaps: int


@dataclass(frozen=True)
class ComplianceMatrix:
    entries: tuple[TraceEntry, ...]
    gaps: tuple[str, ...]
    summary: VerificationSummary


@dataclass(frozen=True)
class DocumentRefs:
    name: str
    references: tuple[str, ...]  # distinct ids, sorted
    count: int  # total mentions


@dataclass(frozen=True)
class ReferenceReport:
    documents: tuple[DocumentRefs, ...]
    unknown: tuple[tuple[str, str], ...]  # (document name, unresolved id)
    drift: tuple[str, ...]  # MUST ids in the spec doc missing from the tasks doc


def build_matrix(
    c: Constitution,
    corpus: Corpus,
    diagnostics: list[Diagnostic] | None = None,
) -> ComplianceMatrix:
    """Map every annotation to its principle and compute the gap partition.

    Annotations naming unknown principles become diagnostics, never entries;
    {principles with entries} and gaps always partition the principle set.
    """
    principles = {p.id: p for p in c.principles}
    entries: list[TraceEntry] = []
    for f in corpus.files:
        for ann in extract_annotations(f, diagnostics):
            principle = principles.get(ann.principle_id)
            if principle is None:
                if diagnostics is not None:
                    diagnostics.append(
                        Diagnostic(
                            "warning",
                            f"annotation references unknown principle {ann.principle_id}",
                            file=ann.file,
                            line=ann.line_start,
                        )
                    )
                continue
            entries.append(
                TraceEntry(
                    principle_id=ann.principle_id,
                    cwe=principle.cwe,
                    file=ann.file,
                    line_start=ann.line_start,
                    line_end=ann.line_end,
                    technique=ann.technique,
                )
            )
    entries.sort(key=lambda e: (e.principle_id, e.file, e.line_start))

    implemented_ids = {e.principle_id for e in entries}
    gaps = tuple(sorted(pid for pid in principles if pid not in implemented_ids))

    detector_principles = {d.principle_id for d in list_detectors()}
    in_scope_cwes: set[int] = set()
    addressed_cwes: set[int] = set()
    for p in c.principles:
        catalog_cwes = set(p.cwe) & MITRE_TOP_25_CWES
        if p.id in implemented_ids or p.id in detector_principles or p.detectors:
            in_scope_cwes |= catalog_cwes
        if p.id in implemented_ids:
            addressed_cwes |= catalog_cwes

    summary = VerificationSummary(
        principles_defined=len(c.principles),
        principles_implemented=len(implemented_ids),
        locations_mapped=len(entries),
        cwe_in_scope=len(in_scope_cwes),
        cwe_addressed=len(addressed_cwes),
        gaps=len(gaps),
    )
    return ComplianceMatrix(entries=tuple(entries), gaps=gaps, summary=summary)


def detect_gaps(m: ComplianceMatrix) -> list[str]:
    """Principles with zero traceability entries (the CI gate signal)."""
    return list(m.gaps)


def _span_text(line_start: int, line_end: int) -> str:
    if line_start == line_end:
        return str(line_start)
    return f"{line_start}-{line_end}"


_MD_HEADER = "Principle | CWE | File | Lines | Technique"


def _md_cell(text: str) -> str:
    return text.replace("|", "\\|")


def render_matrix_markdown(m: ComplianceMatrix) -> str:
    """The matrix as a Markdown table, plus gap and summary sections."""
    lines = [_MD_HEADER, "--- | --- | --- | --- | ---"]
    for e in m.entries:
        cwe = ", ".join(str(n) for n in e.cwe)
        lines.append(
            f"{e.principle_id} | {cwe} | {_md_cell(e.file)} | "
            f"{_span_text(e.line_start, e.line_end)} | {_md_cell(e.technique)}"
        )
    lines.append("")
    if m.gaps:
        lines.append("Gaps: " + ", ".join(m.gaps))
    else:
        lines.append("Gaps: none")
    lines.append("")
    s = m.summary
    lines.append("Summary:")
    lines.append(f"- principles defined: {s.principles_defined}")
    lines.append(f"- principles implemented: {s.principles_implemented}")
    lines.append(f"- locations mapped: {s.locations_mapped}")
    lines.append(f"- CWE in scope: {s.cwe_in_scope}")
    lines.append(f"- CWE addressed: {s.cwe_addressed}")
    lines.append(f"- gaps: {s.gaps}")
    return "\n".join(lines) + "\n"


_REF_RE = re.compile(r"\b[A-Z]{2,5}-[0-9]{3}\b")


def verify_refs(c: Constitution, docs: list[tuple[str, str]]) -> ReferenceReport:
    """Check principle references across workflow documents.

    ``docs`` is an ordered list of (name, text); the first document is the
    feature spec and the second the task list. Reports (a) referenced ids
    absent from the constitution, (b) MUST principles referenced in the spec
    document but missing from the tasks document (drift), and (c) reference
    counts per document.
    """
    known = set(c.principle_ids())
    documents: list[DocumentRefs] = []
    unknown: list[tuple[str, str]] = []
    per_doc_ids: list[set[str]] = []
    for name, text in docs:
        mentions = _REF_RE.findall(text)
        ids = {m for m in mentions if PRINCIPLE_ID_RE.match(m)}
        per_doc_ids.append(ids)
        documents.append(
            DocumentRefs(name=name, references=tuple(sorted(ids)), count=len(mentions))
        )
        for ref in sorted(ids - known):
            unknown.append((name, ref))

    drift: tuple[str, ...] = ()
    if len(docs) >= 2:
        spec_ids, task_ids = per_doc_ids[0], per_doc_ids[1]
        drift = tuple(
            sorted(
                pid
                for pid in spec_ids & known
                if c.principle(pid).level == "MUST" and pid not in task_ids
            )
        )
    return ReferenceReport(
        documents=tuple(documents), unknown=tuple(unknown), drift=drift
    )
