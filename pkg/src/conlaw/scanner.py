"""Corpus loading and compliance-annotation extraction.

Annotation grammar (bit-exact): a full comment line (leaders ``#``, ``//``,
``--``) containing ``[<ID>]`` where ``<ID>`` matches ``^[A-Z]{2,5}-[0-9]{3}$``
claims that the principle is implemented there. The annotation's technique is
the text after the closing bracket, trimmed. Its span runs from the annotation
line through the contiguous run of non-blank lines that follows; a blank line
or end of file terminates the span.

Markers inside multi-line string literals are not excluded: a line that looks
like a comment inside a triple-quoted string still counts. This is an accepted
false-positive class, traded for a scanner that needs no language parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "Annotation",
    "Corpus",
    "Diagnostic",
    "LANG_GENERIC",
    "LANG_PYTHON",
    "SourceFile",
    "extract_annotations",
    "glob_to_regex",
    "load_corpus",
]

LANG_PYTHON = "python-like"
LANG_GENERIC = "generic"

COMMENT_LEADERS = ("#", "//", "--")

# Candidate markers: ID-shaped tokens in brackets; exact case is validated after.
_MARKER_RE = re.compile(r"\[([A-Za-z]{2,5}-[0-9]{3})\]")
_ID_RE = re.compile(r"^[A-Z]{2,5}-[0-9]{3}$")

_BINARY_SNIFF_BYTES = 8192


@dataclass(frozen=True)
class Diagnostic:
    """A non-fatal condition noticed while scanning (warnings, skips)."""

    severity: str  # warning | info
    message: str
    file: str | None = None
    line: int | None = None

    def __str__(self) -> str:
        where = ""
        if self.file:
            where = f" [{self.file}" + (f":{self.line}]" if self.line else "]")
        return f"{self.severity}: {self.message}{where}"


@dataclass(frozen=True)
class SourceFile:
    """One corpus member. ``lines`` are 1-indexed via line_count/line helpers."""

    path: str  # corpus-relative, always '/'-separated
    lines: tuple[str, ...]
    language_hint: str

    @property
    def line_count(self) -> int:
        return len(self.lines)

    def line(self, number: int) -> str:
        """1-based line access."""
        return self.lines[number - 1]


@dataclass(frozen=True)
class Corpus:
    root: str
    files: tuple[SourceFile, ...]


@dataclass(frozen=True)
class Annotation:
    principle_id: str
    file: str
    line_start: int
    line_end: int
    technique: str


def language_hint_for(path: str) -> str:
    return LANG_PYTHON if path.endswith(".py") else LANG_GENERIC


def glob_to_regex(pattern: str) -> re.Pattern[str]:
    """Translate a ``*``/``**`` glob into a regex over '/'-separated paths."""
    out = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch == "*":
            if pattern[i : i + 3] == "**/":
                out.append(r"(?:.*/)?")
                i += 3
                continue
            if pattern[i : i + 2] == "**":
                out.append(r".*")
                i += 2
                continue
            out.append(r"[^/]*")
        elif ch == "?":
            out.append(r"[^/]")
        else:
            out.append(re.escape(ch))
        i += 1
    return re.compile("^" + "".join(out) + "$")


def _matches_any(path: str, patterns: list[re.Pattern[str]]) -> bool:
    return any(p.match(path) for p in patterns)


def make_source_file(path: str, text: str) -> SourceFile:
    """Build a SourceFile from in-memory text (used by tests and fixtures)."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()  # trailing newline does not create a phantom line
    return SourceFile(path=path, lines=tuple(lines), language_hint=language_hint_for(path))


def load_corpus(
    root: str | Path,
    include_globs: list[str] | None = None,
    exclude_globs: list[str] | None = None,
    diagnostics: list[Diagnostic] | None = None,
) -> Corpus:
    """Load every matching file under ``root`` in deterministic path order.

    Binary files (NUL byte within the first 8 KiB) are skipped with a warning
    diagnostic. An empty directory yields an empty corpus, not an error.
    """
    root_path = Path(root)
    if not root_path.is_dir():
        raise OSError(f"corpus root is not a readable directory: {root}")
    include = [glob_to_regex(g) for g in (include_globs or ["**/*"])]
    exclude = [glob_to_regex(g) for g in (exclude_globs or [])]

    rel_paths = []
    for candidate in root_path.rglob("*"):
        if not candidate.is_file():
            continue
        rel = candidate.relative_to(root_path).as_posix()
        if not _matches_any(rel, include) or _matches_any(rel, exclude):
            continue
        rel_paths.append((rel, candidate))
    rel_paths.sort(key=lambda item: item[0])

    files = []
    for rel, candidate in rel_paths:
        raw = candidate.read_bytes()
        if b"\x00" in raw[:_BINARY_SNIFF_BYTES]:
            if diagnostics is not None:
                diagnostics.append(
                    Diagnostic("warning", "binary file skipped", file=rel)
                )
            continue
        files.append(make_source_file(rel, raw.decode("utf-8", errors="replace")))
    return Corpus(root=str(root_path), files=tuple(files))


def _is_comment_line(line: str) -> bool:
    stripped = line.lstrip()
    return stripped.startswith(COMMENT_LEADERS)


def _is_blank(line: str) -> bool:
    return not line.strip()


def extract_annotations(
    f: SourceFile, diagnostics: list[Diagnostic] | None = None
) -> list[Annotation]:
    """Extract compliance annotations from one file, sorted by line_start.

    Malformed markers (ID-shaped but failing the exact grammar, e.g. lowercase)
    produce a diagnostic instead of an annotation.
    """
    annotations = []
    for idx, line in enumerate(f.lines):
        if not _is_comment_line(line):
            continue
        match = _MARKER_RE.search(line)
        if match is None:
            continue
        candidate = match.group(1)
        line_no = idx + 1
        if not _ID_RE.match(candidate):
            if diagnostics is not None:
                diagnostics.append(
                    Diagnostic(
                        "warning",
                        f"malformed annotation id {candidate!r}",
                        file=f.path,
                        line=line_no,
                    )
                )
            continue
        technique = line[match.end() :].strip()
        end = line_no
        for follow in range(idx + 1, len(f.lines)):
            if _is_blank(f.lines[follow]):
                break
            end = follow + 1
        annotations.append(
            Annotation(
                principle_id=candidate,
                file=f.path,
                line_start=line_no,
                line_end=end,
                technique=technique,
            )
        )
    return annotations
