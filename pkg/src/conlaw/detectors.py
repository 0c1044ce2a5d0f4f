"""Built-in violation detectors and the scan pipeline.

Detection is lexical plus lightweight structure: quote-aware comment
stripping, balanced-parenthesis call grouping, and indentation-based
class/function block tracking. There is deliberately no language parser;
every trigger below is decidable line by line, which keeps scans fast and
byte-deterministic. The detector interface would admit a real parser later.

Each detector maps to exactly one constitutional principle and carries the
primary CWE it detects (the detector id number is that CWE).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from conlaw.constitution import Constitution
from conlaw.scanner import Corpus, Diagnostic, SourceFile

__all__ = [
    "Detector",
    "Finding",
    "ScanReport",
    "UnknownDetectorId",
    "detector_ids",
    "list_detectors",
    "run_detectors",
    "run_single",
]

SEVERITY_BY_LEVEL = {"MUST": "error", "SHOULD": "warning", "MAY": "info"}

EXCERPT_LIMIT = 200


class UnknownDetectorId(Exception):
    def __init__(self, detector_id: str):
        super().__init__(f"unknown detector id: {detector_id}")
        self.detector_id = detector_id


@dataclass(frozen=True)
class Detector:
    id: str
    principle_id: str
    cwe: int
    description: str
    scope: str  # "any" or a language hint


@dataclass(frozen=True)
class Finding:
    detector_id: str
    principle_id: str
    cwe: int
    level: str
    severity: str
    file: str
    line_start: int
    line_end: int
    excerpt: str
    message: str


@dataclass
class ScanReport:
    constitution_version: str
    files_scanned: int
    findings: tuple[Finding, ...]
    counts: dict[str, int]


# --- lexical helpers --------------------------------------------------------


def _find_literals(line: str) -> tuple[list[tuple[str, int, int, str]], int | None]:
    """Locate string literals and the start of a ``#`` comment outside them.

    Returns ([(prefix, start, end, body), ...], comment_start). Triple quotes
    that open and close on the same line are handled; an unterminated quote
    swallows the rest of the line.
    """
    literals: list[tuple[str, int, int, str]] = []
    comment_start: int | None = None
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == "#":
            comment_start = i
            break
        if ch in "\"'":
            j = i - 1
            while j >= 0 and line[j].isalpha() and i - j <= 3:
                j -= 1
            prefix = line[j + 1 : i]
            if j >= 0 and (line[j].isalnum() or line[j] == "_"):
                prefix = ""  # quote abuts an identifier, not a literal prefix
            q = ch
            if line[i : i + 3] == q * 3:
                close = line.find(q * 3, i + 3)
                if close == -1:
                    literals.append((prefix, i, n, line[i + 3 :]))
                    i = n
                else:
                    literals.append((prefix, i, close + 3, line[i + 3 : close]))
                    i = close + 3
                continue
            k = i + 1
            body: list[str] = []
            closed = False
            while k < n:
                c = line[k]
                if c == "\\" and k + 1 < n:
                    body.append(line[k : k + 2])
                    k += 2
                    continue
                if c == q:
                    closed = True
                    break
                body.append(c)
                k += 1
            end = k + 1 if closed else n
            literals.append((prefix, i, end, "".join(body)))
            i = end
            continue
        i += 1
    return literals, comment_start


def _strip_comment(line: str) -> str:
    _, comment_start = _find_literals(line)
    return line if comment_start is None else line[:comment_start]


def _code_lines(f: SourceFile) -> list[str]:
    return [_strip_comment(raw) for raw in f.lines]


def _indent(line: str) -> int:
    return len(line) - len(line.lstrip(" \t"))


def _literal_spans(line: str) -> list[tuple[int, int]]:
    literals, _ = _find_literals(line)
    return [(start, end) for _, start, end, _ in literals]


def _in_literal(pos: int, spans: list[tuple[int, int]]) -> bool:
    return any(start <= pos < end for start, end in spans)


def _iter_code_positions(line: str):
    """Yield (pos, ch) for characters outside string literals."""
    spans = _literal_spans(line)
    idx = 0
    for pos, ch in enumerate(line):
        while idx < len(spans) and pos >= spans[idx][1]:
            idx += 1
        if idx < len(spans) and spans[idx][0] <= pos < spans[idx][1]:
            continue
        yield pos, ch


def _balanced_region(
    lines: list[str], start_idx: int, open_col: int, open_ch: str, close_ch: str
) -> list[tuple[int, str]]:
    """Argument text inside a bracketed region, as (1-based line, segment) pairs.

    ``open_col`` points at the opening bracket. String literals never affect
    the depth count. An unterminated region ends at end of file.
    """
    depth = 0
    region: list[tuple[int, str]] = []
    for idx in range(start_idx, len(lines)):
        line = lines[idx]
        begin = open_col if idx == start_idx else 0
        content_from = open_col + 1 if idx == start_idx else 0
        for pos, ch in _iter_code_positions(line):
            if pos < begin:
                continue
            if ch == open_ch:
                depth += 1
            elif ch == close_ch:
                depth -= 1
                if depth == 0:
                    region.append((idx + 1, line[content_from:pos]))
                    return region
        region.append((idx + 1, line[content_from:]))
    return region


def _iter_blocks(lines: list[str], header_re: re.Pattern[str]):
    """Yield (line_idx, match, body) for headers; body = [(line_idx, text)].

    A block body is every following line indented deeper than the header;
    blank lines inside are kept, and the block ends at the first non-blank
    line at or above the header's indentation.
    """
    for i, line in enumerate(lines):
        m = header_re.match(line)
        if m is None:
            continue
        ind = _indent(line)
        body: list[tuple[int, str]] = []
        for j in range(i + 1, len(lines)):
            if not lines[j].strip():
                body.append((j, lines[j]))
                continue
            if _indent(lines[j]) <= ind:
                break
            body.append((j, lines[j]))
        yield i, m, body


def _decorators_above(lines: list[str], header_idx: int) -> list[str]:
    decorators = []
    j = header_idx - 1
    while j >= 0 and lines[j].lstrip().startswith("@"):
        decorators.append(lines[j].strip())
        j -= 1
    return decorators


def _body_field_lines(body: list[tuple[int, str]]) -> list[tuple[int, str]]:
    """Lines at the block's first statement indentation (class field level)."""
    field_indent = None
    for _, text in body:
        if text.strip():
            field_indent = _indent(text)
            break
    if field_indent is None:
        return []
    return [(idx, text) for idx, text in body if text.strip() and _indent(text) == field_indent]


# --- individual detector checks ----------------------------------------------
# Each check receives comment-stripped lines and returns sorted offending
# 1-based line numbers (deduplicated).

_SQL_KEYWORD_RE = re.compile(r"\b(select|insert|update|delete|drop)\b", re.I)
_EXEC_CALL_RE = re.compile(r"(?:\b|\.)(execute|text)\s*\(")


def _check_sql_interpolation(lines: list[str]) -> list[int]:
    hits = []
    for idx, line in enumerate(lines):
        literals, _ = _find_literals(line)
        spans = [(start, end) for _, start, end, _ in literals]
        exec_opens = [
            m.end() - 1
            for m in _EXEC_CALL_RE.finditer(line)
            if not _in_literal(m.end() - 1, spans)
        ]
        for prefix, start, end, body in literals:
            if not _SQL_KEYWORD_RE.search(body):
                continue
            before = line[:start]
            after = line[end:]
            interpolated = (
                "f" in prefix.lower()
                or after.lstrip().startswith(".format(")
                or re.match(r"\s*%\s*[\w('\"\[{]", after) is not None
                or re.search(r"[\w)\]]\s*\+\s*$", before) is not None
                or re.match(r"\s*\+\s*[\w(]", after) is not None
            )
            passed_to_exec = any(open_col < start for open_col in exec_opens)
            if interpolated or passed_to_exec:
                hits.append(idx + 1)
                break
    return hits


_CALL_RE = re.compile(r"((?:[A-Za-z_]\w*\.)*[A-Za-z_]\w*)\s*\(")
_LOG_CALLEE_RE = re.compile(r"log|audit", re.I)
_SENSITIVE_KEY_RE = re.compile(
    r"[\"'](password|passwd|secret|token|authorization|api_key)[\"']\s*:"
)


def _check_sensitive_logging(lines: list[str]) -> list[int]:
    hits: set[int] = set()
    for idx, line in enumerate(lines):
        spans = _literal_spans(line)
        for m in _CALL_RE.finditer(line):
            if not _LOG_CALLEE_RE.search(m.group(1)):
                continue
            open_col = m.end() - 1
            if _in_literal(open_col, spans):
                continue
            for line_no, segment in _balanced_region(lines, idx, open_col, "(", ")"):
                if _SENSITIVE_KEY_RE.search(segment):
                    hits.add(line_no)
    return sorted(hits)


_DEF_RE = re.compile(r"^(\s*)(?:async\s+)?def\s+([A-Za-z_]\w*)\s*\(")
_RETRIEVAL_RE = re.compile(r"\bselect\(|\.execute\(|\bquery\(")
_RETURN_RE = re.compile(r"^\s*return\s+\S")
_OWNER_FWD_RE = re.compile(
    r"\.\s*\w*?(customer_id|owner_id|user_id)\b\s*(?:==|!=)\s*([A-Za-z_]\w*)\b"
)
_OWNER_REV_RE = re.compile(
    r"\b(customer_id|owner_id|user_id)\s*(?:==|!=)\s*[A-Za-z_][\w.()]*\.\s*\w*?(customer_id|owner_id|user_id)\b"
)


def _has_ownership_check(text: str) -> bool:
    for m in _OWNER_FWD_RE.finditer(text):
        if m.group(2) == m.group(1):
            return True
    for m in _OWNER_REV_RE.finditer(text):
        if m.group(1) == m.group(2):
            return True
    return False


def _check_missing_authorization(lines: list[str]) -> list[int]:
    hits = []
    for idx, m, body in _iter_blocks(lines, _DEF_RE):
        name = m.group(2)
        if not name.startswith(("get_", "fetch_", "find_")):
            continue
        body_text = "\n".join(text for _, text in body)
        if not _RETRIEVAL_RE.search(body_text):
            continue
        if not any(_RETURN_RE.match(text) for _, text in body):
            continue
        if _has_ownership_check(body_text):
            continue
        hits.append(idx + 1)
    return hits


_ASSIGN_STR_RE = re.compile(
    r"^\s*((?:[A-Za-z_]\w*\.)*[A-Za-z_]\w*)\s*(?::\s*[^=]+?)?\s*=(?!=)\s*(.*)$"
)
_SECRET_NAME_RE = re.compile(r"secret|password|api_key|token|private_key", re.I)
_ENV_READ_RE = re.compile(r"environ|getenv")


def _check_hardcoded_secret(lines: list[str]) -> list[int]:
    hits = []
    for idx, line in enumerate(lines):
        if _ENV_READ_RE.search(line):
            continue
        m = _ASSIGN_STR_RE.match(line)
        if m is None or not _SECRET_NAME_RE.search(m.group(1)):
            continue
        rhs_pos = m.start(2)
        literals, _ = _find_literals(line)
        for prefix, start, _, body in literals:
            if start < rhs_pos:
                continue
            # flag only when the right side *is* a (possibly prefixed) literal
            if start - len(prefix) == rhs_pos and body:
                hits.append(idx + 1)
            break
    return hits


_CLASS_RE = re.compile(r"^(\s*)class\s+([A-Za-z_]\w*)")
_REQUEST_CLASS_RE = re.compile(r"(Request|Create|Update|Input)$")
_BARE_FIELD_RE = re.compile(r"^([A-Za-z_]\w*)\s*:\s*(str|int|float)\s*(?:=\s*\S.*)?$")
_CONSTRAINT_CONSTRUCT_RE = re.compile(
    r"Field\(|pattern=|gt=|ge=|le=|min_length=|max_length="
)


def _check_unvalidated_fields(lines: list[str]) -> list[int]:
    hits = []
    for _, m, body in _iter_blocks(lines, _CLASS_RE):
        if not _REQUEST_CLASS_RE.search(m.group(2)):
            continue
        fields = _body_field_lines(body)
        has_validator = any(
            text.lstrip().startswith("@") and "validator" in text for _, text in body
        )
        if has_validator:
            continue
        for idx, text in fields:
            stripped = text.strip()
            if _BARE_FIELD_RE.match(stripped) and not _CONSTRAINT_CONSTRUCT_RE.search(stripped):
                hits.append(idx + 1)
    return sorted(hits)


_MONEY_FIELD_RE = re.compile(r"^([A-Za-z_]\w*)\s*:\s*(float|int)\b")
_MONEY_NAME_RE = re.compile(r"(?:^|_)(amount|balance|price|total)(?:_|$)")


def _check_float_money(lines: list[str]) -> list[int]:
    hits = []
    for _, _, body in _iter_blocks(lines, _CLASS_RE):
        for idx, text in _body_field_lines(body):
            m = _MONEY_FIELD_RE.match(text.strip())
            if m and _MONEY_NAME_RE.search(m.group(1)):
                hits.append(idx + 1)
    return sorted(set(hits))


_NUM_ASSIGN_RE = re.compile(
    r"^\s*((?:[A-Za-z_]\w*\.)*[A-Za-z_]\w*)\s*(?::\s*[^=]+?)?\s*=(?!=)\s*([0-9]+)\s*$"
)
_EXPIRY_LIMITS = (
    (re.compile(r"access.*expire.*min", re.I), 15),
    (re.compile(r"refresh.*expire.*day", re.I), 7),
)


def _check_token_expiry(lines: list[str]) -> list[int]:
    hits = []
    for idx, line in enumerate(lines):
        m = _NUM_ASSIGN_RE.match(line)
        if m is None:
            continue
        name, value = m.group(1), int(m.group(2))
        for name_re, limit in _EXPIRY_LIMITS:
            if name_re.search(name) and value > limit:
                hits.append(idx + 1)
                break
    return hits


_BCRYPT_COST_RE = re.compile(r"(?:rounds|cost)\s*=\s*([0-9]+)")


def _check_bcrypt_cost(lines: list[str]) -> list[int]:
    hits = []
    for idx, line in enumerate(lines):
        if "bcrypt" not in line.lower():
            continue
        for m in _BCRYPT_COST_RE.finditer(line):
            if int(m.group(1)) < 12:
                hits.append(idx + 1)
                break
    return hits


_ALLOW_ORIGINS_RE = re.compile(r"allow_origins\s*=\s*\[")


def _check_cors_wildcard(lines: list[str]) -> list[int]:
    hits: set[int] = set()
    for idx, line in enumerate(lines):
        m = _ALLOW_ORIGINS_RE.search(line)
        if m is None or _in_literal(m.start(), _literal_spans(line)):
            continue
        open_col = m.end() - 1
        for line_no, segment in _balanced_region(lines, idx, open_col, "[", "]"):
            if re.search(r"[\"']\*[\"']", segment):
                hits.add(line_no)
    return sorted(hits)


_LEAK_RE = re.compile(r"\b(?:str|repr)\(\s*e\w*\s*\)|\btraceback\b")


def _check_error_exposure(lines: list[str]) -> list[int]:
    hits = []
    for idx, m, body in _iter_blocks(lines, _DEF_RE):
        name = m.group(2)
        decorated = any("exception_handler" in d for d in _decorators_above(lines, idx))
        if not decorated and not name.startswith("handle_"):
            continue
        for body_idx, text in body:
            if _LEAK_RE.search(text):
                hits.append(body_idx + 1)
    return sorted(set(hits))


_LOOPBACK_HOSTS = ("localhost", "127.0.0.1")


def _check_cleartext_url(lines: list[str]) -> list[int]:
    hits = []
    for idx, line in enumerate(lines):
        literals, _ = _find_literals(line)
        for _, _, _, body in literals:
            if not body.startswith("http://"):
                continue
            host = re.split(r"[/:?]", body[len("http://") :], maxsplit=1)[0]
            if host not in _LOOPBACK_HOSTS:
                hits.append(idx + 1)
                break
    return hits


# --- registry ----------------------------------------------------------------

_REGISTRY: tuple[Detector, ...] = (
    Detector("D-020", "SEC-006", 20, "request schema field lacks validation constraints", "python-like"),
    Detector("D-089", "SEC-002", 89, "SQL statement built with runtime interpolation", "any"),
    Detector("D-190", "SEC-007", 190, "monetary field typed as float or int instead of Decimal", "python-like"),
    Detector("D-200", "SEC-014", 200, "exception handler exposes internal error details", "python-like"),
    Detector("D-319", "SEC-013", 319, "cleartext http:// URL to a non-loopback host", "any"),
    Detector("D-352", "SEC-003", 352, "CORS configuration allows any origin", "any"),
    Detector("D-522", "SEC-009", 522, "bcrypt cost factor below 12", "any"),
    Detector("D-532", "SEC-015", 532, "sensitive field passed to a logging or audit call", "any"),
    Detector("D-613", "SEC-011", 613, "token lifetime exceeds the allowed maximum", "any"),
    Detector("D-798", "SEC-005", 798, "hardcoded secret assigned to a credential-named variable", "any"),
    Detector("D-862", "SEC-010", 862, "retrieval function returns data without an ownership check", "python-like"),
)

_CHECKS = {
    "D-020": _check_unvalidated_fields,
    "D-089": _check_sql_interpolation,
    "D-190": _check_float_money,
    "D-200": _check_error_exposure,
    "D-319": _check_cleartext_url,
    "D-352": _check_cors_wildcard,
    "D-522": _check_bcrypt_cost,
    "D-532": _check_sensitive_logging,
    "D-613": _check_token_expiry,
    "D-798": _check_hardcoded_secret,
    "D-862": _check_missing_authorization,
}


def list_detectors() -> list[Detector]:
    """All built-in detectors, sorted by id."""
    return list(_REGISTRY)


def detector_ids() -> frozenset[str]:
    return frozenset(d.id for d in _REGISTRY)


def _excerpt(f: SourceFile, line_no: int) -> str:
    text = f.line(line_no).strip()
    if len(text) > EXCERPT_LIMIT:
        return text[:EXCERPT_LIMIT] + "…"
    return text


def _findings_for(detector: Detector, level: str, f: SourceFile) -> list[Finding]:
    severity = SEVERITY_BY_LEVEL[level]
    lines = _code_lines(f)
    findings = []
    for line_no in _CHECKS[detector.id](lines):
        findings.append(
            Finding(
                detector_id=detector.id,
                principle_id=detector.principle_id,
                cwe=detector.cwe,
                level=level,
                severity=severity,
                file=f.path,
                line_start=line_no,
                line_end=line_no,
                excerpt=_excerpt(f, line_no),
                message=detector.description,
            )
        )
    return findings


def _tally(findings: list[Finding]) -> dict[str, int]:
    counts = {"error": 0, "warning": 0, "info": 0}
    for finding in findings:
        counts[finding.severity] += 1
    return counts


def run_detectors(
    c: Constitution,
    corpus: Corpus,
    enabled: list[str] | None = None,
    diagnostics: list[Diagnostic] | None = None,
) -> ScanReport:
    """Scan every corpus file with every applicable detector.

    ``enabled`` filters the registry by detector id (None means all).
    Detectors whose principle is absent from the constitution are skipped
    with a diagnostic. Output ordering is canonical: findings sorted by
    (file, line_start, detector_id).
    """
    selected = list_detectors()
    if enabled is not None:
        wanted = set(enabled)
        known = detector_ids()
        for det_id in sorted(wanted - known):
            raise UnknownDetectorId(det_id)
        selected = [d for d in selected if d.id in wanted]

    principles = {p.id: p for p in c.principles}
    active: list[Detector] = []
    for det in selected:
        if det.principle_id not in principles:
            if diagnostics is not None:
                diagnostics.append(
                    Diagnostic(
                        "warning",
                        f"detector {det.id} skipped: principle {det.principle_id} "
                        "not in constitution",
                    )
                )
            continue
        active.append(det)

    findings: list[Finding] = []
    for f in corpus.files:
        for det in active:
            if det.scope != "any" and det.scope != f.language_hint:
                continue
            findings.extend(_findings_for(det, principles[det.principle_id].level, f))
    findings.sort(key=lambda x: (x.file, x.line_start, x.detector_id))
    return ScanReport(
        constitution_version=c.version,
        files_scanned=len(corpus.files),
        findings=tuple(findings),
        counts=_tally(findings),
    )


def run_single(
    detector_id: str, f: SourceFile, c: Constitution | None = None
) -> list[Finding]:
    """Run one detector against one file (unit-test surface).

    Levels come from ``c`` when given, else from the shipped constitution.
    """
    detector = next((d for d in _REGISTRY if d.id == detector_id), None)
    if detector is None:
        raise UnknownDetectorId(detector_id)
    if c is None:
        from conlaw.constitution import load_default_constitution

        c = load_default_constitution()
    level = c.principle(detector.principle_id).level
    return sorted(
        _findings_for(detector, level, f), key=lambda x: (x.line_start, x.detector_id)
    )
