"""Command-line front end and report rendering.

Exit-code contract (stable; CI may rely on it):

* 0  success, no error-severity findings and no gated gaps
* 1  error-severity findings present; or gaps present with ``--gate-gaps``;
     or unknown references / drift for ``verify-refs``
* 2  invocation error (bad flags, unknown ids, missing paths)
* 3  the constitution failed to parse or validate
* 4  I/O failure while reading inputs

Reports are byte-deterministic: JSON is key-sorted and carries no
timestamps, and all paths are corpus-root-relative with ``/`` separators.
Changing any JSON schema requires a minor version bump of the tool itself.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from conlaw import __version__
from conlaw.constitution import (
    Constitution,
    ConstitutionError,
    GovernanceError,
    check_amendment,
    diff_constitutions,
    load_constitution,
    required_bump,
    validate_constitution,
)
from conlaw.detectors import (
    ScanReport,
    UnknownDetectorId,
    detector_ids,
    list_detectors,
    run_detectors,
)
from conlaw.scanner import Diagnostic, load_corpus
from conlaw.selector import STRATEGIES, Selection, select
from conlaw.traceability import (
    ComplianceMatrix,
    ReferenceReport,
    build_matrix,
    render_matrix_markdown,
    verify_refs,
)

__all__ = [
    "Invocation",
    "RenderedReport",
    "UnsupportedFormat",
    "main",
    "render_report",
    "run",
]

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_INVALID_CONSTITUTION = 3
EXIT_IO = 4

DEFAULT_CONSTITUTION = "constitution.yaml"
CONSTITUTION_ENV_VAR = "CONLAW_CONSTITUTION"

_DEFAULT_FORMAT = {
    "validate": "text",
    "check": "text",
    "matrix": "markdown",
    "gaps": "text",
    "select": "text",
    "diff": "text",
    "verify-refs": "text",
    "detectors": "text",
}

_SUPPORTED_FORMATS = {
    "validate": ("text",),
    "check": ("text", "json"),
    "matrix": ("markdown", "json"),
    "gaps": ("text", "json"),
    "select": ("text", "json"),
    "diff": ("text", "json"),
    "verify-refs": ("text", "json"),
    "detectors": ("text", "json"),
}


class UnsupportedFormat(Exception):
    def __init__(self, fmt: str, kind: str):
        super().__init__(f"format {fmt!r} is not supported for {kind} reports")
        self.format = fmt


class UsageError(Exception):
    """Bad flags or paths; maps to exit code 2."""


@dataclass(frozen=True)
class Invocation:
    """One resolved CLI invocation, ready to dispatch."""

    command: str
    constitution_path: Path
    corpus_root: Path | None
    format: str
    include: tuple[str, ...] | None
    exclude: tuple[str, ...] | None
    enabled: tuple[str, ...] | None  # None = all detectors
    strategy: str
    task: str
    gate_gaps: bool
    strict: bool
    paths: tuple[str, ...]  # diff / verify-refs positionals


@dataclass(frozen=True)
class RenderedReport:
    format: str
    body: bytes


# --- rendering ---------------------------------------------------------------


def _tool_header() -> dict:
    return {"name": "conlaw", "version": __version__}


def _json_bytes(payload: dict) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode(
        "utf-8"
    )


def _render_scan(report: ScanReport, fmt: str) -> bytes:
    if fmt == "json":
        return _json_bytes(
            {
                "tool": _tool_header(),
                "constitution_version": report.constitution_version,
                "files_scanned": report.files_scanned,
                "findings": [dataclasses.asdict(f) for f in report.findings],
                "counts": dict(report.counts),
            }
        )
    lines = []
    for f in report.findings:
        lines.append(
            f"{f.file}:{f.line_start} {f.severity} {f.detector_id} {f.principle_id} {f.message}"
        )
    c = report.counts
    lines.append(
        f"{c['error']} error(s), {c['warning']} warning(s), {c['info']} info(s) "
        f"across {report.files_scanned} file(s)"
    )
    return ("\n".join(lines) + "\n").encode("utf-8")


def _render_matrix(matrix: ComplianceMatrix, fmt: str, constitution_version: str) -> bytes:
    if fmt == "markdown":
        return render_matrix_markdown(matrix).encode("utf-8")
    entries = []
    for e in matrix.entries:
        d = dataclasses.asdict(e)
        d["cwe"] = list(e.cwe)
        entries.append(d)
    return _json_bytes(
        {
            "tool": _tool_header(),
            "constitution_version": constitution_version,
            "entries": entries,
            "gaps": list(matrix.gaps),
            "summary": dataclasses.asdict(matrix.summary),
        }
    )


def _render_selection(selection: Selection, fmt: str, c: Constitution) -> bytes:
    principles = {p.id: p for p in c.principles}
    if fmt == "json":
        return _json_bytes(
            {
                "tool": _tool_header(),
                "constitution_version": c.version,
                "strategy": selection.strategy,
                "task": selection.task,
                "items": [
                    {
                        "principle_id": pid,
                        "score": score,
                        "title": principles[pid].title,
                        "level": principles[pid].level,
                    }
                    for pid, score in selection.items
                ],
            }
        )
    lines = [f"strategy={selection.strategy} principles={len(selection.items)}"]
    for pid, score in selection.items:
        p = principles[pid]
        lines.append(f"{pid} {p.level} score={score} {p.title}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _render_refs(report: ReferenceReport, fmt: str, c: Constitution) -> bytes:
    if fmt == "json":
        return _json_bytes(
            {
                "tool": _tool_header(),
                "constitution_version": c.version,
                "documents": [
                    {"name": d.name, "references": list(d.references), "count": d.count}
                    for d in report.documents
                ],
                "unknown": [{"document": doc, "id": ref} for doc, ref in report.unknown],
                "drift": list(report.drift),
            }
        )
    lines = []
    for d in report.documents:
        refs = ", ".join(d.references) if d.references else "none"
        lines.append(f"{d.name}: {d.count} reference(s); ids: {refs}")
    for doc, ref in report.unknown:
        lines.append(f"unknown reference {ref} in {doc}")
    for pid in report.drift:
        lines.append(f"drift: MUST principle {pid} referenced in spec but absent from tasks")
    if not report.unknown and not report.drift:
        lines.append("references OK")
    return ("\n".join(lines) + "\n").encode("utf-8")


def render_report(report, fmt: str, constitution: Constitution | None = None) -> RenderedReport:
    """Render a scan/matrix/selection/reference report to deterministic bytes."""
    if isinstance(report, ScanReport):
        if fmt not in ("text", "json"):
            raise UnsupportedFormat(fmt, "scan")
        return RenderedReport(fmt, _render_scan(report, fmt))
    if isinstance(report, ComplianceMatrix):
        if fmt not in ("markdown", "json"):
            raise UnsupportedFormat(fmt, "matrix")
        assert constitution is not None
        return RenderedReport(fmt, _render_matrix(report, fmt, constitution.version))
    if isinstance(report, Selection):
        if fmt not in ("text", "json"):
            raise UnsupportedFormat(fmt, "selection")
        assert constitution is not None
        return RenderedReport(fmt, _render_selection(report, fmt, constitution))
    if isinstance(report, ReferenceReport):
        if fmt not in ("text", "json"):
            raise UnsupportedFormat(fmt, "reference")
        assert constitution is not None
        return RenderedReport(fmt, _render_refs(report, fmt, constitution))
    raise UnsupportedFormat(fmt, type(report).__name__)


# --- argument parsing --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conlaw",
        description="Constitution-driven security compliance engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, corpus: bool = False) -> None:
        p.add_argument(
            "--constitution",
            help=f"constitution file (default {DEFAULT_CONSTITUTION}, or ${CONSTITUTION_ENV_VAR})",
        )
        p.add_argument("--format", choices=["text", "json", "markdown"], default=None)
        if corpus:
            p.add_argument("root", nargs="?", default=".", help="corpus root directory")
            p.add_argument("--include", action="append", default=None, metavar="GLOB")
            p.add_argument("--exclude", action="append", default=None, metavar="GLOB")

    p = sub.add_parser("validate", help="parse and validate a constitution")
    add_common(p)

    p = sub.add_parser("check", help="run violation detectors over a corpus")
    add_common(p, corpus=True)
    p.add_argument("--enable", default=None, metavar="IDS", help="comma-separated detector ids")
    p.add_argument("--disable", default=None, metavar="IDS", help="comma-separated detector ids")
    p.add_argument("--strict", action="store_true", help="gate on warnings as well as errors")
    p.add_argument("--gate-gaps", action="store_true", help="also fail when compliance gaps exist")

    p = sub.add_parser("matrix", help="build the compliance traceability matrix")
    add_common(p, corpus=True)
    p.add_argument("--gate-gaps", action="store_true")

    p = sub.add_parser("gaps", help="list principles with no traceability entries")
    add_common(p, corpus=True)
    p.add_argument("--gate-gaps", action="store_true")

    p = sub.add_parser("select", help="select task-relevant principles")
    add_common(p)
    p.add_argument("--strategy", choices=list(STRATEGIES), default="relevant")
    p.add_argument("--task", default="", help="task description to score against")

    p = sub.add_parser("diff", help="diff two constitutions and report the required bump")
    p.add_argument("old_constitution")
    p.add_argument("new_constitution")
    p.add_argument("--format", choices=["text", "json"], default=None)

    p = sub.add_parser("verify-refs", help="check principle references across workflow documents")
    add_common(p)
    p.add_argument(
        "documents",
        nargs="+",
        metavar="DOC",
        help="workflow documents; the first is the spec, the second the tasks",
    )

    p = sub.add_parser("detectors", help="list the built-in detectors")
    p.add_argument("--format", choices=["text", "json"], default=None)

    return parser


def _resolve_constitution_path(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    env = os.environ.get(CONSTITUTION_ENV_VAR)
    if env:
        return Path(env)
    return Path(DEFAULT_CONSTITUTION)


def _enabled_ids(enable: str | None, disable: str | None) -> tuple[str, ...] | None:
    known = detector_ids()
    if enable is None and disable is None:
        return None
    selected = set(known)
    if enable is not None:
        wanted = {tok.strip() for tok in enable.split(",") if tok.strip()}
        unknown = sorted(wanted - known)
        if unknown:
            raise UsageError(f"unknown detector id: {unknown[0]}")
        selected = wanted
    if disable is not None:
        dropped = {tok.strip() for tok in disable.split(",") if tok.strip()}
        unknown = sorted(dropped - known)
        if unknown:
            raise UsageError(f"unknown detector id: {unknown[0]}")
        selected -= dropped
    return tuple(sorted(selected))


def _invocation(args: argparse.Namespace) -> Invocation:
    fmt = getattr(args, "format", None) or _DEFAULT_FORMAT[args.command]
    if fmt not in _SUPPORTED_FORMATS[args.command]:
        raise UnsupportedFormat(fmt, args.command)
    include = getattr(args, "include", None)
    exclude = getattr(args, "exclude", None)
    paths: tuple[str, ...] = ()
    if args.command == "diff":
        paths = (args.old_constitution, args.new_constitution)
    elif args.command == "verify-refs":
        paths = tuple(args.documents)
    return Invocation(
        command=args.command,
        constitution_path=_resolve_constitution_path(getattr(args, "constitution", None)),
        corpus_root=Path(args.root) if hasattr(args, "root") else None,
        format=fmt,
        include=tuple(include) if include else None,
        exclude=tuple(exclude) if exclude else None,
        enabled=_enabled_ids(getattr(args, "enable", None), getattr(args, "disable", None)),
        strategy=getattr(args, "strategy", "relevant"),
        task=getattr(args, "task", ""),
        gate_gaps=getattr(args, "gate_gaps", False),
        strict=getattr(args, "strict", False),
        paths=paths,
    )


# --- command implementations ---------------------------------------------------


def _emit(body: bytes) -> None:
    sys.stdout.buffer.write(body)
    sys.stdout.buffer.flush()


def _emit_diagnostics(diags: list[Diagnostic]) -> None:
    for diag in diags:
        print(str(diag), file=sys.stderr)


def _load_validated(inv: Invocation) -> Constitution:
    path = inv.constitution_path
    if not path.is_file():
        raise UsageError(f"constitution file not found: {path}")
    c = load_constitution(path)
    issues = validate_constitution(c)
    if issues:
        raise ConstitutionError("; ".join(str(i) for i in issues))
    return c


def _load_corpus(inv: Invocation, diags: list[Diagnostic]):
    root = inv.corpus_root or Path(".")
    if not root.is_dir():
        raise UsageError(f"corpus root not found: {root}")
    return load_corpus(
        root,
        list(inv.include) if inv.include else None,
        list(inv.exclude) if inv.exclude else None,
        diags,
    )


def _cmd_validate(inv: Invocation) -> int:
    c = _load_validated(inv)
    _emit(
        f"constitution OK: {c.name} v{c.version}, {len(c.principles)} principle(s), "
        f"{len(c.categories)} category(ies)\n".encode("utf-8")
    )
    return EXIT_OK


def _cmd_check(inv: Invocation) -> int:
    c = _load_validated(inv)
    diags: list[Diagnostic] = []
    corpus = _load_corpus(inv, diags)
    report = run_detectors(
        c, corpus, enabled=list(inv.enabled) if inv.enabled is not None else None, diagnostics=diags
    )
    _emit(render_report(report, inv.format, c).body)
    _emit_diagnostics(diags)
    gated = report.counts["error"] > 0
    if inv.strict and report.counts["warning"] > 0:
        gated = True
    if inv.gate_gaps and build_matrix(c, corpus).gaps:
        gated = True
    return EXIT_FINDINGS if gated else EXIT_OK


def _cmd_matrix(inv: Invocation) -> int:
    c = _load_validated(inv)
    diags: list[Diagnostic] = []
    corpus = _load_corpus(inv, diags)
    matrix = build_matrix(c, corpus, diags)
    _emit(render_report(matrix, inv.format, c).body)
    _emit_diagnostics(diags)
    if inv.gate_gaps and matrix.gaps:
        return EXIT_FINDINGS
    return EXIT_OK


def _cmd_gaps(inv: Invocation) -> int:
    c = _load_validated(inv)
    diags: list[Diagnostic] = []
    corpus = _load_corpus(inv, diags)
    matrix = build_matrix(c, corpus, diags)
    if inv.format == "json":
        _emit(
            _json_bytes(
                {
                    "tool": _tool_header(),
                    "constitution_version": c.version,
                    "gaps": list(matrix.gaps),
                }
            )
        )
    elif matrix.gaps:
        _emit(("\n".join(matrix.gaps) + "\n").encode("utf-8"))
    else:
        _emit(b"no gaps\n")
    _emit_diagnostics(diags)
    if inv.gate_gaps and matrix.gaps:
        return EXIT_FINDINGS
    return EXIT_OK


def _cmd_select(inv: Invocation) -> int:
    c = _load_validated(inv)
    selection = select(c, inv.task, inv.strategy)
    _emit(render_report(selection, inv.format, c).body)
    return EXIT_OK


def _cmd_diff(inv: Invocation) -> int:
    old_path, new_path = Path(inv.paths[0]), Path(inv.paths[1])
    for path in (old_path, new_path):
        if not path.is_file():
            raise UsageError(f"constitution file not found: {path}")
    old, new = load_constitution(old_path), load_constitution(new_path)
    changes = diff_constitutions(old, new)
    requirement = required_bump(old, new)
    try:
        check_amendment(old, new)
        verdict, verdict_detail = "ok", ""
    except GovernanceError as exc:
        verdict, verdict_detail = type(exc).__name__, str(exc)

    if inv.format == "json":
        _emit(
            _json_bytes(
                {
                    "tool": _tool_header(),
                    "old_version": old.version,
                    "new_version": new.version,
                    "added": list(changes.added),
                    "removed": list(changes.removed),
                    "level_changed": [list(t) for t in changes.level_changed],
                    "field_changed": [list(t) for t in changes.field_changed],
                    "required_bump": requirement.required,
                    "reasons": list(requirement.reasons),
                    "amendment_check": verdict,
                    "amendment_detail": verdict_detail,
                }
            )
        )
        return EXIT_OK
    lines = [f"{old.version} -> {new.version}"]
    for pid in changes.added:
        lines.append(f"added: {pid}")
    for pid in changes.removed:
        lines.append(f"removed: {pid}")
    for pid, old_level, new_level in changes.level_changed:
        lines.append(f"level changed: {pid} {old_level} -> {new_level}")
    for pid, field_name in changes.field_changed:
        lines.append(f"{field_name} changed: {pid}")
    lines.append(f"required bump: {requirement.required}")
    for reason in requirement.reasons:
        lines.append(f"  - {reason}")
    lines.append(f"amendment check: {verdict}" + (f" ({verdict_detail})" if verdict_detail else ""))
    _emit(("\n".join(lines) + "\n").encode("utf-8"))
    return EXIT_OK


def _cmd_verify_refs(inv: Invocation) -> int:
    c = _load_validated(inv)
    docs = []
    for doc in inv.paths:
        path = Path(doc)
        if not path.is_file():
            raise UsageError(f"document not found: {path}")
        docs.append((path.name, path.read_text(encoding="utf-8", errors="replace")))
    report = verify_refs(c, docs)
    _emit(render_report(report, inv.format, c).body)
    if report.unknown or report.drift:
        return EXIT_FINDINGS
    return EXIT_OK


def _cmd_detectors(inv: Invocation) -> int:
    detectors = list_detectors()
    if inv.format == "json":
        _emit(
            _json_bytes(
                {
                    "tool": _tool_header(),
                    "detectors": [dataclasses.asdict(d) for d in detectors],
                }
            )
        )
    else:
        lines = [
            f"{d.id} -> {d.principle_id} (CWE-{d.cwe}, scope={d.scope}): {d.description}"
            for d in detectors
        ]
        _emit(("\n".join(lines) + "\n").encode("utf-8"))
    return EXIT_OK


_COMMANDS = {
    "validate": _cmd_validate,
    "check": _cmd_check,
    "matrix": _cmd_matrix,
    "gaps": _cmd_gaps,
    "select": _cmd_select,
    "diff": _cmd_diff,
    "verify-refs": _cmd_verify_refs,
    "detectors": _cmd_detectors,
}


def run(argv: list[str]) -> int:
    """Parse argv, dispatch, and map every failure to a documented exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        inv = _invocation(args)
        return _COMMANDS[inv.command](inv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedFormat, UnknownDetectorId) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConstitutionError as exc:
        print(f"invalid constitution: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONSTITUTION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
