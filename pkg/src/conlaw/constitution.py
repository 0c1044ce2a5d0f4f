"""Constitution documents: parsing, validation, diffing, and amendment governance.

A constitution is a versioned YAML document of security principles. Each
principle carries a stable ID, CWE mappings, an RFC-2119 enforcement level,
and three text fields: the constraint (what must hold), the implementation
pattern (how to satisfy it), and the rationale (why it exists).

Constitutions are immutable after parsing and safe to share across threads;
every operation in this module is a pure function of its inputs.
"""

from __future__ import annotations

import datetime as _dt
import functools
import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import yaml

__all__ = [
    "Amendment",
    "BumpRequirement",
    "Category",
    "ChangeSet",
    "Constitution",
    "ConstitutionError",
    "ConstitutionSyntaxError",
    "DuplicatePrincipleId",
    "GovernanceError",
    "InsufficientBump",
    "LEVELS",
    "MissingAmendmentRecord",
    "Principle",
    "SchemaError",
    "UnapprovedAmendment",
    "UnknownCategory",
    "UnknownDetector",
    "ValidationIssue",
    "check_amendment",
    "diff_constitutions",
    "load_constitution",
    "load_default_constitution",
    "parse_constitution",
    "render_markdown",
    "required_bump",
    "serialize_constitution",
    "validate_constitution",
]

LEVELS = ("MUST", "SHOULD", "MAY")

PRINCIPLE_ID_RE = re.compile(r"^[A-Z]{2,5}-[0-9]{3}$")
TAG_RE = re.compile(r"^[a-z][a-z0-9_-]*$")

_BUMP_RANK = {"none": 0, "patch": 1, "minor": 2, "major": 3}


class ConstitutionError(Exception):
    """Base class for constitution parsing and validation failures."""


class ConstitutionSyntaxError(ConstitutionError):
    """The document is not well-formed YAML."""


class SchemaError(ConstitutionError):
    """A field is missing, unknown, or has the wrong shape."""


class DuplicatePrincipleId(ConstitutionError):
    def __init__(self, principle_id: str):
        super().__init__(f"duplicate principle id: {principle_id}")
        self.principle_id = principle_id


class UnknownCategory(ConstitutionError):
    def __init__(self, principle_id: str, category: str):
        super().__init__(f"{principle_id} references unknown category: {category}")
        self.principle_id = principle_id
        self.category = category


class UnknownDetector(ConstitutionError):
    def __init__(self, principle_id: str, detector_id: str):
        super().__init__(f"{principle_id} references unknown detector: {detector_id}")
        self.principle_id = principle_id
        self.detector_id = detector_id


class GovernanceError(Exception):
    """Base class for amendment-check failures."""


class InsufficientBump(GovernanceError):
    def __init__(self, required: str, actual: str, reasons: list[str]):
        detail = "; ".join(reasons) if reasons else "no reasons recorded"
        super().__init__(
            f"version bump '{actual}' is weaker than required '{required}' ({detail})"
        )
        self.required = required
        self.actual = actual
        self.reasons = reasons


class MissingAmendmentRecord(GovernanceError):
    def __init__(self, version: str):
        super().__init__(f"no amendment record for version {version}")
        self.version = version


class UnapprovedAmendment(GovernanceError):
    def __init__(self, version: str):
        super().__init__(f"amendment for version {version} has no approvers")
        self.version = version


@dataclass(frozen=True)
class Category:
    id: str
    title: str


@dataclass(frozen=True)
class Principle:
    """One enforceable constraint with its CWE mapping and enforcement level."""

    id: str
    cwe: tuple[int, ...]
    level: str
    category: str
    title: str
    constraint: str
    pattern: str
    rationale: str
    tags: tuple[str, ...]
    detectors: tuple[str, ...]


@dataclass(frozen=True)
class Amendment:
    version: str
    date: _dt.date
    change_kind: str
    summary: str
    approved_by: tuple[str, ...]


@dataclass(frozen=True)
class Constitution:
    name: str
    version: str
    categories: tuple[Category, ...]
    principles: tuple[Principle, ...]
    amendments: tuple[Amendment, ...]

    def principle(self, principle_id: str) -> Principle:
        for p in self.principles:
            if p.id == principle_id:
                return p
        raise KeyError(principle_id)

    def principle_ids(self) -> list[str]:
        return [p.id for p in self.principles]


@dataclass(frozen=True)
class ValidationIssue:
    message: str
    principle_id: str | None = None
    field: str | None = None

    def __str__(self) -> str:
        where = f"{self.principle_id}: " if self.principle_id else ""
        return f"{where}{self.message}"


@dataclass(frozen=True)
class BumpRequirement:
    required: str  # none | patch | minor | major
    reasons: tuple[str, ...]


@dataclass(frozen=True)
class ChangeSet:
    """Per-principle differences between two constitutions."""

    added: tuple[str, ...]
    removed: tuple[str, ...]
    level_changed: tuple[tuple[str, str, str], ...]  # (id, old level, new level)
    field_changed: tuple[tuple[str, str], ...]  # (id, field name)

    @property
    def empty(self) -> bool:
        return not (self.added or self.removed or self.level_changed or self.field_changed)


# --- parsing ---------------------------------------------------------------

_TOP_LEVEL_KEYS = ("name", "version", "categories", "principles", "amendments")
_CATEGORY_KEYS = ("id", "title")
_PRINCIPLE_KEYS = (
    "id",
    "cwe",
    "level",
    "category",
    "title",
    "constraint",
    "pattern",
    "rationale",
    "tags",
    "detectors",
)
_AMENDMENT_KEYS = ("version", "date", "change_kind", "summary", "approved_by")


def parse_version(version: str) -> tuple[int, int, int]:
    """Parse ``major.minor.patch`` into an integer triple."""
    if not isinstance(version, str):
        raise SchemaError(f"version must be a string, got {type(version).__name__}")
    parts = version.split(".")
    if len(parts) != 3 or not all(p.isdigit() for p in parts):
        raise SchemaError(f"version must be three dot-separated integers, got {version!r}")
    return (int(parts[0]), int(parts[1]), int(parts[2]))


def _require_mapping(value, what: str) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"{what} must be a mapping, got {type(value).__name__}")
    return value


def _check_keys(entry: dict, allowed: tuple[str, ...], what: str) -> None:
    unknown = sorted(set(entry) - set(allowed))
    if unknown:
        raise SchemaError(f"{what} has unknown key(s): {', '.join(unknown)}")
    missing = [k for k in allowed if k not in entry]
    if missing:
        raise SchemaError(f"{what} is missing key(s): {', '.join(missing)}")


def _text(entry: dict, key: str, what: str) -> str:
    value = entry[key]
    if not isinstance(value, str):
        raise SchemaError(f"{what}.{key} must be text, got {type(value).__name__}")
    return value


def _parse_date(value, what: str) -> _dt.date:
    if isinstance(value, _dt.date) and not isinstance(value, _dt.datetime):
        return value
    if isinstance(value, str):
        try:
            return _dt.date.fromisoformat(value)
        except ValueError:
            pass
    raise SchemaError(f"{what}.date must be an ISO-8601 date, got {value!r}")


def _str_list(entry: dict, key: str, what: str) -> tuple[str, ...]:
    value = entry[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"{what}.{key} must be a list of strings")
    return tuple(value)


def parse_constitution(document: str) -> Constitution:
    """Parse a constitution document and enforce every structural invariant.

    Raises ConstitutionSyntaxError for malformed YAML, SchemaError for
    missing/unknown fields or bad field shapes, and the targeted errors
    (DuplicatePrincipleId, UnknownCategory, UnknownDetector) for reference
    violations. Document order of categories and principles is preserved.
    """
    try:
        data = yaml.safe_load(document)
    except yaml.YAMLError as exc:
        raise ConstitutionSyntaxError(f"malformed constitution document: {exc}") from exc
    if data is None:
        raise ConstitutionSyntaxError("empty constitution document")
    data = _require_mapping(data, "constitution document")
    _check_keys(data, _TOP_LEVEL_KEYS, "constitution document")

    name = data["name"]
    if not isinstance(name, str) or not name.strip():
        raise SchemaError("name must be non-empty text")
    version = data["version"]
    parse_version(version)

    raw_categories = data["categories"]
    if not isinstance(raw_categories, list):
        raise SchemaError("categories must be a list")
    categories = []
    seen_cat = set()
    for raw in raw_categories:
        entry = _require_mapping(raw, "category entry")
        _check_keys(entry, _CATEGORY_KEYS, f"category {entry.get('id', '?')!r}")
        cat_id = _text(entry, "id", "category")
        if not cat_id.strip():
            raise SchemaError("category id must be non-empty")
        if cat_id in seen_cat:
            raise SchemaError(f"duplicate category id: {cat_id}")
        seen_cat.add(cat_id)
        categories.append(Category(id=cat_id, title=_text(entry, "title", "category")))

    raw_principles = data["principles"]
    if not isinstance(raw_principles, list):
        raise SchemaError("principles must be a list")
    principles = []
    seen_ids = set()
    for raw in raw_principles:
        entry = _require_mapping(raw, "principle entry")
        what = f"principle {entry.get('id', '?')!r}"
        _check_keys(entry, _PRINCIPLE_KEYS, what)
        pid = _text(entry, "id", what)
        if not PRINCIPLE_ID_RE.match(pid):
            raise SchemaError(f"principle id {pid!r} does not match ^[A-Z]{{2,5}}-[0-9]{{3}}$")
        if pid in seen_ids:
            raise DuplicatePrincipleId(pid)
        seen_ids.add(pid)
        cwe = entry["cwe"]
        if not isinstance(cwe, list) or not all(isinstance(c, int) and c > 0 for c in cwe):
            raise SchemaError(f"{pid}.cwe must be a list of positive integers")
        level = _text(entry, "level", pid)
        if level not in LEVELS:
            raise SchemaError(f"{pid}.level must be one of MUST/SHOULD/MAY (RFC 2119), got {level!r}")
        for key in ("constraint", "pattern", "rationale"):
            if not _text(entry, key, pid).strip():
                raise SchemaError(f"{pid}.{key} must be non-empty")
        tags = _str_list(entry, "tags", pid)
        for tag in tags:
            if not TAG_RE.match(tag):
                raise SchemaError(f"{pid} tag {tag!r} is not a lowercase token")
        principles.append(
            Principle(
                id=pid,
                cwe=tuple(cwe),
                level=level,
                category=_text(entry, "category", pid),
                title=_text(entry, "title", pid),
                constraint=entry["constraint"],
                pattern=entry["pattern"],
                rationale=entry["rationale"],
                tags=tags,
                detectors=_str_list(entry, "detectors", pid),
            )
        )

    raw_amendments = data["amendments"]
    if not isinstance(raw_amendments, list):
        raise SchemaError("amendments must be a list")
    amendments = []
    for raw in raw_amendments:
        entry = _require_mapping(raw, "amendment entry")
        what = f"amendment {entry.get('version', '?')!r}"
        _check_keys(entry, _AMENDMENT_KEYS, what)
        amd_version = _text(entry, "version", what)
        parse_version(amd_version)
        change_kind = _text(entry, "change_kind", what)
        if change_kind not in ("major", "minor", "patch"):
            raise SchemaError(f"{what}.change_kind must be major/minor/patch, got {change_kind!r}")
        approved_by = _str_list(entry, "approved_by", what)
        if not approved_by:
            raise SchemaError(f"{what}.approved_by must not be empty")
        amendments.append(
            Amendment(
                version=amd_version,
                date=_parse_date(entry["date"], what),
                change_kind=change_kind,
                summary=_text(entry, "summary", what),
                approved_by=approved_by,
            )
        )

    from conlaw.detectors import detector_ids  # local import: detectors depends on this module

    known_detectors = detector_ids()
    for p in principles:
        if p.category not in seen_cat:
            raise UnknownCategory(p.id, p.category)
        for det in p.detectors:
            if det not in known_detectors:
                raise UnknownDetector(p.id, det)

    previous_amd: Amendment | None = None
    for amd in amendments:
        if previous_amd is not None:
            prev_v = parse_version(previous_amd.version)
            cur_v = parse_version(amd.version)
            if cur_v <= prev_v:
                raise SchemaError(
                    f"amendment versions must strictly increase ({previous_amd.version} -> {amd.version})"
                )
            if _bump_kind(prev_v, cur_v) != amd.change_kind:
                raise SchemaError(
                    f"amendment {amd.version} change_kind {amd.change_kind!r} is inconsistent "
                    f"with the delta from {previous_amd.version}"
                )
        previous_amd = amd

    return Constitution(
        name=name,
        version=version,
        categories=tuple(categories),
        principles=tuple(principles),
        amendments=tuple(amendments),
    )


def load_constitution(path: str | Path) -> Constitution:
    return parse_constitution(Path(path).read_text(encoding="utf-8"))


@functools.cache
def load_default_constitution() -> Constitution:
    """Load the banking constitution shipped with the package (cached; immutable)."""
    text = resources.files("conlaw.data").joinpath("banking_constitution.yaml").read_text("utf-8")
    return parse_constitution(text)


def default_constitution_path() -> Path:
    """Filesystem path of the shipped banking constitution."""
    return Path(str(resources.files("conlaw.data").joinpath("banking_constitution.yaml")))


# --- validation ------------------------------------------------------------


def validate_constitution(c: Constitution) -> list[ValidationIssue]:
    """Re-check every invariant on an already-built Constitution.

    Returns an empty list when the document is internally consistent.
    Intended for values assembled programmatically, where the parser's
    checks never ran.
    """
    issues: list[ValidationIssue] = []
    try:
        parse_version(c.version)
    except SchemaError as exc:
        issues.append(ValidationIssue(str(exc), field="version"))

    seen_cat: set[str] = set()
    for cat in c.categories:
        if not cat.id.strip():
            issues.append(ValidationIssue("category id must be non-empty"))
        elif cat.id in seen_cat:
            issues.append(ValidationIssue(f"duplicate category id: {cat.id}"))
        seen_cat.add(cat.id)

    from conlaw.detectors import detector_ids  # local import: detectors depends on this module

    known_detectors = detector_ids()
    seen: set[str] = set()
    for p in c.principles:
        if not PRINCIPLE_ID_RE.match(p.id):
            issues.append(ValidationIssue("id does not match ^[A-Z]{2,5}-[0-9]{3}$", p.id, "id"))
        if p.id in seen:
            issues.append(ValidationIssue(f"duplicate principle id: {p.id}", p.id, "id"))
        seen.add(p.id)
        if p.level not in LEVELS:
            issues.append(
                ValidationIssue(
                    f"level must be one of the RFC-2119 values MUST/SHOULD/MAY, got {p.level!r}",
                    p.id,
                    "level",
                )
            )
        if p.category not in seen_cat:
            issues.append(ValidationIssue(f"unknown category: {p.category}", p.id, "category"))
        for field_name in ("constraint", "pattern", "rationale"):
            if not str(getattr(p, field_name)).strip():
                issues.append(ValidationIssue(f"{field_name} required", p.id, field_name))
        if not all(isinstance(cwe, int) and cwe > 0 for cwe in p.cwe):
            issues.append(ValidationIssue("cwe entries must be positive integers", p.id, "cwe"))
        for tag in p.tags:
            if not TAG_RE.match(tag):
                issues.append(ValidationIssue(f"tag is not a lowercase token: {tag!r}", p.id, "tags"))
        for det in p.detectors:
            if det not in known_detectors:
                issues.append(ValidationIssue(f"unknown detector: {det}", p.id, "detectors"))

    previous: Amendment | None = None
    for amd in c.amendments:
        try:
            current = parse_version(amd.version)
        except SchemaError as exc:
            issues.append(ValidationIssue(str(exc), field="amendments"))
            continue
        if amd.change_kind not in ("major", "minor", "patch"):
            issues.append(
                ValidationIssue(f"amendment {amd.version} has bad change_kind {amd.change_kind!r}")
            )
        if not amd.approved_by:
            issues.append(ValidationIssue(f"amendment {amd.version} has empty approved_by"))
        if previous is not None:
            prev = parse_version(previous.version)
            if current <= prev:
                issues.append(
                    ValidationIssue(
                        f"amendment versions must strictly increase ({previous.version} -> {amd.version})"
                    )
                )
            elif _bump_kind(prev, current) != amd.change_kind:
                issues.append(
                    ValidationIssue(
                        f"amendment {amd.version} change_kind {amd.change_kind!r} is inconsistent "
                        f"with the delta from {previous.version}"
                    )
                )
        previous = amd
    return issues


# --- serialization ---------------------------------------------------------


def serialize_constitution(c: Constitution) -> str:
    """Emit the document form of a constitution; parse() of the result round-trips."""
    data = {
        "name": c.name,
        "version": c.version,
        "categories": [{"id": cat.id, "title": cat.title} for cat in c.categories],
        "principles": [
            {
                "id": p.id,
                "cwe": list(p.cwe),
                "level": p.level,
                "category": p.category,
                "title": p.title,
                "constraint": p.constraint,
                "pattern": p.pattern,
                "rationale": p.rationale,
                "tags": list(p.tags),
                "detectors": list(p.detectors),
            }
            for p in c.principles
        ],
        "amendments": [
            {
                "version": a.version,
                "date": a.date,
                "change_kind": a.change_kind,
                "summary": a.summary,
                "approved_by": list(a.approved_by),
            }
            for a in c.amendments
        ],
    }
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True)


def render_markdown(c: Constitution) -> str:
    """Human-readable rendering: one section per category, one subsection per
    principle. Markdown is output-only and never parsed back."""
    lines = [f"# {c.name}", "", f"Version {c.version}", ""]
    for cat in c.categories:
        lines.append(f"## {cat.title}")
        lines.append("")
        for p in c.principles:
            if p.category != cat.id:
                continue
            cwe = ", ".join(f"CWE-{n}" for n in p.cwe)
            lines.append(f"### {p.id}: {p.title}")
            lines.append("")
            lines.append(f"- Level: {p.level}")
            lines.append(f"- CWE: {cwe}")
            lines.append(f"- Constraint: {p.constraint}")
            lines.append(f"- Pattern: {p.pattern}")
            lines.append(f"- Rationale: {p.rationale}")
            if p.tags:
                lines.append(f"- Tags: {', '.join(p.tags)}")
            if p.detectors:
                lines.append(f"- Detectors: {', '.join(p.detectors)}")
            lines.append("")
    if c.amendments:
        lines.append("## Amendment history")
        lines.append("")
        for a in c.amendments:
            approvers = ", ".join(a.approved_by)
            lines.append(f"- {a.version} ({a.date.isoformat()}, {a.change_kind}): {a.summary} "
                         f"[approved by {approvers}]")
        lines.append("")
    return "\n".join(lines)


# --- diff and governance ---------------------------------------------------

_TEXT_FIELDS = ("title", "constraint", "pattern", "rationale", "tags", "cwe", "category", "detectors")


def _norm(value) -> object:
    """Whitespace-insensitive comparison form for text fields."""
    if isinstance(value, str):
        return " ".join(value.split())
    if isinstance(value, tuple):
        return tuple(_norm(v) for v in value)
    return value


def diff_constitutions(old: Constitution, new: Constitution) -> ChangeSet:
    """List added/removed principles, level changes, and changed fields per ID."""
    old_by_id = {p.id: p for p in old.principles}
    new_by_id = {p.id: p for p in new.principles}
    added = tuple(p.id for p in new.principles if p.id not in old_by_id)
    removed = tuple(p.id for p in old.principles if p.id not in new_by_id)
    level_changed = []
    field_changed = []
    for p in old.principles:
        other = new_by_id.get(p.id)
        if other is None:
            continue
        if p.level != other.level:
            level_changed.append((p.id, p.level, other.level))
        for field_name in _TEXT_FIELDS:
            if _norm(getattr(p, field_name)) != _norm(getattr(other, field_name)):
                field_changed.append((p.id, field_name))
    return ChangeSet(
        added=added,
        removed=removed,
        level_changed=tuple(level_changed),
        field_changed=tuple(field_changed),
    )


def _amendment_key(a: Amendment) -> tuple:
    return (a.version, a.date, a.change_kind, _norm(a.summary), _norm(a.approved_by))


def _document_metadata_changed(old: Constitution, new: Constitution) -> bool:
    return (
        _norm(old.name) != _norm(new.name)
        or old.version != new.version
        or tuple((c.id, _norm(c.title)) for c in old.categories)
        != tuple((c.id, _norm(c.title)) for c in new.categories)
        or tuple(_amendment_key(a) for a in old.amendments)
        != tuple(_amendment_key(a) for a in new.amendments)
    )


def required_bump(old: Constitution, new: Constitution) -> BumpRequirement:
    """Minimum version bump the edit demands. The strongest triggered rule wins.

    major: a principle was removed, a MUST was weakened, or a MUST's
           constraint text changed (any edit counts as weakening);
    minor: a principle was added, a level changed otherwise, or a non-MUST
           constraint changed;
    patch: only title/rationale/tags/pattern or document metadata changed;
    none:  the constitutions are semantically identical (whitespace ignored).
    """
    changes = diff_constitutions(old, new)
    old_by_id = {p.id: p for p in old.principles}
    reasons: list[tuple[str, str]] = []

    for pid in changes.removed:
        reasons.append(("major", f"{old_by_id[pid].level} principle removed: {pid}"))
    for pid, old_level, new_level in changes.level_changed:
        if old_level == "MUST":
            reasons.append(("major", f"MUST principle weakened: {pid} (MUST -> {new_level})"))
        else:
            reasons.append(("minor", f"level changed: {pid} ({old_level} -> {new_level})"))
    for pid in changes.added:
        reasons.append(("minor", f"principle added: {pid}"))
    for pid, field_name in changes.field_changed:
        if field_name == "constraint":
            if old_by_id[pid].level == "MUST":
                reasons.append(("major", f"MUST constraint text changed: {pid}"))
            else:
                reasons.append(("minor", f"constraint text changed: {pid}"))
        else:
            reasons.append(("patch", f"{field_name} changed: {pid}"))
    if _document_metadata_changed(old, new):
        reasons.append(("patch", "document metadata changed"))

    if not reasons:
        return BumpRequirement(required="none", reasons=())
    strongest = max(reasons, key=lambda r: _BUMP_RANK[r[0]])[0]
    return BumpRequirement(required=strongest, reasons=tuple(r[1] for r in reasons))


def _bump_kind(old: tuple[int, int, int], new: tuple[int, int, int]) -> str:
    if new == old:
        return "none"
    if new[0] > old[0]:
        return "major"
    if new[1] > old[1]:
        return "minor"
    return "patch"


def check_amendment(old: Constitution, new: Constitution) -> None:
    """Enforce the amendment workflow between two constitution revisions.

    Raises InsufficientBump when the actual version delta is weaker than
    required_bump demands, MissingAmendmentRecord when the new version has no
    amendment entry, and UnapprovedAmendment when that entry has no approvers.
    Returns None when the amendment is in order.
    """
    requirement = required_bump(old, new)
    old_v = parse_version(old.version)
    new_v = parse_version(new.version)
    if new_v < old_v:
        raise InsufficientBump(requirement.required, "version decreased", list(requirement.reasons))
    actual = _bump_kind(old_v, new_v)
    if _BUMP_RANK[actual] < _BUMP_RANK[requirement.required]:
        raise InsufficientBump(requirement.required, actual, list(requirement.reasons))
    if actual == "none":
        return
    record = next((a for a in new.amendments if a.version == new.version), None)
    if record is None:
        raise MissingAmendmentRecord(new.version)
    if not record.approved_by:
        raise UnapprovedAmendment(new.version)


def with_amendment(
    c: Constitution,
    version: str,
    change_kind: str,
    summary: str,
    approved_by: list[str],
    date: _dt.date | None = None,
) -> Constitution:
    """Convenience constructor for an amended revision (used heavily in tests)."""
    record = Amendment(
        version=version,
        date=date or _dt.date(2026, 1, 1),
        change_kind=change_kind,
        summary=summary,
        approved_by=tuple(approved_by),
    )
    return replace(c, version=version, amendments=c.amendments + (record,))
