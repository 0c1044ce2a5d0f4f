"""conlaw: constitution-driven security compliance engine."""

__version__ = "0.1.0"

from conlaw.constitution import (  # noqa: F401
    Constitution,
    Principle,
    check_amendment,
    diff_constitutions,
    load_constitution,
    load_default_constitution,
    parse_constitution,
    required_bump,
    serialize_constitution,
    validate_constitution,
)
from conlaw.detectors import Finding, ScanReport, list_detectors, run_detectors, run_single  # noqa: F401
from conlaw.scanner import Annotation, Corpus, SourceFile, extract_annotations, load_corpus  # noqa: F401
from conlaw.selector import Selection, score_principle, select  # noqa: F401
from conlaw.traceability import ComplianceMatrix, build_matrix, detect_gaps, verify_refs  # noqa: F401
