import dataclasses
import sys
from pathlib import Path

import pytest

from conlaw.detectors import (
    UnknownDetectorId,
    list_detectors,
    run_detectors,
    run_single,
)
from conlaw.scanner import Corpus, load_corpus, make_source_file

sys.path.insert(0, str(Path(__file__).resolve().parent))
from bruteforce_oracle import scan_file as oracle_scan_file  # noqa: E402

from conftest import FIXTURES  # noqa: E402

VIOLATIONS = FIXTURES / "violations"


def _fixture_file(name: str):
    path = VIOLATIONS / name
    return make_source_file(name, path.read_text(encoding="utf-8"))


def test_registry_has_eleven_detectors_sorted():
    detectors = list_detectors()
    assert len(detectors) == 11
    assert [d.id for d in detectors] == sorted(d.id for d in detectors)
    assert detectors[0].id == "D-020"


def test_detector_principles_exist_in_default_constitution(banking):
    ids = set(banking.principle_ids())
    for d in list_detectors():
        assert d.principle_id in ids


def test_detector_id_number_is_primary_cwe():
    for d in list_detectors():
        assert d.id == f"D-{d.cwe:03d}"
    assert next(d for d in list_detectors() if d.id == "D-089").cwe == 89


def test_unknown_detector_raises():
    f = make_source_file("a.py", "x = 1\n")
    with pytest.raises(UnknownDetectorId):
        run_single("D-999", f)


# --- rejected/accepted listing fidelity ---------------------------------------


def test_sql_injection_rejected_flags_fstring_line(banking):
    f = _fixture_file("violation1_rejected.py")
    report = run_detectors(banking, Corpus(root=".", files=(f,)))
    assert len(report.findings) == 1
    finding = report.findings[0]
    assert finding.detector_id == "D-089"
    assert finding.principle_id == "SEC-002"
    assert finding.line_start == 2
    assert "SELECT" in finding.excerpt


def test_sql_injection_accepted_is_clean(banking):
    f = _fixture_file("violation1_accepted.py")
    report = run_detectors(banking, Corpus(root=".", files=(f,)))
    assert report.findings == ()


def test_password_logging_rejected_flags_key_line(banking):
    f = _fixture_file("violation2_rejected.py")
    findings = run_single("D-532", f)
    assert len(findings) == 1
    assert findings[0].principle_id == "SEC-015"
    assert '"password"' in findings[0].excerpt


def test_password_logging_accepted_is_clean(banking):
    f = _fixture_file("violation2_accepted.py")
    assert run_single("D-532", f) == []


def test_missing_authorization_rejected(banking):
    f = _fixture_file("violation3_rejected.py")
    findings = run_single("D-862", f)
    assert len(findings) == 1
    assert findings[0].principle_id == "SEC-010"
    assert "get_account" in findings[0].excerpt


def test_ownership_check_suppresses_authorization_finding(banking):
    f = _fixture_file("violation3_accepted.py")
    assert run_single("D-862", f) == []


def test_unvalidated_fields_rejected(banking):
    f = _fixture_file("violation4_rejected.py")
    bare = run_single("D-020", f)
    assert [x.line_start for x in bare] == [3, 4, 5]
    money = run_single("D-190", f)
    assert len(money) == 1
    assert money[0].excerpt.startswith("amount: float")


def test_validated_fields_accepted(banking):
    f = _fixture_file("violation4_accepted.py")
    assert run_single("D-020", f) == []
    assert run_single("D-190", f) == []


# --- trigger edges --------------------------------------------------------------


def test_sql_concat_and_format_variants(banking):
    variants = [
        'q = "SELECT * FROM t WHERE id = " + user_id\n',
        'q = "SELECT * FROM t WHERE id = {}".format(user_id)\n',
        'q = "SELECT * FROM t WHERE id = %s" % user_id\n',
        'cur.execute("DELETE FROM t WHERE id = ?", (user_id,))\n',
    ]
    for text in variants:
        f = make_source_file("a.py", text)
        assert len(run_single("D-089", f)) == 1, text


def test_sql_keyword_without_interpolation_is_clean(banking):
    f = make_source_file("a.py", 'docs = "select the account from the list"\n')
    assert run_single("D-089", f) == []


def test_exec_call_inside_literal_does_not_taint_later_strings(banking):
    f = make_source_file("a.py", 'hint = "wrap with text( first"; docs = "select a row"\n')
    assert run_single("D-089", f) == []


def test_hardcoded_secret_variants(banking):
    flagged = [
        'SECRET_KEY = "abc123"\n',
        'api_key: str = "sk-xyz"\n',
        'settings.private_key = "pem"\n',
    ]
    clean = [
        'SECRET_KEY = os.environ["SECRET_KEY"]\n',
        'token = fetch_token()\n',
        'password = ""\n',
        'timeout = "30s"\n',
    ]
    for text in flagged:
        assert len(run_single("D-798", make_source_file("a.py", text))) == 1, text
    for text in clean:
        assert run_single("D-798", make_source_file("a.py", text)) == [], text


def test_token_expiry_boundaries(banking):
    assert run_single("D-613", make_source_file("a.py", "ACCESS_TOKEN_EXPIRE_MINUTES = 15\n")) == []
    assert len(run_single("D-613", make_source_file("a.py", "ACCESS_TOKEN_EXPIRE_MINUTES = 16\n"))) == 1
    assert run_single("D-613", make_source_file("a.py", "REFRESH_TOKEN_EXPIRE_DAYS = 7\n")) == []
    assert len(run_single("D-613", make_source_file("a.py", "refresh_token_expire_days = 30\n"))) == 1
    # computed values are never flagged
    assert run_single("D-613", make_source_file("a.py", "ACCESS_TOKEN_EXPIRE_MINUTES = base * 4\n")) == []


def test_bcrypt_cost_boundaries(banking):
    assert len(run_single("D-522", make_source_file("a.py", "bcrypt.gensalt(rounds=4)\n"))) == 1
    assert run_single("D-522", make_source_file("a.py", "bcrypt.gensalt(rounds=12)\n")) == []
    assert run_single("D-522", make_source_file("a.py", "scrypt(cost=4)\n")) == []  # no bcrypt mention


def test_cors_wildcard_multiline(banking):
    text = "app.add_middleware(\n    CORSMiddleware,\n    allow_origins=[\n        \"*\",\n    ],\n)\n"
    findings = run_single("D-352", make_source_file("a.py", text))
    assert len(findings) == 1
    text_ok = 'app.add_middleware(CORSMiddleware, allow_origins=["https://a.example"])\n'
    assert run_single("D-352", make_source_file("a.py", text_ok)) == []


def test_error_exposure_requires_handler_context(banking):
    handler = (
        "@app.exception_handler(Exception)\n"
        "async def boom(request, e):\n"
        '    return JSONResponse(status_code=500, content={"e": str(e)})\n'
    )
    assert len(run_single("D-200", make_source_file("a.py", handler))) == 1
    plain = "def helper(e):\n    return str(e)\n"
    assert run_single("D-200", make_source_file("a.py", plain)) == []


def test_cleartext_url_hosts(banking):
    assert len(run_single("D-319", make_source_file("a.py", 'URL = "http://api.example.com/v1"\n'))) == 1
    assert run_single("D-319", make_source_file("a.py", 'URL = "http://localhost:8000"\n')) == []
    assert run_single("D-319", make_source_file("a.py", 'URL = "http://127.0.0.1/health"\n')) == []
    assert run_single("D-319", make_source_file("a.py", 'URL = "https://api.example.com"\n')) == []


def test_sensitive_key_in_comment_not_flagged(banking):
    text = "audit = AuditLog(\n    details={\"email\": e},\n    # password explicitly excluded\n)\n"
    assert run_single("D-532", make_source_file("a.py", text)) == []


def test_log_call_inside_string_literal_opens_no_region(banking):
    text = 'msg = "use log(x) for output"\nother = {"password": value}\n'
    assert run_single("D-532", make_source_file("a.py", text)) == []


def test_python_scoped_detectors_skip_generic_files(banking):
    text = "class TransferRequest:\n    amount: float\n"
    py = make_source_file("a.py", text)
    generic = make_source_file("a.txt", text)
    report_py = run_detectors(banking, Corpus(root=".", files=(py,)))
    report_generic = run_detectors(banking, Corpus(root=".", files=(generic,)))
    assert {f.detector_id for f in report_py.findings} == {"D-020", "D-190"}
    assert report_generic.findings == ()


# --- report shape -----------------------------------------------------------------


def test_empty_corpus_scan(banking):
    report = run_detectors(banking, Corpus(root=".", files=()))
    assert report.files_scanned == 0
    assert report.findings == ()
    assert report.counts == {"error": 0, "warning": 0, "info": 0}


def test_findings_sorted_and_counts_match(banking):
    corpus = load_corpus(FIXTURES / "unconstrained")
    report = run_detectors(banking, corpus)
    keys = [(f.file, f.line_start, f.detector_id) for f in report.findings]
    assert keys == sorted(keys)
    assert report.counts["error"] == len(report.findings)
    assert report.constitution_version == banking.version


def test_severity_follows_level(banking):
    weakened = dataclasses.replace(
        banking,
        principles=tuple(
            dataclasses.replace(p, level="SHOULD") if p.id == "SEC-005" else p
            for p in banking.principles
        ),
    )
    f = make_source_file("a.py", 'SECRET_KEY = "abc123"\n')
    report = run_detectors(weakened, Corpus(root=".", files=(f,)))
    assert [x.severity for x in report.findings] == ["warning"]
    assert report.counts == {"error": 0, "warning": 1, "info": 0}


def test_detector_skipped_when_principle_missing(banking):
    trimmed = dataclasses.replace(
        banking, principles=tuple(p for p in banking.principles if p.id != "SEC-005")
    )
    diags = []
    f = make_source_file("a.py", 'SECRET_KEY = "abc123"\n')
    report = run_detectors(trimmed, Corpus(root=".", files=(f,)), diagnostics=diags)
    assert report.findings == ()
    assert any("D-798" in d.message for d in diags)


def test_disabling_one_detector_leaves_others_alone(banking):
    corpus = load_corpus(FIXTURES / "unconstrained")
    full = run_detectors(banking, corpus)
    every_id = [d.id for d in list_detectors()]
    for dropped in every_id:
        remaining = [i for i in every_id if i != dropped]
        partial = run_detectors(banking, corpus, enabled=remaining)
        expected = tuple(f for f in full.findings if f.detector_id != dropped)
        assert partial.findings == expected, dropped


def test_enabled_filter_rejects_unknown_id(banking):
    with pytest.raises(UnknownDetectorId):
        run_detectors(banking, Corpus(root=".", files=()), enabled=["D-001"])


def test_count_consistency_under_duplication(banking, tmp_path):
    source = (VIOLATIONS / "violation1_rejected.py").read_text(encoding="utf-8")
    for k in (1, 3, 7):
        root = tmp_path / f"copies_{k}"
        root.mkdir()
        for i in range(k):
            (root / f"copy_{i:02d}.py").write_text(source, encoding="utf-8")
        report = run_detectors(banking, load_corpus(root))
        assert len(report.findings) == k
        oracle_hits = oracle_scan_file(source.split("\n")) * k
        assert len(report.findings) == len(oracle_hits)


def test_excerpt_truncated_to_limit(banking):
    long_line = 'SECRET_KEY = "' + "x" * 400 + '"\n'
    finding = run_single("D-798", make_source_file("a.py", long_line))[0]
    assert len(finding.excerpt) == 201
    assert finding.excerpt.endswith("…")
