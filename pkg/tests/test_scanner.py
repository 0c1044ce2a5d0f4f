from pathlib import Path

from conlaw.scanner import (
    Diagnostic,
    extract_annotations,
    glob_to_regex,
    load_corpus,
    make_source_file,
)


def _write(root: Path, rel: str, text: str) -> None:
    path = root / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def test_load_corpus_sorted_by_path(tmp_path):
    _write(tmp_path, "b/two.py", "x = 2\n")
    _write(tmp_path, "a/one.py", "x = 1\n")
    _write(tmp_path, "zed.py", "x = 3\n")
    corpus = load_corpus(tmp_path, ["**/*.py"])
    assert [f.path for f in corpus.files] == ["a/one.py", "b/two.py", "zed.py"]


def test_load_corpus_empty_directory(tmp_path):
    corpus = load_corpus(tmp_path)
    assert corpus.files == ()


def test_load_corpus_skips_binary_with_warning(tmp_path):
    _write(tmp_path, "ok.py", "x = 1\n")
    (tmp_path / "blob.py").write_bytes(b"\x00\x01\x02")
    diags: list[Diagnostic] = []
    corpus = load_corpus(tmp_path, diagnostics=diags)
    assert [f.path for f in corpus.files] == ["ok.py"]
    assert len(diags) == 1
    assert diags[0].severity == "warning"
    assert diags[0].file == "blob.py"


def test_load_corpus_include_exclude(tmp_path):
    _write(tmp_path, "src/app.py", "x = 1\n")
    _write(tmp_path, "src/app.txt", "nope\n")
    _write(tmp_path, "vendor/lib.py", "x = 2\n")
    corpus = load_corpus(tmp_path, ["**/*.py"], ["vendor/**"])
    assert [f.path for f in corpus.files] == ["src/app.py"]


def test_load_corpus_deterministic(tmp_path):
    _write(tmp_path, "a.py", "x = 1\n")
    _write(tmp_path, "b/c.py", "y = 2\n")
    assert load_corpus(tmp_path) == load_corpus(tmp_path)


def test_language_hint_from_extension(tmp_path):
    _write(tmp_path, "a.py", "x = 1\n")
    _write(tmp_path, "b.sql", "select 1;\n")
    corpus = load_corpus(tmp_path)
    hints = {f.path: f.language_hint for f in corpus.files}
    assert hints == {"a.py": "python-like", "b.sql": "generic"}


def test_glob_star_does_not_cross_directories():
    assert glob_to_regex("*.py").match("a.py")
    assert not glob_to_regex("*.py").match("d/a.py")
    assert glob_to_regex("**/*.py").match("d/e/a.py")
    assert glob_to_regex("**/*.py").match("a.py")


def test_annotation_span_matches_contiguous_block():
    body = (
        ["# header"]
        + [""] * 12
        + ["# [SEC-009] Bcrypt, cost=12"]  # line 14
        + [f"line_{i} = {i}" for i in range(10)]  # lines 15-24
        + [""]
        + ["tail = 1"]
    )
    f = make_source_file("core/security.py", "\n".join(body) + "\n")
    anns = extract_annotations(f)
    assert len(anns) == 1
    ann = anns[0]
    assert (ann.principle_id, ann.line_start, ann.line_end) == ("SEC-009", 14, 24)
    assert ann.technique == "Bcrypt, cost=12"


def test_annotation_terminated_by_eof():
    f = make_source_file("a.py", "# [AB-001] tail\ncode = 1\n")
    anns = extract_annotations(f)
    assert anns[0].line_start == 1
    assert anns[0].line_end == 2


def test_annotation_alone_spans_single_line():
    f = make_source_file("a.py", "# [AB-001] note\n\ncode = 1\n")
    anns = extract_annotations(f)
    assert (anns[0].line_start, anns[0].line_end) == (1, 1)


def test_comment_leaders_slash_and_dash():
    f = make_source_file("a.sql", "-- [AB-002] index\ncreate index i on t(x);\n")
    assert extract_annotations(f)[0].principle_id == "AB-002"
    g = make_source_file("a.ts", "// [AB-003] guard\nexport const x = 1;\n")
    assert extract_annotations(g)[0].principle_id == "AB-003"


def test_file_without_comments_yields_nothing():
    f = make_source_file("a.py", "x = 1\ny = 2\n")
    assert extract_annotations(f) == []


def test_lowercase_id_is_malformed_diagnostic():
    f = make_source_file("a.py", "# [sec-009] nope\nx = 1\n")
    diags: list[Diagnostic] = []
    assert extract_annotations(f, diags) == []
    assert len(diags) == 1
    assert "sec-009" in diags[0].message
    assert diags[0].line == 1


def test_non_id_brackets_ignored_silently():
    f = make_source_file("a.py", "# [TODO] fix later\nx = 1\n")
    diags: list[Diagnostic] = []
    assert extract_annotations(f, diags) == []
    assert diags == []


def test_trailing_comment_is_not_an_annotation():
    f = make_source_file("a.py", "x = 1  # [AB-001] inline\n")
    assert extract_annotations(f) == []


def test_annotations_sorted_by_line():
    text = "# [AB-002] second block\na = 1\n\n# [AB-001] first id, later line\nb = 2\n"
    f = make_source_file("a.py", text)
    anns = extract_annotations(f)
    assert [a.line_start for a in anns] == [1, 4]


def test_span_length_against_hand_count():
    # synthetic file: marker + N non-blank lines, hand-counted span = N + 1
    for n in (0, 1, 5, 9):
        body = ["# [AB-001] block"] + ["x = 1"] * n + ["", "y = 2"]
        f = make_source_file("a.py", "\n".join(body) + "\n")
        ann = extract_annotations(f)[0]
        assert ann.line_end - ann.line_start + 1 == n + 1
