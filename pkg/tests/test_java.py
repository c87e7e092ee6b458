import logging
import os
from pathlib import Path

import pytest

from layerarch.ingest import extract_java_package_deps, strip_comments_and_literals

FIXTURE = Path(__file__).parent / "fixtures" / "java_project"


def write(root: Path, rel: str, text: str) -> None:
    path = root / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def test_single_import(tmp_path):
    write(tmp_path, "a/b/X.java", "package a.b;\nimport a.c.Y;\nclass X {}\n")
    write(tmp_path, "a/c/Y.java", "package a.c;\nclass Y {}\n")
    doc = extract_java_package_deps(tmp_path).document
    assert doc.node_ids == ["a.b", "a.c"]
    assert doc.edges == [("a.b", "a.c")]


def test_external_import_dropped(tmp_path):
    write(tmp_path, "p/X.java", "package p;\nimport java.util.List;\nclass X {}\n")
    result = extract_java_package_deps(tmp_path)
    assert result.document.edges == []
    assert result.external_imports == 1


def test_fixture_hand_counted():
    result = extract_java_package_deps(FIXTURE)
    doc = result.document
    assert doc.node_ids == ["app.data", "app.service", "app.ui"]
    assert doc.edges == [
        ("app.service", "app.data"),  # OrderService: fully-qualified app.data.Order
        ("app.service", "app.data"),  # UserService: import app.data.Repo
        ("app.ui", "app.data"),  # Dialog: import app.data.Repo
        ("app.ui", "app.service"),  # MainView: import UserService
        ("app.ui", "app.service"),  # MainView: import OrderService
    ]
    assert result.external_imports == 5
    assert result.files_scanned == 6


def test_fixture_deduped():
    doc = extract_java_package_deps(FIXTURE, dedupe=True).document
    assert doc.edges == [("app.service", "app.data"), ("app.ui", "app.data"), ("app.ui", "app.service")]


def test_wildcard_and_static(tmp_path):
    write(tmp_path, "a/X.java", "package a;\nimport b.*;\nimport static c.Util.helper;\nclass X {}\n")
    write(tmp_path, "b/Y.java", "package b;\nclass Y {}\n")
    write(tmp_path, "c/Util.java", "package c;\nclass Util {}\n")
    assert extract_java_package_deps(tmp_path).document.edges == [("a", "b"), ("a", "c")]


def test_nested_package_prefers_longest(tmp_path):
    write(tmp_path, "a/X.java", "package a;\nimport a.b.Y;\nclass X { a.b.Y y; }\n")
    write(tmp_path, "a/b/Y.java", "package a.b;\nclass Y {}\n")
    assert extract_java_package_deps(tmp_path).document.edges == [("a", "a.b")]


def test_self_edges_dropped(tmp_path):
    write(tmp_path, "a/X.java", "package a;\nimport a.Y;\nclass X {}\n")
    write(tmp_path, "a/Y.java", "package a;\nclass Y {}\n")
    assert extract_java_package_deps(tmp_path).document.edges == []


def test_comments_and_strings_ignored():
    code = 'int x; // app.data.Y\n/* app.ui.Z */ String s = "app.q.W"; char c = \'"\';\nString t = """\napp.r.V\n""";'
    stripped = strip_comments_and_literals(code)
    assert "app." not in stripped
    assert stripped.count("\n") == code.count("\n")


def test_deterministic_regardless_of_creation_order(tmp_path):
    a, b = tmp_path / "one", tmp_path / "two"
    files = [
        ("p/A.java", "package p;\nimport q.B;\nimport r.C;\nclass A {}\n"),
        ("q/B.java", "package q;\nimport r.C;\nclass B {}\n"),
        ("r/C.java", "package r;\nclass C { p.A a; }\n"),
    ]
    for rel, text in files:
        write(a, rel, text)
    for rel, text in reversed(files):
        write(b, rel, text)
    assert extract_java_package_deps(a).document == extract_java_package_deps(b).document


def test_unreadable_files_skipped(tmp_path, caplog):
    write(tmp_path, "p/A.java", "package p;\nclass A {}\n")
    (tmp_path / "p" / "Bad.java").write_bytes(b"package p;\n\xff\xfe class Bad {}")
    (tmp_path / "p" / "Dir.java").mkdir()
    with caplog.at_level(logging.WARNING):
        result = extract_java_package_deps(tmp_path)
    assert sorted(result.skipped_files) == ["p/Bad.java", "p/Dir.java"]
    assert result.document.node_ids == ["p"]


def test_empty_tree_warns(tmp_path, caplog):
    with caplog.at_level(logging.WARNING):
        result = extract_java_package_deps(tmp_path)
    assert result.document.nodes == [] and result.document.edges == []
    assert "no Java packages" in caplog.text


def test_not_a_directory(tmp_path):
    with pytest.raises(NotADirectoryError):
        extract_java_package_deps(tmp_path / "missing")
