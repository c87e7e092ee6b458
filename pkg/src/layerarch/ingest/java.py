"""Package-level dependency extraction from a tree of Java sources.

Detection is lexical: comments and string/char literals are blanked, then
``package``/``import`` declarations and fully-qualified names in the code
are matched against the set of packages declared inside the tree.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

from .formats import GraphDocument, NodeDecl

log = logging.getLogger(__name__)

_PACKAGE = re.compile(r"\bpackage\s+([A-Za-z_$][\w$]*(?:\s*\.\s*[A-Za-z_$][\w$]*)*)\s*;")
_IMPORT = re.compile(
    r"\bimport\s+(static\s+)?([A-Za-z_$][\w$]*(?:\s*\.\s*[A-Za-z_$][\w$]*)*)(\s*\.\s*\*)?\s*;"
)
_QUALIFIED = re.compile(r"(?<![\w$.])[A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)+")


@dataclass
class ExtractionResult:
    document: GraphDocument
    external_imports: int = 0
    skipped_files: list[str] = field(default_factory=list)
    files_scanned: int = 0


@dataclass
class _Source:
    path: str
    package: str
    code: str
    imports: list[tuple[str, bool]]


def strip_comments_and_literals(text: str) -> str:
    """Blank out comments, string/char literals and text blocks.

    Newlines are preserved so offsets keep their line numbers.
    """
    out: list[str] = []
    i, n = 0, len(text)

    def blank(chunk: str) -> str:
        return "".join("\n" if c == "\n" else " " for c in chunk)

    while i < n:
        c = text[i]
        two = text[i : i + 2]
        if two == "//":
            j = text.find("\n", i)
            j = n if j == -1 else j
            out.append(blank(text[i:j]))
            i = j
        elif two == "/*":
            j = text.find("*/", i + 2)
            j = n if j == -1 else j + 2
            out.append(blank(text[i:j]))
            i = j
        elif text.startswith('"""', i):
            j = text.find('"""', i + 3)
            while j != -1 and text[j - 1] == "\\":
                j = text.find('"""', j + 1)
            j = n if j == -1 else j + 3
            out.append(blank(text[i:j]))
            i = j
        elif c in ('"', "'"):
            j = i + 1
            while j < n and text[j] != c and text[j] != "\n":
                j += 2 if text[j] == "\\" else 1
            j = min(j + 1, n)
            out.append(blank(text[i:j]))
            i = j
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _squash(name: str) -> str:
    return re.sub(r"\s+", "", name)


def _read_source(path: Path, root: Path) -> _Source | None:
    text = path.read_text(encoding="utf-8")
    code = strip_comments_and_literals(text)
    m = _PACKAGE.search(code)
    package = _squash(m.group(1)) if m else ""
    imports = [(_squash(im.group(2)), bool(im.group(3))) for im in _IMPORT.finditer(code)]
    # drop declarations so their names are not re-counted as references
    body = _IMPORT.sub(lambda mm: " " * len(mm.group()), code)
    body = _PACKAGE.sub(lambda mm: " " * len(mm.group()), body)
    return _Source(path.relative_to(root).as_posix(), package, body, imports)


def _owner(name: str, packages: set[str], *, proper: bool) -> str | None:
    """Longest declared package that prefixes ``name`` (by whole segments)."""
    parts = name.split(".")
    stop = len(parts) - 1 if proper else len(parts)
    for k in range(stop, 0, -1):
        candidate = ".".join(parts[:k])
        if candidate in packages:
            return candidate
    return None


def extract_java_package_deps(source_root: str | Path, *, dedupe: bool = False) -> ExtractionResult:
    """One node per declared package, one edge per distinct referenced
    entity (imported type, wildcard package, or fully-qualified type name)
    per file.  With ``dedupe`` parallel package edges collapse.
    """
    root = Path(source_root)
    if not root.is_dir():
        raise NotADirectoryError(f"{root} is not a directory")
    result = ExtractionResult(GraphDocument())
    sources: list[_Source] = []
    for path in sorted(root.rglob("*.java"), key=lambda p: p.relative_to(root).as_posix()):
        rel = path.relative_to(root).as_posix()
        try:
            src = _read_source(path, root)
        except (OSError, UnicodeDecodeError) as exc:
            log.warning("skipping %s: %s", rel, exc)
            result.skipped_files.append(rel)
            continue
        result.files_scanned += 1
        if not src.package:
            log.info("%s is in the default package; ignored", rel)
            continue
        sources.append(src)

    packages = sorted({s.package for s in sources})
    declared = set(packages)
    if not packages:
        log.warning("no Java packages found under %s", root)

    edges: list[tuple[str, str]] = []
    seen_pairs: set[tuple[str, str]] = set()
    for src in sources:
        targets: dict[str, str] = {}
        for name, wildcard in src.imports:
            if wildcard:
                pkg = name if name in declared else _owner(name, declared, proper=True)
                key = name + ".*"
            else:
                pkg = _owner(name, declared, proper=True)
                key = name if pkg is None else ".".join(name.split(".")[: len(pkg.split(".")) + 1])
            if pkg is None:
                result.external_imports += 1
                continue
            targets.setdefault(key, pkg)
        for m in _QUALIFIED.finditer(src.code):
            name = m.group()
            pkg = _owner(name, declared, proper=True)
            if pkg is None:
                continue
            key = ".".join(name.split(".")[: len(pkg.split(".")) + 1])
            targets.setdefault(key, pkg)
        for pkg in targets.values():
            if pkg == src.package:
                continue
            pair = (src.package, pkg)
            if dedupe and pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            edges.append(pair)

    result.document = GraphDocument([NodeDecl(p) for p in packages], edges)
    return result
