"""Lint for plain-text specification sources.

A light syntactic pass over hand-written or generated .spec.txt files:
frame delimiters balance, only catalog operators appear, formula
enumerations stay contiguous, and every time-indexed stream access names
a declared channel. No semantic typing happens here.
"""

from __future__ import annotations

import re

from ..diagnostics import Diagnostic, SourceSpan, error, warning

_DECL = re.compile(r"^\s*(in|out|loc|var)\s+([A-Za-z_]\w*)\s*:")
_ST_DECL = re.compile(r"^\s*st\s*:")
_OPENER = re.compile(r"^\s*(spec|table)\s+([A-Za-z_]\w*)\s*$")
_NUMBERED = re.compile(r"^\s*\((\d+)\)")
_STREAM_USE = re.compile(r"([A-Za-z_]\w*)\s*\(\s*(t\s*\+\s*1|t|0)\s*\)")
_SECTION = re.compile(r"^\s*(init|asm|gar)\s*$")

# Characters allowed outside words and whitespace; both plain-text operator
# flavors plus frame/table punctuation.
_ALLOWED = set("∧∨¬→≠≤ε—()*{}[]|:;,.'=<>+-/\\~!")


def check_spec_source(text: str, file: str = "<spec>") -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    frame: str | None = None  # "spec" or "table" while inside a frame
    frame_line = 0
    declared: set[str] = set()
    section: str | None = None
    expected_index = 1
    table_columns: int | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].rstrip("\n")
        if not line.strip():
            continue

        for col, ch in enumerate(line, start=1):
            if ch.isalnum() or ch == "_" or ch.isspace() or ch in _ALLOWED:
                continue
            diagnostics.append(
                error(SourceSpan(file, lineno, col, 1), "unknown-operator", f"operator {ch!r} is not in the catalog")
            )

        opener = _OPENER.match(line)
        if opener:
            if frame is not None:
                diagnostics.append(
                    error(SourceSpan(file, lineno, 1), "unbalanced-frame", f"'{opener.group(1)}' opened inside a frame")
                )
            frame = opener.group(1)
            frame_line = lineno
            declared = set()
            section = None
            expected_index = 1
            table_columns = None
            continue
        if line.strip() == "end":
            if frame is None:
                diagnostics.append(error(SourceSpan(file, lineno, 1), "unbalanced-frame", "'end' without an open frame"))
            frame = None
            section = None
            continue
        if frame is None:
            continue  # prose, type declarations and comments between frames

        decl = _DECL.match(line)
        if decl:
            declared.add(decl.group(2))
            continue
        if _ST_DECL.match(line):
            declared.add("st")
            continue
        sect = _SECTION.match(line)
        if sect:
            section = sect.group(1)
            expected_index = 1
            continue

        if frame == "table":
            if "|" in line:
                cells = [c for c in line.split("|")]
                if set(line.strip()) <= {"-", "+", " "}:
                    continue  # ruler line
                if table_columns is None:
                    table_columns = len(cells)
                elif len(cells) != table_columns:
                    diagnostics.append(
                        warning(SourceSpan(file, lineno, 1), "ragged-table", f"row has {len(cells)} cells, header has {table_columns}")
                    )
            continue

        numbered = _NUMBERED.match(line)
        if numbered and section in ("asm", "gar"):
            index = int(numbered.group(1))
            if index != expected_index:
                diagnostics.append(
                    warning(
                        SourceSpan(file, lineno, 1),
                        "non-contiguous-enumeration",
                        f"{section} formula ({index}) where ({expected_index}) was expected",
                    )
                )
                expected_index = index + 1
            else:
                expected_index += 1

        for use in _STREAM_USE.finditer(line):
            name = use.group(1)
            if name not in declared:
                diagnostics.append(
                    error(
                        SourceSpan(file, lineno, use.start(1) + 1, len(name)),
                        "undeclared-stream",
                        f"stream '{name}' is used before any declaration in this frame",
                    )
                )

    if frame is not None:
        diagnostics.append(
            error(SourceSpan(file, frame_line, 1), "unbalanced-frame", f"frame opened here is never closed")
        )
    return diagnostics
