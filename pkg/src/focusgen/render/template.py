"""Placeholder templates for document skeletons.

Templates are plain text with ``{{name}}`` placeholders, shipped as
package data and overridable through the FOCUSGEN_TEMPLATES directory.
Expansion is line-oriented: a line holding nothing but one placeholder
disappears when its substitution is empty, so optional sections leave no
blank rows behind.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from importlib import resources

TEMPLATES_ENV = "FOCUSGEN_TEMPLATES"

_PLACEHOLDER = re.compile(r"\{\{(\w+)\}\}")

# Placeholders that must be substituted with non-empty text, per template id.
REQUIRED: dict[str, tuple[str, ...]] = {
    "component-frame": ("name", "interface", "asm_block", "gar_block"),
    "function-frame": ("name", "interface", "asm_block", "gar_block"),
    "composite-frame": ("name", "interface", "wiring"),
    "timed-table": ("name", "rows"),
    "datatype-decl": ("name", "literals"),
}

TEMPLATE_IDS = tuple(REQUIRED)


class MissingTemplate(Exception):
    def __init__(self, template_id: str):
        super().__init__(f"no template '{template_id}'")
        self.template_id = template_id


class PlaceholderUnfilled(Exception):
    def __init__(self, template_id: str, name: str):
        super().__init__(f"template '{template_id}': placeholder '{name}' not filled")
        self.template_id = template_id
        self.name = name


@dataclass(frozen=True)
class Template:
    id: str
    body: str
    required: tuple[str, ...]

    def placeholders(self) -> set[str]:
        return set(_PLACEHOLDER.findall(self.body))


def load_template(template_id: str, kind: str) -> Template:
    """Load a template by id and format kind ('txt' or 'tex')."""
    if template_id not in REQUIRED:
        raise MissingTemplate(template_id)
    filename = f"{template_id}.{kind}.tmpl"
    override_dir = os.environ.get(TEMPLATES_ENV)
    if override_dir:
        path = os.path.join(override_dir, filename)
        if os.path.isfile(path):
            with open(path, encoding="utf-8") as fh:
                return Template(template_id, fh.read(), REQUIRED[template_id])
    ref = resources.files("focusgen.render").joinpath("data", "templates", filename)
    if not ref.is_file():
        raise MissingTemplate(template_id)
    return Template(template_id, ref.read_text(encoding="utf-8"), REQUIRED[template_id])


def expand_template(template: Template, substitution: dict[str, str]) -> str:
    """Fill a template; unknown placeholders raise, optional ones vanish."""
    for name in template.required:
        if not substitution.get(name):
            raise PlaceholderUnfilled(template.id, name)
    out_lines: list[str] = []
    for line in template.body.split("\n"):
        match = _PLACEHOLDER.fullmatch(line.strip())
        if match:
            value = substitution.get(match.group(1), "")
            if value == "":
                continue  # optional block: the line disappears
            out_lines.extend(value.split("\n"))
            continue
        def fill(m: re.Match) -> str:
            return substitution.get(m.group(1), "")
        out_lines.append(_PLACEHOLDER.sub(fill, line))
    return "\n".join(out_lines)
