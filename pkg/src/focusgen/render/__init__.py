"""Document emission: operator catalog, templates, emitters, source checker."""

from .catalog import CATALOG, OperatorCatalogEntry, entry, operators_markdown
from .checker import check_spec_source
from .emit import (
    Document,
    LATEX,
    TEXT,
    emit_component_document,
    emit_latex,
    emit_plaintext,
    read_checksum,
    skeleton,
)
from .template import (
    MissingTemplate,
    PlaceholderUnfilled,
    TEMPLATE_IDS,
    TEMPLATES_ENV,
    Template,
    expand_template,
    load_template,
)

__all__ = [
    "CATALOG",
    "Document",
    "LATEX",
    "MissingTemplate",
    "OperatorCatalogEntry",
    "PlaceholderUnfilled",
    "TEMPLATES_ENV",
    "TEMPLATE_IDS",
    "TEXT",
    "Template",
    "check_spec_source",
    "emit_component_document",
    "emit_latex",
    "emit_plaintext",
    "entry",
    "expand_template",
    "load_template",
    "operators_markdown",
    "read_checksum",
    "skeleton",
]
