"""Request and response models for the generation service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from ..diagnostics import Diagnostic

Syntax = Literal["dsl", "json"]
FormatChoice = Literal["latex", "text", "both"]


class DiagnosticOut(BaseModel):
    severity: str
    code: str
    message: str
    file: str
    line: int
    column: int

    @classmethod
    def from_diagnostic(cls, d: Diagnostic) -> "DiagnosticOut":
        return cls(
            severity=d.severity,
            code=d.code,
            message=d.message,
            file=d.span.file,
            line=d.span.line,
            column=d.span.column,
        )


class ModelSource(BaseModel):
    source: str
    syntax: Syntax = "dsl"
    filename: str = "<input>"


class GenerateRequest(ModelSource):
    format: FormatChoice = "both"
    ascii_ops: bool = False


class DocumentOut(BaseModel):
    component: str
    kind: str
    filename: str
    body: str
    checksum: str


class GenerateResponse(BaseModel):
    ok: bool
    diagnostics: list[DiagnosticOut]
    documents: list[DocumentOut]


class CheckSpecRequest(BaseModel):
    source: str
    filename: str = "<spec>"


class CheckResponse(BaseModel):
    ok: bool
    diagnostics: list[DiagnosticOut]


class SimulateRequest(ModelSource):
    inputs: str
    component: Optional[str] = None
    horizon: Optional[int] = Field(default=None, ge=0)
    tie_break: Optional[Literal["order"]] = None


class SimulateResponse(BaseModel):
    ok: bool
    diagnostics: list[DiagnosticOut]
    trace: Optional[str] = None


class OracleRequest(ModelSource):
    horizon: int = Field(default=4, ge=1)
    budget: int = Field(default=10**6, ge=1)


class OracleComponentOut(BaseModel):
    component: str
    sequences: int
    status: str
    formula_index: Optional[int] = None
    slot: Optional[int] = None
    counterexample: Optional[str] = None


class OracleResponse(BaseModel):
    status: Literal["satisfied", "violated", "budget-exceeded", "error"]
    checked: int
    diagnostics: list[DiagnosticOut]
    components: list[OracleComponentOut]


class DriftRequest(ModelSource):
    format: FormatChoice = "both"
    ascii_ops: bool = False
    existing: dict[str, str] = Field(default_factory=dict)


class DriftEntryOut(BaseModel):
    component: str
    status: Literal["unchanged", "changed", "new", "orphaned"]
    diff: str = ""


class DriftResponse(BaseModel):
    ok: bool
    clean: bool
    diagnostics: list[DiagnosticOut]
    entries: list[DriftEntryOut]


class TemplateResponse(BaseModel):
    id: str
    body: str


class OperatorOut(BaseModel):
    kind: str
    symbol: str
    arity: int
    category: str
    latex: str
    text: str
    ascii: str


class OperatorsResponse(BaseModel):
    entries: list[OperatorOut]


class HealthResponse(BaseModel):
    status: str
    version: str
