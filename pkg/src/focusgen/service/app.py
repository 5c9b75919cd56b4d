"""FastAPI service wrapping the generation pipeline.

Stateless: every request carries the model source and gets documents,
diagnostics or traces back. File handling stays with the clients; the
command-line tool talks to this app over an in-process transport unless
pointed at a running server.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from .. import pipeline
from ..render import CATALOG, MissingTemplate, skeleton
from .schemas import (
    CheckResponse,
    CheckSpecRequest,
    DiagnosticOut,
    DocumentOut,
    DriftEntryOut,
    DriftRequest,
    DriftResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    ModelSource,
    OperatorOut,
    OperatorsResponse,
    OracleComponentOut,
    OracleRequest,
    OracleResponse,
    SimulateRequest,
    SimulateResponse,
    TemplateResponse,
)


def _diags(diagnostics) -> list[DiagnosticOut]:
    return [DiagnosticOut.from_diagnostic(d) for d in diagnostics]


def create_app() -> FastAPI:
    app = FastAPI(title="focusgen", version=__version__)

    @app.get("/api/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/api/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest) -> GenerateResponse:
        outcome = pipeline.generate(req.source, req.syntax, req.filename, req.format, req.ascii_ops)
        return GenerateResponse(
            ok=outcome.ok,
            diagnostics=_diags(outcome.diagnostics),
            documents=[DocumentOut(**doc.__dict__) for doc in outcome.documents],
        )

    @app.post("/api/check/model", response_model=CheckResponse)
    def check_model(req: ModelSource) -> CheckResponse:
        diagnostics = pipeline.check_model(req.source, req.syntax, req.filename)
        return CheckResponse(ok=not any(d.is_error for d in diagnostics), diagnostics=_diags(diagnostics))

    @app.post("/api/check/spec", response_model=CheckResponse)
    def check_spec(req: CheckSpecRequest) -> CheckResponse:
        diagnostics = pipeline.check_spec(req.source, req.filename)
        return CheckResponse(ok=not any(d.is_error for d in diagnostics), diagnostics=_diags(diagnostics))

    @app.post("/api/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest) -> SimulateResponse:
        outcome = pipeline.simulate(
            req.source,
            req.syntax,
            req.inputs,
            req.filename,
            component=req.component,
            tie_break=req.tie_break,
            horizon=req.horizon,
        )
        return SimulateResponse(ok=outcome.ok, diagnostics=_diags(outcome.diagnostics), trace=outcome.trace_text)

    @app.post("/api/oracle", response_model=OracleResponse)
    def oracle(req: OracleRequest) -> OracleResponse:
        outcome = pipeline.oracle(req.source, req.syntax, req.filename, req.horizon, req.budget)
        return OracleResponse(
            status=outcome.status,
            checked=outcome.checked,
            diagnostics=_diags(outcome.diagnostics),
            components=[OracleComponentOut(**c.__dict__) for c in outcome.components],
        )

    @app.post("/api/diff", response_model=DriftResponse)
    def diff(req: DriftRequest) -> DriftResponse:
        outcome = pipeline.drift(req.source, req.syntax, req.existing, req.filename, req.format, req.ascii_ops)
        ok = not any(d.is_error for d in outcome.diagnostics)
        return DriftResponse(
            ok=ok,
            clean=ok and outcome.clean,
            diagnostics=_diags(outcome.diagnostics),
            entries=[DriftEntryOut(**e.__dict__) for e in outcome.entries],
        )

    @app.get("/api/template/{template_id}", response_model=TemplateResponse)
    def template(template_id: str) -> TemplateResponse:
        try:
            return TemplateResponse(id=template_id, body=skeleton(template_id))
        except (MissingTemplate, KeyError):
            raise HTTPException(status_code=404, detail=f"no template '{template_id}'") from None

    @app.get("/api/operators", response_model=OperatorsResponse)
    def operators() -> OperatorsResponse:
        return OperatorsResponse(entries=[OperatorOut(**e.__dict__) for e in CATALOG])

    return app


app = create_app()
