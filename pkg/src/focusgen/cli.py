"""Command-line client for the specification generation service.

All model processing happens behind the HTTP API; this client only reads
and writes files, renders reports and maps outcomes to exit codes. By
default it talks to the service in-process; --server (or FOCUSGEN_SERVER)
points it at a running instance instead.

Exit codes: 0 success, 1 validation or oracle failure, 2 I/O failure,
3 enumeration budget exceeded, 4 drift detected.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

import httpx

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_BUDGET = 3
EXIT_DRIFT = 4

SERVER_ENV = "FOCUSGEN_SERVER"

MODEL_SUFFIXES = (".afm", ".json")
SPEC_SUFFIXES = (".spec.txt", ".txt")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
    # In-process ASGI transport: no running server needed.
    from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _call(client: httpx.Client, method: str, path: str, payload: dict | None = None) -> dict:
    try:
        if method == "get":
            resp = client.get(path)
        else:
            resp = client.post(path, json=payload)
    except httpx.HTTPError as e:
        raise CliError(f"service unreachable: {e}", EXIT_IO) from e
    if resp.status_code == 404:
        raise CliError(resp.json().get("detail", "not found"), EXIT_FAIL)
    if resp.status_code >= 400:
        raise CliError(f"service error {resp.status_code}: {resp.text}", EXIT_FAIL)
    return resp.json()


def _read_file(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror or e}", EXIT_IO) from e


def _write_atomic(directory: str, filename: str, text: str) -> str:
    """Write via a temp file and rename, so interrupts never truncate."""
    path = os.path.join(directory, filename)
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{filename}.")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    except OSError as e:
        raise CliError(f"cannot write {path}: {e.strerror or e}", EXIT_IO) from e
    return path


def _print_diagnostics(diagnostics: list[dict]) -> None:
    for d in diagnostics:
        where = f"{d['file']}:{d['line']}:{d['column']}"
        print(f"{d['severity']}[{d['code']}] {where}: {d['message']}", file=sys.stderr)


def _model_payload(path: str) -> dict:
    return {
        "source": _read_file(path),
        "syntax": "json" if path.endswith(".json") else "dsl",
        "filename": path,
    }


# ---------------------------------------------------------------------------
# Commands


def cmd_generate(args, client) -> int:
    payload = _model_payload(args.model)
    payload.update({"format": args.format, "ascii_ops": args.ascii})
    resp = _call(client, "post", "/api/generate", payload)
    _print_diagnostics(resp["diagnostics"])
    if not resp["ok"]:
        return EXIT_FAIL
    for doc in resp["documents"]:
        path = _write_atomic(args.out, doc["filename"], doc["body"])
        print(f"wrote {path}")
    return EXIT_OK


def cmd_check(args, client) -> int:
    failed = False
    for path in args.paths:
        if path.endswith(MODEL_SUFFIXES):
            resp = _call(client, "post", "/api/check/model", _model_payload(path))
        elif path.endswith(SPEC_SUFFIXES):
            resp = _call(client, "post", "/api/check/spec", {"source": _read_file(path), "filename": path})
        else:
            raise CliError(f"cannot check {path}: unknown file type", EXIT_IO)
        _print_diagnostics(resp["diagnostics"])
        if args.report == "tsv":
            print(f"{path}\t{'ok' if resp['ok'] else 'error'}")
        if not resp["ok"]:
            failed = True
        elif args.strict and resp["diagnostics"]:
            failed = True
    return EXIT_FAIL if failed else EXIT_OK


def cmd_simulate(args, client) -> int:
    payload = _model_payload(args.model)
    payload.update(
        {
            "inputs": _read_file(args.inputs),
            "component": args.component,
            "horizon": args.horizon,
            "tie_break": args.tie_break,
        }
    )
    resp = _call(client, "post", "/api/simulate", payload)
    _print_diagnostics(resp["diagnostics"])
    if not resp["ok"]:
        return EXIT_FAIL
    trace = resp["trace"]
    component = trace.splitlines()[0].split()[2]
    path = _write_atomic(args.out, f"{component}.trace.txt", trace)
    print(f"wrote {path}")
    return EXIT_OK


def cmd_oracle(args, client) -> int:
    payload = _model_payload(args.model)
    payload.update({"horizon": args.horizon, "budget": args.budget})
    resp = _call(client, "post", "/api/oracle", payload)
    _print_diagnostics(resp["diagnostics"])
    for comp in resp["components"]:
        if args.report == "tsv":
            print(f"{comp['component']}\t{comp['status']}\t{comp['sequences']}")
        else:
            print(f"{comp['component']}: {comp['status']} ({comp['sequences']} sequences)")
    status = resp["status"]
    if status == "satisfied":
        if args.report != "tsv":
            print(f"oracle satisfied: {resp['checked']} simulator traces checked")
        return EXIT_OK
    if status == "budget-exceeded":
        return EXIT_BUDGET
    if status == "violated":
        for comp in resp["components"]:
            if comp["status"] == "violated":
                print(
                    f"counterexample for {comp['component']}: formula ({comp['formula_index']}) "
                    f"fails at slot {comp['slot']}",
                    file=sys.stderr,
                )
                sys.stderr.write(comp["counterexample"] or "")
        return EXIT_FAIL
    return EXIT_FAIL


def cmd_diff(args, client) -> int:
    if not os.path.isdir(args.out):
        raise CliError(f"cannot read prior documents: no directory {args.out}", EXIT_IO)
    existing: dict[str, str] = {}
    for name in sorted(os.listdir(args.out)):
        if name.endswith((".spec.tex", ".spec.txt")):
            existing[name] = _read_file(os.path.join(args.out, name))
    payload = _model_payload(args.model)
    payload.update({"format": args.format, "ascii_ops": args.ascii, "existing": existing})
    resp = _call(client, "post", "/api/diff", payload)
    _print_diagnostics(resp["diagnostics"])
    if not resp["ok"]:
        return EXIT_FAIL
    for entry in resp["entries"]:
        if args.report == "tsv":
            print(f"{entry['component']}\t{entry['status']}")
        else:
            print(f"{entry['status']:<9} {entry['component']}")
            if entry["status"] == "changed" and entry["diff"]:
                sys.stdout.write(entry["diff"])
    return EXIT_OK if resp["clean"] else EXIT_DRIFT


def cmd_template(args, client) -> int:
    resp = _call(client, "get", f"/api/template/{args.id}")
    path = _write_atomic(args.out, f"{args.id}.spec.txt", resp["body"])
    print(f"wrote {path}")
    return EXIT_OK


def cmd_operators(args, client) -> int:
    resp = _call(client, "get", "/api/operators")
    for e in resp["entries"]:
        if args.report == "tsv":
            print(f"{e['kind']}\t{e['symbol']}\t{e['arity']}\t{e['category']}\t{e['latex']}\t{e['text']}\t{e['ascii']}")
        else:
            print(
                f"{e['symbol']:<6} arity {e['arity']}  {e['category']:<10} "
                f"latex {e['latex']:<12} text {e['text']:<6} ascii {e['ascii']}"
            )
    return EXIT_OK


def cmd_serve(args, _client) -> int:
    import uvicorn

    uvicorn.run("focusgen.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="focusgen",
        description="Generate assumption/guarantee specification documents from component-network models.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", default=os.environ.get(SERVER_ENV), help="service URL (default: in-process)")
    common.add_argument("--report", choices=("text", "tsv"), default="text", help="report style on stdout")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="emit specification documents for every component")
    p.add_argument("model", help="model file (.afm or .json)")
    p.add_argument("--format", choices=("latex", "text", "both"), default="both")
    p.add_argument("--ascii", action="store_true", help="ASCII operators in plain-text documents")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("check", parents=[common], help="validate models and lint spec sources")
    p.add_argument("paths", nargs="+", help="model (.afm/.json) or spec (.spec.txt) files")
    p.add_argument("--strict", action="store_true", help="treat warnings as failures")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("simulate", parents=[common], help="run a component over an input history")
    p.add_argument("model")
    p.add_argument("--inputs", required=True, help="input history file")
    p.add_argument("--component", help="component to run (default: the model root)")
    p.add_argument("--horizon", type=int, help="expected number of slots")
    p.add_argument("--tie-break", choices=("order",), dest="tie_break", help="allow nondeterminism, firing in declaration order")
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("oracle", parents=[common], help="check generated specs against exhaustive simulation")
    p.add_argument("model")
    p.add_argument("--horizon", type=int, default=4)
    p.add_argument("--budget", type=int, default=10**6, help="max input sequences per component")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("diff", parents=[common], help="compare regenerated documents against stored ones")
    p.add_argument("model")
    p.add_argument("--format", choices=("latex", "text", "both"), default="both")
    p.add_argument("--ascii", action="store_true")
    p.add_argument("--out", default="out", help="directory holding previously generated documents")
    p.set_defaults(fn=cmd_diff)

    p = sub.add_parser("template", parents=[common], help="write a specification skeleton")
    p.add_argument("id", help="template id (component-frame, function-frame, composite-frame, timed-table, datatype-decl)")
    p.add_argument("--out", default="out")
    p.set_defaults(fn=cmd_template)

    p = sub.add_parser("operators", parents=[common], help="list the operator catalog")
    p.set_defaults(fn=cmd_operators)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = None
    try:
        if args.fn is not cmd_serve:
            client = _make_client(args.server)
        return args.fn(args, client)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    finally:
        if client is not None:
            client.close()


if __name__ == "__main__":
    sys.exit(main())
