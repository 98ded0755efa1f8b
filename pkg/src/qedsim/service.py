"""HTTP front end for the simulator.

Every operation takes the circuit source text in the request body, so the
service is stateless and safe to run multi-client. Error payloads carry a
``category`` of "validation" or "runtime", which the CLI maps to its exit
codes.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel, Field

from . import engine
from .dsl import format_circuit, matrix_to_json, parse_circuit, write_result
from .embedding import check_equivalence
from .errors import (
    BadDimension,
    BisectionFailure,
    CreationCollision,
    CreationOnVacuum,
    DimensionGuard,
    EmptyState,
    LengthMismatch,
    NotIsometry,
    NotUnitary,
    ParseError,
    StaticValidation,
)
from .gates import DEFAULT_COUPLING, generate_suppressed, trace_deficit
from .state import ket_string

app = FastAPI(title="qedsim", description="Particle-creation circuit simulator")

_VALIDATION_ERRORS = (
    ParseError,
    StaticValidation,
    DimensionGuard,
    BadDimension,
    NotUnitary,
    NotIsometry,
    LengthMismatch,
    EmptyState,
    ValueError,
)
_RUNTIME_ERRORS = (CreationCollision, CreationOnVacuum, BisectionFailure, RuntimeError)


def _http_error(exc: Exception) -> HTTPException:
    detail = {"kind": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        detail.update({"line": exc.line, "col": exc.col, "error_kind": exc.kind})
    if isinstance(exc, _RUNTIME_ERRORS):
        detail["category"] = "runtime"
        return HTTPException(status_code=409, detail=detail)
    detail["category"] = "validation"
    return HTTPException(status_code=400, detail=detail)


class RunRequest(BaseModel):
    source: str
    backend: str = Field(default="fock", pattern="^(fock|qutrit)$")
    shots: int = Field(default=0, ge=0)
    seed: int = 0
    fmt: str = Field(default="json", pattern="^(json|csv)$")


class CompareRequest(BaseModel):
    source: str
    tol: float = 1e-10


class GenGateRequest(BaseModel):
    n: int
    coupling: float = DEFAULT_COUPLING
    vertices: int = 1
    seed: int = 0


class ValidateRequest(BaseModel):
    source: str


_MEDIA = {"json": "application/json", "csv": "text/csv"}


@app.post("/run")
def run_endpoint(req: RunRequest) -> Response:
    try:
        circuit = parse_circuit(req.source)
        result = engine.run(circuit, backend=req.backend, shots=req.shots, seed=req.seed)
        doc = write_result(result, fmt=req.fmt)
    except (_VALIDATION_ERRORS + _RUNTIME_ERRORS) as exc:
        raise _http_error(exc)
    return Response(content=doc, media_type=_MEDIA[req.fmt])


@app.post("/sample")
def sample_endpoint(req: RunRequest) -> Response:
    try:
        circuit = parse_circuit(req.source)
        result = engine.run(circuit, backend=req.backend, shots=req.shots, seed=req.seed)
    except (_VALIDATION_ERRORS + _RUNTIME_ERRORS) as exc:
        raise _http_error(exc)
    histogram = {ket_string(c): n for c, n in sorted(result.samples.items())}
    if req.fmt == "csv":
        rows = ["outcome,count"]
        rows.extend(f"{ket},{count}" for ket, count in histogram.items())
        return Response(content="\n".join(rows) + "\n", media_type="text/csv")
    doc = {
        "backend": result.backend,
        "seed": result.seed,
        "shots": result.shots,
        "histogram": histogram,
    }
    return Response(content=json.dumps(doc, indent=2) + "\n", media_type="application/json")


@app.post("/compare")
def compare_endpoint(req: CompareRequest) -> dict:
    try:
        circuit = parse_circuit(req.source)
        report = check_equivalence(circuit, tol=req.tol)
    except (_VALIDATION_ERRORS + _RUNTIME_ERRORS) as exc:
        raise _http_error(exc)
    payload = report.to_dict()
    payload["seeds"] = []  # both backends are deterministic; no RNG involved
    return payload


@app.post("/gen-gate")
def gen_gate_endpoint(req: GenGateRequest) -> dict:
    try:
        gate = generate_suppressed(
            n=req.n, coupling=req.coupling, vertices=req.vertices, seed=req.seed
        )
    except (_VALIDATION_ERRORS + _RUNTIME_ERRORS) as exc:
        raise _http_error(exc)
    return {
        "matrix": matrix_to_json(gate.u),
        "metadata": {
            "n": req.n,
            "coupling": req.coupling,
            "vertices": req.vertices,
            "achieved_deficit": trace_deficit(gate.u),
            "seed": req.seed,
        },
    }


@app.post("/validate")
def validate_endpoint(req: ValidateRequest) -> dict:
    try:
        circuit = parse_circuit(req.source)
    except (_VALIDATION_ERRORS + _RUNTIME_ERRORS) as exc:
        raise _http_error(exc)
    return {
        "valid": True,
        "mode_count": circuit.mode_count,
        "gate_count": len(circuit.gates),
        "growth_bound": engine.particle_growth_bound(circuit),
        "canonical": format_circuit(circuit),
    }
