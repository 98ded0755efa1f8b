"""Command-line front end.

A thin client over the HTTP service: by default the request is routed to
the in-process app (no server needed); ``--server URL`` targets a running
instance instead. stdout carries exactly the requested document, stderr
the diagnostics. Exit codes: 0 success, 1 validation error, 2 runtime
fault.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=300.0)
    import warnings

    with warnings.catch_warnings():
        # keep stderr clean: some environments warn on the sync test client
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _read_source(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)


def _fail(response: httpx.Response) -> int:
    try:
        detail = response.json().get("detail", {})
    except ValueError:
        detail = {}
    message = detail.get("message", response.text.strip())
    if "line" in detail:
        message = f"{detail['line']}:{detail['col']}: {message}"
    print(f"error: {message}", file=sys.stderr)
    return 2 if detail.get("category") == "runtime" else 1


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_run(args, client: httpx.Client, histogram_only: bool = False) -> int:
    source = _read_source(args.circuit)
    payload = {
        "source": source,
        "backend": args.backend,
        "shots": args.shots,
        "seed": args.seed,
        "fmt": args.format,
    }
    response = client.post("/sample" if histogram_only else "/run", json=payload)
    if response.status_code != 200:
        return _fail(response)
    _emit(response.text, args.out)
    return 0


def cmd_compare(args, client: httpx.Client) -> int:
    source = _read_source(args.circuit)
    response = client.post("/compare", json={"source": source, "tol": args.tol})
    if response.status_code != 200:
        return _fail(response)
    report = response.json()
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["pass"] else 1


def cmd_gen_gate(args, client: httpx.Client) -> int:
    payload = {
        "n": args.n,
        "coupling": args.coupling,
        "vertices": args.vertices,
        "seed": args.seed,
    }
    response = client.post("/gen-gate", json=payload)
    if response.status_code != 200:
        return _fail(response)
    # Re-serialize with a fixed layout so identical flags give identical bytes.
    _emit(json.dumps(response.json(), indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_validate(args, client: httpx.Client) -> int:
    source = _read_source(args.circuit)
    response = client.post("/validate", json={"source": source})
    if response.status_code != 200:
        return _fail(response)
    report = response.json()
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qedsim", description="Particle-creation circuit simulator"
    )
    parser.add_argument(
        "--server", default=None, help="URL of a running qedsim service (default: in-process)"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, circuit=True):
        if circuit:
            p.add_argument("circuit", help="path to a .qed circuit file")
        p.add_argument("--out", default=None, help="write the document here instead of stdout")

    p_run = sub.add_parser("run", help="simulate a circuit")
    common(p_run)
    p_run.add_argument("--backend", choices=["fock", "qutrit"], default="fock")
    p_run.add_argument("--shots", type=int, default=0)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--format", choices=["json", "csv"], default="json")

    p_sample = sub.add_parser("sample", help="simulate and emit the histogram only")
    common(p_sample)
    p_sample.add_argument("--backend", choices=["fock", "qutrit"], default="fock")
    p_sample.add_argument("--shots", type=int, default=1024)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--format", choices=["json", "csv"], default="json")

    p_cmp = sub.add_parser("compare", help="check Fock/qutrit backend equivalence")
    common(p_cmp)
    p_cmp.add_argument("--tol", type=float, default=1e-10)

    p_gen = sub.add_parser("gen-gate", help="generate a suppressed multi-qubit gate")
    common(p_gen, circuit=False)
    p_gen.add_argument("--n", type=int, required=True, help="qubit count (1..6)")
    p_gen.add_argument("--coupling", type=float, default=0.302822)
    p_gen.add_argument("--vertices", type=int, default=1)
    p_gen.add_argument("--seed", type=int, default=0)

    p_val = sub.add_parser("validate", help="parse and statically check a circuit")
    common(p_val)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    with _client(args.server) as client:
        if args.command == "run":
            return cmd_run(args, client)
        if args.command == "sample":
            return cmd_run(args, client, histogram_only=True)
        if args.command == "compare":
            return cmd_compare(args, client)
        if args.command == "gen-gate":
            return cmd_gen_gate(args, client)
        if args.command == "validate":
            return cmd_validate(args, client)
    raise AssertionError("unreachable")


if __name__ == "__main__":
    raise SystemExit(main())
