"""Command-line front end.

Every subcommand is a thin client of the HTTP service: with ``--server`` it
talks to a remote instance, otherwise it mounts the app in-process and speaks
the same requests over an ASGI bridge.  Exit codes: 0 success, 1 config
error, 2 runtime error, 3 transport error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config, serialize, to_dict
from .errors import ConfigError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2
EXIT_TRANSPORT = 3


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _client(args):
    import httpx

    if getattr(args, "server", None):
        return httpx.Client(base_url=args.server.rstrip("/"), timeout=None)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # the test-client import warns on some stacks
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(runs_root=getattr(args, "runs_root", None)))


def _check(response):
    if response.status_code < 400:
        return response.json()
    try:
        detail = response.json().get("detail", response.text)
    except Exception:
        detail = response.text
    if response.status_code in (400, 422):
        raise CliFailure(EXIT_CONFIG, f"config error: {detail}")
    if response.status_code in (502, 503):
        raise CliFailure(EXIT_TRANSPORT, f"transport error: {detail}")
    raise CliFailure(EXIT_RUNTIME, f"error: {detail}")


# -- subcommands ---------------------------------------------------------------


def cmd_tsed(args) -> int:
    with _client(args) as client:
        if args.matrix:
            directory = Path(args.matrix)
            files = sorted(directory.glob("*.py"))
            if not files:
                raise CliFailure(EXIT_CONFIG, f"no .py files under {directory}")
            sources = [path.read_text(encoding="utf-8") for path in files]
            doc = _check(client.post("/tsed/matrix", json={"sources": sources}))
            for row in doc["matrix"]:
                print(",".join(f"{value:.6f}" for value in row))
            return EXIT_OK
        if not args.file_a or not args.file_b:
            raise CliFailure(EXIT_CONFIG, "tsed needs two files or --matrix DIR")
        doc = _check(
            client.post(
                "/tsed",
                json={
                    "source_a": Path(args.file_a).read_text(encoding="utf-8"),
                    "source_b": Path(args.file_b).read_text(encoding="utf-8"),
                },
            )
        )
        print(f"{doc['score']:.6f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    payload = {
        "problem": args.problem,
        "n": args.n,
        "capacity": args.capacity,
        "count": args.count,
        "seed": args.seed,
    }
    with _client(args) as client:
        doc = _check(client.post("/instances/generate", json=payload))
    text = json.dumps(doc)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {len(doc['instances'])} instances to {args.out}")
    else:
        print(text)
    return EXIT_OK


def cmd_baselines(args) -> int:
    payload = {
        "problem": args.problem,
        "n": args.n,
        "capacity": args.capacity,
        "count": args.count,
        "seed": args.seed,
    }
    with _client(args) as client:
        doc = _check(client.post("/baselines", json=payload))
    print(f"problem={doc['problem']} scale={doc['scale']} count={doc['count']} seed={doc['seed']}")
    if doc.get("reference") is not None:
        print(f"{doc['reference_kind']:<18} {doc['reference']:>12.4f} {'0.00%':>8}")
    for row in doc["rows"]:
        gap = f"{row['gap_percent']:.2f}%" if row.get("gap_percent") is not None else "-"
        print(f"{row['name']:<18} {row['objective']:>12.4f} {gap:>8}")
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        config = load_config(args.config, args.set) if args.config else _default_config(args.set)
    except ConfigError as exc:
        raise CliFailure(EXIT_CONFIG, str(exc)) from exc
    payload = {"config": _config_payload(config), "run_dir": args.out, "wait": True}
    with _client(args) as client:
        doc = _check(client.post("/runs", json=payload))
    print(f"run {doc['run_id']} finished: state={doc['state']}")
    print(f"run_dir: {doc['run_dir']}")
    print(f"generations: {doc['generations']}  evaluations: {doc['evaluations']}")
    print(f"best objective: {doc['best_objective']}")
    return EXIT_OK if doc["state"] == "done" else EXIT_RUNTIME


def cmd_resume(args) -> int:
    payload = {"run_dir": args.run, "overrides": args.set, "wait": True}
    with _client(args) as client:
        doc = _check(client.post("/runs/resume", json=payload))
    print(f"resumed {doc['run_id']}: state={doc['state']}")
    print(f"generations: {doc['generations']}  evaluations: {doc['evaluations']}")
    print(f"best objective: {doc['best_objective']}")
    return EXIT_OK if doc["state"] == "done" else EXIT_RUNTIME


def cmd_report(args) -> int:
    with _client(args) as client:
        doc = _check(client.get(f"/runs/{args.run}/report"))
    out_dir = Path(args.out) if args.out else Path(doc["run_dir"]) / "reports"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, content in doc["files"].items():
        (out_dir / name).write_text(content, encoding="utf-8")
        print(f"wrote {out_dir / name}")
    return EXIT_OK


def cmd_config(args) -> int:
    try:
        config = load_config(args.config, args.set) if args.config else _default_config(args.set)
    except ConfigError as exc:
        raise CliFailure(EXIT_CONFIG, str(exc)) from exc
    print(serialize(config), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(runs_root=args.runs_root), host=args.host, port=args.port)
    return EXIT_OK


def _default_config(overrides):
    from .config import RunConfig, apply_overrides

    return apply_overrides(RunConfig(), overrides or [])


def _config_payload(config) -> dict:
    doc = to_dict(config)
    return {
        key: ({k: v for k, v in value.items() if v is not None} if isinstance(value, dict) else value)
        for key, value in doc.items()
    }


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heuforge",
        description="Evolve heuristic programs with an island model and constant tuning.",
    )
    parser.add_argument("--server", help="base URL of a running service; default runs in-process")
    parser.add_argument("--runs-root", help="directory for run artifacts in in-process mode")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute an evolution run")
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    p.add_argument("--out", help="run directory (relative paths land under runs root)")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("resume", help="continue a checkpointed run")
    p.add_argument("--run", required=True, help="run directory containing checkpoint.json")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    p.set_defaults(fn=cmd_resume)

    p = sub.add_parser("baselines", help="evaluate reference policies and oracles")
    p.add_argument("--problem", required=True, choices=["tsp", "kp", "bpp_online"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--capacity", type=float)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_baselines)

    p = sub.add_parser("report", help="export CSV traces for a run")
    p.add_argument("--run", required=True, help="run id or directory")
    p.add_argument("--out", help="directory for the CSV files")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("tsed", help="structural similarity of heuristic sources")
    p.add_argument("file_a", nargs="?")
    p.add_argument("file_b", nargs="?")
    p.add_argument("--matrix", metavar="DIR", help="pairwise matrix over all .py files in DIR")
    p.set_defaults(fn=cmd_tsed)

    p = sub.add_parser("gen", help="generate a problem instance set")
    p.add_argument("--problem", required=True, choices=["tsp", "kp", "bpp_online"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--capacity", type=float)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output JSON file (stdout when omitted)")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("config", help="materialize a config with defaults applied")
    p.add_argument("--config", help="TOML config file")
    p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE")
    p.set_defaults(fn=cmd_config)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8440)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliFailure as failure:
        print(str(failure), file=sys.stderr)
        return failure.code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"missing file: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # last-resort mapping to a runtime failure
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
