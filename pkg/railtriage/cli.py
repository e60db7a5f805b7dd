import argparse
import datetime
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from .batch import format_summary, triage_batch
from .codecs import decode_timestamp, dumps
from .constants import EXIT_CONFIG_ERROR, EXIT_IO_ERROR, EXIT_OK
from .evaluate import evaluate, format_report
from .exceptions import (
    BadInputException,
    ConfigError,
    FileUnreadable,
    MissingLabel,
    OutputUnwritable,
    StoreError,
)
from .server import parse_bind, serve
from .store import TaskStore
from .triager import ENV_STORE, Triager, load_config
from .utils import get_logger, set_debug

logger = get_logger(__name__)


def _store_path(args: argparse.Namespace) -> Optional[str]:
    return args.store or os.environ.get(ENV_STORE) or None


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--debug", "-d", dest="debug", action="store_true")
    shared.add_argument("--lexicon-dir", dest="lexicon_dir")
    shared.add_argument("--stations", dest="stations")
    shared.add_argument("--schemas", dest="schemas")
    shared.add_argument("--prompts", dest="prompts")
    shared.add_argument("--categories", dest="categories")
    shared.add_argument("--routes", dest="routes", help="directory of routing tables")
    shared.add_argument("--store", dest="store", help="task event log")
    shared.add_argument(
        "--schema-variant",
        dest="schema_variants",
        action="append",
        default=[],
        help="activate an alternate requirement schema by id",
    )

    parser = argparse.ArgumentParser(
        prog="triage", description="Triage railway grievance tweets."
    )
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    run = commands.add_parser("run", parents=[shared], help="triage a JSONL corpus")
    run.add_argument("--input", "-i", dest="input", required=True)
    run.add_argument("--output", "-o", dest="output", required=True)
    run.add_argument(
        "--summary-json", dest="summary_json", action="store_true", help="print the summary as JSON"
    )
    run.add_argument(
        "--processed-at",
        dest="processed_at",
        help="fixed ISO timestamp for processed_at, for reproducible output",
    )

    serve_cmd = commands.add_parser("serve", parents=[shared], help="run the HTTP service")
    serve_cmd.add_argument("--bind", dest="bind", default="")

    eval_cmd = commands.add_parser("eval", parents=[shared], help="score against gold labels")
    eval_cmd.add_argument("--input", "-i", dest="input", required=True)
    eval_cmd.add_argument("--report", dest="report", help="also write the report as JSON")
    return parser


def _run(args: argparse.Namespace, triager: Triager) -> int:
    store_path = _store_path(args)
    store = TaskStore(store_path) if store_path else None
    summary = triage_batch(args.input, args.output, triager, store)
    if args.summary_json:
        print(dumps(summary.to_dict()))
    else:
        print(format_summary(summary))
    return EXIT_OK


def _serve(args: argparse.Namespace, triager: Triager) -> int:
    host, port = parse_bind(args.bind) if args.bind else parse_bind(":")
    store_path = _store_path(args)
    serve(triager, TaskStore(store_path) if store_path else None, host, port)
    return EXIT_OK


def _eval(args: argparse.Namespace, triager: Triager) -> int:
    report = evaluate(args.input, triager)
    print(format_report(report))
    if args.report:
        try:
            Path(args.report).write_text(
                json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
            )
        except OSError as e:
            raise OutputUnwritable(f"cannot write {args.report}", path=args.report, reason=str(e))
    return EXIT_OK


COMMANDS = {"run": _run, "serve": _serve, "eval": _eval}


def cli(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.debug:
        set_debug(True)
    try:
        config = load_config(
            lexicon_dir=args.lexicon_dir,
            stations=args.stations,
            schemas=args.schemas,
            prompts=args.prompts,
            categories=args.categories,
            routes=args.routes,
            schema_variants=args.schema_variants,
        )
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    clock = None
    if getattr(args, "processed_at", None):
        try:
            fixed = decode_timestamp(args.processed_at)
        except ValueError:
            print(f"bad --processed-at={args.processed_at!r}", file=sys.stderr)
            return EXIT_CONFIG_ERROR

        def clock() -> "datetime.datetime":
            return fixed

    triager = Triager(config, clock)
    try:
        return COMMANDS[args.command](args, triager)
    except (FileUnreadable, OutputUnwritable, StoreError) as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO_ERROR
    except (ConfigError, MissingLabel, BadInputException) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
