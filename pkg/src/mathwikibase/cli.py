"""Command-line interface.

Each data command writes exactly the payload bytes its HTTP twin would
return, so scripted output can be compared or piped byte-for-byte.
Diagnostics go to stderr.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys

from mathwikibase.errors import MathWikibaseError
from mathwikibase.kb import Store, load_snapshot
from mathwikibase.mathml import render_alt_text, render_mathml
from mathwikibase.page import build_page_model, page_model_to_dict, render_page_html
from mathwikibase.parser import parse_tex
from mathwikibase.payloads import (
    ast_payload,
    json_bytes,
    occurrence_payload,
    suggestion_rows,
)
from mathwikibase.service import DEFAULT_SUGGEST_LIMIT, ServiceConfig, serve
from mathwikibase.suggest import build_index, suggest
from mathwikibase.wikitext import extract_math_tags, link_occurrences

USAGE_ERROR = 2
DOMAIN_ERROR = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mathwb",
        description="Math formula parsing, rendering and knowledge-base tools.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    extract = commands.add_parser(
        "extract", help="list math tags in a wikitext file as JSON"
    )
    extract.add_argument("file", help="wikitext document to scan")
    _snapshot_flag(extract)

    render = commands.add_parser("render", help="render a TeX formula")
    render.add_argument("--tex", required=True)
    render.add_argument(
        "--format", choices=("mathml", "text", "ast"), default="mathml"
    )

    page = commands.add_parser("page", help="build the page for an item")
    page.add_argument("--qid", required=True)
    page.add_argument("--lang", default=None)
    page.add_argument("--html", action="store_true", help="emit HTML instead of JSON")
    _snapshot_flag(page)

    lookup = commands.add_parser("lookup", help="find the item defined by a formula")
    lookup.add_argument("--tex", required=True)
    _snapshot_flag(lookup)

    suggest_cmd = commands.add_parser(
        "suggest", help="rank candidate items for a formula element"
    )
    suggest_cmd.add_argument("--tex", required=True)
    suggest_cmd.add_argument("--limit", type=int, default=DEFAULT_SUGGEST_LIMIT)
    suggest_cmd.add_argument("--lang", default=None)
    _snapshot_flag(suggest_cmd)

    serve_cmd = commands.add_parser("serve", help="run the HTTP service")
    serve_cmd.add_argument("--port", type=int, default=None)
    _snapshot_flag(serve_cmd)

    validate = commands.add_parser(
        "validate-snapshot", help="check a snapshot file and report its item count"
    )
    validate.add_argument("file")

    return parser


def _snapshot_flag(subparser: argparse.ArgumentParser) -> None:
    subparser.add_argument(
        "--snapshot",
        default=None,
        help="snapshot path (default: MATHWB_SNAPSHOT)",
    )


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except MathWikibaseError as exc:
        print(str(exc), file=sys.stderr)
        return DOMAIN_ERROR
    except OSError as exc:
        print(str(exc), file=sys.stderr)
        return DOMAIN_ERROR


def _dispatch(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if args.command == "extract":
        return _cmd_extract(args)
    if args.command == "render":
        return _cmd_render(args)
    if args.command == "page":
        return _cmd_page(args)
    if args.command == "lookup":
        return _cmd_lookup(args)
    if args.command == "suggest":
        return _cmd_suggest(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "validate-snapshot":
        return _cmd_validate(args)
    parser.error(f"unknown command {args.command!r}")
    return USAGE_ERROR


def _emit(payload: bytes) -> None:
    sys.stdout.buffer.write(payload)
    sys.stdout.buffer.flush()


def _snapshot_path(args: argparse.Namespace) -> str | None:
    return args.snapshot or os.environ.get("MATHWB_SNAPSHOT")


def _load_store(args: argparse.Namespace) -> Store:
    path = _snapshot_path(args)
    if path is None:
        print(
            "no snapshot configured: pass --snapshot or set MATHWB_SNAPSHOT",
            file=sys.stderr,
        )
        raise SystemExit(USAGE_ERROR)
    return load_snapshot(path)


def _default_lang(args: argparse.Namespace) -> str:
    if getattr(args, "lang", None):
        return args.lang
    return os.environ.get("MATHWB_DEFAULT_LANG", "en")


def _cmd_extract(args: argparse.Namespace) -> int:
    with open(args.file, encoding="utf-8") as handle:
        wikitext = handle.read()
    occurrences = extract_math_tags(wikitext)
    if _snapshot_path(args) is not None:
        store = _load_store(args)
        records = [
            occurrence_payload(
                linked.occurrence.tex,
                linked.qid,
                linked.occurrence.start,
                linked.occurrence.end,
                linked.error,
            )
            for linked in link_occurrences(occurrences, store)
        ]
    else:
        records = [
            occurrence_payload(occ.tex, occ.qid, occ.start, occ.end)
            for occ in occurrences
        ]
    _emit(json_bytes(records))
    return 0


def _cmd_render(args: argparse.Namespace) -> int:
    ast = parse_tex(args.tex)
    if args.format == "mathml":
        _emit(render_mathml(ast).encode("utf-8"))
    elif args.format == "text":
        _emit(render_alt_text(ast).encode("utf-8"))
    else:
        _emit(json_bytes(ast_payload(ast)))
    return 0


def _cmd_page(args: argparse.Namespace) -> int:
    store = _load_store(args)
    model = build_page_model(args.qid, _default_lang(args), store)
    if args.html:
        _emit(render_page_html(model).encode("utf-8"))
    else:
        _emit(json_bytes(page_model_to_dict(model)))
    return 0


def _cmd_lookup(args: argparse.Namespace) -> int:
    store = _load_store(args)
    qid = store.lookup_by_formula(args.tex)
    if qid is None:
        print("not found", file=sys.stderr)
        return DOMAIN_ERROR
    _emit(json_bytes({"qid": qid}))
    return 0


def _cmd_suggest(args: argparse.Namespace) -> int:
    if args.limit < 1:
        print("limit must be >= 1", file=sys.stderr)
        return USAGE_ERROR
    store = _load_store(args)
    index = build_index(store)
    suggestions = suggest(parse_tex(args.tex), index, args.limit)
    _emit(json_bytes(suggestion_rows(suggestions, store, _default_lang(args))))
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    config = ServiceConfig.from_env()
    if args.snapshot:
        config.snapshot_path = args.snapshot
    if args.port is not None:
        config.port = args.port
    try:
        serve(config)
    except MathWikibaseError as exc:
        print(str(exc), file=sys.stderr)
        return DOMAIN_ERROR
    except OSError as exc:
        print(f"cannot start service: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    store = load_snapshot(args.file)
    _emit(json_bytes({"items": len(store)}))
    return 0


def main() -> None:
    sys.exit(run())
