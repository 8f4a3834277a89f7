"""Wire payload builders shared by the HTTP service and the CLI.

Both front ends emit payloads through these helpers so that a CLI call
and the matching endpoint produce identical bytes.
"""

from __future__ import annotations

import json

from mathwikibase.kb import Item, NoLabel, Store
from mathwikibase.nodes import (
    FormulaAst,
    Fraction,
    Identifier,
    MathNode,
    Number,
    Operator,
    Row,
    Script,
    Sqrt,
    Text,
    canonical_hash,
    canonical_tex,
    children,
)
from mathwikibase.suggest import Suggestion


def json_bytes(payload: object) -> bytes:
    """Compact UTF-8 JSON, byte-identical to the service's responses."""
    return json.dumps(
        payload,
        ensure_ascii=False,
        allow_nan=False,
        indent=None,
        separators=(",", ":"),
    ).encode("utf-8")


def ast_payload(ast: FormulaAst) -> dict:
    """AST wire format.

    Child arrays follow the same enumeration as match paths (Script
    children are base, then sub if present, then sup if present), so a
    consumer can address nodes by path without extra bookkeeping.
    """
    return {
        "tex": ast.source_tex,
        "canonical_tex": canonical_tex(ast),
        "hash": f"{canonical_hash(ast):016x}",
        "root": _node_payload(ast.root),
    }


def _node_payload(node: MathNode) -> dict:
    out: dict = {"tex": canonical_tex(node)}
    if isinstance(node, Row):
        out["kind"] = "row"
    elif isinstance(node, Identifier):
        out["kind"] = "identifier"
        out["name"] = node.name
        out["variant"] = node.variant
    elif isinstance(node, Number):
        out["kind"] = "number"
        out["literal"] = node.literal
    elif isinstance(node, Operator):
        out["kind"] = "operator"
        out["symbol"] = node.symbol
    elif isinstance(node, Fraction):
        out["kind"] = "fraction"
    elif isinstance(node, Sqrt):
        out["kind"] = "sqrt"
    elif isinstance(node, Script):
        out["kind"] = "script"
        out["has_sub"] = node.sub is not None
        out["has_sup"] = node.sup is not None
    elif isinstance(node, Text):
        out["kind"] = "text"
        out["content"] = node.content
    else:
        raise TypeError(f"unknown node type: {type(node).__name__}")
    child_nodes = children(node)
    if child_nodes:
        out["children"] = [_node_payload(child) for child in child_nodes]
    return out


def suggestion_rows(
    suggestions: list[Suggestion], store: Store, lang: str
) -> list[dict]:
    """Suggestions plus a display label resolved with the usual fallback."""
    rows = []
    for suggestion in suggestions:
        rows.append(
            {
                "qid": suggestion.qid,
                "score": suggestion.score,
                "basis": suggestion.basis,
                "label": _label_or_none(store, suggestion.qid, lang),
            }
        )
    return rows


def _label_or_none(store: Store, qid: str, lang: str) -> str | None:
    item = store.get_item(qid)
    if item is None:
        return None
    try:
        label, _ = store.label_for(item, lang)
    except NoLabel:
        return None
    return label


def parts_payload(item: Item) -> list[dict]:
    return [
        {"qid": part.part_qid, "fragment": part.fragment} for part in item.parts
    ]


def occurrence_payload(
    tex: str, qid: str | None, start: int, end: int, error: str | None = None
) -> dict:
    out: dict = {"tex": tex, "qid": qid, "start": start, "end": end}
    if error is not None:
        out["error"] = error
    return out


def health_payload(store: Store) -> dict:
    return {"status": "ok", "items": len(store)}
