"""Assembly of the per-formula page: item facts, rendered formula, parts.

build_page_model gathers everything the page shows into plain data;
render_page_html projects that data into a self-contained document.
Keeping the model JSON-friendly makes the page testable without a
browser.
"""

from __future__ import annotations

import html
from dataclasses import dataclass
from typing import Callable

from mathwikibase.kb import (
    Item,
    NoLabel,
    ResolvedLink,
    Store,
    StoreError,
    UnknownQid,
)
from mathwikibase.mathml import render_alt_text, render_mathml
from mathwikibase.matching import MatchPosition, annotate_formula
from mathwikibase.nodes import canonical_tex
from mathwikibase.parser import parse_tex


class NoDefiningFormula(StoreError):
    code = "no_defining_formula"

    def __init__(self, qid: str):
        super().__init__(f"item {qid} has no defining formula")
        self.qid = qid


@dataclass(frozen=True)
class PartRow:
    part_qid: str
    fragment_tex: str
    fragment_mathml: str
    label: str | None
    description: str | None
    article: ResolvedLink | None
    matches: tuple[MatchPosition, ...]


@dataclass(frozen=True)
class PageModel:
    qid: str
    lang: str
    formula_tex: str
    formula_mathml: str
    formula_alt_text: str
    label: str
    label_lang: str
    description: str | None
    description_lang: str | None
    type_label: str | None
    parts: tuple[PartRow, ...]


def build_page_model(
    qid: str,
    lang: str,
    store: Store,
    fetch: Callable[[str], Item | None] | None = None,
) -> PageModel:
    """Collect everything the formula page shows for one item.

    The main item comes from the store, or through the fetch callback
    on a local miss when one is configured.  Part and type items are
    always resolved locally.
    """
    item = store.get_item(qid)
    if item is None and fetch is not None:
        item = fetch(qid)
    if item is None:
        raise UnknownQid(qid)
    if item.defining_formula is None:
        raise NoDefiningFormula(qid)

    formula_ast = parse_tex(item.defining_formula)
    label, label_lang = store.label_for(item, lang)
    description, description_lang = _optional_text(item.descriptions, lang)
    type_label = _type_label(item, lang, store)

    rows = []
    for part, matches in annotate_formula(formula_ast, list(item.parts)):
        fragment_ast = parse_tex(part.fragment)
        part_item = store.get_item(part.part_qid)
        part_label = part_description = None
        article = None
        if part_item is not None:
            part_label = _label_or_none(store, part_item, lang)
            part_description, _ = _optional_text(part_item.descriptions, lang)
            article = _article(store, part_item, lang)
        rows.append(
            PartRow(
                part_qid=part.part_qid,
                fragment_tex=canonical_tex(fragment_ast),
                fragment_mathml=render_mathml(fragment_ast),
                label=part_label,
                description=part_description,
                article=article,
                matches=tuple(matches),
            )
        )

    return PageModel(
        qid=item.qid,
        lang=lang,
        formula_tex=item.defining_formula,
        formula_mathml=render_mathml(formula_ast),
        formula_alt_text=render_alt_text(formula_ast),
        label=label,
        label_lang=label_lang,
        description=description,
        description_lang=description_lang,
        type_label=type_label,
        parts=tuple(rows),
    )


def _optional_text(texts: dict[str, str], lang: str) -> tuple[str | None, str | None]:
    """Label-style fallback over a language map that may be empty."""
    if lang in texts:
        return texts[lang], lang
    if "en" in texts:
        return texts["en"], "en"
    if not texts:
        return None, None
    smallest = min(texts)
    return texts[smallest], smallest


def _label_or_none(store: Store, item: Item, lang: str) -> str | None:
    try:
        label, _ = store.label_for(item, lang)
    except NoLabel:
        return None
    return label


def _type_label(item: Item, lang: str, store: Store) -> str | None:
    if not item.instance_of:
        return None
    type_item = store.get_item(item.instance_of[0])
    if type_item is None:
        return None
    return _label_or_none(store, type_item, lang)


def _article(store: Store, item: Item, lang: str) -> ResolvedLink | None:
    """Article link on the language's wiki, falling back to enwiki."""
    link = store.resolve_article_link(item, f"{lang}wiki")
    if link is None and lang != "en":
        link = store.resolve_article_link(item, "enwiki")
    return link


def page_model_to_dict(model: PageModel) -> dict:
    return {
        "qid": model.qid,
        "lang": model.lang,
        "formula_tex": model.formula_tex,
        "formula_mathml": model.formula_mathml,
        "formula_alt_text": model.formula_alt_text,
        "label": model.label,
        "label_lang": model.label_lang,
        "description": model.description,
        "description_lang": model.description_lang,
        "type_label": model.type_label,
        "parts": [
            {
                "part_qid": row.part_qid,
                "fragment_tex": row.fragment_tex,
                "fragment_mathml": row.fragment_mathml,
                "label": row.label,
                "description": row.description,
                "article": (
                    {"url_path": row.article.url_path, "via": row.article.via}
                    if row.article is not None
                    else None
                ),
                "matches": [
                    {"path": list(match.path), "length": match.length}
                    for match in row.matches
                ],
            }
            for row in model.parts
        ],
    }


def render_page_html(model: PageModel) -> str:
    """Self-contained HTML document for one page model."""
    mathml = model.formula_mathml.replace(
        "<math>", '<math alttext="' + html.escape(model.formula_alt_text, quote=True) + '">', 1
    )
    pieces = [
        "<!DOCTYPE html>",
        f'<html lang="{html.escape(model.label_lang, quote=True)}">',
        "<head>",
        '<meta charset="utf-8">',
        f"<title>{html.escape(model.label)}</title>",
        "<style>",
        "body{font-family:sans-serif;margin:2rem auto;max-width:50rem;padding:0 1rem}",
        "table{border-collapse:collapse;width:100%}",
        "td,th{border:1px solid #a2a9b1;padding:.4rem .6rem;text-align:left}",
        "math{font-size:1.25rem}",
        "</style>",
        "</head>",
        "<body>",
        f"<h1>{html.escape(model.label)}</h1>",
    ]
    if model.description is not None:
        pieces.append(f'<p class="description">{html.escape(model.description)}</p>')
    if model.type_label is not None:
        pieces.append(f'<p class="type">Type: {html.escape(model.type_label)}</p>')
    pieces.append(f'<figure class="formula">{mathml}</figure>')
    pieces.append("<h2>Parts</h2>")
    if model.parts:
        pieces.append("<table>")
        pieces.append("<tr><th>Element</th><th>Item</th><th>Description</th></tr>")
        for row in model.parts:
            name = row.label if row.label is not None else row.part_qid
            if row.article is not None:
                cell = (
                    f'<a href="{html.escape(row.article.url_path, quote=True)}">'
                    f"{html.escape(name)}</a>"
                )
            else:
                cell = html.escape(name)
            description = html.escape(row.description) if row.description else ""
            pieces.append(
                f"<tr><td>{row.fragment_mathml}</td><td>{cell}</td>"
                f"<td>{description}</td></tr>"
            )
        pieces.append("</table>")
    else:
        pieces.append('<p class="empty">No part annotations yet.</p>')
    pieces.append("</body>")
    pieces.append("</html>")
    return "\n".join(pieces)
