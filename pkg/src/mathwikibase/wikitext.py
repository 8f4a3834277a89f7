"""Extraction of math tags from wikitext documents.

Finds every ``<math ...>body</math>`` region, collects tag attributes
and the raw body, and can link occurrences to knowledge-base items by
explicit qid attribute or by formula lookup.  Everything outside math
tags is ignored; no other wikitext construct is interpreted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mathwikibase.errors import MathWikibaseError
from mathwikibase.parser import parse_tex
from mathwikibase.qid import is_qid


class ExtractionError(MathWikibaseError):
    """Raised when a math tag cannot be delimited or its qid is invalid."""


class UnclosedMathTag(ExtractionError):
    code = "unclosed_math_tag"

    def __init__(self, offset: int):
        super().__init__(f"math tag at offset {offset} is never closed")
        self.offset = offset


class MalformedQid(ExtractionError):
    code = "malformed_qid"

    def __init__(self, value: str, offset: int):
        super().__init__(f"malformed qid {value!r} at offset {offset}")
        self.value = value
        self.offset = offset


@dataclass(frozen=True)
class FormulaOccurrence:
    """One math tag: its body, optional qid, document span and attributes."""

    tex: str
    qid: str | None
    start: int
    end: int
    attributes: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class LinkedOccurrence:
    """An occurrence after knowledge-base linking.

    qid is the explicit attribute when present, otherwise the formula
    lookup result.  error carries the parse failure message for bodies
    that do not parse; such occurrences never abort the whole batch.
    """

    occurrence: FormulaOccurrence
    qid: str | None
    error: str | None = None


_OPEN = "<math"
_CLOSE = "</math"


def extract_math_tags(wikitext: str) -> list[FormulaOccurrence]:
    """All math tags in document order.

    Tag names match case-insensitively.  Attribute values may be bare,
    single- or double-quoted.  Bodies are taken verbatim; the first
    closing tag wins, so a nested opening tag inside a body makes the
    outer tag unclosed.
    """
    occurrences: list[FormulaOccurrence] = []
    lower = wikitext.lower()
    pos = 0
    while True:
        start = _find_open(lower, pos)
        if start == -1:
            return occurrences
        attributes, after_open, self_closing = _parse_attributes(wikitext, start)
        qid = _checked_qid(attributes, start)
        if self_closing:
            occurrences.append(
                FormulaOccurrence("", qid, start, after_open, attributes)
            )
            pos = after_open
            continue
        close, end = _find_close(wikitext, lower, after_open)
        if close == -1:
            raise UnclosedMathTag(start)
        inner_open = _find_open(lower, after_open)
        if inner_open != -1 and inner_open < close:
            raise UnclosedMathTag(start)
        occurrences.append(
            FormulaOccurrence(wikitext[after_open:close], qid, start, end, attributes)
        )
        pos = end


def _find_open(lower: str, pos: int) -> int:
    """Next "<math" not followed by a name character."""
    while True:
        found = lower.find(_OPEN, pos)
        if found == -1:
            return -1
        after = found + len(_OPEN)
        if after < len(lower) and (lower[after].isalnum() or lower[after] in "-_"):
            pos = after
            continue
        return found


def _find_close(wikitext: str, lower: str, pos: int) -> tuple[int, int]:
    """First real closing tag at or after pos: (tag start, offset past ">").

    Sequences like "</mathx" are body text, not closing tags; the search
    skips them.  Returns (-1, -1) when no closing tag exists.
    """
    while True:
        close = lower.find(_CLOSE, pos)
        if close == -1:
            return -1, -1
        i = close + len(_CLOSE)
        while i < len(wikitext) and wikitext[i].isspace():
            i += 1
        if i < len(wikitext) and wikitext[i] == ">":
            return close, i + 1
        pos = close + 1


def _parse_attributes(wikitext: str, start: int) -> tuple[dict[str, str], int, bool]:
    """Attribute map, offset past the opening ">", self-closing flag."""
    i = start + len(_OPEN)
    n = len(wikitext)
    attributes: dict[str, str] = {}
    while True:
        while i < n and wikitext[i].isspace():
            i += 1
        if i >= n:
            raise UnclosedMathTag(start)
        ch = wikitext[i]
        if ch == ">":
            return attributes, i + 1, False
        if ch == "/" and i + 1 < n and wikitext[i + 1] == ">":
            return attributes, i + 2, True
        name_start = i
        while i < n and wikitext[i] not in "=/>" and not wikitext[i].isspace():
            i += 1
        name = wikitext[name_start:i].lower()
        if not name:
            # stray "/" not followed by ">": skip it
            i += 1
            continue
        while i < n and wikitext[i].isspace():
            i += 1
        if i < n and wikitext[i] == "=":
            i += 1
            while i < n and wikitext[i].isspace():
                i += 1
            if i < n and wikitext[i] in "\"'":
                quote = wikitext[i]
                i += 1
                value_start = i
                while i < n and wikitext[i] != quote:
                    i += 1
                if i >= n:
                    raise UnclosedMathTag(start)
                attributes[name] = wikitext[value_start:i]
                i += 1
            else:
                value_start = i
                while i < n and wikitext[i] != ">" and not wikitext[i].isspace():
                    i += 1
                value = wikitext[value_start:i]
                if value.endswith("/") and i < n and wikitext[i] == ">":
                    value = value[:-1]
                    i -= 1
                attributes[name] = value
        else:
            attributes[name] = ""


def _checked_qid(attributes: dict[str, str], offset: int) -> str | None:
    value = attributes.get("qid")
    if value is None:
        return None
    if not is_qid(value):
        raise MalformedQid(value, offset)
    return value


def link_occurrences(occurrences: list[FormulaOccurrence], store) -> list[LinkedOccurrence]:
    """Attach item ids to occurrences.

    An explicit qid attribute always wins.  Otherwise the body is parsed
    and looked up by formula; parse failures are recorded per occurrence.
    """
    linked: list[LinkedOccurrence] = []
    for occurrence in occurrences:
        if occurrence.qid is not None:
            linked.append(LinkedOccurrence(occurrence, occurrence.qid))
            continue
        try:
            ast = parse_tex(occurrence.tex)
        except MathWikibaseError as exc:
            linked.append(LinkedOccurrence(occurrence, None, error=str(exc)))
            continue
        linked.append(LinkedOccurrence(occurrence, store.lookup_by_ast(ast)))
    return linked
