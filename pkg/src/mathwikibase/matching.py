"""Structural search for annotation fragments inside formula trees.

A fragment matches a formula node when the trees are structurally equal,
or, for fragments that are rows, when the fragment's children equal a
contiguous proper sub-run of some row's children.  Matching is purely
structural: no commutativity and no arithmetic equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass

from mathwikibase.errors import MathWikibaseError
from mathwikibase.kb import InvalidFragment, PartStatement
from mathwikibase.nodes import FormulaAst, MathNode, Row, children, normalize
from mathwikibase.parser import parse_tex


@dataclass(frozen=True)
class MatchPosition:
    """Where a fragment occurs.

    path addresses the matched node.  For a row-run match of length > 1
    the path addresses the first covered child, so path[:-1] addresses
    the row and path[-1] + length never exceeds its child count.
    """

    path: tuple[int, ...]
    length: int = 1


def match_fragment(fragment: FormulaAst | MathNode, formula: FormulaAst | MathNode) -> list[MatchPosition]:
    """All positions of fragment inside formula, in depth-first order.

    Overlapping matches are all reported.  A row fragment equal to an
    entire row of the formula counts as a whole-subtree match, not as a
    run, so it is reported once.
    """
    fragment_root = _rooted(fragment)
    formula_root = _rooted(formula)
    positions: list[MatchPosition] = []
    _search(fragment_root, formula_root, (), positions)
    positions.sort(key=lambda match: (match.path, match.length))
    return positions


def _rooted(value: FormulaAst | MathNode) -> MathNode:
    if isinstance(value, FormulaAst):
        return normalize(value).root
    return normalize(FormulaAst(root=value)).root


def _search(
    fragment: MathNode,
    node: MathNode,
    path: tuple[int, ...],
    positions: list[MatchPosition],
) -> None:
    if fragment == node:
        positions.append(MatchPosition(path, 1))
    if isinstance(node, Row) and isinstance(fragment, Row):
        run = fragment.children
        width = len(run)
        # proper runs only; the full-width case is subtree equality above
        if 2 <= width < len(node.children):
            for start in range(len(node.children) - width + 1):
                if node.children[start : start + width] == run:
                    positions.append(MatchPosition(path + (start,), width))
    for index, child in enumerate(children(node)):
        _search(fragment, child, path + (index,), positions)


def annotate_formula(
    formula: FormulaAst, parts: list[PartStatement]
) -> list[tuple[PartStatement, list[MatchPosition]]]:
    """Match every part's fragment; parts without occurrences keep an
    empty list so callers can still display them."""
    annotated: list[tuple[PartStatement, list[MatchPosition]]] = []
    for part in parts:
        try:
            fragment = parse_tex(part.fragment)
        except MathWikibaseError as exc:
            raise InvalidFragment(part.part_qid, part.fragment, str(exc)) from exc
        annotated.append((part, match_fragment(fragment, formula)))
    return annotated
