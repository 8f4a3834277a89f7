"""Ranked item suggestions for a selected formula element.

The ranking is transparent corpus statistics over the store: how often
the element was annotated as each item, plus a bonus when the element's
canonical form equals one of an item's label tokens.
"""

from __future__ import annotations

import collections
import re
from dataclasses import dataclass

from mathwikibase.kb import Store
from mathwikibase.nodes import FormulaAst, canonical_hash, canonical_tex, normalize
from mathwikibase.parser import parse_tex
from mathwikibase.qid import qid_sort_key

BASIS_EXACT = "exact"
BASIS_LABEL = "label"
BASIS_BOTH = "both"

EXACT_WEIGHT = 2
LABEL_WEIGHT = 1

_TOKEN_SPLIT = re.compile(r"[\s\-]+")


@dataclass(frozen=True)
class SuggestionIndex:
    # fragment canonical-hash -> qid -> annotation count
    fragment_counts: dict[int, dict[str, int]]
    # lowercased label token -> qids labeled with it
    label_tokens: dict[str, set[str]]


@dataclass(frozen=True)
class Suggestion:
    qid: str
    score: float
    basis: str


def build_index(store: Store) -> SuggestionIndex:
    """One deterministic pass over all parts and labels.

    Part annotations pointing at items absent from the store are skipped
    so that every indexed qid resolves.
    """
    counts: dict[int, dict[str, int]] = collections.defaultdict(
        lambda: collections.defaultdict(int)
    )
    tokens: dict[str, set[str]] = collections.defaultdict(set)
    for item in store.items():
        for part in item.parts:
            if store.get_item(part.part_qid) is None:
                continue
            key = canonical_hash(parse_tex(part.fragment))
            counts[key][part.part_qid] += 1
        for label in item.labels.values():
            for token in _TOKEN_SPLIT.split(label.lower()):
                if token:
                    tokens[token].add(item.qid)
    return SuggestionIndex(
        fragment_counts={key: dict(value) for key, value in counts.items()},
        label_tokens=dict(tokens),
    )


def suggest(
    element: FormulaAst,
    index: SuggestionIndex,
    limit: int = 10,
    exact_weight: float = EXACT_WEIGHT,
    label_weight: float = LABEL_WEIGHT,
) -> list[Suggestion]:
    """Ranked candidates for an element, highest score first.

    score = exact_weight * annotation count + label_weight * label hit.
    Zero-scoring items are dropped; ties order by numeric qid.
    """
    exact_counts = index.fragment_counts.get(canonical_hash(element), {})
    token = canonical_tex(normalize(element)).lower()
    label_hits = index.label_tokens.get(token, set())
    suggestions = []
    for qid in set(exact_counts) | label_hits:
        exact = exact_counts.get(qid, 0)
        labeled = 1 if qid in label_hits else 0
        score = exact_weight * exact + label_weight * labeled
        if score <= 0:
            continue
        if exact and labeled:
            basis = BASIS_BOTH
        elif exact:
            basis = BASIS_EXACT
        else:
            basis = BASIS_LABEL
        suggestions.append(Suggestion(qid=qid, score=score, basis=basis))
    suggestions.sort(key=lambda s: (-s.score, qid_sort_key(s.qid)))
    return suggestions[:limit]
