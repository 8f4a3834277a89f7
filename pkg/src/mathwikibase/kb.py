"""Local knowledge base of items with labels, parts, subclass links and sitelinks.

The store loads a JSON-Lines snapshot, one item per line, and keeps it
in memory.  Reads are lock-free against immutable items; the only write
operation (put_part) is serialized and persists by atomic file
replacement, so readers never observe a partial snapshot.
"""

from __future__ import annotations

import collections
import json
import logging
import os
import re
import tempfile
import threading
from dataclasses import dataclass, field, replace

from mathwikibase.errors import MathWikibaseError
from mathwikibase.nodes import FormulaAst, MathNode, canonical_hash, normalize
from mathwikibase.parser import parse_tex
from mathwikibase.qid import is_qid, qid_sort_key

logger = logging.getLogger(__name__)

LANGUAGE_PATTERN = re.compile(r"^[a-z]{2,8}$")

SUBCLASS_SEARCH_DEPTH = 3


class StoreError(MathWikibaseError):
    """Base class for knowledge-base failures."""


class SnapshotParseError(StoreError):
    code = "snapshot_parse_error"

    def __init__(self, line_number: int, detail: str):
        super().__init__(f"snapshot line {line_number}: {detail}")
        self.line_number = line_number
        self.detail = detail


class DuplicateQid(StoreError):
    code = "duplicate_qid"

    def __init__(self, qid: str):
        super().__init__(f"duplicate item {qid} in snapshot")
        self.qid = qid


class InvalidFragment(StoreError):
    code = "invalid_fragment"

    def __init__(self, qid: str, fragment: str, detail: str = ""):
        message = f"item {qid}: fragment {fragment!r} does not parse"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
        self.qid = qid
        self.fragment = fragment


class InvalidQid(StoreError):
    code = "invalid_qid"

    def __init__(self, value: str):
        super().__init__(f"malformed item id {value!r}")
        self.value = value


class UnknownQid(StoreError):
    code = "unknown_qid"

    def __init__(self, qid: str):
        super().__init__(f"no item {qid} in the knowledge base")
        self.qid = qid


class DuplicatePart(StoreError):
    code = "duplicate_part"

    def __init__(self, qid: str, part_qid: str, fragment: str):
        super().__init__(
            f"item {qid} already links fragment {fragment!r} to {part_qid}"
        )
        self.qid = qid
        self.part_qid = part_qid
        self.fragment = fragment


class NoLabel(StoreError):
    code = "no_label"

    def __init__(self, qid: str):
        super().__init__(f"item {qid} has no labels")
        self.qid = qid


@dataclass(frozen=True)
class PartStatement:
    part_qid: str
    fragment: str


@dataclass(frozen=True)
class SiteLink:
    title: str
    section: str | None = None


@dataclass(frozen=True)
class Item:
    qid: str
    labels: dict[str, str] = field(default_factory=dict)
    descriptions: dict[str, str] = field(default_factory=dict)
    instance_of: tuple[str, ...] = ()
    defining_formula: str | None = None
    parts: tuple[PartStatement, ...] = ()
    subclass_of: tuple[str, ...] = ()
    sitelinks: dict[str, SiteLink] = field(default_factory=dict)


@dataclass(frozen=True)
class ResolvedLink:
    url_path: str
    via: str  # "direct" or "subclass"


def _item_from_dict(raw: dict, line_number: int) -> Item:
    if not isinstance(raw, dict):
        raise SnapshotParseError(line_number, "item is not a JSON object")
    qid = raw.get("qid")
    if not isinstance(qid, str) or not is_qid(qid):
        raise SnapshotParseError(line_number, f"missing or malformed qid: {qid!r}")
    labels = raw.get("labels") or {}
    descriptions = raw.get("descriptions") or {}
    for mapping, what in ((labels, "label"), (descriptions, "description")):
        if not isinstance(mapping, dict):
            raise SnapshotParseError(line_number, f"{what}s must be an object")
        for lang, text in mapping.items():
            if not LANGUAGE_PATTERN.match(lang):
                raise SnapshotParseError(line_number, f"bad language code {lang!r}")
            if not isinstance(text, str):
                raise SnapshotParseError(line_number, f"{what} for {lang!r} is not a string")
    parts = []
    for entry in raw.get("parts") or []:
        part_qid = entry.get("qid")
        fragment = entry.get("fragment")
        if not isinstance(part_qid, str) or not is_qid(part_qid):
            raise SnapshotParseError(line_number, f"bad part qid {part_qid!r}")
        if not isinstance(fragment, str):
            raise SnapshotParseError(line_number, "part fragment is not a string")
        parts.append(PartStatement(part_qid, fragment))
    sitelinks = {}
    for wiki, link in (raw.get("sitelinks") or {}).items():
        title = link.get("title") if isinstance(link, dict) else None
        if not isinstance(title, str) or not title:
            raise SnapshotParseError(line_number, f"sitelink for {wiki!r} lacks a title")
        sitelinks[wiki] = SiteLink(title=title, section=link.get("section"))
    for key in ("instance_of", "subclass_of"):
        for linked in raw.get(key) or []:
            if not isinstance(linked, str) or not is_qid(linked):
                raise SnapshotParseError(line_number, f"bad {key} entry {linked!r}")
    defining = raw.get("defining_formula")
    if defining is not None and not isinstance(defining, str):
        raise SnapshotParseError(line_number, "defining_formula is not a string")
    return Item(
        qid=qid,
        labels=dict(labels),
        descriptions=dict(descriptions),
        instance_of=tuple(raw.get("instance_of") or []),
        defining_formula=defining,
        parts=tuple(parts),
        subclass_of=tuple(raw.get("subclass_of") or []),
        sitelinks=sitelinks,
    )


def _item_to_dict(item: Item) -> dict:
    out: dict = {
        "qid": item.qid,
        "labels": dict(item.labels),
        "descriptions": dict(item.descriptions),
        "instance_of": list(item.instance_of),
    }
    if item.defining_formula is not None:
        out["defining_formula"] = item.defining_formula
    out["parts"] = [
        {"qid": part.part_qid, "fragment": part.fragment} for part in item.parts
    ]
    out["subclass_of"] = list(item.subclass_of)
    sitelinks = {}
    for wiki, link in item.sitelinks.items():
        entry: dict = {"title": link.title}
        if link.section is not None:
            entry["section"] = link.section
        sitelinks[wiki] = entry
    out["sitelinks"] = sitelinks
    return out


class Store:
    """In-memory item store backed by a JSON-Lines snapshot file."""

    def __init__(self, items: list[Item], path: str | None = None):
        self._items: dict[str, Item] = {}
        for item in items:
            if item.qid in self._items:
                raise DuplicateQid(item.qid)
            self._items[item.qid] = item
        self._path = path
        self._write_lock = threading.Lock()
        self._formula_index: dict[int, list[tuple[str, MathNode]]] = {}
        self._validate_and_index()

    def _validate_and_index(self) -> None:
        index: dict[int, list[tuple[str, MathNode]]] = collections.defaultdict(list)
        for item in self._items.values():
            for part in item.parts:
                self._checked_parse(item.qid, part.fragment)
            if item.defining_formula is not None:
                ast = self._checked_parse(item.qid, item.defining_formula)
                index[canonical_hash(ast)].append((item.qid, ast.root))
        for bucket in index.values():
            bucket.sort(key=lambda pair: qid_sort_key(pair[0]))
        self._formula_index = dict(index)

    @staticmethod
    def _checked_parse(qid: str, fragment: str) -> FormulaAst:
        try:
            return parse_tex(fragment)
        except MathWikibaseError as exc:
            raise InvalidFragment(qid, fragment, str(exc)) from exc

    @property
    def path(self) -> str | None:
        return self._path

    def __len__(self) -> int:
        return len(self._items)

    def items(self) -> list[Item]:
        return list(self._items.values())

    def get_item(self, qid: str) -> Item | None:
        return self._items.get(qid)

    def label_for(self, item: Item, lang: str) -> tuple[str, str]:
        """Best label and the language it came from.

        Falls back from the requested language to English, then to the
        lexicographically smallest language the item has.
        """
        if lang in item.labels:
            return item.labels[lang], lang
        if "en" in item.labels:
            return item.labels["en"], "en"
        if not item.labels:
            raise NoLabel(item.qid)
        smallest = min(item.labels)
        return item.labels[smallest], smallest

    def resolve_article_link(self, item: Item, wiki_code: str) -> ResolvedLink | None:
        """Article URL path for an item, directly or through subclasses.

        Without a direct sitelink, a breadth-first search walks
        subclass_of edges up to depth 3, visiting each level in numeric
        qid order, and takes the first item that has a sitelink.
        """
        direct = item.sitelinks.get(wiki_code)
        if direct is not None:
            return ResolvedLink(_article_path(direct), "direct")
        visited = {item.qid}
        frontier = sorted(
            (q for q in item.subclass_of if q not in visited), key=qid_sort_key
        )
        for _ in range(SUBCLASS_SEARCH_DEPTH):
            if not frontier:
                return None
            next_frontier: list[str] = []
            for qid in frontier:
                if qid in visited:
                    continue
                visited.add(qid)
                parent = self._items.get(qid)
                if parent is None:
                    continue
                link = parent.sitelinks.get(wiki_code)
                if link is not None:
                    return ResolvedLink(_article_path(link), "subclass")
                next_frontier.extend(
                    q for q in parent.subclass_of if q not in visited
                )
            frontier = sorted(set(next_frontier), key=qid_sort_key)
        return None

    def lookup_by_formula(self, tex: str) -> str | None:
        """QID whose defining formula equals the query, up to normalization."""
        return self.lookup_by_ast(parse_tex(tex))

    def lookup_by_ast(self, ast: FormulaAst) -> str | None:
        bucket = self._formula_index.get(canonical_hash(ast))
        if not bucket:
            return None
        root = normalize(ast).root
        for qid, candidate_root in bucket:
            if candidate_root == root:
                return qid
        return None

    def put_part(self, qid: str, fragment: str, part_qid: str) -> Item:
        """Append a part annotation and persist the snapshot.

        Duplicate detection compares the normalized fragment hash plus
        the part item, so brace or spacing variants of an existing
        fragment are rejected as duplicates.
        """
        if not is_qid(qid):
            raise InvalidQid(qid)
        if not is_qid(part_qid):
            raise InvalidQid(part_qid)
        with self._write_lock:
            item = self._items.get(qid)
            if item is None:
                raise UnknownQid(qid)
            ast = self._checked_parse(qid, fragment)
            new_key = (canonical_hash(ast), part_qid)
            for part in item.parts:
                existing_key = (canonical_hash(parse_tex(part.fragment)), part.part_qid)
                if existing_key == new_key:
                    raise DuplicatePart(qid, part_qid, fragment)
            updated = replace(
                item, parts=item.parts + (PartStatement(part_qid, fragment),)
            )
            self._items[qid] = updated
            if self._path is not None:
                self.save(self._path)
            return updated

    def save(self, path: str | None = None) -> None:
        """Write the snapshot as JSON Lines via temp file plus rename."""
        target = path or self._path
        if target is None:
            raise StoreError("store has no snapshot path")
        directory = os.path.dirname(os.path.abspath(target))
        payload = "".join(
            json.dumps(_item_to_dict(item), ensure_ascii=False) + "\n"
            for item in self._items.values()
        )
        descriptor, temp_path = tempfile.mkstemp(dir=directory, prefix=".snapshot-")
        try:
            with os.fdopen(descriptor, "w", encoding="utf-8") as handle:
                handle.write(payload)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(temp_path, target)
        except BaseException:
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise

    def merge_item(self, item: Item) -> None:
        """Insert or replace one item (used for remote fetch results)."""
        for part in item.parts:
            self._checked_parse(item.qid, part.fragment)
        if item.defining_formula is not None:
            self._checked_parse(item.qid, item.defining_formula)
        with self._write_lock:
            self._items[item.qid] = item
            self._validate_and_index()


def _article_path(link: SiteLink) -> str:
    path = "/wiki/" + link.title.replace(" ", "_")
    if link.section is not None:
        path += "#" + link.section.replace(" ", "_")
    return path


def load_snapshot(path: str) -> Store:
    """Load and validate a JSON-Lines snapshot file."""
    items: list[Item] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SnapshotParseError(line_number, f"invalid JSON: {exc}") from exc
            item = _item_from_dict(raw, line_number)
            if item.qid in seen:
                raise DuplicateQid(item.qid)
            seen.add(item.qid)
            items.append(item)
    store = Store(items, path=path)
    logger.info("loaded %d items from %s", len(store), path)
    return store
