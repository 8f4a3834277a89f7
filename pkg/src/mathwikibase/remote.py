"""Client for a remote Wikibase-compatible item endpoint.

Fetches one item as JSON from ``{base}/entities/items/{qid}`` and maps
the response onto the local Item model.  Which properties carry the
has-part, defining-formula, instance-of and subclass-of statements is
configuration, defaulting to the well-known Wikidata property ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import requests

from mathwikibase.errors import MathWikibaseError
from mathwikibase.kb import Item, PartStatement, SiteLink
from mathwikibase.qid import is_qid


@dataclass(frozen=True)
class RemoteConfig:
    base_url: str
    has_part: str = "P527"
    defining_formula: str = "P2534"
    instance_of: str = "P31"
    subclass_of: str = "P279"
    timeout: float = 10.0


class RemoteError(MathWikibaseError):
    """Base class for remote fetch failures."""


class NetworkError(RemoteError):
    code = "network_error"


class NotFound(RemoteError):
    code = "remote_not_found"

    def __init__(self, qid: str):
        super().__init__(f"remote endpoint has no item {qid}")
        self.qid = qid


class MappingError(RemoteError):
    code = "remote_mapping_error"

    def __init__(self, detail: str):
        super().__init__(f"cannot map remote response: {detail}")
        self.detail = detail


def fetch_remote(qid: str, config: RemoteConfig) -> Item:
    """Fetch and map one item from the remote endpoint."""
    url = config.base_url.rstrip("/") + "/entities/items/" + qid
    try:
        response = requests.get(url, timeout=config.timeout)
    except requests.RequestException as exc:
        raise NetworkError(f"cannot reach {url}: {exc}") from exc
    if response.status_code == 404:
        raise NotFound(qid)
    if response.status_code != 200:
        raise NetworkError(f"{url} answered status {response.status_code}")
    try:
        data = response.json()
    except ValueError as exc:
        raise MappingError(f"response is not JSON: {exc}") from exc
    return map_item(qid, data, config)


def map_item(qid: str, data: dict, config: RemoteConfig) -> Item:
    """Map a Wikibase-style JSON item onto the local model."""
    if not isinstance(data, dict):
        raise MappingError("response is not an object")
    labels = data.get("labels")
    if not isinstance(labels, dict):
        raise MappingError("missing labels object")
    descriptions = data.get("descriptions")
    if descriptions is None:
        descriptions = {}
    if not isinstance(descriptions, dict):
        raise MappingError("descriptions is not an object")
    statements = data.get("statements") or {}
    if not isinstance(statements, dict):
        raise MappingError("statements is not an object")

    instance_of = _qid_values(statements, config.instance_of)
    subclass_of = _qid_values(statements, config.subclass_of)
    defining = _first_string_value(statements, config.defining_formula)
    parts = _parts(statements, config)
    sitelinks = _sitelinks(data.get("sitelinks"))
    return Item(
        qid=qid,
        labels={lang: str(text) for lang, text in labels.items()},
        descriptions={lang: str(text) for lang, text in descriptions.items()},
        instance_of=instance_of,
        defining_formula=defining,
        parts=parts,
        subclass_of=subclass_of,
        sitelinks=sitelinks,
    )


def _statement_content(statement: dict) -> object:
    value = statement.get("value")
    if not isinstance(value, dict) or "content" not in value:
        raise MappingError("statement without value content")
    return value["content"]


def _qid_values(statements: dict, property_id: str) -> tuple[str, ...]:
    values = []
    for statement in statements.get(property_id) or []:
        content = _statement_content(statement)
        if not isinstance(content, str) or not is_qid(content):
            raise MappingError(f"{property_id} value {content!r} is not an item id")
        values.append(content)
    return tuple(values)


def _first_string_value(statements: dict, property_id: str) -> str | None:
    for statement in statements.get(property_id) or []:
        content = _statement_content(statement)
        if not isinstance(content, str):
            raise MappingError(f"{property_id} value is not a string")
        return content
    return None


def _parts(statements: dict, config: RemoteConfig) -> tuple[PartStatement, ...]:
    """has-part statements whose fragment rides in a qualifier.

    Statements without a fragment qualifier are plain composition facts
    with no formula position and are skipped.
    """
    parts = []
    for statement in statements.get(config.has_part) or []:
        content = _statement_content(statement)
        if not isinstance(content, str) or not is_qid(content):
            raise MappingError(f"has-part value {content!r} is not an item id")
        fragment = None
        for qualifier in statement.get("qualifiers") or []:
            prop = qualifier.get("property")
            if isinstance(prop, dict) and prop.get("id") == config.defining_formula:
                value = qualifier.get("value")
                if not isinstance(value, dict) or "content" not in value:
                    raise MappingError("fragment qualifier without content")
                fragment = value["content"]
                break
        if fragment is None:
            continue
        if not isinstance(fragment, str):
            raise MappingError("fragment qualifier is not a string")
        parts.append(PartStatement(part_qid=content, fragment=fragment))
    return tuple(parts)


def _sitelinks(raw: object) -> dict[str, SiteLink]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise MappingError("sitelinks is not an object")
    sitelinks = {}
    for wiki, link in raw.items():
        if not isinstance(link, dict) or not isinstance(link.get("title"), str):
            raise MappingError(f"sitelink for {wiki!r} lacks a title")
        sitelinks[wiki] = SiteLink(title=link["title"], section=link.get("section"))
    return sitelinks
