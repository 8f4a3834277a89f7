import http.server
import json
import pathlib
import threading

import pytest

from mathwikibase.remote import (
    MappingError,
    NetworkError,
    NotFound,
    RemoteConfig,
    fetch_remote,
    map_item,
)

SNAPSHOT = pathlib.Path(__file__).parent / "data" / "snapshot.jsonl"


def _raw_item(qid):
    for line in SNAPSHOT.read_text(encoding="utf-8").splitlines():
        if line.strip() and json.loads(line)["qid"] == qid:
            return json.loads(line)
    raise KeyError(qid)


def _wire_format(raw):
    """Rebuild the remote JSON shape from a snapshot line."""
    statements = {}
    for linked in raw.get("instance_of") or []:
        statements.setdefault("P31", []).append({"value": {"content": linked}})
    for linked in raw.get("subclass_of") or []:
        statements.setdefault("P279", []).append({"value": {"content": linked}})
    if raw.get("defining_formula") is not None:
        statements["P2534"] = [{"value": {"content": raw["defining_formula"]}}]
    for part in raw.get("parts") or []:
        statements.setdefault("P527", []).append(
            {
                "value": {"content": part["qid"]},
                "qualifiers": [
                    {
                        "property": {"id": "P2534"},
                        "value": {"content": part["fragment"]},
                    }
                ],
            }
        )
    return {
        "labels": raw.get("labels") or {},
        "descriptions": raw.get("descriptions") or {},
        "statements": statements,
        "sitelinks": raw.get("sitelinks") or {},
    }


class _Handler(http.server.BaseHTTPRequestHandler):
    routes: dict = {}

    def do_GET(self):
        status, body = self.routes.get(self.path, (404, b"{}"))
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture(scope="module")
def remote_url():
    raw = _raw_item("Q35875")
    _Handler.routes = {
        "/entities/items/Q35875": (
            200,
            json.dumps(_wire_format(raw)).encode("utf-8"),
        ),
        "/entities/items/Q500": (200, b"this is not json"),
        "/entities/items/Q501": (200, b'{"statements": {}}'),
        "/entities/items/Q502": (500, b"{}"),
    }
    server = http.server.ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


def test_fetch_matches_local_item(remote_url, store):
    fetched = fetch_remote("Q35875", RemoteConfig(base_url=remote_url))
    assert fetched == store.get_item("Q35875")


def test_fetch_unknown_item(remote_url):
    with pytest.raises(NotFound) as caught:
        fetch_remote("Q404404", RemoteConfig(base_url=remote_url))
    assert caught.value.qid == "Q404404"


def test_fetch_server_error(remote_url):
    with pytest.raises(NetworkError):
        fetch_remote("Q502", RemoteConfig(base_url=remote_url))


def test_fetch_non_json_body(remote_url):
    with pytest.raises(MappingError):
        fetch_remote("Q500", RemoteConfig(base_url=remote_url))


def test_fetch_missing_labels(remote_url):
    with pytest.raises(MappingError):
        fetch_remote("Q501", RemoteConfig(base_url=remote_url))


def test_fetch_unreachable_endpoint():
    config = RemoteConfig(base_url="http://127.0.0.1:1", timeout=2.0)
    with pytest.raises(NetworkError):
        fetch_remote("Q1", config)


_CONFIG = RemoteConfig(base_url="http://unused.example")


def test_map_minimal_item():
    item = map_item("Q9", {"labels": {"en": "nine"}}, _CONFIG)
    assert item.qid == "Q9"
    assert item.labels == {"en": "nine"}
    assert item.descriptions == {}
    assert item.parts == ()
    assert item.defining_formula is None


def test_map_part_without_fragment_qualifier_is_skipped():
    data = {
        "labels": {"en": "x"},
        "statements": {
            "P527": [
                {"value": {"content": "Q1"}},
                {
                    "value": {"content": "Q2"},
                    "qualifiers": [
                        {"property": {"id": "P1234"}, "value": {"content": "y"}}
                    ],
                },
                {
                    "value": {"content": "Q3"},
                    "qualifiers": [
                        {"property": {"id": "P2534"}, "value": {"content": "z"}}
                    ],
                },
            ]
        },
    }
    item = map_item("Q9", data, _CONFIG)
    assert [(part.part_qid, part.fragment) for part in item.parts] == [("Q3", "z")]


def test_map_unrelated_properties_are_ignored():
    data = {
        "labels": {"en": "x"},
        "statements": {"P9999": [{"value": {"content": "whatever"}}]},
    }
    assert map_item("Q9", data, _CONFIG).parts == ()


def test_map_sitelinks_with_section():
    data = {
        "labels": {"en": "x"},
        "sitelinks": {"enwiki": {"title": "Some page", "section": "Some part"}},
    }
    item = map_item("Q9", data, _CONFIG)
    assert item.sitelinks["enwiki"].title == "Some page"
    assert item.sitelinks["enwiki"].section == "Some part"


def test_map_malformed_statements():
    bad_statements = [
        {"P31": [{"value": {}}]},
        {"P31": [{"value": {"content": "not-a-qid"}}]},
        {"P527": [{"value": {"content": "also bad"}}]},
        {"P2534": [{"value": {"content": 5}}]},
    ]
    for statements in bad_statements:
        with pytest.raises(MappingError):
            map_item("Q9", {"labels": {}, "statements": statements}, _CONFIG)


def test_map_honors_configured_property_ids():
    config = RemoteConfig(
        base_url="http://unused.example",
        has_part="P1",
        defining_formula="P2",
    )
    data = {
        "labels": {"en": "x"},
        "statements": {
            "P2": [{"value": {"content": "a+b"}}],
            "P1": [
                {
                    "value": {"content": "Q4"},
                    "qualifiers": [
                        {"property": {"id": "P2"}, "value": {"content": "a"}}
                    ],
                }
            ],
        },
    }
    item = map_item("Q9", data, config)
    assert item.defining_formula == "a+b"
    assert [(part.part_qid, part.fragment) for part in item.parts] == [("Q4", "a")]
