from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from citetree.metrics import local_network
from citetree.service import ServiceConfig, ServiceState, create_app
from citetree.store import snapshot_save

from conftest import author_id


@pytest.fixture(scope="module")
def demo_client(demo_snapshot):
    state = ServiceState.from_snapshot(demo_snapshot)
    return TestClient(create_app(state))


@pytest.fixture(scope="module")
def quartet_client(quartet_snapshot):
    config = ServiceConfig(threshold_lower=0.5, threshold_upper=0.8)
    state = ServiceState.from_snapshot(quartet_snapshot, config)
    return TestClient(create_app(state))


@pytest.fixture(scope="module")
def chain_client(chain_snapshot):
    state = ServiceState.from_snapshot(chain_snapshot)
    return TestClient(create_app(state))


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


def test_search_finds_single_author(demo_client):
    rows = demo_client.get("/authors", params={"name": "joseph cook"}).json()
    assert len(rows) == 1
    assert rows[0]["name"] == "Joseph Cook"
    assert rows[0]["institute"] == "Lakeside Institute"
    assert rows[0]["case_tag"] == "UniqueName"


def test_search_is_substring_and_case_insensitive(demo_client):
    rows = demo_client.get("/authors", params={"name": "COOK"}).json()
    assert [r["name"] for r in rows] == ["Joseph Cook"]


def test_empty_query_is_rejected(demo_client):
    assert demo_client.get("/authors", params={"name": "  "}).status_code == 400
    assert demo_client.get("/authors").status_code == 400


def test_no_match_returns_empty_list(demo_client):
    response = demo_client.get("/authors", params={"name": "zzz-nobody"})
    assert response.status_code == 200
    assert response.json() == []


def test_homonyms_return_separate_rows(demo_client):
    rows = demo_client.get("/authors", params={"name": "j. smith"}).json()
    assert len(rows) == 2
    assert len({r["id"] for r in rows}) == 2
    assert all(r["case_tag"] == "MultipleName" for r in rows)
    assert {r["institute"] for r in rows} == {"Highland University", "Lakeside Institute"}


def test_search_limit(demo_client):
    rows = demo_client.get("/authors", params={"name": "a", "limit": 2}).json()
    assert len(rows) == 2


# ---------------------------------------------------------------------------
# Profile
# ---------------------------------------------------------------------------


def test_profile_fields(demo_client, demo_snapshot):
    joseph = author_id(demo_snapshot, "Joseph Cook")
    profile = demo_client.get(f"/authors/{joseph}").json()
    assert profile == {
        "name": "Joseph Cook",
        "thesis": "Adaptive Query Planning",
        "institute": "Lakeside Institute",
        "country": "USA",
        "domain": "databases",
        "total_citations": demo_snapshot.authors[joseph].total_citations,
        "year": 2005,
    }


def test_profile_keeps_empty_fields(quartet_client):
    profile = quartet_client.get("/authors/0").json()
    assert profile["thesis"] == ""
    assert profile["country"] == ""


def test_profile_unknown_author(demo_client):
    assert demo_client.get("/authors/999").status_code == 404


# ---------------------------------------------------------------------------
# Network payload
# ---------------------------------------------------------------------------


def test_chain_network_payload(chain_client, chain_snapshot):
    a, a1, p, a2, a4 = (
        author_id(chain_snapshot, name) for name in ("A", "A1", "P", "A2", "A4")
    )
    payload = chain_client.get(f"/authors/{a}/network").json()
    assert [n["label"] for n in payload["nodes"]] == ["A", "A1", "P", "A2", "A4"]
    assert [n["level"] for n in payload["nodes"]] == [0, 1, -1, 2, -2]
    assert payload["nodes"][0]["id"] == str(a)
    edges = payload["edges"]
    assert {"from": str(a), "to": str(a1)} in edges
    assert {"from": str(p), "to": str(a)} in edges
    expected = sorted([(a, a1), (p, a), (a1, a2), (a4, p)])
    assert edges == [{"from": str(u), "to": str(v)} for u, v in expected]


def test_isolated_author_network(chain_client, chain_snapshot):
    a3 = author_id(chain_snapshot, "A3")
    payload = chain_client.get(f"/authors/{a3}/network").json()
    assert payload["nodes"] == [{"id": str(a3), "label": "A3", "level": 0}]
    assert payload["edges"] == []


def test_network_unknown_author(chain_client):
    assert chain_client.get("/authors/99/network").status_code == 404


def test_network_node_count_matches_local_network(chain_client, chain_snapshot):
    for owner in range(chain_snapshot.author_count):
        payload = chain_client.get(f"/authors/{owner}/network").json()
        net = local_network(chain_snapshot, owner)
        assert len(payload["nodes"]) == 1 + len(net.children) + len(
            net.grandchildren
        ) + len(net.parents) + len(net.grandparents)
        node_ids = {n["id"] for n in payload["nodes"]}
        assert len(node_ids) == len(payload["nodes"])
        for edge in payload["edges"]:
            assert edge["from"] in node_ids
            assert edge["to"] in node_ids


def test_payloads_are_stable_across_requests(quartet_client):
    first = quartet_client.get("/authors/0/network")
    second = quartet_client.get("/authors/0/network")
    assert first.content == second.content
    first = quartet_client.get("/authors/0/community")
    second = quartet_client.get("/authors/0/community")
    assert first.content == second.content


# ---------------------------------------------------------------------------
# Community report
# ---------------------------------------------------------------------------


def test_quartet_community_for_author_a(quartet_client, quartet_snapshot):
    a = author_id(quartet_snapshot, "A")
    b = author_id(quartet_snapshot, "B")
    payload = quartet_client.get(f"/authors/{a}/community").json()
    assert payload["total_citations"] == 22
    assert payload["genealogical_citations"] == 22
    assert payload["non_genealogical"] == 0
    assert payload["ratio"] == 1.0
    assert payload["verdict"] == "LineageDependent"
    assert payload["copious_partners"] == [b]
    assert payload["threshold"] == {"lower": 0.5, "upper": 0.8}


def test_uncited_author_community_is_null_ratio(chain_client):
    payload = chain_client.get("/authors/0/community").json()
    assert payload["total_citations"] == 0
    assert payload["ratio"] is None
    assert payload["verdict"] == "Independent"


def test_community_unknown_author(quartet_client):
    assert quartet_client.get("/authors/42/community").status_code == 404


# ---------------------------------------------------------------------------
# No-corpus state and reload
# ---------------------------------------------------------------------------


def test_endpoints_answer_503_before_ingest():
    client = TestClient(create_app())
    assert client.get("/authors", params={"name": "x"}).status_code == 503
    assert client.get("/authors/0").status_code == 503
    assert client.get("/authors/0/network").status_code == 503
    assert client.get("/authors/0/community").status_code == 503


def test_admin_reload_swaps_snapshot(tmp_path, quartet_snapshot):
    path = tmp_path / "quartet.snap"
    snapshot_save(quartet_snapshot, path)
    client = TestClient(create_app())
    assert client.get("/authors/0").status_code == 503
    response = client.post("/admin/reload", json={"snapshot": str(path)})
    assert response.status_code == 200
    assert response.json()["authors"] == 4
    assert client.get("/authors/0").status_code == 200


def test_admin_reload_rejects_bad_path(tmp_path):
    client = TestClient(create_app())
    response = client.post("/admin/reload", json={"snapshot": str(tmp_path / "missing")})
    assert response.status_code == 400
    response = client.post("/admin/reload", json={"other": 1})
    assert response.status_code == 400
