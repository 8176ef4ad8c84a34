from __future__ import annotations

from pathlib import Path

import pytest

from citetree.ingest import ingest_corpus
from citetree.store import Snapshot

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# Expected dense citation matrix for the mutual_quartet fixture, rows are
# the cited author, columns the citing author, order A, B, C, D.
QUARTET_MATRIX = [
    [10, 7, 0, 15],
    [21, 19, 0, 1],
    [15, 0, 3, 12],
    [0, 17, 0, 1],
]


def author_id(snapshot: Snapshot, name: str) -> int:
    matches = [a.id for a in snapshot.authors if a.name == name]
    assert len(matches) == 1, f"expected exactly one author named {name!r}"
    return matches[0]


@pytest.fixture(scope="session")
def chain_snapshot() -> Snapshot:
    snapshot, _ = ingest_corpus(FIXTURES / "lineage_chain" / "authors.jsonl")
    return snapshot


@pytest.fixture(scope="session")
def quartet_snapshot() -> Snapshot:
    snapshot, _ = ingest_corpus(
        FIXTURES / "mutual_quartet" / "authors.jsonl",
        author_pairs_file=FIXTURES / "mutual_quartet" / "author_pairs.tsv",
    )
    return snapshot


@pytest.fixture(scope="session")
def demo_snapshot() -> Snapshot:
    snapshot, _ = ingest_corpus(
        FIXTURES / "demo" / "authors.jsonl",
        article_file=FIXTURES / "demo" / "articles.jsonl",
        citation_file=FIXTURES / "demo" / "citations.txt",
    )
    return snapshot


# ---------------------------------------------------------------------------
# Independent oracles, kept deliberately naive: they scan the raw edge
# list every time instead of using the snapshot's adjacency.
# ---------------------------------------------------------------------------


def oracle_level_sets(parent_of, owner: int):
    """Children/grandchildren/parents/grandparents by direct edge scans."""
    children = {v for (u, v) in parent_of if u == owner}
    grandchildren = {w for (u, w) in parent_of if u in children}
    parents = {u for (u, v) in parent_of if v == owner}
    grandparents = {u for (u, v) in parent_of if v in parents}
    return children, grandchildren, parents, grandparents


def oracle_siblings(parent_of, owner: int):
    parents = {u for (u, v) in parent_of if v == owner}
    siblings = {v for (u, v) in parent_of if u in parents}
    siblings.discard(owner)
    return siblings


def oracle_copious_pairs(dense, min_each: int):
    """Brute force over all unordered pairs of a dense matrix."""
    n = len(dense)
    pairs = set()
    for i in range(n):
        for j in range(i + 1, n):
            if dense[i][j] >= min_each and dense[j][i] >= min_each:
                pairs.add((i, j))
    return pairs


def oracle_quartiles(values):
    """Sort-and-interpolate quartiles, written out longhand."""
    ordered = sorted(values)
    n = len(ordered)

    def at(q: float) -> float:
        position = q * (n - 1)
        low = int(position)
        high = min(low + 1, n - 1)
        weight = position - low
        return ordered[low] * (1 - weight) + ordered[high] * weight

    return at(0.25), at(0.75)
