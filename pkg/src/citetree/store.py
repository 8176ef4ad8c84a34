"""Embedded property-graph store with file persistence.

A snapshot is assembled once through :class:`SnapshotBuilder` and is
immutable afterwards: any number of readers may query it concurrently,
and re-ingestion produces a new snapshot rather than mutating one in
place. ``snapshot_save``/``snapshot_load`` round-trip a snapshot through
a versioned text format documented in the README.
"""

from __future__ import annotations

import dataclasses
import json
from collections import Counter, deque
from pathlib import Path

from citetree.errors import (
    CycleError,
    DanglingReferenceError,
    DuplicateIdError,
    FormatError,
    InvariantError,
)
from citetree.model import (
    ArticleRecord,
    AuthorRecord,
    CitationMatrix,
    ResolutionCase,
    normalize_name,
    resolution_case,
)

SNAPSHOT_MAGIC = "citetree-snapshot"
SNAPSHOT_VERSION = 1
DEFAULT_MAX_ADVISORS = 2


class Snapshot:
    """Immutable corpus snapshot: authors, articles and the three relations.

    Advisor edges run advisor to advisee and are exposed both as the
    ``parent_of`` pair list and as per-author ``children``/``parents``
    adjacency tuples. The adjacency tuples are what the lineage metrics
    walk, so local-network queries never re-traverse raw edge lists.
    """

    def __init__(
        self,
        authors: tuple[AuthorRecord, ...],
        articles: tuple[ArticleRecord, ...],
        parent_of: tuple[tuple[int, int], ...],
        cited_by: tuple[tuple[int, int], ...],
        max_advisors: int,
    ) -> None:
        self.authors = authors
        self.articles = articles
        self.parent_of = parent_of
        self.cited_by = cited_by
        self.max_advisors = max_advisors

        children: list[list[int]] = [[] for _ in authors]
        parents: list[list[int]] = [[] for _ in authors]
        for advisor, advisee in parent_of:
            children[advisor].append(advisee)
            parents[advisee].append(advisor)
        self.children: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(c)) for c in children
        )
        self.parents: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(p)) for p in parents
        )

        self.normalized_names: tuple[str, ...] = tuple(
            normalize_name(a.name) for a in authors
        )
        shared = {n for n, k in Counter(self.normalized_names).items() if k > 1}
        self.resolution_cases: tuple[ResolutionCase, ...] = tuple(
            resolution_case(self.normalized_names[a.id] in shared, len(self.parents[a.id]))
            for a in authors
        )
        self._matrix: CitationMatrix | None = None

    @property
    def author_count(self) -> int:
        return len(self.authors)

    @property
    def article_count(self) -> int:
        return len(self.articles)

    @property
    def authored_by(self) -> tuple[tuple[int, int], ...]:
        """AUTHORED_BY edges as (article id, author id) pairs."""
        return tuple(
            (article.id, author) for article in self.articles for author in article.author_ids
        )

    def has_author(self, author_id: int) -> bool:
        return 0 <= author_id < len(self.authors)

    def matrix(self) -> CitationMatrix:
        """The all-author citation matrix, derived once and cached."""
        if self._matrix is None:
            self._matrix = derive_matrix(self)
        return self._matrix


def derive_matrix(snapshot: Snapshot) -> CitationMatrix:
    """Derive the all-author citation matrix from the article citation edges.

    Every (cited article, citing article) edge contributes one count for
    each pair of a cited-article author (row) and a citing-article author
    (column). Deterministic for a given snapshot.
    """
    matrix = CitationMatrix(snapshot.author_count)
    articles = snapshot.articles
    for cited_article, citing_article in snapshot.cited_by:
        for cited_author in articles[cited_article].author_ids:
            for citing_author in articles[citing_article].author_ids:
                matrix.add(cited_author, citing_author)
    return matrix


class SnapshotBuilder:
    """Single-writer assembly phase that produces an immutable snapshot.

    Records may reference authors or articles declared later in the same
    batch; all references are checked in :meth:`build`. Neighbor citation
    counts and ``total_citations`` on author records are derived from the
    citation edges at build time, so the stored Level 1/Level 2 maps always
    agree with the matrix.
    """

    def __init__(self, max_advisors: int = DEFAULT_MAX_ADVISORS) -> None:
        if max_advisors < 1:
            raise ValueError("max_advisors must be at least 1")
        self.max_advisors = max_advisors
        self._authors: list[AuthorRecord] = []
        self._articles: list[ArticleRecord] = []
        self._citations: list[tuple[int, int]] = []

    def add_author(self, record: AuthorRecord) -> int:
        """Insert an author; returns the assigned dense id.

        ``record.id`` must be the next dense id. Declaring the author as
        its own advisor or advisee is a length-1 cycle and fails here;
        longer cycles are caught in :meth:`build`.
        """
        next_id = len(self._authors)
        if 0 <= record.id < next_id:
            raise DuplicateIdError(f"author id {record.id} is already taken")
        if record.id != next_id:
            raise ValueError(
                f"author ids must be dense: expected {next_id}, got {record.id}"
            )
        if not normalize_name(record.name):
            raise ValueError("author name must be non-empty")
        if record.id in record.advisors or record.id in record.advisees:
            raise CycleError(f"author {record.id} cannot be their own advisor")
        self._authors.append(record)
        return record.id

    def add_article(self, record: ArticleRecord) -> int:
        next_id = len(self._articles)
        if 0 <= record.id < next_id:
            raise DuplicateIdError(f"article id {record.id} is already taken")
        if record.id != next_id:
            raise ValueError(
                f"article ids must be dense: expected {next_id}, got {record.id}"
            )
        self._articles.append(record)
        return record.id

    def add_citation(self, cited_article: int, citing_article: int, count: int = 1) -> None:
        """Record that ``citing_article`` cites ``cited_article`` ``count`` times.

        Citations are a multiset: repeated calls accumulate.
        """
        if cited_article == citing_article:
            raise InvariantError(f"article {cited_article} cannot cite itself")
        if count < 0:
            raise ValueError("citation count must be non-negative")
        self._citations.extend((cited_article, citing_article) for _ in range(count))

    def build(self) -> Snapshot:
        n = len(self._authors)

        edges: set[tuple[int, int]] = set()
        for record in self._authors:
            for advisor in record.advisors:
                self._check_author_ref(advisor, n, f"advisor of author {record.id}")
                edges.add((advisor, record.id))
            for advisee in record.advisees:
                self._check_author_ref(advisee, n, f"advisee of author {record.id}")
                edges.add((record.id, advisee))
        parent_of = tuple(sorted(edges))

        parents: list[list[int]] = [[] for _ in range(n)]
        children: list[list[int]] = [[] for _ in range(n)]
        for advisor, advisee in parent_of:
            parents[advisee].append(advisor)
            children[advisor].append(advisee)
        for record in self._authors:
            if len(parents[record.id]) > self.max_advisors:
                raise InvariantError(
                    f"author {record.id} has {len(parents[record.id])} advisors, "
                    f"maximum is {self.max_advisors}"
                )
        self._check_acyclic(n, parent_of, children)

        for article in self._articles:
            for author in article.author_ids:
                self._check_author_ref(author, n, f"author of article {article.id}")
        article_count = len(self._articles)
        for cited, citing in self._citations:
            for article in (cited, citing):
                if not 0 <= article < article_count:
                    raise DanglingReferenceError(
                        f"citation references unknown article {article}"
                    )
        cited_by = tuple(sorted(self._citations))

        snapshot = Snapshot(
            authors=tuple(self._authors),
            articles=tuple(self._articles),
            parent_of=parent_of,
            cited_by=cited_by,
            max_advisors=self.max_advisors,
        )
        matrix = snapshot.matrix()
        finished = tuple(
            dataclasses.replace(
                record,
                advisors={p: matrix.get(record.id, p) for p in snapshot.parents[record.id]},
                advisees={c: matrix.get(record.id, c) for c in snapshot.children[record.id]},
                total_citations=matrix.row_sum(record.id, include_self=True),
            )
            for record in self._authors
        )
        snapshot.authors = finished
        return snapshot

    @staticmethod
    def _check_author_ref(author_id: int, n: int, context: str) -> None:
        if not 0 <= author_id < n:
            raise DanglingReferenceError(f"{context} references unknown author {author_id}")

    @staticmethod
    def _check_acyclic(
        n: int, parent_of: tuple[tuple[int, int], ...], children: list[list[int]]
    ) -> None:
        # Kahn's algorithm on advisor edges; leftover nodes form a cycle.
        in_degree = [0] * n
        for _, advisee in parent_of:
            in_degree[advisee] += 1
        queue = deque(i for i in range(n) if in_degree[i] == 0)
        seen = 0
        while queue:
            node = queue.popleft()
            seen += 1
            for child in children[node]:
                in_degree[child] -= 1
                if in_degree[child] == 0:
                    queue.append(child)
        if seen != n:
            trapped = sorted(i for i in range(n) if in_degree[i] > 0)
            raise CycleError(f"advisor edges contain a cycle through authors {trapped}")


# ---------------------------------------------------------------------------
# Persistence: versioned text format with length-prefixed sections
# ---------------------------------------------------------------------------


def _author_to_json(record: AuthorRecord) -> str:
    payload = {
        "id": record.id,
        "name": record.name,
        "advisors": {str(k): v for k, v in sorted(record.advisors.items())},
        "advisees": {str(k): v for k, v in sorted(record.advisees.items())},
        "thesis": record.thesis,
        "institute": record.institute,
        "country": record.country,
        "domain": record.domain,
        "total_citations": record.total_citations,
        "year": record.year,
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _article_to_json(record: ArticleRecord) -> str:
    payload = {"id": record.id, "title": record.title, "authors": list(record.author_ids)}
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def snapshot_save(snapshot: Snapshot, path: str | Path) -> None:
    """Write a snapshot to ``path``. Output is canonical: saving the same
    snapshot twice produces byte-identical files."""
    lines = [f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}", f"max_advisors {snapshot.max_advisors}"]
    lines.append(f"authors {snapshot.author_count}")
    lines.extend(_author_to_json(a) for a in snapshot.authors)
    lines.append(f"articles {snapshot.article_count}")
    lines.extend(_article_to_json(a) for a in snapshot.articles)
    grouped = Counter(snapshot.cited_by)
    lines.append(f"citations {len(grouped)}")
    lines.extend(
        f"{cited} {citing} {count}" for (cited, citing), count in sorted(grouped.items())
    )
    lines.append("end")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


class _SectionReader:
    def __init__(self, path: str | Path) -> None:
        self.path = str(path)
        self.lines = Path(path).read_text(encoding="utf-8").splitlines()
        self.pos = 0

    def next_line(self) -> str:
        if self.pos >= len(self.lines):
            raise FormatError(f"{self.path}: truncated snapshot file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def section(self, name: str) -> int:
        header = self.next_line().split()
        if len(header) != 2 or header[0] != name:
            raise FormatError(f"{self.path}: expected '{name} <count>' section header")
        try:
            count = int(header[1])
        except ValueError as exc:
            raise FormatError(f"{self.path}: bad count in '{name}' section") from exc
        if count < 0:
            raise FormatError(f"{self.path}: negative count in '{name}' section")
        return count


def snapshot_load(path: str | Path) -> Snapshot:
    """Load a snapshot written by :func:`snapshot_save`.

    Raises :class:`FormatError` for an unknown version tag or a corrupt
    file; lets the OSError propagate if the file cannot be read.
    """
    reader = _SectionReader(path)
    header = reader.next_line().split()
    if len(header) != 2 or header[0] != SNAPSHOT_MAGIC:
        raise FormatError(f"{reader.path}: not a {SNAPSHOT_MAGIC} file")
    if header[1] != str(SNAPSHOT_VERSION):
        raise FormatError(
            f"{reader.path}: unsupported snapshot version {header[1]!r} "
            f"(expected {SNAPSHOT_VERSION})"
        )
    limit = reader.next_line().split()
    if len(limit) != 2 or limit[0] != "max_advisors":
        raise FormatError(f"{reader.path}: expected 'max_advisors <n>' line")

    try:
        builder = SnapshotBuilder(max_advisors=int(limit[1]))
        for _ in range(reader.section("authors")):
            raw = json.loads(reader.next_line())
            builder.add_author(
                AuthorRecord(
                    id=raw["id"],
                    name=raw["name"],
                    advisors={int(k): v for k, v in raw["advisors"].items()},
                    advisees={int(k): v for k, v in raw["advisees"].items()},
                    thesis=raw["thesis"],
                    institute=raw["institute"],
                    country=raw["country"],
                    domain=raw["domain"],
                    total_citations=raw["total_citations"],
                    year=raw["year"],
                )
            )
        for _ in range(reader.section("articles")):
            raw = json.loads(reader.next_line())
            builder.add_article(
                ArticleRecord(id=raw["id"], title=raw["title"], author_ids=tuple(raw["authors"]))
            )
        for _ in range(reader.section("citations")):
            fields = reader.next_line().split()
            if len(fields) != 3:
                raise FormatError(f"{reader.path}: citation lines need 3 columns")
            builder.add_citation(int(fields[0]), int(fields[1]), int(fields[2]))
        if reader.next_line() != "end":
            raise FormatError(f"{reader.path}: missing 'end' marker")
        if reader.pos != len(reader.lines):
            raise FormatError(f"{reader.path}: trailing data after 'end'")
        return builder.build()
    except FormatError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{reader.path}: corrupt snapshot ({exc})") from exc
    except (CycleError, DanglingReferenceError, DuplicateIdError, InvariantError) as exc:
        raise FormatError(f"{reader.path}: inconsistent snapshot ({exc})") from exc
