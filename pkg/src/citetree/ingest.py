"""Corpus ingestion: file parsing, author name resolution, snapshot assembly.

Input formats (grammar and golden examples in the README):

- authors file: one JSON object per line with a required ``name`` and
  optional ``advisors`` (list of author references), ``thesis``,
  ``institute``, ``country``, ``domain``, ``year``, ``external_key``.
- articles file: one JSON object per line: ``key``, ``title``,
  ``authors`` (list of author references).
- citations file: two whitespace-separated columns per line,
  citing article key then cited article key. Blank lines and lines
  starting with ``#`` are skipped.
- author pairs file (fixture route): three tab-separated columns,
  cited author reference, citing author reference, count. Populates the
  citation matrix directly, without an article-level corpus.

An author reference is an external key when one matches exactly,
otherwise a name that must resolve to exactly one author.

Ingestion is all or nothing per corpus: any parse or resolution problem
raises before a snapshot exists, with the file position where it helps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from citetree.errors import (
    AmbiguousAuthorError,
    DanglingReferenceError,
    MissingFieldError,
    ParseError,
)
from citetree.model import (
    ArticleRecord,
    AuthorRecord,
    MatrixConvention,
    ResolutionCase,
    normalize_name,
    resolution_case,
)
from citetree.store import DEFAULT_MAX_ADVISORS, Snapshot, SnapshotBuilder


@dataclass(frozen=True)
class RawAuthorEntry:
    """One parsed author row, before name resolution."""

    name: str
    advisor_names: tuple[str, ...] = ()
    thesis: str = ""
    institute: str = ""
    country: str = ""
    domain: str = ""
    year: int | None = None
    external_key: str | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawArticleEntry:
    key: str
    title: str
    author_refs: tuple[str, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawCitation:
    """One citation row, normalized to (cited, citing) key order."""

    cited_key: str
    citing_key: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class RawAuthorPair:
    """One pair-count row, normalized to the cited-rows convention."""

    cited_ref: str
    citing_ref: str
    count: int
    line: int = field(default=0, compare=False)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_AUTHOR_FIELDS = {
    "name",
    "advisors",
    "thesis",
    "institute",
    "country",
    "domain",
    "year",
    "external_key",
}
_ARTICLE_FIELDS = {"key", "title", "authors"}


def _data_lines(path: str | Path):
    text = Path(path).read_text(encoding="utf-8")
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield number, stripped


def _json_record(path: str, number: int, line: str, allowed: set[str]) -> dict:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(path, number, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(path, number, "record must be a JSON object")
    unknown = set(raw) - allowed
    if unknown:
        raise ParseError(path, number, f"unknown fields: {', '.join(sorted(unknown))}")
    return raw


def _string_field(path: str, number: int, raw: dict, name: str, default: str = "") -> str:
    value = raw.get(name, default)
    if not isinstance(value, str):
        raise ParseError(path, number, f"field {name!r} must be a string")
    return value


def _string_list_field(path: str, number: int, raw: dict, name: str) -> tuple[str, ...]:
    value = raw.get(name, [])
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(path, number, f"field {name!r} must be a list of strings")
    return tuple(value)


def parse_authors(path: str | Path) -> list[RawAuthorEntry]:
    entries = []
    path_str = str(path)
    for number, line in _data_lines(path):
        raw = _json_record(path_str, number, line, _AUTHOR_FIELDS)
        if "name" not in raw:
            raise MissingFieldError(path_str, number, "author record is missing 'name'")
        name = _string_field(path_str, number, raw, "name")
        if not normalize_name(name):
            raise MissingFieldError(path_str, number, "author name is empty")
        year = raw.get("year")
        if year is not None and not isinstance(year, int):
            raise ParseError(path_str, number, "field 'year' must be an integer")
        external_key = raw.get("external_key")
        if external_key is not None and not isinstance(external_key, str):
            raise ParseError(path_str, number, "field 'external_key' must be a string")
        entries.append(
            RawAuthorEntry(
                name=name.strip(),
                advisor_names=_string_list_field(path_str, number, raw, "advisors"),
                thesis=_string_field(path_str, number, raw, "thesis"),
                institute=_string_field(path_str, number, raw, "institute"),
                country=_string_field(path_str, number, raw, "country"),
                domain=_string_field(path_str, number, raw, "domain"),
                year=year,
                external_key=external_key,
                line=number,
            )
        )
    return entries


def parse_articles(path: str | Path) -> list[RawArticleEntry]:
    articles = []
    seen_keys: dict[str, int] = {}
    path_str = str(path)
    for number, line in _data_lines(path):
        raw = _json_record(path_str, number, line, _ARTICLE_FIELDS)
        for required in ("key", "title", "authors"):
            if required not in raw:
                raise MissingFieldError(
                    path_str, number, f"article record is missing {required!r}"
                )
        key = _string_field(path_str, number, raw, "key")
        if not key:
            raise ParseError(path_str, number, "article key is empty")
        if key in seen_keys:
            raise ParseError(
                path_str, number, f"duplicate article key {key!r} (first at line {seen_keys[key]})"
            )
        seen_keys[key] = number
        authors = _string_list_field(path_str, number, raw, "authors")
        if not authors:
            raise ParseError(path_str, number, "article has no authors")
        articles.append(
            RawArticleEntry(
                key=key,
                title=_string_field(path_str, number, raw, "title"),
                author_refs=authors,
                line=number,
            )
        )
    return articles


def parse_citations(path: str | Path) -> list[RawCitation]:
    """Citation rows as (cited, citing) pairs; file columns are citing first."""
    citations = []
    path_str = str(path)
    for number, line in _data_lines(path):
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(
                path_str, number, f"expected 2 columns (citing cited), got {len(fields)}"
            )
        citing, cited = fields
        if citing == cited:
            raise ParseError(path_str, number, f"article {citing!r} cannot cite itself")
        citations.append(RawCitation(cited_key=cited, citing_key=citing, line=number))
    return citations


def parse_corpus(
    author_file: str | Path, article_file: str | Path, citation_file: str | Path
) -> tuple[list[RawAuthorEntry], list[RawArticleEntry], list[RawCitation]]:
    return (
        parse_authors(author_file),
        parse_articles(article_file),
        parse_citations(citation_file),
    )


def parse_author_pairs(
    path: str | Path, convention: MatrixConvention = MatrixConvention.CITED_ROWS
) -> list[RawAuthorPair]:
    """Pair-count rows, tab-separated: cited author, citing author, count.

    With ``convention=CITING_ROWS`` the file's first two columns are read
    in the transposed order (citing first).
    """
    pairs = []
    path_str = str(path)
    for number, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise ParseError(
                path_str, number, f"expected 3 tab-separated columns, got {len(fields)}"
            )
        first, second, count_text = (f.strip() for f in fields)
        if not first or not second:
            raise MissingFieldError(path_str, number, "author reference is empty")
        try:
            count = int(count_text)
        except ValueError as exc:
            raise ParseError(path_str, number, f"count {count_text!r} is not an integer") from exc
        if count < 0:
            raise ParseError(path_str, number, "count must be non-negative")
        if convention is MatrixConvention.CITING_ROWS:
            first, second = second, first
        pairs.append(RawAuthorPair(cited_ref=first, citing_ref=second, count=count, line=number))
    return pairs


# ---------------------------------------------------------------------------
# Name resolution
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolvedAuthor:
    """One disambiguated author entity with advisor references resolved."""

    id: int
    name: str
    advisor_ids: tuple[int, ...]
    thesis: str
    institute: str
    country: str
    domain: str
    year: int | None
    external_key: str | None
    case: ResolutionCase


@dataclass
class Resolution:
    """Outcome of :func:`resolve_authors`: the entity table plus the
    entry-to-entity assignment, and reference lookup for articles and
    pair files."""

    entities: tuple[ResolvedAuthor, ...]
    assignments: dict[RawAuthorEntry, tuple[int, ResolutionCase]]
    _key_index: dict[str, int]
    _name_index: dict[str, list[int]]

    def resolve_ref(self, text: str) -> int:
        """Resolve an author reference: exact external key first, then a
        name that matches exactly one author."""
        if text in self._key_index:
            return self._key_index[text]
        matches = self._name_index.get(normalize_name(text), [])
        if not matches:
            raise DanglingReferenceError(f"unknown author reference {text!r}")
        if len(matches) > 1:
            raise AmbiguousAuthorError(
                f"author reference {text!r} matches {len(matches)} authors; "
                "use an external key"
            )
        return matches[0]

    def case_counts(self) -> dict[str, int]:
        counts = {case.value: 0 for case in ResolutionCase}
        for entity in self.entities:
            counts[entity.case.value] += 1
        return counts


def _disambiguator(entry: RawAuthorEntry):
    # Precedence: an external key wins outright; otherwise institute and
    # year; the advisor set only breaks ties when both of those are blank.
    if entry.external_key is not None:
        return ("key", entry.external_key)
    if entry.institute.strip() or entry.year is not None:
        return ("institute-year", normalize_name(entry.institute), entry.year)
    return ("advisors", frozenset(normalize_name(a) for a in entry.advisor_names))


def _first_nonempty(values: Iterable[str]) -> str:
    for value in values:
        if value.strip():
            return value
    return ""


def resolve_authors(
    entries: list[RawAuthorEntry], max_advisors: int = DEFAULT_MAX_ADVISORS
) -> Resolution:
    """Split or merge homonym entries into author entities and tag each
    with its resolution case.

    Entries sharing a normalized name are one entity only when their
    disambiguators match exactly; merged entries pool their advisors, and
    a pooled advisor list beyond ``max_advisors`` is reported as ambiguous
    rather than silently merged. Deterministic: ids follow first
    appearance order.
    """
    cluster_ids: dict[tuple, int] = {}
    cluster_entries: list[list[RawAuthorEntry]] = []
    for entry in entries:
        cluster_key = (normalize_name(entry.name), _disambiguator(entry))
        if cluster_key not in cluster_ids:
            cluster_ids[cluster_key] = len(cluster_entries)
            cluster_entries.append([])
        cluster_entries[cluster_ids[cluster_key]].append(entry)

    name_index: dict[str, list[int]] = {}
    for (name, _), entity_id in cluster_ids.items():
        name_index.setdefault(name, []).append(entity_id)
    shared_names = {name for name, ids in name_index.items() if len(ids) > 1}

    key_index: dict[str, int] = {}
    merged_advisor_names: list[tuple[str, ...]] = []
    for entity_id, members in enumerate(cluster_entries):
        advisors: dict[str, str] = {}
        for entry in members:
            for advisor in entry.advisor_names:
                advisors.setdefault(normalize_name(advisor), advisor)
        if len(advisors) > max_advisors and len(members) > 1:
            lines = ", ".join(str(e.line) for e in members)
            raise AmbiguousAuthorError(
                f"entries for {members[0].name!r} (lines {lines}) agree on every "
                f"disambiguator but pool {len(advisors)} advisors "
                f"(maximum {max_advisors}); refusing to merge"
            )
        merged_advisor_names.append(tuple(advisors.values()))
        key = members[0].external_key
        if key is not None:
            if key in key_index:
                raise AmbiguousAuthorError(
                    f"external key {key!r} is used by more than one author"
                )
            key_index[key] = entity_id

    # Advisor references resolve against the finished entity table, so a
    # later homonym split is visible to an earlier entry.
    provisional = Resolution(
        entities=(), assignments={}, _key_index=key_index, _name_index=name_index
    )
    entities = []
    for entity_id, members in enumerate(cluster_entries):
        first = members[0]
        advisor_ids = tuple(
            dict.fromkeys(provisional.resolve_ref(a) for a in merged_advisor_names[entity_id])
        )
        case = resolution_case(
            normalize_name(first.name) in shared_names, len(advisor_ids)
        )
        entities.append(
            ResolvedAuthor(
                id=entity_id,
                name=first.name,
                advisor_ids=advisor_ids,
                thesis=_first_nonempty(e.thesis for e in members),
                institute=_first_nonempty(e.institute for e in members),
                country=_first_nonempty(e.country for e in members),
                domain=_first_nonempty(e.domain for e in members),
                year=next((e.year for e in members if e.year is not None), None),
                external_key=first.external_key,
                case=case,
            )
        )

    assignments = {}
    for entry in entries:
        entity_id = cluster_ids[(normalize_name(entry.name), _disambiguator(entry))]
        assignments[entry] = (entity_id, entities[entity_id].case)
    return Resolution(
        entities=tuple(entities),
        assignments=assignments,
        _key_index=key_index,
        _name_index=name_index,
    )


# ---------------------------------------------------------------------------
# Snapshot assembly
# ---------------------------------------------------------------------------


def build_snapshot(
    resolution: Resolution,
    articles: Iterable[RawArticleEntry] = (),
    citations: Iterable[RawCitation] = (),
    author_pairs: Iterable[RawAuthorPair] | None = None,
    max_advisors: int = DEFAULT_MAX_ADVISORS,
) -> Snapshot:
    """Assemble an immutable snapshot from resolved authors plus either an
    article-level corpus or direct pair counts.

    The pair route gives every author a pair of placeholder articles
    (earlier and later work) and encodes each count as that many citation
    edges between them, so the citation matrix always derives from article
    edges, whichever route fed it.
    """
    articles = list(articles)
    if author_pairs is not None and articles:
        raise ValueError("provide either articles/citations or author pairs, not both")

    builder = SnapshotBuilder(max_advisors=max_advisors)
    for entity in resolution.entities:
        builder.add_author(
            AuthorRecord(
                id=entity.id,
                name=entity.name,
                advisors={advisor: 0 for advisor in entity.advisor_ids},
                thesis=entity.thesis,
                institute=entity.institute,
                country=entity.country,
                domain=entity.domain,
                year=entity.year,
            )
        )

    if author_pairs is not None:
        for entity in resolution.entities:
            builder.add_article(
                ArticleRecord(
                    id=2 * entity.id,
                    title=f"{entity.name} (earlier work)",
                    author_ids=(entity.id,),
                )
            )
            builder.add_article(
                ArticleRecord(
                    id=2 * entity.id + 1,
                    title=f"{entity.name} (later work)",
                    author_ids=(entity.id,),
                )
            )
        for pair in author_pairs:
            cited = resolution.resolve_ref(pair.cited_ref)
            citing = resolution.resolve_ref(pair.citing_ref)
            builder.add_citation(2 * cited, 2 * citing + 1, pair.count)
        return builder.build()

    article_ids: dict[str, int] = {}
    for index, article in enumerate(articles):
        article_ids[article.key] = index
        builder.add_article(
            ArticleRecord(
                id=index,
                title=article.title,
                author_ids=tuple(
                    dict.fromkeys(resolution.resolve_ref(ref) for ref in article.author_refs)
                ),
            )
        )
    for citation in citations:
        for key in (citation.cited_key, citation.citing_key):
            if key not in article_ids:
                raise DanglingReferenceError(
                    f"citation at line {citation.line} references unknown article {key!r}"
                )
        builder.add_citation(article_ids[citation.cited_key], article_ids[citation.citing_key])
    return builder.build()


def ingest_corpus(
    author_file: str | Path,
    article_file: str | Path | None = None,
    citation_file: str | Path | None = None,
    author_pairs_file: str | Path | None = None,
    convention: MatrixConvention = MatrixConvention.CITED_ROWS,
    max_advisors: int = DEFAULT_MAX_ADVISORS,
) -> tuple[Snapshot, Resolution]:
    """Parse, resolve and assemble in one step; the CLI's ingest path."""
    entries = parse_authors(author_file)
    resolution = resolve_authors(entries, max_advisors=max_advisors)
    if author_pairs_file is not None:
        pairs = parse_author_pairs(author_pairs_file, convention=convention)
        snapshot = build_snapshot(
            resolution, author_pairs=pairs, max_advisors=max_advisors
        )
        return snapshot, resolution
    articles = parse_articles(article_file) if article_file is not None else []
    citations = parse_citations(citation_file) if citation_file is not None else []
    snapshot = build_snapshot(
        resolution, articles, citations, max_advisors=max_advisors
    )
    return snapshot, resolution


# ---------------------------------------------------------------------------
# Corpus export (round-trip support)
# ---------------------------------------------------------------------------


def export_corpus(snapshot: Snapshot, out_dir: str | Path) -> None:
    """Write a snapshot back out as authors/articles/citations input files.

    Every author gets ``external_key = str(id)`` and all references use
    those keys, so re-ingesting reproduces the graph under the identity id
    mapping even when display names collide.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    author_lines = []
    for record in snapshot.authors:
        payload = {
            "name": record.name,
            "advisors": [str(a) for a in sorted(record.advisors)],
            "thesis": record.thesis,
            "institute": record.institute,
            "country": record.country,
            "domain": record.domain,
            "external_key": str(record.id),
        }
        if record.year is not None:
            payload["year"] = record.year
        author_lines.append(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    (out / "authors.jsonl").write_text("\n".join(author_lines) + "\n", encoding="utf-8")

    article_lines = [
        json.dumps(
            {
                "key": str(article.id),
                "title": article.title,
                "authors": [str(a) for a in article.author_ids],
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        for article in snapshot.articles
    ]
    (out / "articles.jsonl").write_text(
        "\n".join(article_lines) + ("\n" if article_lines else ""), encoding="utf-8"
    )

    citation_lines = [f"{citing} {cited}" for cited, citing in snapshot.cited_by]
    (out / "citations.txt").write_text(
        "\n".join(citation_lines) + ("\n" if citation_lines else ""), encoding="utf-8"
    )
