"""Synthetic corpus generator with planted citation cartels.

Produces advisor forests with background citation noise plus K planted
cartels, each an advisor cohort (the advisor and their advisees) whose
members cite each other far above the background rate. Deterministic for
a given seed, both in memory and on disk, so generated corpora double as
fixtures for detection and scaling tests. The cartel planting model
(uniform advisor attachment, per-article background citations, an
intensity multiplier inside cohorts) is this artifact's own.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from citetree.model import ArticleRecord, AuthorRecord
from citetree.store import Snapshot, SnapshotBuilder

_COUNTRIES = ("India", "USA", "Germany", "Brazil", "Japan", "Kenya")
_DOMAINS = (
    "machine learning",
    "databases",
    "theory",
    "networks",
    "graphics",
    "security",
)
_INSTITUTES = (
    "North Ridge University",
    "Lakeside Institute",
    "Central Polytechnic",
    "Harbor College",
    "Highland University",
)


@dataclass
class CorpusPlan:
    """Everything the generator decided, before materialization."""

    seed: int
    author_names: list[str]
    advisors: list[list[int]]
    institutes: list[str]
    countries: list[str]
    domains: list[str]
    years: list[int]
    articles: list[tuple[str, list[int]]]
    author_articles: list[list[int]]
    citations: list[tuple[int, int]]
    cartels: list[list[int]]


def generate_plan(
    n_authors: int,
    n_cartels: int = 0,
    seed: int = 0,
    two_advisor_rate: float = 0.10,
    root_rate: float = 0.05,
    background_citations: int = 2,
    intensity: int = 8,
) -> CorpusPlan:
    """Draw a corpus: advisor forest, articles, background citations and
    ``n_cartels`` planted cohorts citing each other ``intensity`` times per
    directed member pair."""
    if n_authors < 1:
        raise ValueError("need at least one author")
    if n_cartels < 0:
        raise ValueError("cartel count must be non-negative")
    rng = random.Random(seed)

    author_names = [f"Author {i:06d}" for i in range(n_authors)]
    institutes = [rng.choice(_INSTITUTES) for _ in range(n_authors)]
    countries = [rng.choice(_COUNTRIES) for _ in range(n_authors)]
    domains = [rng.choice(_DOMAINS) for _ in range(n_authors)]
    years = [1950 + (i * 60) // max(n_authors, 1) for i in range(n_authors)]

    advisors: list[list[int]] = [[]]
    for i in range(1, n_authors):
        if rng.random() < root_rate:
            advisors.append([])
            continue
        first = rng.randrange(i)
        chosen = [first]
        if i > 1 and rng.random() < two_advisor_rate:
            second = rng.randrange(i)
            if second != first:
                chosen.append(second)
        advisors.append(chosen)

    articles: list[tuple[str, list[int]]] = []
    author_articles: list[list[int]] = [[] for _ in range(n_authors)]
    for i in range(n_authors):
        count = 1 if rng.random() < 0.5 else 2
        for k in range(count):
            writers = [i]
            if k == 1 and i > 0 and rng.random() < 0.1:
                coauthor = rng.randrange(i)
                writers.append(coauthor)
            article_id = len(articles)
            articles.append((f"Study {article_id:07d}", writers))
            for writer in writers:
                author_articles[writer].append(article_id)

    # Background noise: each article cites a few uniformly random others.
    citations: list[tuple[int, int]] = []
    n_articles = len(articles)
    if n_articles > 1:
        for citing in range(n_articles):
            for _ in range(rng.randint(0, background_citations)):
                cited = rng.randrange(n_articles - 1)
                if cited >= citing:
                    cited += 1
                citations.append((cited, citing))

    children: list[list[int]] = [[] for _ in range(n_authors)]
    for advisee, advisor_list in enumerate(advisors):
        for advisor in advisor_list:
            children[advisor].append(advisee)
    cohort_leads = [a for a in range(n_authors) if len(children[a]) >= 2]
    if n_cartels > len(cohort_leads):
        raise ValueError(
            f"cannot plant {n_cartels} cartels: only {len(cohort_leads)} advisors "
            "have two or more advisees"
        )
    cartels: list[list[int]] = []
    for lead in rng.sample(cohort_leads, n_cartels):
        members = [lead] + children[lead]
        cartels.append(members)
        for cited in members:
            for citing in members:
                if cited == citing:
                    continue
                cited_article = author_articles[cited][0]
                citing_article = author_articles[citing][0]
                if cited_article != citing_article:
                    citations.extend([(cited_article, citing_article)] * intensity)

    return CorpusPlan(
        seed=seed,
        author_names=author_names,
        advisors=advisors,
        institutes=institutes,
        countries=countries,
        domains=domains,
        years=years,
        articles=articles,
        author_articles=author_articles,
        citations=citations,
        cartels=cartels,
    )


def plan_to_snapshot(plan: CorpusPlan) -> Snapshot:
    """Materialize a plan directly into a snapshot, skipping the file layer."""
    builder = SnapshotBuilder()
    for i, name in enumerate(plan.author_names):
        builder.add_author(
            AuthorRecord(
                id=i,
                name=name,
                advisors={a: 0 for a in plan.advisors[i]},
                institute=plan.institutes[i],
                country=plan.countries[i],
                domain=plan.domains[i],
                year=plan.years[i],
            )
        )
    for article_id, (title, writers) in enumerate(plan.articles):
        builder.add_article(
            ArticleRecord(id=article_id, title=title, author_ids=tuple(writers))
        )
    for cited, citing in plan.citations:
        builder.add_citation(cited, citing)
    return builder.build()


def write_plan(plan: CorpusPlan, out_dir: str | Path) -> None:
    """Write a plan as an ingestible corpus plus the planted-membership list.

    Author names are unique by construction, so files reference authors by
    name; article keys are ``a<id>``.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    author_lines = [
        json.dumps(
            {
                "name": plan.author_names[i],
                "advisors": [plan.author_names[a] for a in plan.advisors[i]],
                "institute": plan.institutes[i],
                "country": plan.countries[i],
                "domain": plan.domains[i],
                "year": plan.years[i],
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        for i in range(len(plan.author_names))
    ]
    (out / "authors.jsonl").write_text("\n".join(author_lines) + "\n", encoding="utf-8")

    article_lines = [
        json.dumps(
            {
                "key": f"a{article_id}",
                "title": title,
                "authors": [plan.author_names[w] for w in writers],
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        for article_id, (title, writers) in enumerate(plan.articles)
    ]
    (out / "articles.jsonl").write_text("\n".join(article_lines) + "\n", encoding="utf-8")

    citation_lines = [f"a{citing} a{cited}" for cited, citing in plan.citations]
    (out / "citations.txt").write_text(
        "\n".join(citation_lines) + ("\n" if citation_lines else ""), encoding="utf-8"
    )

    cartel_payload = [
        {
            "advisor": members[0],
            "members": members,
            "member_names": [plan.author_names[m] for m in members],
        }
        for members in plan.cartels
    ]
    (out / "cartels.json").write_text(
        json.dumps({"seed": plan.seed, "cartels": cartel_payload}, indent=2) + "\n",
        encoding="utf-8",
    )
