"""HTTP query service: author search, profile, local network, community report.

All endpoints read one immutable snapshot, so responses are deterministic
and byte-identical across repeated requests. A reload swaps the whole
state object atomically; in-flight requests finish on the state they
started with.

Wire shapes (documented for golden-file consumers):

- network payload: ``{"nodes": [{"id", "label", "level"}...],
  "edges": [{"from", "to"}...]}`` with the queried author first, then
  levels +1, -1, +2, -2, ids ascending inside a level. Node ids are the
  author ids as strings; levels are -2..2 with advisors negative. Edges
  are the advisor-to-advisee pairs inside the returned node set, sorted.
- community payload: the per-author report fields in fixed order plus the
  threshold band used.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from citetree.errors import CiteTreeError
from citetree.metrics import (
    DEFAULT_MEMBERS,
    CommunityReport,
    Threshold,
    author_report,
    compute_threshold,
    corpus_ratios,
    lineage_score,
    local_network,
)
from citetree.model import CitationMatrix
from citetree.store import Snapshot, snapshot_load


@dataclass(frozen=True)
class ServiceConfig:
    """Request-independent settings; fixed at startup via CLI flags."""

    threshold_lower: float | None = None
    threshold_upper: float | None = None
    include_self: bool = False
    include_siblings: bool = True
    min_each_direction: int = 1
    cors_origins: tuple[str, ...] = ("*",)

    @property
    def members(self) -> frozenset[str]:
        if self.include_siblings:
            return DEFAULT_MEMBERS
        return DEFAULT_MEMBERS - {"siblings"}


@dataclass
class ServiceState:
    """Everything derived from one snapshot, computed once at load."""

    snapshot: Snapshot
    matrix: CitationMatrix
    threshold: Threshold
    config: ServiceConfig = field(default_factory=ServiceConfig)

    @classmethod
    def from_snapshot(cls, snapshot: Snapshot, config: ServiceConfig | None = None) -> ServiceState:
        config = config or ServiceConfig()
        matrix = snapshot.matrix()
        threshold = compute_threshold(
            corpus_ratios(
                snapshot, matrix, config.members, include_self=config.include_self
            )
        )
        if config.threshold_lower is not None or config.threshold_upper is not None:
            lower = (
                config.threshold_lower
                if config.threshold_lower is not None
                else min(threshold.lower, config.threshold_upper)
            )
            upper = (
                config.threshold_upper
                if config.threshold_upper is not None
                else max(threshold.upper, config.threshold_lower)
            )
            threshold = Threshold(lower, upper)
        return cls(snapshot=snapshot, matrix=matrix, threshold=threshold, config=config)


def network_payload(snapshot: Snapshot, owner: int) -> dict:
    """Node/edge payload for the owner's two-level genealogy neighborhood.

    Nodes are gathered level by level starting from the owner; an author
    reachable at two levels keeps the level it was first seen at.
    """
    net = local_network(snapshot, owner)
    levels = (
        (0, (owner,)),
        (1, sorted(net.children)),
        (-1, sorted(net.parents)),
        (2, sorted(net.grandchildren)),
        (-2, sorted(net.grandparents)),
    )
    nodes = []
    included: set[int] = set()
    for level, authors in levels:
        for author in authors:
            if author in included:
                continue
            included.add(author)
            nodes.append(
                {"id": str(author), "label": snapshot.authors[author].name, "level": level}
            )
    edges = sorted(
        (advisor, advisee)
        for advisor in included
        for advisee in snapshot.children[advisor]
        if advisee in included
    )
    return {
        "nodes": nodes,
        "edges": [{"from": str(advisor), "to": str(advisee)} for advisor, advisee in edges],
    }


def community_payload(
    snapshot: Snapshot, report: CommunityReport, threshold: Threshold
) -> dict:
    return {
        "author": report.author,
        "name": snapshot.authors[report.author].name,
        "total_citations": report.total_citations,
        "genealogical_citations": report.genealogical_citations,
        "non_genealogical": report.non_genealogical,
        "ratio": report.ratio,
        "verdict": report.verdict.value,
        "copious_partners": sorted(report.copious_partners),
        "sibling_citers": {str(k): v for k, v in sorted(report.sibling_citers.items())},
        "lineage_score": lineage_score(report),
        "threshold": {"lower": threshold.lower, "upper": threshold.upper},
    }


def profile_payload(snapshot: Snapshot, author: int) -> dict:
    record = snapshot.authors[author]
    return {
        "name": record.name,
        "thesis": record.thesis,
        "institute": record.institute,
        "country": record.country,
        "domain": record.domain,
        "total_citations": record.total_citations,
        "year": record.year,
    }


def create_app(
    state: ServiceState | None = None, config: ServiceConfig | None = None
) -> FastAPI:
    """Build the service. ``state`` may be None (no corpus loaded yet);
    data endpoints answer 503 until a snapshot is loaded or reloaded."""
    config = config or (state.config if state else ServiceConfig())
    app = FastAPI(title="citetree", docs_url=None, redoc_url=None)
    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )
    app.state.service = state

    def current_state() -> ServiceState | None:
        return app.state.service

    def error(status: int, detail: str) -> JSONResponse:
        return JSONResponse({"detail": detail}, status_code=status)

    @app.get("/authors")
    def search_authors(name: str = "", limit: int = 50):
        state = current_state()
        if state is None:
            return error(503, "no corpus loaded")
        query = name.strip().casefold()
        if not query:
            return error(400, "query parameter 'name' must be non-empty")
        if limit < 1:
            return error(400, "limit must be at least 1")
        snapshot = state.snapshot
        rows = []
        for author_id, normalized in enumerate(snapshot.normalized_names):
            if query in normalized:
                rows.append(
                    {
                        "id": author_id,
                        "name": snapshot.authors[author_id].name,
                        "institute": snapshot.authors[author_id].institute,
                        "case_tag": snapshot.resolution_cases[author_id].value,
                    }
                )
                if len(rows) >= limit:
                    break
        return rows

    @app.get("/authors/{author_id}")
    def author_profile(author_id: int):
        state = current_state()
        if state is None:
            return error(503, "no corpus loaded")
        if not state.snapshot.has_author(author_id):
            return error(404, f"unknown author {author_id}")
        return profile_payload(state.snapshot, author_id)

    @app.get("/authors/{author_id}/network")
    def author_network(author_id: int):
        state = current_state()
        if state is None:
            return error(503, "no corpus loaded")
        if not state.snapshot.has_author(author_id):
            return error(404, f"unknown author {author_id}")
        return network_payload(state.snapshot, author_id)

    @app.get("/authors/{author_id}/community")
    def author_community(author_id: int):
        state = current_state()
        if state is None:
            return error(503, "no corpus loaded")
        if not state.snapshot.has_author(author_id):
            return error(404, f"unknown author {author_id}")
        report = author_report(
            state.snapshot,
            state.matrix,
            author_id,
            state.threshold,
            members=state.config.members,
            include_self=state.config.include_self,
            min_each_direction=state.config.min_each_direction,
        )
        return community_payload(state.snapshot, report, state.threshold)

    @app.post("/admin/reload")
    async def reload_snapshot(request: Request):
        body = await request.json()
        path = body.get("snapshot") if isinstance(body, dict) else None
        if not isinstance(path, str):
            return error(400, "body must be a JSON object with a 'snapshot' path")
        try:
            snapshot = snapshot_load(path)
        except (CiteTreeError, OSError) as exc:
            return error(400, f"cannot load snapshot: {exc}")
        app.state.service = ServiceState.from_snapshot(snapshot, config)
        return {"authors": snapshot.author_count, "articles": snapshot.article_count}

    return app
