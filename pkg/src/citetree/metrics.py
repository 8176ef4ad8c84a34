"""Lineage-aware citation metrics.

Builds per-author local networks from prebuilt adjacency (children,
grandchildren, parents, grandparents, plus siblings), splits an author's
citations into genealogical and non-genealogical parts, derives a
corpus-level threshold band from the ratio distribution, flags
lineage-dependent authors, and finds mutually citing author pairs.

Every function here is pure over an immutable snapshot or matrix, so all
of them are safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from citetree.errors import (
    DimensionMismatchError,
    InvariantError,
    UnknownAuthorError,
)
from citetree.model import CitationMatrix
from citetree.store import Snapshot

MEMBER_SET_NAMES = ("children", "grandchildren", "parents", "grandparents", "siblings")

# Siblings count toward the genealogical side by default: the citation
# communities under study include students of one advisor citing each
# other, even though the 4-row block matrix tracks only the vertical
# levels. Pass members without "siblings" for the strict 4-row split.
DEFAULT_MEMBERS = frozenset(MEMBER_SET_NAMES)


class Verdict(str, Enum):
    INDEPENDENT = "Independent"
    WATCHLIST = "Watchlist"
    LINEAGE_DEPENDENT = "LineageDependent"


@dataclass(frozen=True)
class Threshold:
    """Community-ratio band: authors above ``upper`` are flagged, authors
    inside (lower, upper] are worth watching."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ValueError(
                f"threshold bounds must satisfy 0 <= lower <= upper <= 1, "
                f"got ({self.lower}, {self.upper})"
            )


DEFAULT_THRESHOLD = Threshold(0.5, 0.8)


@dataclass(frozen=True)
class LocalNetwork:
    """The authors around one owner: one and two levels down, one and two
    levels up, and siblings (authors sharing at least one advisor)."""

    owner: int
    children: frozenset[int]
    grandchildren: frozenset[int]
    parents: frozenset[int]
    grandparents: frozenset[int]
    siblings: frozenset[int]

    def member_set(self, names: Iterable[str] = DEFAULT_MEMBERS) -> frozenset[int]:
        """Union of the named member sets. Unknown names are an error."""
        members: set[int] = set()
        for name in names:
            if name not in MEMBER_SET_NAMES:
                raise ValueError(f"unknown member set {name!r}")
            members |= getattr(self, name)
        return frozenset(members)


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    """4-row binary relation matrix for one author.

    Row 0 marks children (one level below the owner), row 1 grandchildren
    (two levels below), row 2 parents, row 3 grandparents. Columns are the
    requested author ids, defaulting to every author in the snapshot. The
    owner's own column, if present, is zero in all rows.
    """

    owner: int
    columns: tuple[int, ...]
    rows: np.ndarray

    def level_members(self, row: int) -> frozenset[int]:
        """Author ids marked in one row (0=children .. 3=grandparents)."""
        return frozenset(
            self.columns[i] for i in np.nonzero(self.rows[row])[0]
        )


def _require_author(snapshot: Snapshot, author: int) -> None:
    if not snapshot.has_author(author):
        raise UnknownAuthorError(f"author {author} is not in the snapshot")


def _level_sets(
    snapshot: Snapshot, owner: int
) -> tuple[frozenset[int], frozenset[int], frozenset[int], frozenset[int]]:
    children = frozenset(snapshot.children[owner])
    grandchildren: set[int] = set()
    for child in children:
        grandchildren.update(snapshot.children[child])
    parents = frozenset(snapshot.parents[owner])
    grandparents: set[int] = set()
    for parent in parents:
        grandparents.update(snapshot.parents[parent])
    return children, frozenset(grandchildren), parents, frozenset(grandparents)


def build_block_matrix(
    snapshot: Snapshot, owner: int, columns: Iterable[int] | None = None
) -> BlockMatrix:
    """Four binary rows over ``columns`` marking the owner's local network
    membership at each level."""
    _require_author(snapshot, owner)
    if columns is None:
        cols = tuple(range(snapshot.author_count))
    else:
        cols = tuple(columns)
        for column in cols:
            _require_author(snapshot, column)
    level_sets = _level_sets(snapshot, owner)
    rows = np.zeros((4, len(cols)), dtype=np.uint8)
    for row, members in enumerate(level_sets):
        for index, column in enumerate(cols):
            if column in members:
                rows[row, index] = 1
    return BlockMatrix(owner=owner, columns=cols, rows=rows)


def local_network(snapshot: Snapshot, owner: int) -> LocalNetwork:
    """The owner's local network plus siblings.

    Agrees with :func:`build_block_matrix` over full columns on the four
    level sets; siblings are every other author sharing an advisor with
    the owner.
    """
    _require_author(snapshot, owner)
    children, grandchildren, parents, grandparents = _level_sets(snapshot, owner)
    siblings: set[int] = set()
    for parent in parents:
        siblings.update(snapshot.children[parent])
    siblings.discard(owner)
    return LocalNetwork(
        owner=owner,
        children=children,
        grandchildren=grandchildren,
        parents=parents,
        grandparents=grandparents,
        siblings=frozenset(siblings),
    )


# ---------------------------------------------------------------------------
# Bulk block rows: the all-author local-network query
# ---------------------------------------------------------------------------


class LevelRows:
    """One relation's membership rows for every author, in CSR form:
    ``values[offsets[o]:offsets[o + 1]]`` are the sorted members of row o."""

    __slots__ = ("offsets", "values")

    def __init__(self, offsets: np.ndarray, values: np.ndarray) -> None:
        self.offsets = offsets
        self.values = values

    def members(self, owner: int) -> np.ndarray:
        return self.values[self.offsets[owner] : self.offsets[owner + 1]]

    def member_set(self, owner: int) -> frozenset[int]:
        return frozenset(self.members(owner).tolist())


def _csr(n: int, counts: np.ndarray, values: np.ndarray) -> LevelRows:
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return LevelRows(offsets, values.astype(np.int32, copy=False))


def _gather_segments(
    rows: LevelRows, counts: np.ndarray, owners: np.ndarray, keys: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Concatenate ``rows`` segments for every key, tagged with its owner."""
    seg_lens = counts[keys]
    total = int(seg_lens.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    stops = np.cumsum(seg_lens)
    flat = (
        np.arange(total, dtype=np.int64)
        - np.repeat(stops - seg_lens, seg_lens)
        + np.repeat(rows.offsets[keys], seg_lens)
    )
    return np.repeat(owners, seg_lens), rows.values[flat]


def _dedup_rows(
    n: int, owners: np.ndarray, values: np.ndarray, drop_owner: bool = False
) -> LevelRows:
    """Unique (owner, member) pairs folded into CSR rows via one sort."""
    if len(owners) == 0:
        return _csr(n, np.zeros(n, dtype=np.int64), np.empty(0, dtype=np.int32))
    combined = np.unique(owners.astype(np.int64) * n + values)
    owner_part = combined // n
    member_part = combined % n
    if drop_owner:
        keep = owner_part != member_part
        owner_part, member_part = owner_part[keep], member_part[keep]
    return _csr(n, np.bincount(owner_part, minlength=n), member_part)


class LineageIndex:
    """Per-author membership rows for all five relations, built in one
    vectorized pass over the advisor edges.

    This is the whole-corpus form of :func:`local_network`: row o of
    ``children``/``grandchildren``/``parents``/``grandparents`` is author
    o's block-matrix row, and no per-author graph traversal happens after
    the build. Batch scans over large corpora go through here.
    """

    __slots__ = ("n", "children", "parents", "grandchildren", "grandparents", "siblings")

    def __init__(self, n, children, parents, grandchildren, grandparents, siblings):
        self.n = n
        self.children = children
        self.parents = parents
        self.grandchildren = grandchildren
        self.grandparents = grandparents
        self.siblings = siblings

    @classmethod
    def build(cls, snapshot: Snapshot) -> LineageIndex:
        n = snapshot.author_count
        edges = snapshot.parent_of
        if edges:
            pairs = np.asarray(edges, dtype=np.int64)
            advisor, advisee = pairs[:, 0], pairs[:, 1]
        else:
            advisor = advisee = np.empty(0, dtype=np.int64)

        # parent_of is sorted by (advisor, advisee), so children rows come
        # straight from the edge list; parents need one re-sort.
        child_counts = np.bincount(advisor, minlength=n)
        children = _csr(n, child_counts, advisee)
        by_advisee = np.lexsort((advisor, advisee))
        parent_counts = np.bincount(advisee, minlength=n)
        parents = _csr(n, parent_counts, advisor[by_advisee])
        owner_of_parent_edge = advisee[by_advisee]
        parent_of_edge = advisor[by_advisee]

        grandchildren = _dedup_rows(
            n, *_gather_segments(children, child_counts, advisor, advisee)
        )
        grandparents = _dedup_rows(
            n,
            *_gather_segments(parents, parent_counts, owner_of_parent_edge, parent_of_edge),
        )
        siblings = _dedup_rows(
            n,
            *_gather_segments(children, child_counts, owner_of_parent_edge, parent_of_edge),
            drop_owner=True,
        )
        return cls(n, children, parents, grandchildren, grandparents, siblings)

    def network(self, owner: int) -> LocalNetwork:
        return LocalNetwork(
            owner=owner,
            children=self.children.member_set(owner),
            grandchildren=self.grandchildren.member_set(owner),
            parents=self.parents.member_set(owner),
            grandparents=self.grandparents.member_set(owner),
            siblings=self.siblings.member_set(owner),
        )


_INDEX_CUTOFF = 2048


def all_local_networks(snapshot: Snapshot) -> list[LocalNetwork]:
    """Local networks for every author.

    Small corpora walk the prebuilt adjacency per author; large ones
    materialize from one :class:`LineageIndex` build, so the whole scan
    grows linearly with the corpus and never re-traverses the graph.
    """
    n = snapshot.author_count
    if n < _INDEX_CUTOFF:
        return [local_network(snapshot, owner) for owner in range(n)]
    index = LineageIndex.build(snapshot)
    return [index.network(owner) for owner in range(n)]


def total_citations(matrix: CitationMatrix, author: int, include_self: bool = False) -> int:
    """Citations received by ``author``: the author's matrix row summed,
    with the self-citation diagonal included only on request."""
    return matrix.row_sum(author, include_self=include_self)


def genealogical_citations(
    matrix: CitationMatrix,
    network: LocalNetwork,
    members: Iterable[str] = DEFAULT_MEMBERS,
) -> int:
    """Citations the owner received from the selected member sets.

    Members appearing in several sets (possible with two-advisor lineages)
    are counted once.
    """
    return sum(
        matrix.get(network.owner, member) for member in network.member_set(members)
    )


def non_genealogical(total: int, genealogical: int) -> int:
    """Citations from outside the genealogy network: total minus genealogical."""
    if genealogical < 0 or genealogical > total:
        raise InvariantError(
            f"genealogical citations {genealogical} outside [0, {total}]; "
            "member sets and total disagree"
        )
    return total - genealogical


def community_ratio(total: int, genealogical: int) -> float | None:
    """Share of the author's citations coming from their community;
    None (not an error) when the author has no citations."""
    if total == 0:
        return None
    return genealogical / total


def compute_threshold(
    ratios: Iterable[float | None], fallback: Threshold = DEFAULT_THRESHOLD
) -> Threshold:
    """Threshold band from a corpus ratio distribution.

    lower is the third quartile of the defined ratios and upper is
    min(1, Q3 + 1.5 IQR), quartiles by linear interpolation between order
    statistics. Undefined ratios are ignored; with nothing left the
    ``fallback`` band is returned. Permutation-invariant by construction.
    """
    defined = sorted(r for r in ratios if r is not None)
    if not defined:
        return fallback
    if defined[0] < 0.0 or defined[-1] > 1.0:
        raise ValueError("ratios must lie in [0, 1]")
    q1, q3 = np.quantile(defined, [0.25, 0.75])
    lower = float(q3)
    upper = min(1.0, float(q3 + 1.5 * (q3 - q1)))
    return Threshold(lower, max(lower, upper))


def classify(ratio: float | None, threshold: Threshold) -> Verdict:
    """Band an author's ratio. The comparison against ``upper`` is strict:
    sitting exactly on the bound is Watchlist, not LineageDependent. An
    undefined ratio (no citations) is Independent."""
    if ratio is None:
        return Verdict.INDEPENDENT
    if ratio > threshold.upper:
        return Verdict.LINEAGE_DEPENDENT
    if ratio > threshold.lower:
        return Verdict.WATCHLIST
    return Verdict.INDEPENDENT


def copious_pairs(
    matrix: CitationMatrix, min_each_direction: int = 1
) -> set[tuple[int, int]]:
    """Unordered author pairs that cite each other at least
    ``min_each_direction`` times in each direction.

    Symmetric in the matrix orientation: transposing the matrix cannot
    change the result.
    """
    if min_each_direction < 1:
        raise ValueError("min_each_direction must be at least 1")
    pairs: set[tuple[int, int]] = set()
    for i, j, count in matrix.entries():
        if i == j or count < min_each_direction:
            continue
        if matrix.get(j, i) >= min_each_direction:
            pairs.add((min(i, j), max(i, j)))
    return pairs


def _mutual_partners(
    matrix: CitationMatrix, owner: int, candidates: Iterable[int], min_each: int
) -> frozenset[int]:
    return frozenset(
        m
        for m in candidates
        if matrix.get(owner, m) >= min_each and matrix.get(m, owner) >= min_each
    )


@dataclass(frozen=True)
class CommunityReport:
    """Community-citation verdict for one author."""

    author: int
    total_citations: int
    genealogical_citations: int
    non_genealogical: int
    ratio: float | None
    verdict: Verdict
    copious_partners: frozenset[int]
    sibling_citers: dict[int, int]


def lineage_score(report: CommunityReport) -> float:
    """Independence score in [0, 1]: the non-genealogical share of the
    author's citations. An uncited author scores 1.0 by convention.

    The formula is this artifact's own definition; see the README note on
    metric definitions.
    """
    if report.total_citations == 0:
        return 1.0
    return report.non_genealogical / report.total_citations


def author_report(
    snapshot: Snapshot,
    matrix: CitationMatrix,
    author: int,
    threshold: Threshold,
    members: Iterable[str] = DEFAULT_MEMBERS,
    include_self: bool = False,
    min_each_direction: int = 1,
) -> CommunityReport:
    """Community report for one author; the per-author unit that both the
    batch scan and the query service share."""
    network = local_network(snapshot, author)
    total = total_citations(matrix, author, include_self=include_self)
    genealogical = genealogical_citations(matrix, network, members)
    ngc = non_genealogical(total, genealogical)
    ratio = community_ratio(total, genealogical)
    partners = _mutual_partners(
        matrix, author, network.member_set(MEMBER_SET_NAMES), min_each_direction
    )
    sibling_citers = {
        sibling: matrix.get(author, sibling)
        for sibling in sorted(network.siblings)
        if matrix.get(author, sibling) > 0
    }
    return CommunityReport(
        author=author,
        total_citations=total,
        genealogical_citations=genealogical,
        non_genealogical=ngc,
        ratio=ratio,
        verdict=classify(ratio, threshold),
        copious_partners=partners,
        sibling_citers=sibling_citers,
    )


def corpus_ratios(
    snapshot: Snapshot,
    matrix: CitationMatrix,
    members: Iterable[str] = DEFAULT_MEMBERS,
    include_self: bool = False,
) -> list[float | None]:
    """Community ratio per author, the input to :func:`compute_threshold`."""
    member_names = tuple(members)
    ratios: list[float | None] = []
    for network in all_local_networks(snapshot):
        total = total_citations(matrix, network.owner, include_self=include_self)
        genealogical = genealogical_citations(matrix, network, member_names)
        ratios.append(community_ratio(total, genealogical))
    return ratios


def detect_communities(
    snapshot: Snapshot,
    matrix: CitationMatrix | None = None,
    threshold: Threshold | None = None,
    members: Iterable[str] = DEFAULT_MEMBERS,
    include_self: bool = False,
    min_each_direction: int = 1,
) -> list[CommunityReport]:
    """One community report per author, ordered by author id.

    With ``threshold=None`` the band is derived from this corpus's own
    ratio distribution.
    """
    if matrix is None:
        matrix = snapshot.matrix()
    if matrix.n != snapshot.author_count:
        raise DimensionMismatchError(
            f"matrix is {matrix.n}x{matrix.n} but the snapshot has "
            f"{snapshot.author_count} authors"
        )
    member_names = tuple(members)
    if threshold is None:
        threshold = compute_threshold(
            corpus_ratios(snapshot, matrix, member_names, include_self)
        )
    return [
        author_report(
            snapshot,
            matrix,
            author,
            threshold,
            members=member_names,
            include_self=include_self,
            min_each_direction=min_each_direction,
        )
        for author in range(snapshot.author_count)
    ]


# ---------------------------------------------------------------------------
# Report export
# ---------------------------------------------------------------------------

REPORT_COLUMNS = (
    "id",
    "name",
    "total_citations",
    "genealogical_citations",
    "non_genealogical",
    "ratio",
    "verdict",
    "lineage_score",
    "copious_partner_count",
)


def format_report(reports: Iterable[CommunityReport], snapshot: Snapshot) -> str:
    """Tab-separated report, one row per author, header first.

    An undefined ratio is written as the empty string. Whitespace inside
    names is collapsed so rows stay one line each.
    """
    lines = ["\t".join(REPORT_COLUMNS)]
    for report in reports:
        name = " ".join(snapshot.authors[report.author].name.split())
        lines.append(
            "\t".join(
                (
                    str(report.author),
                    name,
                    str(report.total_citations),
                    str(report.genealogical_citations),
                    str(report.non_genealogical),
                    "" if report.ratio is None else str(report.ratio),
                    report.verdict.value,
                    str(lineage_score(report)),
                    str(len(report.copious_partners)),
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_report(
    reports: Iterable[CommunityReport], snapshot: Snapshot, path: str | Path
) -> None:
    Path(path).write_text(format_report(reports, snapshot), encoding="utf-8")
