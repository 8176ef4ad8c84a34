"""Domain types: author and article records, the all-author citation matrix.

The graph schema has two node kinds (authors, articles) and three relations:
PARENT_OF between authors (advisor to advisee), CITED_BY between articles
(cited article to citing article) and AUTHORED_BY between articles and
authors. Author ids and article ids are dense integers assigned in
insertion order and stable for the lifetime of a snapshot.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


def normalize_name(name: str) -> str:
    """Matching key for an author name: trimmed, inner whitespace collapsed,
    case-folded. Original casing is kept on records for display."""
    return " ".join(name.split()).casefold()


class ResolutionCase(str, Enum):
    """How an author's identity was pinned down during name resolution."""

    UNIQUE_NAME = "UniqueName"
    MULTIPLE_NAME = "MultipleName"
    TWO_ADVISOR = "TwoAdvisor"
    MULTIPLE_NAME_TWO_ADVISOR = "MultipleNameTwoAdvisor"


def resolution_case(name_is_shared: bool, advisor_count: int) -> ResolutionCase:
    """Tag an author: shared display name, two or more advisors, both, or neither."""
    if name_is_shared and advisor_count >= 2:
        return ResolutionCase.MULTIPLE_NAME_TWO_ADVISOR
    if name_is_shared:
        return ResolutionCase.MULTIPLE_NAME
    if advisor_count >= 2:
        return ResolutionCase.TWO_ADVISOR
    return ResolutionCase.UNIQUE_NAME


class MatrixConvention(str, Enum):
    """Orientation of citation-count data.

    CITED_ROWS is the adopted convention: entry (i, j) is the number of
    times author j has cited author i, so an author's row sums to the
    citations they received. CITING_ROWS is the transposed reading and is
    accepted for pair-count input files that follow it.
    """

    CITED_ROWS = "cited-rows"
    CITING_ROWS = "citing-rows"


@dataclass
class AuthorRecord:
    """One disambiguated scholar.

    ``advisors`` and ``advisees`` are the Level 1 / Level 2 key-value
    fields: neighbor author id mapped to the number of times that neighbor
    has cited this author. Both maps are derived from the citation data
    when a snapshot is built, together with ``total_citations``.
    """

    id: int
    name: str
    advisors: dict[int, int] = field(default_factory=dict)
    advisees: dict[int, int] = field(default_factory=dict)
    thesis: str = ""
    institute: str = ""
    country: str = ""
    domain: str = ""
    total_citations: int = 0
    year: int | None = None


@dataclass(frozen=True)
class ArticleRecord:
    """One article, authored by a non-empty, duplicate-free list of authors."""

    id: int
    title: str
    author_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.author_ids:
            raise ValueError(f"article {self.id!r} has no authors")
        if len(set(self.author_ids)) != len(self.author_ids):
            raise ValueError(f"article {self.id!r} lists an author twice")


class CitationMatrix:
    """Square matrix of citation counts between authors.

    Entry (i, j) is the number of times author j has cited author i
    (the CITED_ROWS convention). The diagonal holds self-citations.
    Stored sparsely, one dict of nonzero columns per row, so corpora with
    many authors stay cheap to hold and to row-sum.
    """

    def __init__(self, n: int) -> None:
        if n < 0:
            raise ValueError("matrix dimension must be non-negative")
        self.n = n
        self._rows: list[dict[int, int]] = [{} for _ in range(n)]

    @classmethod
    def from_dense(cls, dense) -> CitationMatrix:
        arr = np.asarray(dense)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("dense citation matrix must be square")
        if arr.size and arr.min() < 0:
            raise ValueError("citation counts must be non-negative")
        matrix = cls(arr.shape[0])
        for i, j in zip(*np.nonzero(arr)):
            matrix._rows[int(i)][int(j)] = int(arr[i, j])
        return matrix

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n), dtype=np.int64)
        for i, row in enumerate(self._rows):
            for j, count in row.items():
                dense[i, j] = count
        return dense

    def _check_index(self, author: int) -> None:
        if not 0 <= author < self.n:
            raise IndexError(f"author id {author} outside matrix of size {self.n}")

    def get(self, cited: int, citing: int) -> int:
        self._check_index(cited)
        self._check_index(citing)
        return self._rows[cited].get(citing, 0)

    def add(self, cited: int, citing: int, count: int = 1) -> None:
        if count < 0:
            raise ValueError("citation counts must be non-negative")
        self._check_index(cited)
        self._check_index(citing)
        if count:
            row = self._rows[cited]
            row[citing] = row.get(citing, 0) + count

    def row(self, cited: int) -> dict[int, int]:
        """Nonzero citing counts for one cited author (a copy)."""
        self._check_index(cited)
        return dict(self._rows[cited])

    def row_sum(self, cited: int, include_self: bool = True) -> int:
        self._check_index(cited)
        total = sum(self._rows[cited].values())
        if not include_self:
            total -= self._rows[cited].get(cited, 0)
        return total

    def entries(self):
        """Iterate nonzero entries as (cited, citing, count)."""
        for i, row in enumerate(self._rows):
            for j, count in row.items():
                yield i, j, count

    def total(self) -> int:
        return sum(count for _, _, count in self.entries())

    def transpose(self) -> CitationMatrix:
        flipped = CitationMatrix(self.n)
        for i, j, count in self.entries():
            flipped._rows[j][i] = count
        return flipped

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CitationMatrix):
            return NotImplemented
        if self.n != other.n:
            return False
        return all(a == b for a, b in zip(self._rows, other._rows))

    def __repr__(self) -> str:
        return f"CitationMatrix(n={self.n}, nonzero={sum(len(r) for r in self._rows)})"
