"""citetree: academic genealogy citation analytics.

Stores advisor/advisee and citation relationships, splits each author's
citations into genealogical and non-genealogical parts, flags
lineage-dependent authors against a corpus-derived threshold band, and
serves local-network, profile and community queries over HTTP.
"""

from citetree.errors import (
    AmbiguousAuthorError,
    CiteTreeError,
    CycleError,
    DanglingReferenceError,
    DimensionMismatchError,
    DuplicateIdError,
    FormatError,
    InvariantError,
    MissingFieldError,
    ParseError,
    UnknownAuthorError,
)
from citetree.model import (
    ArticleRecord,
    AuthorRecord,
    CitationMatrix,
    MatrixConvention,
    ResolutionCase,
    normalize_name,
)
from citetree.store import (
    Snapshot,
    SnapshotBuilder,
    derive_matrix,
    snapshot_load,
    snapshot_save,
)

__version__ = "0.1.0"

__all__ = [
    "AmbiguousAuthorError",
    "ArticleRecord",
    "AuthorRecord",
    "CitationMatrix",
    "CiteTreeError",
    "CycleError",
    "DanglingReferenceError",
    "DimensionMismatchError",
    "DuplicateIdError",
    "FormatError",
    "InvariantError",
    "MatrixConvention",
    "MissingFieldError",
    "ParseError",
    "ResolutionCase",
    "Snapshot",
    "SnapshotBuilder",
    "UnknownAuthorError",
    "derive_matrix",
    "normalize_name",
    "snapshot_load",
    "snapshot_save",
    "__version__",
]
