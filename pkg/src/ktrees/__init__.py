"""Exact enumeration of k-plane trees and k-noncrossing trees."""

from .errors import (
    IndexOutOfRange,
    InvalidParams,
    KTreesError,
    LimitExceeded,
    NonExactDivision,
    ParseError,
    UnsupportedBranch,
)
from .trees import LabelComposition, NoncrossingTree, PlaneTree

__version__ = "0.1.0"

__all__ = [
    "IndexOutOfRange",
    "InvalidParams",
    "KTreesError",
    "LabelComposition",
    "LimitExceeded",
    "NonExactDivision",
    "NoncrossingTree",
    "ParseError",
    "PlaneTree",
    "UnsupportedBranch",
]
