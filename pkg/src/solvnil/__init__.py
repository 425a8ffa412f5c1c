"""Exact computations for the Lie algebras h(alpha, lambda, S) built from
Jordan blocks, their nilradicals, and the uniserial representations they
produce."""
from __future__ import annotations

__version__ = "0.1.0"

from .exactla import GF, QQ, Matrix, Subspace, parse_field  # noqa: E402
from .blockstruct import (  # noqa: E402
    BlockSeq,
    GroupElem,
    Shape,
    canonical_seq,
    normalize_seq,
    random_group_elem,
    random_seq,
)
from .nilradical import generate_nilradical, rank_table  # noqa: E402
from .theory import free_check, predict_degree, predict_degree_canonical, witt_dim  # noqa: E402
from .reps import build_rep, enumerate_shapes, verify_uniserial  # noqa: E402

__all__ = [
    "GF", "QQ", "Matrix", "Subspace", "parse_field",
    "BlockSeq", "GroupElem", "Shape", "canonical_seq", "normalize_seq",
    "random_group_elem", "random_seq",
    "generate_nilradical", "rank_table",
    "free_check", "predict_degree", "predict_degree_canonical", "witt_dim",
    "build_rep", "enumerate_shapes", "verify_uniserial",
]
