"""Inequality harness, extremal-g identities, derived constants and worst-case search."""

from .constants import (
    CONSTANTS,
    GAMMA_STAR,
    ConstantsTable,
    NoConstantAvailable,
    RootNotBracketed,
    a1_lower_bound,
    gamma_star_constants,
)
from .corpus import (
    CorpusResult,
    CorpusSpec,
    build_contexts,
    default_corpus,
    run_contexts,
    run_corpus,
    run_theorem2,
    theorem2_contexts,
)
from .harness import BoundReport, InequalityId, Theorem2Report, check_inequality, constant_for, theorem2_checks
from .search import SearchFamily, SearchResult, compass_search, lower_bound_search

__all__ = [
    "CONSTANTS",
    "GAMMA_STAR",
    "BoundReport",
    "ConstantsTable",
    "CorpusResult",
    "CorpusSpec",
    "InequalityId",
    "NoConstantAvailable",
    "RootNotBracketed",
    "SearchFamily",
    "SearchResult",
    "Theorem2Report",
    "a1_lower_bound",
    "build_contexts",
    "check_inequality",
    "compass_search",
    "constant_for",
    "default_corpus",
    "gamma_star_constants",
    "lower_bound_search",
    "run_contexts",
    "run_corpus",
    "run_theorem2",
    "theorem2_checks",
    "theorem2_contexts",
]
