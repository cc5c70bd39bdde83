from .candidates import (
    DEFAULT_EMBEDDING_SIMILARITY,
    DEFAULT_NAME_SIMILARITY,
    DEFAULT_SHARED_NEIGHBORS,
    CandidateState,
    SynonymCandidate,
    candidates_by_embedding,
    candidates_by_relation,
    lookup_synonym,
    merge_candidate_lists,
    name_score,
)
from .queue import ReviewQueue, elect_survivor
from .similarity import jaro, jaro_winkler

__all__ = [
    "DEFAULT_EMBEDDING_SIMILARITY",
    "DEFAULT_NAME_SIMILARITY",
    "DEFAULT_SHARED_NEIGHBORS",
    "CandidateState",
    "SynonymCandidate",
    "candidates_by_embedding",
    "candidates_by_relation",
    "lookup_synonym",
    "merge_candidate_lists",
    "name_score",
    "ReviewQueue",
    "elect_survivor",
    "jaro",
    "jaro_winkler",
]
