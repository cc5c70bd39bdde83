"""Synonym candidate generation: shared-relation match and embedding match."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

from ..model.store import GraphStore
from ..model.types import Entity, EntityKind, natural_id_key, pair_id
from ..providers.embedding import TrigramHashEmbedder, cosine
from ..textnorm import normalize_company
from .similarity import jaro_winkler

DEFAULT_SHARED_NEIGHBORS = 1  # K
DEFAULT_NAME_SIMILARITY = 0.6  # sigma_name
DEFAULT_EMBEDDING_SIMILARITY = 0.85  # tau


class CandidateState(str, Enum):
    PENDING = "Pending"
    AUTO_VERIFIED = "AutoVerified"
    AWAITING_REVIEW = "AwaitingReview"
    APPROVED = "Approved"
    REJECTED_BY_LLM = "RejectedByLLM"
    REJECTED_BY_HUMAN = "RejectedByHuman"


TERMINAL_STATES = frozenset(
    {CandidateState.APPROVED, CandidateState.REJECTED_BY_LLM, CandidateState.REJECTED_BY_HUMAN}
)


@dataclass
class SynonymCandidate:
    entity_a: str  # always the smaller id of the pair
    entity_b: str
    sources: set[str] = field(default_factory=set)  # RelationMatch | EmbeddingMatch
    name_similarity: float = 0.0
    embedding_similarity: float | None = None
    shared_neighbors: int = 0
    llm_verdict: dict[str, Any] | None = None
    state: CandidateState = CandidateState.PENDING

    def __post_init__(self) -> None:
        if natural_id_key(self.entity_a) > natural_id_key(self.entity_b):
            self.entity_a, self.entity_b = self.entity_b, self.entity_a

    @property
    def pair_id(self) -> str:
        return pair_id(self.entity_a, self.entity_b)

    def to_dict(self) -> dict[str, Any]:
        return {
            "pair_id": self.pair_id,
            "entity_a": self.entity_a,
            "entity_b": self.entity_b,
            "sources": sorted(self.sources),
            "name_similarity": self.name_similarity,
            "embedding_similarity": self.embedding_similarity,
            "shared_neighbors": self.shared_neighbors,
            "llm_verdict": self.llm_verdict,
            "state": self.state.value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SynonymCandidate:
        return cls(
            entity_a=data["entity_a"],
            entity_b=data["entity_b"],
            sources=set(data.get("sources", [])),
            name_similarity=float(data.get("name_similarity", 0.0)),
            embedding_similarity=data.get("embedding_similarity"),
            shared_neighbors=int(data.get("shared_neighbors", 0)),
            llm_verdict=data.get("llm_verdict"),
            state=CandidateState(data.get("state", "Pending")),
        )


def name_score(a: Entity, b: Entity) -> float:
    """Best Jaro-Winkler over the suffix-stripped alias cross product."""
    forms_a = {normalize_company(x) for x in [a.canonical_name, *a.aliases]}
    forms_b = {normalize_company(x) for x in [b.canonical_name, *b.aliases]}
    forms_a.discard("")
    forms_b.discard("")
    if not forms_a or not forms_b:
        return 0.0
    return max(jaro_winkler(x, y) for x in forms_a for y in forms_b)


def _typed_neighbors(store: GraphStore, entity_id: str) -> set[tuple[str, str, str]]:
    """(relation kind, direction, other endpoint) items for the shared-neighbor count."""
    items = set()
    for rel in store.relations_of(entity_id):
        if rel.source == entity_id:
            items.add((rel.kind.value, "out", rel.target))
        else:
            items.add((rel.kind.value, "in", rel.source))
    return items


def candidates_by_relation(
    store: GraphStore,
    min_shared: int = DEFAULT_SHARED_NEIGHBORS,
    min_name_similarity: float = DEFAULT_NAME_SIMILARITY,
    blocklist: Iterable[str] = (),
) -> list[SynonymCandidate]:
    """Same-kind pairs sharing >= min_shared typed neighbors, gated by name score.

    Inverted index over typed-neighbor items keeps this near-linear in edges
    rather than quadratic in entities.
    """
    blocked = set(blocklist)
    entities = store.live_entities()
    by_id = {e.id: e for e in entities}

    item_owners: dict[tuple[str, str, str], list[str]] = {}
    for ent in entities:
        for item in _typed_neighbors(store, ent.id):
            item_owners.setdefault(item, []).append(ent.id)

    shared_count: dict[tuple[str, str], int] = {}
    for owners in item_owners.values():
        owners = sorted(owners, key=natural_id_key)
        for i, a in enumerate(owners):
            for b in owners[i + 1:]:
                shared_count[(a, b)] = shared_count.get((a, b), 0) + 1

    out: list[SynonymCandidate] = []
    for (a_id, b_id), shared in shared_count.items():
        if shared < min_shared:
            continue
        if pair_id(a_id, b_id) in blocked:
            continue
        a, b = by_id[a_id], by_id[b_id]
        if a.kind is not b.kind:
            continue
        score = name_score(a, b)
        if score < min_name_similarity:
            continue
        out.append(
            SynonymCandidate(
                entity_a=a_id,
                entity_b=b_id,
                sources={"RelationMatch"},
                name_similarity=score,
                shared_neighbors=shared,
            )
        )
    out.sort(key=lambda c: (-c.shared_neighbors, natural_id_key(c.entity_a), natural_id_key(c.entity_b)))
    return out


def candidates_by_embedding(
    store: GraphStore,
    embedder: TrigramHashEmbedder,
    min_cosine: float = DEFAULT_EMBEDDING_SIMILARITY,
    kind: EntityKind = EntityKind.COMPANY,
    blocklist: Iterable[str] = (),
) -> list[SynonymCandidate]:
    """Same-kind pairs whose canonical-name embeddings pass the cosine gate."""
    blocked = set(blocklist)
    entities = [e for e in store.live_entities() if e.kind is kind]
    vectors = {e.id: embedder.embed(e.canonical_name) for e in entities}

    out: list[SynonymCandidate] = []
    for i, a in enumerate(entities):
        for b in entities[i + 1:]:
            if pair_id(a.id, b.id) in blocked:
                continue
            sim = cosine(vectors[a.id], vectors[b.id])
            if sim < min_cosine:
                continue
            out.append(
                SynonymCandidate(
                    entity_a=a.id,
                    entity_b=b.id,
                    sources={"EmbeddingMatch"},
                    name_similarity=name_score(a, b),
                    embedding_similarity=sim,
                )
            )
    out.sort(key=lambda c: (natural_id_key(c.entity_a), natural_id_key(c.entity_b)))
    return out


def merge_candidate_lists(*lists: list[SynonymCandidate]) -> list[SynonymCandidate]:
    """Union by pair id; sources union, best scores kept."""
    merged: dict[str, SynonymCandidate] = {}
    for cand in (c for lst in lists for c in lst):
        existing = merged.get(cand.pair_id)
        if existing is None:
            merged[cand.pair_id] = cand
            continue
        existing.sources |= cand.sources
        existing.name_similarity = max(existing.name_similarity, cand.name_similarity)
        existing.shared_neighbors = max(existing.shared_neighbors, cand.shared_neighbors)
        if cand.embedding_similarity is not None:
            if (
                existing.embedding_similarity is None
                or cand.embedding_similarity > existing.embedding_similarity
            ):
                existing.embedding_similarity = cand.embedding_similarity
    return sorted(
        merged.values(),
        key=lambda c: (natural_id_key(c.entity_a), natural_id_key(c.entity_b)),
    )


def lookup_synonym(store: GraphStore, name: str) -> str | None:
    """Route a surface form to its live canonical entity, chasing merges."""
    return store.lookup_alias(name)
