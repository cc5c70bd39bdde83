from .store import GraphStore, MergeReport
from .types import (
    ENDPOINT_KINDS,
    FLIPPABLE_KINDS,
    Entity,
    EntityKind,
    Evidence,
    Relation,
    RelationKind,
    RelationStatus,
    pair_id,
)

__all__ = [
    "ENDPOINT_KINDS",
    "FLIPPABLE_KINDS",
    "Entity",
    "EntityKind",
    "Evidence",
    "GraphStore",
    "MergeReport",
    "Relation",
    "RelationKind",
    "RelationStatus",
    "pair_id",
]
