"""Knowledge-graph node and edge types.

Relation kinds mirror the supply-chain taxonomy the pipeline extracts:
each kind constrains the entity kinds allowed at its endpoints, and the
supply direction is canonical (source supplies target).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class EntityKind(str, Enum):
    COMPANY = "Company"
    PRODUCT = "Product"
    TECHNOLOGY = "Technology"
    PERSON = "Person"
    LOCATION = "Location"
    FACTORY = "Factory"


class RelationKind(str, Enum):
    SUPPLY = "Supply"
    COMPETITOR = "Competitor"
    PARTNER = "Partner"
    PRODUCE = "Produce"
    HAS_TECH = "HasTech"
    DEVELOP = "Develop"
    HOLD_SHARE = "HoldShare"
    WORK_FOR = "WorkFor"
    LOCATED_IN = "LocatedIn"
    OWN = "Own"
    COLLABORATE = "Collaborate"
    USE = "Use"


# (source kind, target kind) allowed for each relation kind.
ENDPOINT_KINDS: dict[RelationKind, tuple[EntityKind, EntityKind]] = {
    RelationKind.SUPPLY: (EntityKind.COMPANY, EntityKind.COMPANY),
    RelationKind.COMPETITOR: (EntityKind.COMPANY, EntityKind.COMPANY),
    RelationKind.PARTNER: (EntityKind.COMPANY, EntityKind.COMPANY),
    RelationKind.PRODUCE: (EntityKind.COMPANY, EntityKind.PRODUCT),
    RelationKind.HAS_TECH: (EntityKind.COMPANY, EntityKind.TECHNOLOGY),
    RelationKind.DEVELOP: (EntityKind.COMPANY, EntityKind.PRODUCT),
    RelationKind.HOLD_SHARE: (EntityKind.COMPANY, EntityKind.COMPANY),
    RelationKind.WORK_FOR: (EntityKind.PERSON, EntityKind.COMPANY),
    RelationKind.LOCATED_IN: (EntityKind.COMPANY, EntityKind.LOCATION),
    RelationKind.OWN: (EntityKind.COMPANY, EntityKind.FACTORY),
    RelationKind.COLLABORATE: (EntityKind.PERSON, EntityKind.PERSON),
    RelationKind.USE: (EntityKind.PRODUCT, EntityKind.TECHNOLOGY),
}

# Direction flips only make sense where both endpoints share a kind.
FLIPPABLE_KINDS = frozenset(k for k, (s, t) in ENDPOINT_KINDS.items() if s == t)


class RelationStatus(str, Enum):
    EXTRACTED = "Extracted"
    VERIFIED = "Verified"
    REJECTED = "Rejected"


@dataclass
class Entity:
    id: str
    kind: EntityKind
    canonical_name: str
    aliases: list[str]  # case-preserved, canonical_name always included
    jurisdiction: str | None = None
    created_at: str = ""
    merged_into: str | None = None

    @property
    def live(self) -> bool:
        return self.merged_into is None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "canonical_name": self.canonical_name,
            "aliases": list(self.aliases),
            "jurisdiction": self.jurisdiction,
            "created_at": self.created_at,
            "merged_into": self.merged_into,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Entity:
        return cls(
            id=data["id"],
            kind=EntityKind(data["kind"]),
            canonical_name=data["canonical_name"],
            aliases=list(data["aliases"]),
            jurisdiction=data.get("jurisdiction"),
            created_at=data.get("created_at", ""),
            merged_into=data.get("merged_into"),
        )


@dataclass
class Evidence:
    document_id: str
    quote: str
    char_offset: int
    extracted_at: str = ""

    def key(self) -> tuple[str, str, int]:
        return (self.document_id, self.quote, self.char_offset)

    def to_dict(self) -> dict[str, Any]:
        return {
            "document_id": self.document_id,
            "quote": self.quote,
            "char_offset": self.char_offset,
            "extracted_at": self.extracted_at,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Evidence:
        return cls(
            document_id=data["document_id"],
            quote=data["quote"],
            char_offset=int(data["char_offset"]),
            extracted_at=data.get("extracted_at", ""),
        )


@dataclass
class Relation:
    id: str
    kind: RelationKind
    source: str
    target: str
    evidence: list[Evidence]
    status: RelationStatus = RelationStatus.EXTRACTED
    attributes: dict[str, Any] = field(default_factory=dict)
    first_seen: str = ""
    last_seen: str = ""

    def key(self) -> tuple[RelationKind, str, str]:
        return (self.kind, self.source, self.target)

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "kind": self.kind.value,
            "source": self.source,
            "target": self.target,
            "evidence": [e.to_dict() for e in self.evidence],
            "status": self.status.value,
            "attributes": self.attributes,
            "first_seen": self.first_seen,
            "last_seen": self.last_seen,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Relation:
        return cls(
            id=data["id"],
            kind=RelationKind(data["kind"]),
            source=data["source"],
            target=data["target"],
            evidence=[Evidence.from_dict(e) for e in data["evidence"]],
            status=RelationStatus(data.get("status", "Extracted")),
            attributes=dict(data.get("attributes", {})),
            first_seen=data.get("first_seen", ""),
            last_seen=data.get("last_seen", ""),
        )


def natural_id_key(entity_id: str) -> tuple[int, str]:
    """Sort key giving e2 < e10 regardless of string order."""
    return (len(entity_id), entity_id)


def pair_id(id_a: str, id_b: str) -> str:
    a, b = sorted((id_a, id_b), key=natural_id_key)
    return f"{a}_{b}"
