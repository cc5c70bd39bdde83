"""Evidence gate: a relation enters the graph only if its quote is real.

The quote must appear in the source document under normalized matching
(typographic quotes, dashes and whitespace runs folded), and both endpoint
names must refer to entities the same payload declared. Offsets reported
back are positions in the ORIGINAL document text, not the normalized view.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..model.types import EntityKind, RelationKind
from ..textnorm import normalize_alias, normalize_quote, normalize_quote_with_map
from .schema import ExtractionPayload, RawEntity, RawRelation


@dataclass(frozen=True)
class ValidatedTriplet:
    kind: RelationKind
    source: RawEntity
    target: RawEntity
    quote: str  # as the provider wrote it
    char_offset: int  # offset of the match in the original document
    attributes: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RejectedTriplet:
    relation: RawRelation
    reason: str  # "EvidenceNotFound" | "DanglingEntityRef"


@dataclass(frozen=True)
class ValidationReport:
    entities: tuple[RawEntity, ...]
    accepted: tuple[ValidatedTriplet, ...]
    rejected: tuple[RejectedTriplet, ...]


def find_quote_offset(document_text: str, quote: str) -> int | None:
    """Locate a quote in a document, tolerating typographic drift.

    Returns the offset in original coordinates of the first match, or None.
    """
    norm_doc, index_map = normalize_quote_with_map(document_text)
    norm_quote = normalize_quote(quote)
    if not norm_quote:
        return None
    pos = norm_doc.find(norm_quote)
    if pos < 0:
        return None
    return index_map[pos]


def validate_evidence(payload: ExtractionPayload, document_text: str) -> ValidationReport:
    by_name = {normalize_alias(e.name): e for e in payload.entities}
    accepted: list[ValidatedTriplet] = []
    rejected: list[RejectedTriplet] = []

    for rel in payload.relations:
        src = by_name.get(normalize_alias(rel.source_name))
        tgt = by_name.get(normalize_alias(rel.target_name))
        if src is None or tgt is None:
            rejected.append(RejectedTriplet(relation=rel, reason="DanglingEntityRef"))
            continue
        offset = find_quote_offset(document_text, rel.evidence_quote)
        if offset is None:
            rejected.append(RejectedTriplet(relation=rel, reason="EvidenceNotFound"))
            continue
        accepted.append(
            ValidatedTriplet(
                kind=rel.kind,
                source=src,
                target=tgt,
                quote=rel.evidence_quote,
                char_offset=offset,
                attributes=dict(rel.attributes),
            )
        )

    return ValidationReport(
        entities=payload.entities,
        accepted=tuple(accepted),
        rejected=tuple(rejected),
    )
