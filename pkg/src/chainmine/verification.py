"""Second-pass relation verification.

Each stored relation is re-judged one at a time by a judgment-only provider
call: accept, reject, or flip the direction. Verification never adds or
removes edges; it only moves status or swaps endpoints, so the edge count
is conserved.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .errors import ProviderError, StaleState
from .extraction.prompts import build_verification_prompt
from .model.store import GraphStore
from .model.types import FLIPPABLE_KINDS, Relation, RelationStatus
from .providers.llm import LLMProvider


@dataclass(frozen=True)
class Verdict:
    outcome: str  # accept | reject | flip
    confidence: float
    rationale: str


@dataclass
class VerificationReport:
    judged: int = 0
    accepted: int = 0
    rejected: int = 0
    flipped: int = 0
    errors: int = 0
    precision_before: float | None = None
    precision_after: float | None = None
    failures: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "judged": self.judged,
            "accepted": self.accepted,
            "rejected": self.rejected,
            "flipped": self.flipped,
            "errors": self.errors,
            "precision_before": self.precision_before,
            "precision_after": self.precision_after,
            "failures": list(self.failures),
        }


def _context_lines(store: GraphStore, entity_id: str, exclude: str, limit: int = 5) -> list[str]:
    lines = []
    for rel in store.relations_of(entity_id):
        if rel.id == exclude:
            continue
        src = store.get_entity(store.resolve_id(rel.source))
        tgt = store.get_entity(store.resolve_id(rel.target))
        lines.append(f"{rel.kind.value}: {src.canonical_name} -> {tgt.canonical_name}")
        if len(lines) >= limit:
            break
    return lines


def build_input(store: GraphStore, relation: Relation) -> str:
    src = store.get_entity(store.resolve_id(relation.source))
    tgt = store.get_entity(store.resolve_id(relation.target))
    return build_verification_prompt(
        relation.kind.value,
        src.canonical_name,
        src.kind.value,
        src.aliases,
        tgt.canonical_name,
        tgt.kind.value,
        tgt.aliases,
        [e.quote for e in relation.evidence],
        _context_lines(store, src.id, relation.id),
        _context_lines(store, tgt.id, relation.id),
    )


def parse_verdict(raw: str, kind_flippable: bool) -> Verdict:
    data = json.loads(raw)
    outcome = str(data.get("outcome", "")).lower()
    if outcome not in ("accept", "reject", "flip"):
        raise ValueError(f"unknown outcome {outcome!r}")
    if outcome == "flip" and not kind_flippable:
        # asymmetric endpoint kinds cannot swap; treat as a rejection
        outcome = "reject"
    confidence = float(data.get("confidence", 0.0))
    confidence = min(1.0, max(0.0, confidence))
    return Verdict(outcome=outcome, confidence=confidence, rationale=str(data.get("rationale", "")))


def verify_relation(store: GraphStore, relation_id: str, llm: LLMProvider) -> tuple[Verdict, Relation]:
    """Judge one Extracted relation and apply the outcome.

    Returns the verdict and the relation that carries the fact afterwards
    (a flip that collides with an existing reverse edge folds into it).
    """
    rel = store.get_relation(relation_id)
    if rel.status is not RelationStatus.EXTRACTED:
        raise StaleState(f"{relation_id} is {rel.status.value}, not Extracted")
    prompt = build_input(store, rel)
    raw = llm.complete(prompt)
    verdict = parse_verdict(raw, rel.kind in FLIPPABLE_KINDS)

    if verdict.outcome == "accept":
        applied = store.set_relation_status(
            rel.id, RelationStatus.VERIFIED, RelationStatus.EXTRACTED
        )
    elif verdict.outcome == "reject":
        applied = store.set_relation_status(
            rel.id, RelationStatus.REJECTED, RelationStatus.EXTRACTED
        )
    else:
        holder = store.flip_relation(rel.id)
        if holder.id == rel.id:
            applied = store.set_relation_status(
                holder.id, RelationStatus.VERIFIED, RelationStatus.EXTRACTED
            )
        else:
            # evidence folded into the pre-existing reverse edge; verify it
            # too if it has not been judged yet
            if holder.status is RelationStatus.EXTRACTED:
                store.set_relation_status(
                    holder.id, RelationStatus.VERIFIED, RelationStatus.EXTRACTED
                )
            applied = holder
    return verdict, applied


def verify_batch(
    store: GraphStore,
    llm: LLMProvider,
    labels: dict[str, bool] | None = None,
) -> VerificationReport:
    """Judge every Extracted relation exactly once.

    labels maps relation id -> whether the stored fact is true; when given,
    the report carries precision over all judged relations before the pass
    and over the still-standing (Verified) set after it.
    """
    report = VerificationReport()
    pending = [r for r in store.live_relations() if r.status is RelationStatus.EXTRACTED]
    if labels is not None and pending:
        known = [r for r in pending if r.id in labels]
        if known:
            report.precision_before = sum(labels[r.id] for r in known) / len(known)

    flipped_ids: set[str] = set()
    for rel in pending:
        # a flip earlier in this pass may have already decided this edge
        if store.get_relation(rel.id).status is not RelationStatus.EXTRACTED:
            continue
        try:
            verdict, applied = verify_relation(store, rel.id, llm)
        except ProviderError as exc:
            report.errors += 1
            report.failures.append({"relation_id": rel.id, "error": str(exc)})
            continue
        report.judged += 1
        if verdict.outcome == "accept":
            report.accepted += 1
        elif verdict.outcome == "reject":
            report.rejected += 1
        else:
            report.flipped += 1
            flipped_ids.add(rel.id)

    if labels is not None:
        surviving = [
            r for r in store.live_relations() if r.status is RelationStatus.VERIFIED
        ]
        known = [r for r in surviving if r.id in labels]
        if known:
            # a flip corrected the stored direction, so it now states a true fact
            def is_true(rel: Relation) -> bool:
                if rel.id in flipped_ids or rel.attributes.get("direction_flipped"):
                    return True
                return labels[rel.id]

            report.precision_after = sum(is_true(r) for r in known) / len(known)
    return report
