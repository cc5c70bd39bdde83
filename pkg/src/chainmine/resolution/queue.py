"""Human-gated synonym review queue.

Candidates flow Pending -> (LLM verdict) -> AwaitingReview -> Approved or
RejectedByHuman. A merge happens only on an approve; keep-separate goes on
a blocklist both candidate generators consult. All transitions are
compare-and-set so a second tab or a replayed request cannot double-merge.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ..clock import Clock, SystemClock
from ..errors import StaleState, UnknownPair
from ..jsonutil import dumps_canonical
from ..model.store import GraphStore
from ..model.types import natural_id_key
from ..providers.llm import LLMProvider
from ..extraction.prompts import build_synonym_prompt
from .candidates import CandidateState, SynonymCandidate, TERMINAL_STATES


def _context_summary(store: GraphStore, entity_id: str, limit: int = 5) -> list[str]:
    """Short neighbor lines the synonym judge (and the UI) can show."""
    lines = []
    for rel in store.relations_of(entity_id)[:limit]:
        src = store.get_entity(store.resolve_id(rel.source))
        tgt = store.get_entity(store.resolve_id(rel.target))
        lines.append(f"{rel.kind.value}: {src.canonical_name} -> {tgt.canonical_name}")
    return lines


def elect_survivor(store: GraphStore, id_a: str, id_b: str) -> tuple[str, str]:
    """(survivor, absorbed): more relations wins, then older created_at, then smaller id."""
    a = store.get_entity(store.resolve_id(id_a))
    b = store.get_entity(store.resolve_id(id_b))
    deg_a = len(store.relations_of(a.id))
    deg_b = len(store.relations_of(b.id))
    if deg_a != deg_b:
        return (a.id, b.id) if deg_a > deg_b else (b.id, a.id)
    if a.created_at != b.created_at:
        return (a.id, b.id) if a.created_at < b.created_at else (b.id, a.id)
    return (a.id, b.id) if natural_id_key(a.id) < natural_id_key(b.id) else (b.id, a.id)


class ReviewQueue:
    def __init__(self, store: GraphStore, clock: Clock | None = None):
        self.store = store
        self.clock = clock or SystemClock()
        self._candidates: dict[str, SynonymCandidate] = {}

    # -- candidate intake -------------------------------------------------------

    def upsert_candidates(self, candidates: list[SynonymCandidate]) -> int:
        """Add newly generated candidates. Existing state never regresses."""
        added = 0
        blocked = self.store.rejected_pairs()
        for cand in candidates:
            if cand.pair_id in blocked:
                continue
            existing = self._candidates.get(cand.pair_id)
            if existing is None:
                self._candidates[cand.pair_id] = cand
                added += 1
                continue
            existing.sources |= cand.sources
            existing.name_similarity = max(existing.name_similarity, cand.name_similarity)
            existing.shared_neighbors = max(existing.shared_neighbors, cand.shared_neighbors)
            if cand.embedding_similarity is not None and (
                existing.embedding_similarity is None
                or cand.embedding_similarity > existing.embedding_similarity
            ):
                existing.embedding_similarity = cand.embedding_similarity
        return added

    def get(self, pair_id: str) -> SynonymCandidate:
        cand = self._candidates.get(pair_id)
        if cand is None:
            raise UnknownPair(pair_id)
        return cand

    def candidates(self, state: CandidateState | None = None) -> list[SynonymCandidate]:
        out = [
            c
            for c in self._candidates.values()
            if state is None or c.state is state
        ]
        out.sort(key=lambda c: (natural_id_key(c.entity_a), natural_id_key(c.entity_b)))
        return out

    def awaiting_review(self) -> list[SynonymCandidate]:
        return self.candidates(CandidateState.AWAITING_REVIEW)

    # -- LLM verification --------------------------------------------------------

    def verify_candidate(self, cand: SynonymCandidate, llm: LLMProvider) -> dict[str, Any]:
        if cand.state is not CandidateState.PENDING:
            raise StaleState(f"{cand.pair_id} is {cand.state.value}, not Pending")
        a = self.store.get_entity(self.store.resolve_id(cand.entity_a))
        b = self.store.get_entity(self.store.resolve_id(cand.entity_b))
        prompt = build_synonym_prompt(
            a.canonical_name,
            a.aliases,
            b.canonical_name,
            b.aliases,
            _context_summary(self.store, a.id),
            _context_summary(self.store, b.id),
        )
        raw = llm.complete(prompt)
        verdict = json.loads(raw)
        if not isinstance(verdict, dict) or "is_synonym" not in verdict:
            raise StaleState(f"malformed synonym verdict for {cand.pair_id}: {raw!r}")
        cand.llm_verdict = {
            "is_synonym": bool(verdict["is_synonym"]),
            "rationale": str(verdict.get("rationale", "")),
        }
        cand.state = (
            CandidateState.AWAITING_REVIEW
            if cand.llm_verdict["is_synonym"]
            else CandidateState.REJECTED_BY_LLM
        )
        return cand.llm_verdict

    def verify_pending(self, llm: LLMProvider) -> dict[str, int]:
        """Judge every Pending candidate. Provider errors leave state untouched."""
        counts = {"awaiting_review": 0, "rejected_by_llm": 0, "errors": 0}
        for cand in self.candidates(CandidateState.PENDING):
            try:
                verdict = self.verify_candidate(cand, llm)
            except Exception:
                counts["errors"] += 1
                continue
            if verdict["is_synonym"]:
                counts["awaiting_review"] += 1
            else:
                counts["rejected_by_llm"] += 1
        return counts

    # -- human decisions ----------------------------------------------------------

    def apply_decision(
        self,
        pair_id: str,
        decision: str,
        reviewer: str,
        auto: bool = False,
    ) -> dict[str, Any]:
        """Apply merge or keep-separate. Idempotent for repeated identical calls."""
        if decision not in ("merge", "keep-separate"):
            raise ValueError(f"decision must be merge or keep-separate, got {decision!r}")
        cand = self.get(pair_id)

        # Idempotent replays: the same terminal decision again is a no-op.
        if cand.state in TERMINAL_STATES or cand.state is CandidateState.AUTO_VERIFIED:
            terminal_matches = (
                decision == "merge"
                and cand.state in (CandidateState.APPROVED, CandidateState.AUTO_VERIFIED)
            ) or (
                decision == "keep-separate"
                and cand.state is CandidateState.REJECTED_BY_HUMAN
            )
            if terminal_matches:
                return {"pair_id": pair_id, "state": cand.state.value, "noop": True}
            raise StaleState(f"{pair_id} already decided: {cand.state.value}")

        if cand.state is not CandidateState.AWAITING_REVIEW:
            raise StaleState(
                f"{pair_id} is {cand.state.value}, expected AwaitingReview"
            )

        scores = {
            "name_similarity": cand.name_similarity,
            "shared_neighbors": float(cand.shared_neighbors),
        }
        if cand.embedding_similarity is not None:
            scores["embedding_similarity"] = cand.embedding_similarity

        if decision == "merge":
            survivor, absorbed = elect_survivor(self.store, cand.entity_a, cand.entity_b)
            report = self.store.merge_entities(survivor, absorbed)
            self.store.record_synonym_decision(
                pair_id,
                cand.entity_a,
                cand.entity_b,
                "merge",
                "llm" if auto else reviewer,
                scores=scores,
                survivor=survivor,
            )
            cand.state = (
                CandidateState.AUTO_VERIFIED if auto else CandidateState.APPROVED
            )
            return {
                "pair_id": pair_id,
                "state": cand.state.value,
                "survivor": survivor,
                "absorbed": absorbed,
                "aliases_added": list(report.aliases_added),
                "relations_rewritten": report.relations_rewritten,
                "relations_coalesced": report.relations_coalesced,
                "noop": False,
            }

        self.store.record_synonym_decision(
            pair_id,
            cand.entity_a,
            cand.entity_b,
            "keep-separate",
            reviewer,
            scores=scores,
        )
        cand.state = CandidateState.REJECTED_BY_HUMAN
        return {"pair_id": pair_id, "state": cand.state.value, "noop": False}

    # -- persistence -----------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "candidates": [c.to_dict() for c in self.candidates()],
        }

    def save(self, path: str | Path) -> None:
        Path(path).write_text(dumps_canonical(self.to_dict()), encoding="utf-8")

    def load(self, path: str | Path) -> int:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        self._candidates = {}
        for item in data.get("candidates", []):
            cand = SynonymCandidate.from_dict(item)
            self._candidates[cand.pair_id] = cand
        return len(self._candidates)
