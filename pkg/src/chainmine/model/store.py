"""Mutable knowledge graph with snapshot, journal, and merge semantics.

Identity rules enforced here:
  - entity ids are monotonic ("e1", "e2", ...) and never reused
  - a normalized alias maps to at most one live entity
  - directed relations are unique per (kind, source, target)
  - merged entities are tombstoned (merged_into) and their edges rewritten
    eagerly, so readers never need to chase chains at query time
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable

from ..clock import Clock, LogicalClock, isoformat
from ..errors import (
    AliasConflict,
    AlreadyMerged,
    CorruptSnapshot,
    EndpointKindMismatch,
    KindMismatch,
    SchemaVersionMismatch,
    SelfMerge,
    StaleState,
    StorageFailure,
    UnknownEntity,
    UnknownRelation,
)
from ..jsonutil import dumps_canonical, dumps_compact
from ..textnorm import normalize_alias, normalize_quote
from .types import (
    ENDPOINT_KINDS,
    FLIPPABLE_KINDS,
    Entity,
    EntityKind,
    Evidence,
    Relation,
    RelationKind,
    RelationStatus,
)

SCHEMA_VERSION = 1


@dataclass
class MergeReport:
    survivor_id: str
    absorbed_id: str
    aliases_added: list[str] = field(default_factory=list)
    relations_rewritten: int = 0
    relations_coalesced: int = 0
    self_loops_dropped: int = 0
    noop: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "survivor_id": self.survivor_id,
            "absorbed_id": self.absorbed_id,
            "aliases_added": list(self.aliases_added),
            "relations_rewritten": self.relations_rewritten,
            "relations_coalesced": self.relations_coalesced,
            "self_loops_dropped": self.self_loops_dropped,
            "noop": self.noop,
        }


_STATUS_RANK = {
    RelationStatus.EXTRACTED: 0,
    RelationStatus.VERIFIED: 1,
    RelationStatus.REJECTED: 1,
}


def _coalesce_status(keep: RelationStatus, other: RelationStatus) -> RelationStatus:
    # A decided status (Verified/Rejected) outranks Extracted; when both are
    # decided the surviving relation keeps its own.
    if _STATUS_RANK[other] > _STATUS_RANK[keep]:
        return other
    return keep


class GraphStore:
    """Single-writer graph store. All mutation goes through one lock."""

    def __init__(self, clock: Clock | None = None):
        self._clock = clock or LogicalClock()
        self._lock = threading.RLock()
        self._entities: dict[str, Entity] = {}
        self._relations: dict[str, Relation] = {}
        self._alias_index: dict[str, str] = {}  # normalized alias -> entity id
        self._relation_index: dict[tuple[RelationKind, str, str], str] = {}
        self._entity_seq = 0
        self._relation_seq = 0
        self._synonym_decisions: list[dict[str, Any]] = []
        self._last_mutation = isoformat(self._clock.now())
        self._journal_path: Path | None = None
        self._journal_seq = 0
        self._replay_ts: str | None = None

    # -- time ---------------------------------------------------------------

    def _stamp(self) -> str:
        # journal replay reuses the recorded timestamp so recovery is
        # byte-identical to the original run
        ts = self._replay_ts if self._replay_ts is not None else isoformat(self._clock.now())
        self._last_mutation = ts
        return ts

    @property
    def last_mutation_at(self) -> str:
        return self._last_mutation

    # -- journal ------------------------------------------------------------

    def attach_journal(self, path: str | Path) -> None:
        self._journal_path = Path(path)
        self._journal_path.parent.mkdir(parents=True, exist_ok=True)

    def _log(self, op: dict[str, Any]) -> None:
        self._journal_seq += 1
        if self._journal_path is None:
            return
        op = {"seq": self._journal_seq, **op}
        try:
            with self._journal_path.open("a", encoding="utf-8") as fh:
                fh.write(dumps_compact(op) + "\n")
        except OSError as exc:
            raise StorageFailure(f"journal append failed: {exc}") from exc

    # -- entities -----------------------------------------------------------

    def _next_entity_id(self) -> str:
        self._entity_seq += 1
        return f"e{self._entity_seq}"

    def _next_relation_id(self) -> str:
        self._relation_seq += 1
        return f"r{self._relation_seq}"

    def lookup_alias(self, text: str) -> str | None:
        """Live entity id owning this alias, or None."""
        eid = self._alias_index.get(normalize_alias(text))
        if eid is None:
            return None
        return self.resolve_id(eid)

    def resolve_id(self, entity_id: str) -> str:
        """Chase merge tombstones down to the live entity id."""
        seen = set()
        current = entity_id
        while True:
            ent = self._entities.get(current)
            if ent is None:
                raise UnknownEntity(entity_id)
            if ent.merged_into is None:
                return current
            if current in seen:
                raise CorruptSnapshot(f"merge cycle at {current}")
            seen.add(current)
            current = ent.merged_into

    def get_entity(self, entity_id: str) -> Entity:
        ent = self._entities.get(entity_id)
        if ent is None:
            raise UnknownEntity(entity_id)
        return ent

    def get_relation(self, relation_id: str) -> Relation:
        rel = self._relations.get(relation_id)
        if rel is None:
            raise UnknownRelation(relation_id)
        return rel

    def upsert_entity(
        self,
        kind: EntityKind,
        name: str,
        aliases: Iterable[str] = (),
        jurisdiction: str | None = None,
    ) -> tuple[Entity, bool]:
        """Create or enrich the entity owning `name`. Returns (entity, created)."""
        with self._lock:
            name = name.strip()
            if not name:
                raise ValueError("entity name must be non-empty")
            all_aliases = [name, *[a.strip() for a in aliases if a.strip()]]
            owner_id = self._alias_index.get(normalize_alias(name))
            if owner_id is not None:
                owner_id = self.resolve_id(owner_id)
                ent = self._entities[owner_id]
                if ent.kind is not kind:
                    raise KindMismatch(
                        f"{name!r} already exists as {ent.kind.value}, not {kind.value}"
                    )
                added = self._adopt_aliases(ent, all_aliases)
                if jurisdiction and ent.jurisdiction is None:
                    ent.jurisdiction = jurisdiction
                    added = True
                if added:
                    self._stamp()
                self._log(
                    {
                        "op": "upsert_entity",
                        "id": ent.id,
                        "name": name,
                        "kind": kind.value,
                        "aliases": all_aliases[1:],
                        "jurisdiction": jurisdiction,
                        "created": False,
                        "ts": self._last_mutation,
                    }
                )
                return ent, False

            # New entity: every alias must be unclaimed.
            for alias in all_aliases:
                claimed = self._alias_index.get(normalize_alias(alias))
                if claimed is not None:
                    claimed = self.resolve_id(claimed)
                    raise AliasConflict(alias, claimed, "<new>")
            ts = self._stamp()
            ent = Entity(
                id=self._next_entity_id(),
                kind=kind,
                canonical_name=name,
                aliases=[],
                jurisdiction=jurisdiction,
                created_at=ts,
            )
            self._entities[ent.id] = ent
            self._adopt_aliases(ent, all_aliases)
            self._log(
                {
                    "op": "upsert_entity",
                    "id": ent.id,
                    "name": name,
                    "kind": kind.value,
                    "aliases": all_aliases[1:],
                    "jurisdiction": jurisdiction,
                    "created": True,
                    "ts": ts,
                }
            )
            return ent, True

    def _adopt_aliases(self, ent: Entity, aliases: Iterable[str]) -> bool:
        """Attach aliases to ent; conflict if another live entity claims one.

        Exact surface forms are all kept ("HUAWEI" joins "Huawei") so the
        record shows every spelling the corpus used; only the normalized
        form participates in the uniqueness index.
        """
        changed = False
        have_exact = set(ent.aliases)
        for alias in aliases:
            alias = alias.strip()
            norm = normalize_alias(alias)
            if not norm:
                continue
            claimed = self._alias_index.get(norm)
            if claimed is not None:
                claimed = self.resolve_id(claimed)
                if claimed != ent.id:
                    raise AliasConflict(alias, claimed, ent.id)
            if alias in have_exact:
                continue
            ent.aliases.append(alias)
            self._alias_index[norm] = ent.id
            have_exact.add(alias)
            changed = True
        return changed

    def set_jurisdiction(self, entity_id: str, jurisdiction: str) -> bool:
        """Fill jurisdiction if empty. Existing values are never overwritten."""
        with self._lock:
            ent = self.get_entity(self.resolve_id(entity_id))
            if ent.jurisdiction is not None:
                return False
            ent.jurisdiction = jurisdiction
            ts = self._stamp()
            self._log(
                {
                    "op": "set_jurisdiction",
                    "id": ent.id,
                    "jurisdiction": jurisdiction,
                    "ts": ts,
                }
            )
            return True

    # -- relations ------------------------------------------------------------

    def upsert_relation(
        self,
        kind: RelationKind,
        source_id: str,
        target_id: str,
        evidence: Iterable[Evidence] = (),
        attributes: dict[str, Any] | None = None,
    ) -> tuple[Relation | None, bool]:
        """Add or enrich a directed edge.

        Returns (relation, created). Self-loops after merge resolution are
        dropped and reported as (None, False).
        """
        with self._lock:
            src = self.resolve_id(source_id)
            tgt = self.resolve_id(target_id)
            want = ENDPOINT_KINDS[kind]
            got = (self._entities[src].kind, self._entities[tgt].kind)
            if got != want:
                raise EndpointKindMismatch(
                    f"{kind.value} wants {want[0].value}->{want[1].value}, "
                    f"got {got[0].value}->{got[1].value}"
                )
            if src == tgt:
                return None, False
            ev_list = list(evidence)
            existing_id = self._relation_index.get((kind, src, tgt))
            if existing_id is not None:
                rel = self._relations[existing_id]
                changed = self._union_evidence(rel, ev_list)
                if attributes and self._merge_attributes(rel.attributes, attributes):
                    changed = True
                if changed:
                    rel.last_seen = self._stamp()
                self._log(
                    {
                        "op": "upsert_relation",
                        "id": rel.id,
                        "kind": kind.value,
                        "source": src,
                        "target": tgt,
                        "evidence": [e.to_dict() for e in ev_list],
                        "attributes": attributes or {},
                        "created": False,
                        "ts": self._last_mutation,
                    }
                )
                return rel, False

            if not ev_list:
                raise ValueError("a new relation needs at least one evidence item")
            ts = self._stamp()
            rel = Relation(
                id=self._next_relation_id(),
                kind=kind,
                source=src,
                target=tgt,
                evidence=[],
                attributes=dict(attributes or {}),
                first_seen=ts,
                last_seen=ts,
            )
            for ev in ev_list:
                if not ev.extracted_at:
                    ev.extracted_at = ts
            self._union_evidence(rel, ev_list)
            self._relations[rel.id] = rel
            self._relation_index[rel.key()] = rel.id
            self._log(
                {
                    "op": "upsert_relation",
                    "id": rel.id,
                    "kind": kind.value,
                    "source": src,
                    "target": tgt,
                    "evidence": [e.to_dict() for e in ev_list],
                    "attributes": attributes or {},
                    "created": True,
                    "ts": ts,
                }
            )
            return rel, True

    @staticmethod
    def _merge_attributes(existing: dict[str, Any], incoming: dict[str, Any]) -> bool:
        """Union attribute maps; disagreeing values accumulate into a list."""
        changed = False
        for k, v in incoming.items():
            if k not in existing:
                existing[k] = v
                changed = True
                continue
            current = existing[k]
            if current == v:
                continue
            if isinstance(current, list):
                if v not in current:
                    current.append(v)
                    changed = True
            else:
                existing[k] = [current, v]
                changed = True
        return changed

    @staticmethod
    def _union_evidence(rel: Relation, incoming: Iterable[Evidence]) -> bool:
        have = {e.key() for e in rel.evidence}
        changed = False
        for ev in incoming:
            if ev.key() in have:
                continue
            rel.evidence.append(ev)
            have.add(ev.key())
            changed = True
        return changed

    def set_relation_status(
        self,
        relation_id: str,
        new_status: RelationStatus,
        expected: RelationStatus,
    ) -> Relation:
        """Compare-and-set the verification status."""
        with self._lock:
            rel = self.get_relation(relation_id)
            if rel.status is not expected:
                raise StaleState(
                    f"{relation_id}: expected {expected.value}, found {rel.status.value}"
                )
            if new_status is expected:
                return rel
            rel.status = new_status
            ts = self._stamp()
            self._log(
                {
                    "op": "set_status",
                    "id": relation_id,
                    "status": new_status.value,
                    "expected": expected.value,
                    "ts": ts,
                }
            )
            return rel

    def flip_relation(self, relation_id: str) -> Relation:
        """Reverse a mis-directed edge.

        If the reversed edge already exists the evidence is folded into it,
        this relation is marked Rejected, and the existing edge is returned.
        """
        with self._lock:
            rel = self.get_relation(relation_id)
            if rel.kind not in FLIPPABLE_KINDS:
                raise EndpointKindMismatch(f"{rel.kind.value} is not direction-symmetric")
            reverse_key = (rel.kind, rel.target, rel.source)
            holder_id = self._relation_index.get(reverse_key)
            ts = self._stamp()
            if holder_id is not None:
                holder = self._relations[holder_id]
                self._union_evidence(holder, rel.evidence)
                holder.last_seen = ts
                rel.status = RelationStatus.REJECTED
                rel.attributes["superseded_by"] = holder_id
                self._log({"op": "flip", "id": relation_id, "merged_into": holder_id, "ts": ts})
                return holder
            del self._relation_index[rel.key()]
            rel.source, rel.target = rel.target, rel.source
            # stamped here, not by the caller, so journal replay restores it
            rel.attributes["direction_flipped"] = True
            rel.last_seen = ts
            self._relation_index[rel.key()] = rel.id
            self._log({"op": "flip", "id": relation_id, "merged_into": None, "ts": ts})
            return rel

    # -- merge ----------------------------------------------------------------

    def merge_entities(self, survivor_id: str, absorbed_id: str) -> MergeReport:
        """Fold absorbed into survivor: aliases move, edges are rewritten."""
        with self._lock:
            if survivor_id == absorbed_id:
                raise SelfMerge(survivor_id)
            survivor = self.get_entity(survivor_id)
            absorbed = self.get_entity(absorbed_id)
            if survivor.merged_into is not None:
                raise AlreadyMerged(f"survivor {survivor_id} was merged into {survivor.merged_into}")
            if absorbed.merged_into is not None:
                if self.resolve_id(absorbed_id) == survivor_id:
                    return MergeReport(survivor_id, absorbed_id, noop=True)
                raise AlreadyMerged(
                    f"{absorbed_id} already merged into {absorbed.merged_into}"
                )
            if survivor.kind is not absorbed.kind:
                raise KindMismatch(
                    f"cannot merge {absorbed.kind.value} into {survivor.kind.value}"
                )

            report = MergeReport(survivor_id, absorbed_id)
            ts = self._stamp()

            moved = list(absorbed.aliases)
            absorbed.aliases = []
            absorbed.merged_into = survivor_id
            have_exact = set(survivor.aliases)
            for alias in moved:
                self._alias_index[normalize_alias(alias)] = survivor_id
                if alias not in have_exact:
                    survivor.aliases.append(alias)
                    have_exact.add(alias)
                    report.aliases_added.append(alias)
            if survivor.jurisdiction is None and absorbed.jurisdiction is not None:
                survivor.jurisdiction = absorbed.jurisdiction

            # Rewrite edges touching the absorbed node, in id order for
            # deterministic collision handling.
            touched = sorted(
                (r for r in self._relations.values()
                 if absorbed_id in (r.source, r.target)),
                key=lambda r: (len(r.id), r.id),
            )
            for rel in touched:
                del self._relation_index[rel.key()]
                new_src = survivor_id if rel.source == absorbed_id else rel.source
                new_tgt = survivor_id if rel.target == absorbed_id else rel.target
                if new_src == new_tgt:
                    del self._relations[rel.id]
                    report.self_loops_dropped += 1
                    continue
                collided = self._relation_index.get((rel.kind, new_src, new_tgt))
                if collided is not None:
                    keeper = self._relations[collided]
                    self._union_evidence(keeper, rel.evidence)
                    keeper.status = _coalesce_status(keeper.status, rel.status)
                    keeper.last_seen = ts
                    del self._relations[rel.id]
                    report.relations_coalesced += 1
                    continue
                rel.source, rel.target = new_src, new_tgt
                rel.last_seen = ts
                self._relation_index[rel.key()] = rel.id
                report.relations_rewritten += 1

            self._log(
                {
                    "op": "merge",
                    "survivor": survivor_id,
                    "absorbed": absorbed_id,
                    "ts": ts,
                }
            )
            return report

    # -- synonym decisions ------------------------------------------------------

    def record_synonym_decision(
        self,
        pair_id: str,
        entity_a: str,
        entity_b: str,
        decision: str,
        decided_by: str,
        scores: dict[str, float] | None = None,
        survivor: str | None = None,
    ) -> dict[str, Any]:
        if decision not in ("merge", "keep-separate"):
            raise ValueError(f"decision must be merge or keep-separate, got {decision!r}")
        with self._lock:
            ts = self._stamp()
            record = {
                "pair_id": pair_id,
                "entity_a": entity_a,
                "entity_b": entity_b,
                "decision": decision,
                "decided_by": decided_by,
                "decided_at": ts,
                "scores": dict(scores or {}),
                "survivor": survivor,
            }
            self._synonym_decisions.append(record)
            self._log({"op": "synonym_decision", **record, "ts": ts})
            return record

    @property
    def synonym_decisions(self) -> list[dict[str, Any]]:
        return list(self._synonym_decisions)

    def rejected_pairs(self) -> set[str]:
        return {
            d["pair_id"]
            for d in self._synonym_decisions
            if d["decision"] == "keep-separate"
        }

    # -- queries ------------------------------------------------------------------

    def live_entities(self) -> list[Entity]:
        out = [e for e in self._entities.values() if e.live]
        out.sort(key=lambda e: (len(e.id), e.id))
        return out

    def all_entities(self) -> list[Entity]:
        out = list(self._entities.values())
        out.sort(key=lambda e: (len(e.id), e.id))
        return out

    def live_relations(self) -> list[Relation]:
        out = list(self._relations.values())
        out.sort(key=lambda r: (len(r.id), r.id))
        return out

    def relations_of(self, entity_id: str) -> list[Relation]:
        eid = self.resolve_id(entity_id)
        out = [r for r in self._relations.values() if eid in (r.source, r.target)]
        out.sort(key=lambda r: (len(r.id), r.id))
        return out

    def subgraph(
        self,
        kinds: set[RelationKind] | None = None,
        jurisdictions: set[str] | None = None,
        status: set[RelationStatus] | None = None,
    ) -> tuple[list[Entity], list[Relation]]:
        """Induced subgraph: entities passing the jurisdiction filter plus
        relations of matching kind/status with BOTH endpoints surviving."""
        entities = [
            e
            for e in self.live_entities()
            if jurisdictions is None
            or (e.jurisdiction is not None and e.jurisdiction in jurisdictions)
        ]
        kept_ids = {e.id for e in entities}
        relations = [
            r
            for r in self.live_relations()
            if (kinds is None or r.kind in kinds)
            and (status is None or r.status in status)
            and r.source in kept_ids
            and r.target in kept_ids
        ]
        return entities, relations

    def neighborhood(
        self,
        start_id: str,
        depth: int,
        kinds: set[RelationKind] | None = None,
    ) -> tuple[list[Entity], list[Relation]]:
        """Breadth-first slice around one entity, both edge directions."""
        start = self.resolve_id(start_id)
        seen = {start}
        frontier = [start]
        picked_relations: dict[str, Relation] = {}
        for _ in range(depth):
            next_frontier: list[str] = []
            for eid in frontier:
                for rel in self.relations_of(eid):
                    if kinds is not None and rel.kind not in kinds:
                        continue
                    picked_relations[rel.id] = rel
                    other = rel.target if rel.source == eid else rel.source
                    if other not in seen:
                        seen.add(other)
                        next_frontier.append(other)
            frontier = next_frontier
            if not frontier:
                break
        entities = sorted(
            (self._entities[eid] for eid in seen), key=lambda e: (len(e.id), e.id)
        )
        relations = sorted(
            picked_relations.values(), key=lambda r: (len(r.id), r.id)
        )
        # Trim edges whose far end fell outside the depth horizon.
        kept = [r for r in relations if r.source in seen and r.target in seen]
        return entities, kept

    def recheck_evidence(
        self, text_of: Callable[[str], str | None]
    ) -> list[tuple[str, int]]:
        """Re-validate every quote against its document. Returns failures."""
        failures: list[tuple[str, int]] = []
        for rel in self.live_relations():
            for i, ev in enumerate(rel.evidence):
                doc = text_of(ev.document_id)
                if doc is None or normalize_quote(ev.quote) not in normalize_quote(doc):
                    failures.append((rel.id, i))
        return failures

    # -- snapshot --------------------------------------------------------------

    def to_snapshot(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "written_at": self._last_mutation,
            "counters": {
                "entity": self._entity_seq,
                "relation": self._relation_seq,
                "journal": self._journal_seq,
            },
            "entities": [e.to_dict() for e in self.all_entities()],
            "relations": [r.to_dict() for r in self.live_relations()],
            "synonym_decisions": list(self._synonym_decisions),
        }

    def save_snapshot(self, path: str | Path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        try:
            tmp.write_text(dumps_canonical(self.to_snapshot()), encoding="utf-8")
            tmp.replace(path)
        except OSError as exc:
            raise StorageFailure(f"snapshot write failed: {exc}") from exc

    @classmethod
    def from_snapshot(
        cls, data: dict[str, Any], clock: Clock | None = None
    ) -> GraphStore:
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise SchemaVersionMismatch(f"snapshot schema {version!r}, expected {SCHEMA_VERSION}")
        store = cls(clock=clock)
        try:
            entities = [Entity.from_dict(e) for e in data["entities"]]
            relations = [Relation.from_dict(r) for r in data["relations"]]
        except (KeyError, ValueError, TypeError) as exc:
            raise CorruptSnapshot(str(exc)) from exc
        counters = data.get("counters") or {}

        for ent in entities:
            if ent.id in store._entities:
                raise CorruptSnapshot(f"duplicate entity id {ent.id}")
            store._entities[ent.id] = ent
        for ent in entities:
            if ent.merged_into is not None and ent.merged_into not in store._entities:
                raise CorruptSnapshot(f"{ent.id} merged into missing {ent.merged_into}")
            if ent.merged_into is not None and ent.aliases:
                raise CorruptSnapshot(f"tombstone {ent.id} still owns aliases")
            for alias in ent.aliases:
                norm = normalize_alias(alias)
                claimed = store._alias_index.get(norm)
                if claimed is not None and claimed != ent.id:
                    raise CorruptSnapshot(
                        f"alias {alias!r} claimed by both {claimed} and {ent.id}"
                    )
                store._alias_index[norm] = ent.id
        for rel in relations:
            if rel.id in store._relations:
                raise CorruptSnapshot(f"duplicate relation id {rel.id}")
            for endpoint in (rel.source, rel.target):
                ent = store._entities.get(endpoint)
                if ent is None:
                    raise CorruptSnapshot(f"{rel.id} references missing entity {endpoint}")
                if not ent.live:
                    raise CorruptSnapshot(f"{rel.id} references tombstone {endpoint}")
            want = ENDPOINT_KINDS[rel.kind]
            got = (store._entities[rel.source].kind, store._entities[rel.target].kind)
            if got != want:
                raise CorruptSnapshot(f"{rel.id} endpoint kinds {got} invalid for {rel.kind.value}")
            if rel.key() in store._relation_index:
                raise CorruptSnapshot(
                    f"duplicate edge {rel.kind.value} {rel.source}->{rel.target}"
                )
            store._relations[rel.id] = rel
            store._relation_index[rel.key()] = rel.id

        def max_seq(ids: Iterable[str]) -> int:
            best = 0
            for raw in ids:
                try:
                    best = max(best, int(raw[1:]))
                except ValueError as exc:
                    raise CorruptSnapshot(f"malformed id {raw!r}") from exc
            return best

        store._entity_seq = int(counters.get("entity", max_seq(store._entities)))
        store._relation_seq = int(counters.get("relation", max_seq(store._relations)))
        store._journal_seq = int(counters.get("journal", 0))
        if store._entity_seq < max_seq(store._entities):
            raise CorruptSnapshot("entity counter behind max id")
        if store._relation_seq < max_seq(store._relations):
            raise CorruptSnapshot("relation counter behind max id")

        store._synonym_decisions = [dict(d) for d in data.get("synonym_decisions", [])]
        store._last_mutation = data.get("written_at", store._last_mutation)
        return store

    @classmethod
    def load_snapshot(cls, path: str | Path, clock: Clock | None = None) -> GraphStore:
        path = Path(path)
        try:
            raw = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StorageFailure(f"snapshot read failed: {exc}") from exc
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise CorruptSnapshot(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise CorruptSnapshot("snapshot root must be an object")
        return cls.from_snapshot(data, clock=clock)

    # -- journal recovery ----------------------------------------------------------

    def replay_journal(self, path: str | Path) -> int:
        """Apply journal entries newer than the snapshot. Returns ops applied."""
        path = Path(path)
        if not path.exists():
            return 0
        applied = 0
        with path.open("r", encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    op = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorruptSnapshot(f"journal line {line_no}: {exc}") from exc
                if op.get("seq", 0) <= self._journal_seq:
                    continue
                self._apply_journal_op(op)
                self._journal_seq = op["seq"]
                applied += 1
        return applied

    def _apply_journal_op(self, op: dict[str, Any]) -> None:
        kind = op.get("op")
        journal_path = self._journal_path
        self._journal_path = None  # replay must not re-log
        self._replay_ts = op.get("ts")
        try:
            if kind == "upsert_entity":
                self.upsert_entity(
                    EntityKind(op["kind"]),
                    op["name"],
                    aliases=op.get("aliases", []),
                    jurisdiction=op.get("jurisdiction"),
                )
            elif kind == "set_jurisdiction":
                self.set_jurisdiction(op["id"], op["jurisdiction"])
            elif kind == "upsert_relation":
                self.upsert_relation(
                    RelationKind(op["kind"]),
                    op["source"],
                    op["target"],
                    evidence=[Evidence.from_dict(e) for e in op.get("evidence", [])],
                    attributes=op.get("attributes") or None,
                )
            elif kind == "set_status":
                self.set_relation_status(
                    op["id"],
                    RelationStatus(op["status"]),
                    RelationStatus(op["expected"]),
                )
            elif kind == "flip":
                self.flip_relation(op["id"])
            elif kind == "merge":
                self.merge_entities(op["survivor"], op["absorbed"])
            elif kind == "synonym_decision":
                self.record_synonym_decision(
                    op["pair_id"],
                    op["entity_a"],
                    op["entity_b"],
                    op["decision"],
                    op["decided_by"],
                    scores=op.get("scores"),
                    survivor=op.get("survivor"),
                )
            else:
                raise CorruptSnapshot(f"unknown journal op {kind!r}")
        finally:
            self._journal_path = journal_path
            self._replay_ts = None
