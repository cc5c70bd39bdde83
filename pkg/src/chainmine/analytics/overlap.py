"""Cross-dataset alignment: how much of one graph another covers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..model.store import GraphStore
from ..model.types import EntityKind, RelationKind
from ..textnorm import normalize_alias

POLICIES = ("exact-normalized-name", "alias-aware")


@dataclass
class OverlapReport:
    policy: str
    nodes_a: int = 0
    nodes_b: int = 0
    node_overlap: int = 0
    edges_a: int = 0
    edges_b: int = 0
    edge_overlap: int = 0
    unmatched_nodes_a: list[str] = field(default_factory=list)
    unmatched_nodes_b: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "policy": self.policy,
            "nodes": {"a": self.nodes_a, "b": self.nodes_b, "overlap": self.node_overlap},
            "edges": {"a": self.edges_a, "b": self.edges_b, "overlap": self.edge_overlap},
            "unmatched_nodes_a": list(self.unmatched_nodes_a),
            "unmatched_nodes_b": list(self.unmatched_nodes_b),
        }


def _name_keys(store: GraphStore, alias_aware: bool) -> dict[str, set[str]]:
    """entity id -> set of normalized match keys (Companies only)."""
    keys: dict[str, set[str]] = {}
    for ent in store.live_entities():
        if ent.kind is not EntityKind.COMPANY:
            continue
        forms = {normalize_alias(ent.canonical_name)}
        if alias_aware:
            forms |= {normalize_alias(a) for a in ent.aliases}
        forms.discard("")
        keys[ent.id] = forms
    return keys


def compare_datasets(
    store_a: GraphStore,
    store_b: GraphStore,
    policy: str = "alias-aware",
) -> OverlapReport:
    """Node overlap over Companies and Supply-edge overlap (direction must agree)."""
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")
    alias_aware = policy == "alias-aware"
    keys_a = _name_keys(store_a, alias_aware)
    keys_b = _name_keys(store_b, alias_aware)

    report = OverlapReport(policy=policy, nodes_a=len(keys_a), nodes_b=len(keys_b))

    index_b: dict[str, str] = {}
    for eid, forms in keys_b.items():
        for form in forms:
            index_b.setdefault(form, eid)

    # a-side id -> matched b-side id (first normalized form that hits)
    match_ab: dict[str, str] = {}
    matched_b: set[str] = set()
    for eid in sorted(keys_a, key=lambda i: (len(i), i)):
        for form in sorted(keys_a[eid]):
            other = index_b.get(form)
            if other is not None:
                match_ab[eid] = other
                matched_b.add(other)
                break
    report.node_overlap = len(match_ab)
    report.unmatched_nodes_a = sorted(
        store_a.get_entity(eid).canonical_name for eid in keys_a if eid not in match_ab
    )
    report.unmatched_nodes_b = sorted(
        store_b.get_entity(eid).canonical_name for eid in keys_b if eid not in matched_b
    )

    def supply_edges(store: GraphStore) -> list[tuple[str, str]]:
        return [
            (r.source, r.target)
            for r in store.live_relations()
            if r.kind is RelationKind.SUPPLY
        ]

    edges_a = supply_edges(store_a)
    edges_b = set(supply_edges(store_b))
    report.edges_a = len(edges_a)
    report.edges_b = len(edges_b)
    report.edge_overlap = sum(
        1
        for src, tgt in edges_a
        if src in match_ab and tgt in match_ab and (match_ab[src], match_ab[tgt]) in edges_b
    )
    return report
