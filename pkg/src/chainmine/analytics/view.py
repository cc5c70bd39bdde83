"""Immutable graph views analytics operate on.

A view captures a filtered slice of the store (scope label, node set,
directed edge list) so every metric call works from the same frozen data
regardless of what the store does afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from ..errors import EmptyGraph
from ..model.store import GraphStore
from ..model.types import EntityKind, RelationKind, RelationStatus
from .stats import degree_stats
from .stats import modularity as _modularity_weighted


@dataclass(frozen=True)
class GraphView:
    scope: str  # "All" or an economy / jurisdiction code
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (kind value, source, target)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def undirected_pairs(self) -> list[tuple[str, str]]:
        """Simple projection: parallel and reverse duplicates collapse."""
        seen = set()
        out = []
        for _, a, b in self.edges:
            if a == b:
                continue
            key = (a, b) if a <= b else (b, a)
            if key in seen:
                continue
            seen.add(key)
            out.append(key)
        return out


DEFAULT_STATUSES = frozenset({RelationStatus.VERIFIED})


def build_view(
    store: GraphStore,
    scope: str = "All",
    relation_kinds: Iterable[RelationKind] | None = (RelationKind.SUPPLY,),
    entity_kinds: Iterable[EntityKind] | None = (EntityKind.COMPANY,),
    statuses: Iterable[RelationStatus] | None = DEFAULT_STATUSES,
    jurisdiction: str | None = None,
    include_isolated: bool = False,
) -> GraphView:
    """Freeze a filtered slice of the store.

    Defaults follow the analytics convention: Supply edges between
    companies that survived verification. jurisdiction restricts both
    endpoints; nodes without a qualifying edge are dropped unless
    include_isolated is set.
    """
    rk = set(relation_kinds) if relation_kinds is not None else None
    ek = set(entity_kinds) if entity_kinds is not None else None
    st = set(statuses) if statuses is not None else None

    allowed_nodes = set()
    for ent in store.live_entities():
        if ek is not None and ent.kind not in ek:
            continue
        if jurisdiction is not None and ent.jurisdiction != jurisdiction:
            continue
        allowed_nodes.add(ent.id)

    edges = []
    touched = set()
    for rel in store.live_relations():
        if rk is not None and rel.kind not in rk:
            continue
        if st is not None and rel.status not in st:
            continue
        if rel.source not in allowed_nodes or rel.target not in allowed_nodes:
            continue
        edges.append((rel.kind.value, rel.source, rel.target))
        touched.add(rel.source)
        touched.add(rel.target)

    nodes = allowed_nodes if include_isolated else touched
    return GraphView(
        scope=scope if jurisdiction is None else jurisdiction,
        nodes=tuple(sorted(nodes, key=lambda i: (len(i), i))),
        edges=tuple(edges),
    )


@dataclass(frozen=True)
class GraphStats:
    scope: str
    n: int
    r: int
    average_degree: float
    density: float
    directed_density: float
    flagged: bool = False  # N < 2: density reported as 0 by convention

    def to_dict(self) -> dict[str, Any]:
        return {
            "scope": self.scope,
            "N": self.n,
            "R": self.r,
            "average_degree": self.average_degree,
            "density": self.density,
            "directed_density": self.directed_density,
            "flagged": self.flagged,
        }


def compute_stats(view: GraphView) -> GraphStats:
    """Degree and density over the undirected simple projection."""
    if view.n == 0:
        raise EmptyGraph(f"view {view.scope!r} has no nodes")
    pairs = view.undirected_pairs()
    r = len(pairs)
    if view.n < 2:
        return GraphStats(
            scope=view.scope,
            n=view.n,
            r=r,
            average_degree=2.0 * r / view.n,
            density=0.0,
            directed_density=0.0,
            flagged=True,
        )
    d = degree_stats(view.n, r)
    return GraphStats(
        scope=view.scope,
        n=view.n,
        r=r,
        average_degree=d["avg_degree"],
        density=d["density"],
        directed_density=d["directed_density"],
    )


def modularity_of(view: GraphView, assignment: dict[str, int]) -> float:
    """Binary-adjacency modularity of a partition over the view."""
    pairs = view.undirected_pairs()
    if not pairs:
        raise EmptyGraph(f"view {view.scope!r} has no edges")
    return _modularity_weighted(pairs, assignment)


def scope_metrics(store: GraphStore, scope: str = "All") -> dict[str, Any]:
    """Stats plus community structure for one jurisdiction scope.

    Raises EmptyGraph for a scope with no qualifying nodes; a view with
    nodes but no edges reports stats with communities set to null.
    """
    from collections import Counter

    from ..errors import DivisionUndefined
    from .louvain import detect_communities

    jurisdiction = None if scope in ("", "All") else scope
    view = build_view(store, jurisdiction=jurisdiction)
    payload: dict[str, Any] = {"stats": compute_stats(view).to_dict(), "communities": None}
    try:
        result = detect_communities(view.nodes, view.undirected_pairs())
    except (EmptyGraph, DivisionUndefined):
        return payload
    sizes = Counter(result.assignment.values())
    payload["communities"] = {
        "count": len(sizes),
        "modularity": result.modularity,
        "kernel": result.kernel,
        "sizes": sorted(sizes.values(), reverse=True),
    }
    return payload
