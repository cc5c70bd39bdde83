"""Whole-graph descriptive statistics.

Degree and density treat each directed edge once; the conventional
undirected density 2R/(N(N-1)) is reported alongside the directed form
R/(N(N-1)) because published supply-chain figures mix the two.
"""

from __future__ import annotations

from collections import Counter
from typing import Any, Hashable, Iterable, Mapping

from ..errors import DivisionUndefined, EmptyGraph


def degree_stats(num_nodes: int, num_edges: int) -> dict[str, float]:
    if num_nodes <= 0:
        raise EmptyGraph("no nodes")
    if num_edges < 0:
        raise ValueError("negative edge count")
    avg_degree = 2.0 * num_edges / num_nodes
    if num_nodes < 2:
        if num_edges:
            raise DivisionUndefined("density undefined for a single node with edges")
        return {"avg_degree": avg_degree, "density": 0.0, "directed_density": 0.0}
    pairs = num_nodes * (num_nodes - 1)
    return {
        "avg_degree": avg_degree,
        "density": 2.0 * num_edges / pairs,
        "directed_density": num_edges / pairs,
    }


def modularity(
    edges: Iterable[tuple[Hashable, Hashable]],
    assignment: Mapping[Hashable, int],
    weights: Iterable[float] | None = None,
) -> float:
    """Undirected weighted modularity of a partition.

    Q = sum_c [ W_in(c)/m - (D_c / 2m)^2 ] with m the total edge weight,
    W_in the weight inside community c, and D_c its degree sum. Self-edges
    count twice toward their endpoint's degree.
    """
    edge_list = list(edges)
    if weights is None:
        weight_list = [1.0] * len(edge_list)
    else:
        weight_list = [float(w) for w in weights]
        if len(weight_list) != len(edge_list):
            raise ValueError("weights length must match edges length")
    m = sum(weight_list)
    if m <= 0:
        raise DivisionUndefined("modularity needs positive total edge weight")

    internal: Counter = Counter()
    degree_sum: Counter = Counter()
    for (a, b), w in zip(edge_list, weight_list):
        ca, cb = assignment[a], assignment[b]
        if a == b:
            degree_sum[ca] += 2.0 * w
            internal[ca] += w
            continue
        degree_sum[ca] += w
        degree_sum[cb] += w
        if ca == cb:
            internal[ca] += w

    two_m = 2.0 * m
    q = 0.0
    for c in degree_sum:
        q += internal.get(c, 0.0) / m - (degree_sum[c] / two_m) ** 2
    return q


def graph_summary(store: Any) -> dict[str, Any]:
    """Metrics bundle for the reporting endpoints."""
    entities = store.live_entities()
    relations = store.live_relations()
    kind_counts = Counter(e.kind.value for e in entities)
    relation_counts = Counter(r.kind.value for r in relations)
    status_counts = Counter(r.status.value for r in relations)
    jurisdiction_counts = Counter(
        e.jurisdiction for e in entities if e.jurisdiction
    )
    summary: dict[str, Any] = {
        "entities": len(entities),
        "relations": len(relations),
        "entity_kinds": dict(sorted(kind_counts.items())),
        "relation_kinds": dict(sorted(relation_counts.items())),
        "relation_status": dict(sorted(status_counts.items())),
        "jurisdictions": dict(sorted(jurisdiction_counts.items())),
    }
    if entities:
        summary.update(degree_stats(len(entities), len(relations)))
    return summary
