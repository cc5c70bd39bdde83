"""Exhaustive partition search used as the community-detection oracle.

Only practical for tiny graphs: the number of set partitions of n nodes is
the Bell number (203 for n=6, 4140 for n=8), and every one gets scored.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Iterator, Sequence


def exact_modularity(
    nodes: Sequence[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
    assignment: dict[Hashable, int],
) -> float:
    """Q = sum over communities of [e_c / m - (d_c / 2m)^2], unit weights.

    Parallel edges accumulate; a self edge adds two to its node's degree.
    """
    edge_list = list(edges)
    m = float(len(edge_list))
    if m == 0:
        raise ValueError("modularity needs at least one edge")
    degree: dict[Hashable, float] = defaultdict(float)
    internal: dict[int, float] = defaultdict(float)
    for a, b in edge_list:
        if a == b:
            degree[a] += 2.0
            internal[assignment[a]] += 1.0
            continue
        degree[a] += 1.0
        degree[b] += 1.0
        if assignment[a] == assignment[b]:
            internal[assignment[a]] += 1.0
    degree_by_comm: dict[int, float] = defaultdict(float)
    for node in nodes:
        degree_by_comm[assignment[node]] += degree[node]
    two_m = 2.0 * m
    return sum(
        internal[c] / m - (degree_by_comm[c] / two_m) ** 2
        for c in set(assignment.values())
    )


def partitions(items: Sequence[Hashable]) -> Iterator[dict[Hashable, int]]:
    """Every set partition of items as a restricted-growth label assignment."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield {}
        return
    labels = [0] * n

    def rec(i: int, used: int) -> Iterator[dict[Hashable, int]]:
        if i == n:
            yield {items[j]: labels[j] for j in range(n)}
            return
        # a node may join any existing block or open the next one
        for c in range(used + 1):
            labels[i] = c
            yield from rec(i + 1, used + 1 if c == used else used)

    yield from rec(1, 1)


def best_partition(
    nodes: Sequence[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
) -> tuple[float, dict[Hashable, int]]:
    """Maximum-modularity partition by exhaustive search; first optimum wins."""
    edge_list = list(edges)
    best_q = float("-inf")
    best: dict[Hashable, int] = {}
    for assignment in partitions(nodes):
        q = exact_modularity(nodes, edge_list, assignment)
        if q > best_q:
            best_q, best = q, assignment
    return best_q, best
