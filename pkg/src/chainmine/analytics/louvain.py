"""Seeded community detection by iterated local moves and graph aggregation.

The hot sweep runs in a compiled kernel when available; set
CHAINMINE_PURE_PYTHON=1 to force the pure-Python kernel. Both kernels make
identical move sequences, so the partition never depends on which one ran.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from ..errors import DivisionUndefined, EmptyGraph
from .stats import modularity


def _select_kernel() -> tuple[object, str]:
    if os.environ.get("CHAINMINE_PURE_PYTHON") == "1":
        from . import _louvain_py

        return _louvain_py, "python"
    try:
        from . import _louvain_cy  # type: ignore[attr-defined]

        return _louvain_cy, "cython"
    except ImportError:
        from . import _louvain_py

        return _louvain_py, "python"


KERNEL, KERNEL_NAME = _select_kernel()


@dataclass
class CommunityResult:
    assignment: dict[Hashable, int]
    modularity: float
    levels: int
    kernel: str

    def groups(self) -> dict[int, list[Hashable]]:
        out: dict[int, list[Hashable]] = {}
        for node, c in self.assignment.items():
            out.setdefault(c, []).append(node)
        return out


class _Level:
    """Undirected weighted graph in CSR form plus per-node self weights."""

    def __init__(self, n: int, pair_w: Mapping[tuple[int, int], float], self_w: Sequence[float]):
        adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for (a, b), w in pair_w.items():
            adj[a].append((b, w))
            adj[b].append((a, w))
        indptr = [0]
        indices: list[int] = []
        weights: list[float] = []
        for node in range(n):
            for other, w in sorted(adj[node]):
                indices.append(other)
                weights.append(w)
            indptr.append(len(indices))
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        self.self_w = list(self_w)
        self.strength = [
            sum(weights[indptr[i] : indptr[i + 1]]) + 2.0 * self.self_w[i]
            for i in range(n)
        ]
        self.two_m = sum(self.strength)


def _run_level(level: _Level, rng: random.Random, kernel, kernel_name: str) -> list[int]:
    n = level.n
    community = list(range(n))
    comm_total = list(level.strength)
    use_numpy = kernel_name == "cython"
    if use_numpy:
        indptr = np.asarray(level.indptr, dtype=np.int64)
        indices = np.asarray(level.indices, dtype=np.int64)
        weights = np.asarray(level.weights, dtype=np.float64)
        strength = np.asarray(level.strength, dtype=np.float64)
        community_a = np.arange(n, dtype=np.int64)
        comm_total_a = np.asarray(comm_total, dtype=np.float64)
    while True:
        order = list(range(n))
        rng.shuffle(order)
        if use_numpy:
            moves = kernel.sweep_pass(
                n, indptr, indices, weights, strength, community_a,
                comm_total_a, np.asarray(order, dtype=np.int64), level.two_m,
            )
        else:
            moves = kernel.sweep_pass(
                n, level.indptr, level.indices, level.weights, level.strength,
                community, comm_total, order, level.two_m,
            )
        if moves == 0:
            break
    if use_numpy:
        community = [int(c) for c in community_a]
    return community


def _relabel(community: Sequence[int]) -> tuple[list[int], int]:
    """Dense labels assigned in order of each community's smallest member."""
    mapping: dict[int, int] = {}
    out = []
    for c in community:
        if c not in mapping:
            mapping[c] = len(mapping)
        out.append(mapping[c])
    return out, len(mapping)


def _aggregate(level: _Level, community: Sequence[int], n_comms: int) -> _Level:
    pair_w: dict[tuple[int, int], float] = {}
    self_w = [0.0] * n_comms
    for i, si in enumerate(level.self_w):
        self_w[community[i]] += si
    for node in range(level.n):
        a = community[node]
        for j in range(level.indptr[node], level.indptr[node + 1]):
            other = level.indices[j]
            if other <= node:
                continue  # each undirected edge once
            b = community[other]
            w = level.weights[j]
            if a == b:
                self_w[a] += w
            else:
                key = (a, b) if a < b else (b, a)
                pair_w[key] = pair_w.get(key, 0.0) + w
    return _Level(n_comms, pair_w, self_w)


def detect_communities(
    nodes: Iterable[Hashable],
    edges: Iterable[tuple[Hashable, Hashable]],
    weights: Iterable[float] | None = None,
    seed: int = 0,
    max_levels: int = 64,
    kernel_name: str | None = None,
) -> CommunityResult:
    """Partition an undirected view of the graph to maximize modularity.

    Parallel and antiparallel edges between a pair accumulate weight.
    Self-edges are ignored. Nodes with no edges become singleton communities.
    """
    node_list = list(nodes)
    if not node_list:
        raise EmptyGraph("no nodes")
    index = {node: i for i, node in enumerate(node_list)}
    if len(index) != len(node_list):
        raise ValueError("duplicate node ids")

    edge_list = list(edges)
    if weights is None:
        weight_list = [1.0] * len(edge_list)
    else:
        weight_list = [float(w) for w in weights]
        if len(weight_list) != len(edge_list):
            raise ValueError("weights length must match edges length")
    pair_w: dict[tuple[int, int], float] = {}
    undirected: list[tuple[Hashable, Hashable, float]] = []
    for (a, b), w in zip(edge_list, weight_list):
        if w <= 0:
            raise ValueError("edge weights must be positive")
        ia, ib = index[a], index[b]
        if ia == ib:
            continue
        key = (ia, ib) if ia < ib else (ib, ia)
        pair_w[key] = pair_w.get(key, 0.0) + w
        undirected.append((a, b, w))
    if not pair_w:
        raise DivisionUndefined("modularity needs at least one non-self edge")

    if kernel_name is None:
        kernel, kname = KERNEL, KERNEL_NAME
    elif kernel_name == "python":
        from . import _louvain_py as kernel  # type: ignore[no-redef]

        kname = "python"
    elif kernel_name == "cython":
        from . import _louvain_cy as kernel  # type: ignore[attr-defined,no-redef]

        kname = "cython"
    else:
        raise ValueError(f"unknown kernel {kernel_name!r}")

    rng = random.Random(seed)
    level = _Level(len(node_list), pair_w, [0.0] * len(node_list))
    membership = list(range(len(node_list)))  # original index -> current level node
    levels = 0
    while True:
        community = _run_level(level, rng, kernel, kname)
        dense, n_comms = _relabel(community)  # per level-node dense labels
        levels += 1
        membership = [dense[m] for m in membership]
        if n_comms == level.n or levels >= max_levels:
            break
        level = _aggregate(level, dense, n_comms)

    final, _ = _relabel(membership)
    assignment = {node_list[i]: final[i] for i in range(len(node_list))}
    q = modularity(
        [(a, b) for a, b, _ in undirected],
        assignment,
        weights=[w for _, _, w in undirected],
    )
    return CommunityResult(assignment=assignment, modularity=q, levels=levels, kernel=kname)
