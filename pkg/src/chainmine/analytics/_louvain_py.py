"""Pure-Python local-move kernel for community detection.

Interchangeable with the compiled variant in _louvain_cy: same signature,
same deterministic tie-breaking (ascending community id), same strict
improvement rule, so results are identical bit for bit.
"""

from __future__ import annotations

EPS = 1e-12


def sweep_pass(n, indptr, indices, weights, strength, community, comm_total, order, two_m):
    """One pass of local moves over `order`. Mutates community/comm_total.

    Returns the number of nodes that changed community.
    """
    indptr = list(indptr)
    indices = list(indices)
    weights = list(weights)
    moves = 0
    for node in order:
        c_old = community[node]
        k_i = strength[node]
        neigh: dict[int, float] = {}
        for j in range(indptr[node], indptr[node + 1]):
            other = indices[j]
            if other == node:
                continue  # self weight travels with the node
            c = community[other]
            neigh[c] = neigh.get(c, 0.0) + weights[j]
        comm_total[c_old] -= k_i
        best_c = c_old
        best_gain = neigh.get(c_old, 0.0) - k_i * comm_total[c_old] / two_m
        for c in sorted(neigh):
            if c == c_old:
                continue
            gain = neigh[c] - k_i * comm_total[c] / two_m
            if gain > best_gain + EPS:
                best_gain = gain
                best_c = c
        comm_total[best_c] += k_i
        if best_c != c_old:
            community[node] = best_c
            moves += 1
    return moves
