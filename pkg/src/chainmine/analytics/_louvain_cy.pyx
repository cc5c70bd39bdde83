# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled local-move kernel. Must stay move-for-move identical to the
pure-Python kernel: ascending-community candidate scan, strict improvement
with the same epsilon, self weights excluded from the gather."""

import numpy as np

cimport numpy as cnp

cdef double EPS = 1e-12


def sweep_pass(int n,
               cnp.int64_t[::1] indptr,
               cnp.int64_t[::1] indices,
               cnp.float64_t[::1] weights,
               cnp.float64_t[::1] strength,
               cnp.int64_t[::1] community,
               cnp.float64_t[::1] comm_total,
               cnp.int64_t[::1] order,
               double two_m):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] neigh_w_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] touched_arr = np.empty(n, dtype=np.int64)
    cdef cnp.float64_t[::1] neigh_w = neigh_w_arr
    cdef cnp.int64_t[::1] touched = touched_arr
    cdef int moves = 0
    cdef Py_ssize_t oi, j, t, u
    cdef long node, other, c, c_old, best_c, key
    cdef int n_touched
    cdef double k_i, w, gain, best_gain, w_old

    for oi in range(order.shape[0]):
        node = order[oi]
        c_old = community[node]
        k_i = strength[node]
        n_touched = 0
        for j in range(indptr[node], indptr[node + 1]):
            other = indices[j]
            if other == node:
                continue
            c = community[other]
            if neigh_w[c] == 0.0:
                touched[n_touched] = c
                n_touched += 1
            neigh_w[c] += weights[j]
        # insertion sort: candidate scan must be in ascending community id
        for t in range(1, n_touched):
            key = touched[t]
            u = t - 1
            while u >= 0 and touched[u] > key:
                touched[u + 1] = touched[u]
                u -= 1
            touched[u + 1] = key
        comm_total[c_old] -= k_i
        w_old = neigh_w[c_old]
        best_c = c_old
        best_gain = w_old - k_i * comm_total[c_old] / two_m
        for t in range(n_touched):
            c = touched[t]
            if c == c_old:
                continue
            gain = neigh_w[c] - k_i * comm_total[c] / two_m
            if gain > best_gain + EPS:
                best_gain = gain
                best_c = c
        comm_total[best_c] += k_i
        if best_c != c_old:
            community[node] = best_c
            moves += 1
        for t in range(n_touched):
            neigh_w[touched[t]] = 0.0
    return moves
