# Typed-loop versions of the hot kernels; semantics must match _pykernels
# exactly (same outputs bit for bit). Keep both in sync.

import numpy as np

cimport numpy as cnp

cnp.import_array()


def enumerate_paths(cnp.int64_t[:, ::1] trans, cnp.float64_t[:, :, ::1] cost_table,
                    int horizon, int n_actions):
    cdef Py_ssize_t n = 1
    cdef int t
    for t in range(horizon):
        n *= n_actions
    cdef Py_ssize_t m = cost_table.shape[2]

    actions_arr = np.empty((n, horizon), dtype=np.int8)
    states_arr = np.zeros((n, horizon + 1), dtype=np.int16)
    costs_arr = np.empty((n, m), dtype=np.float64)
    cdef cnp.int8_t[:, ::1] actions = actions_arr
    cdef cnp.int16_t[:, ::1] states = states_arr
    cdef cnp.float64_t[:, ::1] costs = costs_arr

    cdef Py_ssize_t i, rem, k
    cdef cnp.int64_t s
    cdef int a
    # Accumulate in long double so the rounded totals match correctly
    # rounded (fsum) per-trajectory sums for ordinary cost magnitudes.
    cdef long double[::1] acc = np.zeros(m, dtype=np.longdouble)
    for i in range(n):
        rem = i
        for t in range(horizon - 1, -1, -1):
            actions[i, t] = <cnp.int8_t>(rem % n_actions)
            rem //= n_actions
        s = 0
        for k in range(m):
            acc[k] = 0.0
        for t in range(horizon):
            a = actions[i, t]
            for k in range(m):
                acc[k] += <long double>cost_table[s, a, k]
            s = trans[s, a]
            states[i, t + 1] = <cnp.int16_t>s
        for k in range(m):
            costs[i, k] = <double>acc[k]
    return actions_arr, states_arr, costs_arr


def front_witness(cnp.float64_t[:, ::1] costs):
    cdef Py_ssize_t n = costs.shape[0]
    cdef Py_ssize_t m = costs.shape[1]
    on_front_arr = np.ones(n, dtype=np.uint8)
    witness_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.uint8_t[::1] on_front = on_front_arr
    cdef cnp.int64_t[::1] witness = witness_arr
    cdef Py_ssize_t i, j, k
    cdef bint le, lt
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            le = True
            lt = False
            for k in range(m):
                if costs[j, k] > costs[i, k]:
                    le = False
                    break
                elif costs[j, k] < costs[i, k]:
                    lt = True
            if le and lt:
                on_front[i] = 0
                witness[i] = j
                break
    return on_front_arr, witness_arr


def hamming_adjacency(cnp.int8_t[:, ::1] actions, int epsilon):
    cdef Py_ssize_t n = actions.shape[0]
    cdef Py_ssize_t horizon = actions.shape[1]
    indptr_arr = np.zeros(n + 1, dtype=np.int64)
    cdef cnp.int64_t[::1] indptr = indptr_arr
    if epsilon <= 0 or n == 0:
        return indptr_arr, np.empty(0, dtype=np.int64)

    cdef Py_ssize_t i, j, t
    cdef int d
    # counting pass
    for i in range(n):
        for j in range(n):
            if j == i:
                continue
            d = 0
            for t in range(horizon):
                if actions[i, t] != actions[j, t]:
                    d += 1
                    if d > epsilon:
                        break
            if 1 <= d <= epsilon:
                indptr[i + 1] += 1
    for i in range(n):
        indptr[i + 1] += indptr[i]
    indices_arr = np.empty(indptr[n], dtype=np.int64)
    cdef cnp.int64_t[::1] indices = indices_arr
    cdef Py_ssize_t pos
    for i in range(n):
        pos = indptr[i]
        for j in range(n):
            if j == i:
                continue
            d = 0
            for t in range(horizon):
                if actions[i, t] != actions[j, t]:
                    d += 1
                    if d > epsilon:
                        break
            if 1 <= d <= epsilon:
                indices[pos] = j
                pos += 1
    return indptr_arr, indices_arr


def local_pareto_flags(cnp.float64_t[:, ::1] costs, cnp.int64_t[::1] indptr,
                       cnp.int64_t[::1] indices):
    cdef Py_ssize_t n = costs.shape[0]
    cdef Py_ssize_t m = costs.shape[1]
    flags_arr = np.ones(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] flags = flags_arr
    cdef Py_ssize_t i, p, k
    cdef cnp.int64_t j
    cdef bint le, lt
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            le = True
            lt = False
            for k in range(m):
                if costs[j, k] > costs[i, k]:
                    le = False
                    break
                elif costs[j, k] < costs[i, k]:
                    lt = True
            if le and lt:
                flags[i] = 0
                break
    return flags_arr
