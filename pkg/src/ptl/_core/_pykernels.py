"""NumPy implementations of the hot kernels.

Selected at import time when the compiled extension is unavailable (or when
PTL_KERNELS=python forces it). Must match `_ckernels` bit for bit; the test
suite cross-checks both backends on random inputs.
"""

import numpy as np

# Per-block comparison budget; keeps the pairwise passes within ~32 MB.
_BLOCK_CELLS = 1 << 25


def enumerate_paths(trans, cost_table, horizon, n_actions):
    """Realize all n_actions**horizon action sequences in lexicographic order.

    Costs accumulate in extended precision and round once at the end so the
    stored totals equal the correctly-rounded per-trajectory sums.
    """
    n = n_actions ** horizon
    m = cost_table.shape[2]
    actions = np.empty((n, horizon), dtype=np.int8)
    idx = np.arange(n, dtype=np.int64)
    for t in range(horizon):
        stride = n_actions ** (horizon - 1 - t)
        actions[:, t] = (idx // stride) % n_actions
    states = np.zeros((n, horizon + 1), dtype=np.int16)
    acc = np.zeros((n, m), dtype=np.longdouble)
    table_ld = cost_table.astype(np.longdouble)
    for t in range(horizon):
        cur = states[:, t].astype(np.int64)
        act = actions[:, t].astype(np.int64)
        acc += table_ld[cur, act, :]
        states[:, t + 1] = trans[cur, act]
    return actions, states, acc.astype(np.float64)


def front_witness(costs):
    """Non-dominated flags plus, for each dominated item, the lowest-id
    witness that dominates it (-1 for front members)."""
    n = costs.shape[0]
    m = costs.shape[1]
    on_front = np.ones(n, dtype=np.uint8)
    witness = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return on_front, witness
    block = max(1, _BLOCK_CELLS // max(1, n * m))
    for start in range(0, n, block):
        chunk = costs[start:start + block]
        le = (costs[None, :, :] <= chunk[:, None, :]).all(axis=2)
        lt = (costs[None, :, :] < chunk[:, None, :]).any(axis=2)
        dom = le & lt
        found = dom.any(axis=1)
        rows = np.nonzero(found)[0]
        on_front[start + rows] = 0
        witness[start + rows] = dom[rows].argmax(axis=1)
    return on_front, witness


def hamming_adjacency(actions, epsilon):
    """CSR adjacency (indptr, indices) linking distinct rows whose action
    sequences differ in at most epsilon positions."""
    n, horizon = actions.shape
    if epsilon <= 0 or n == 0:
        return np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64)
    block = max(1, _BLOCK_CELLS // max(1, n * horizon))
    rows = []
    for start in range(0, n, block):
        chunk = actions[start:start + block]
        dist = (chunk[:, None, :] != actions[None, :, :]).sum(axis=2)
        near = (dist >= 1) & (dist <= epsilon)
        for r in range(chunk.shape[0]):
            rows.append(np.nonzero(near[r])[0].astype(np.int64))
    counts = np.array([r.size for r in rows], dtype=np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    indices = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    return indptr, indices


def local_pareto_flags(costs, indptr, indices):
    """flags[i] = 1 iff no adjacent item dominates item i."""
    n = costs.shape[0]
    flags = np.ones(n, dtype=np.uint8)
    for i in range(n):
        nb = indices[indptr[i]:indptr[i + 1]]
        if nb.size == 0:
            continue
        ci = costs[i]
        cn = costs[nb]
        dom = (cn <= ci).all(axis=1) & (cn < ci).any(axis=1)
        if dom.any():
            flags[i] = 0
    return flags
