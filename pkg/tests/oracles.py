"""Independent brute-force oracles used to derive and pin expected values.

Nothing here imports the package kernels or the LP solver: each oracle
recomputes its quantity straight from the definition so the two routes stay
independent.
"""

from itertools import combinations

import numpy as np


def james_brute(x, p: float) -> float:
    """p-variation over all increasing subsequences of the zero-extended
    vector, by explicit enumeration with a left fold."""
    xs = [float(v) for v in x] + [0.0]
    n = len(xs)
    best = 0.0
    for size in range(2, n + 1):
        for idx in combinations(range(n), size):
            s = 0.0
            for a, b in zip(idx, idx[1:]):
                s += abs(xs[b] - xs[a]) ** p
            if s > best:
                best = s
    return best ** (1.0 / p)


def lin_norm_direct(x) -> float:
    """The weighted-tail norm straight from its formula."""
    x = np.asarray(x, dtype=float)
    best = 0.0
    for k in range(1, x.size + 1):
        w = 8.0 ** k / (1.0 + 8.0 ** k)
        best = max(best, w * float(np.abs(x[k - 1 :]).sum()))
    return best


def summing_norm_direct(a) -> float:
    """sup over i of |sum_{n>=i} a_n| (the c0 norm of the tail sums)."""
    a = np.asarray(a, dtype=float)
    return max(abs(float(a[i:].sum())) for i in range(a.size)) if a.size else 0.0


def interval_norm_direct(base_norm, M, a) -> float:
    """sup over index intervals of base_norm(M[:, i..j] @ a[i..j])."""
    a = np.asarray(a, dtype=float)
    M = np.asarray(M, dtype=float)
    n = a.size
    best = 0.0
    for i in range(n):
        for j in range(i, n):
            best = max(best, base_norm(M[:, i : j + 1] @ a[i : j + 1]))
    return best


def lp_brute_force(c, sense, rows, bounds):
    """Optimal value by vertex enumeration over all n-subsets of the
    inequality system (bounds included as rows). Assumes the feasible set is
    bounded (callers generate box-bounded instances). Returns None when no
    feasible vertex exists."""
    c = np.asarray(c, dtype=float)
    n = c.size
    G, h = [], []
    for a, rel, b in rows:
        a = np.asarray(a, dtype=float)
        if rel in ("<=", "="):
            G.append(a)
            h.append(b)
        if rel in (">=", "="):
            G.append(-a)
            h.append(-b)
    for j, (lo, hi) in enumerate(bounds):
        e = np.zeros(n)
        e[j] = 1.0
        if lo is not None:
            G.append(-e)
            h.append(-lo)
        if hi is not None:
            G.append(e)
            h.append(hi)
    G = np.vstack(G)
    h = np.asarray(h, dtype=float)
    best = None
    for idx in combinations(range(G.shape[0]), n):
        sub = G[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, h[list(idx)])
        if np.all(G @ x <= h + 1e-8):
            v = float(c @ x)
            if best is None:
                best = v
            elif sense == "min":
                best = min(best, v)
            else:
                best = max(best, v)
    return best


def grid_min_over_simplex(objective_rows, n: int, k: int) -> float:
    """min over the grid {t = m/k : m integer compositions of k into n parts}
    of a batched objective. Only n = 4 is needed; the (t2, t3) triangle is
    generated vectorized per t1."""
    assert n == 4, "grid oracle implemented for n = 4"
    best = np.inf
    for i in range(k + 1):
        m = k - i
        counts = np.arange(m + 1, 0, -1)
        j_arr = np.repeat(np.arange(m + 1), counts)
        total = j_arr.size
        starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
        l_arr = np.arange(total) - np.repeat(starts, counts)
        T = np.empty((total, 4))
        T[:, 0] = i
        T[:, 1] = j_arr
        T[:, 2] = l_arr
        T[:, 3] = k - i - j_arr - l_arr
        vals = objective_rows(T / k)
        best = min(best, float(vals.min()))
    return best
