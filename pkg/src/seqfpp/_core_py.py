"""Pure-numpy kernels: the fallback twin of the compiled `_core` extension.

Both backends implement the same functions with the same floating-point
operation order wherever feasible; cross-backend agreement is tested to
1e-12 relative. Within one backend every function is deterministic.

Primitive norm codes are defined in `_codes`.
"""

from __future__ import annotations

import numpy as np

from ._codes import C0, ELL1, ELLP, JAMES, LIN

BACKEND_NAME = "python"

_LIN_K_CLIP = 300.0  # 8^300 is finite in float64 and w_k rounds to 1.0 long before


def _lin_weights(n: int) -> np.ndarray:
    ks = np.minimum(np.arange(1.0, n + 1.0), _LIN_K_CLIP)
    pw = 8.0 ** ks
    return pw / (1.0 + pw)


def c0_norm(y: np.ndarray) -> float:
    if y.size == 0:
        return 0.0
    return float(np.abs(y).max())


def ell1_norm(y: np.ndarray) -> float:
    return float(np.abs(y).sum())


def ellp_norm(y: np.ndarray, p: float) -> float:
    if y.size == 0:
        return 0.0
    return float((np.abs(y) ** p).sum() ** (1.0 / p))


def lin_norm(y: np.ndarray) -> float:
    """Weighted-tail renorming of ell1: sup_k w_k * sum_{n>=k} |y_n|."""
    if y.size == 0:
        return 0.0
    tails = np.cumsum(np.abs(y)[::-1])[::-1]
    return float((_lin_weights(y.size) * tails).max())


def james_norm(y: np.ndarray, p: float) -> float:
    """p-variation over increasing subsequences of the zero-extended vector.

    The vector stands for an eventually-zero sequence, so one virtual zero is
    appended before the DP; additional zeros cannot change the value. States
    are "best p-variation of a subsequence ending at index j".
    """
    n = y.size
    if n == 0:
        return 0.0
    x = np.empty(n + 1)
    x[:n] = y
    x[n] = 0.0
    best = np.zeros(n + 1)
    for j in range(1, n + 1):
        best[j] = (best[:j] + np.abs(x[j] - x[:j]) ** p).max()
    return float(best.max() ** (1.0 / p))


def prim_norm(y: np.ndarray, code: int, p: float) -> float:
    if code == C0:
        return c0_norm(y)
    if code == ELL1:
        return ell1_norm(y)
    if code == ELLP:
        return ellp_norm(y, p)
    if code == LIN:
        return lin_norm(y)
    if code == JAMES:
        return james_norm(y, p)
    raise ValueError(f"unknown primitive code {code}")


def _james_rows(Y: np.ndarray, p: float) -> np.ndarray:
    S, n = Y.shape
    if n == 0:
        return np.zeros(S)
    X = np.concatenate([Y, np.zeros((S, 1))], axis=1)
    best = np.zeros((S, n + 1))
    for j in range(1, n + 1):
        cand = best[:, :j] + np.abs(X[:, j : j + 1] - X[:, :j]) ** p
        best[:, j] = cand.max(axis=1)
    return best.max(axis=1) ** (1.0 / p)


def norms_rows(Y: np.ndarray, code: int, p: float) -> np.ndarray:
    """Primitive norm of every row of Y."""
    Y = np.ascontiguousarray(Y, dtype=float)
    S, n = Y.shape
    if n == 0:
        return np.zeros(S)
    if code == C0:
        return np.abs(Y).max(axis=1)
    if code == ELL1:
        return np.abs(Y).sum(axis=1)
    if code == ELLP:
        return (np.abs(Y) ** p).sum(axis=1) ** (1.0 / p)
    if code == LIN:
        tails = np.cumsum(np.abs(Y)[:, ::-1], axis=1)[:, ::-1]
        return (tails * _lin_weights(n)[None, :]).max(axis=1)
    if code == JAMES:
        return _james_rows(Y, p)
    raise ValueError(f"unknown primitive code {code}")


def _prim_over_axis1(D: np.ndarray, code: int, p: float) -> np.ndarray:
    """Primitive norm along axis 1 of a (chunk, m, T) stack."""
    if code == C0:
        return np.abs(D).max(axis=1)
    if code == ELL1:
        return np.abs(D).sum(axis=1)
    if code == ELLP:
        return (np.abs(D) ** p).sum(axis=1) ** (1.0 / p)
    if code == LIN:
        m = D.shape[1]
        tails = np.cumsum(np.abs(D)[:, ::-1, :], axis=1)[:, ::-1, :]
        return (tails * _lin_weights(m)[None, :, None]).max(axis=1)
    if code == JAMES:
        c, m, t = D.shape
        flat = np.ascontiguousarray(np.moveaxis(D, 1, 2).reshape(c * t, m))
        return _james_rows(flat, p).reshape(c, t)
    raise ValueError(f"unknown primitive code {code}")


def interval_norms(A: np.ndarray, M: np.ndarray, code: int, p: float) -> np.ndarray:
    """For each coefficient row a of A: sup over index intervals [i..j] of the
    primitive norm of M[:, i..j] @ a[i..j].

    M maps basis coefficients to the coordinates the primitive norm reads.
    """
    A = np.ascontiguousarray(A, dtype=float)
    M = np.ascontiguousarray(M, dtype=float)
    S, n = A.shape
    m = M.shape[0]
    if n == 0 or S == 0:
        return np.zeros(S)
    ii, jj = np.triu_indices(n)
    T = ii.size
    out = np.empty(S)
    chunk = max(1, int(4_000_000 // max(1, m * T)))
    for s0 in range(0, S, chunk):
        a = A[s0 : s0 + chunk]
        Z = M[None, :, :] * a[:, None, :]
        P = np.zeros((a.shape[0], m, n + 1))
        np.cumsum(Z, axis=2, out=P[:, :, 1:])
        D = P[:, :, jj + 1] - P[:, :, ii]
        out[s0 : s0 + chunk] = _prim_over_axis1(D, code, p).max(axis=1)
    return out


def simplex_iterate(T: np.ndarray, basis: np.ndarray, cap: int, tol: float) -> tuple[int, int]:
    """Run Bland-rule simplex pivots on a tableau in place.

    T has shape (m+1, K+1): m constraint rows, an objective row, and a
    right-hand-side column. `basis` holds the basic variable of each row.
    Returns (status, iterations) with status 0 = optimal, 1 = unbounded,
    2 = iteration cap hit.
    """
    m = T.shape[0] - 1
    K = T.shape[1] - 1
    it = 0
    while True:
        neg = np.nonzero(T[m, :K] < -tol)[0]
        if neg.size == 0:
            return 0, it
        enter = int(neg[0])
        col = T[:m, enter]
        rows = np.nonzero(col > tol)[0]
        if rows.size == 0:
            return 1, it
        ratios = T[rows, K] / col[rows]
        best = ratios.min()
        tied = rows[ratios == best]
        leave = int(tied[np.argmin(basis[tied])])
        piv = T[leave, enter]
        T[leave, :] /= piv
        factors = T[:, enter].copy()
        factors[leave] = 0.0
        T -= factors[:, None] * T[leave, :][None, :]
        basis[leave] = enter
        it += 1
        if it >= cap:
            return 2, it
