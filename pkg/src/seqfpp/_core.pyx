# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops: norm evaluation (single and
batched), interval-renorm sweeps, the James-type DP, and simplex pivots.

Semantics mirror `_core_py`; primitive codes match `_codes`.
"""

from libc.math cimport INFINITY, fabs, pow

import numpy as np

BACKEND_NAME = "compiled"

DEF CODE_C0 = 0
DEF CODE_ELL1 = 1
DEF CODE_ELLP = 2
DEF CODE_LIN = 3
DEF CODE_JAMES = 4


cdef inline double _lin_weight(double k) noexcept nogil:
    if k > 300.0:
        k = 300.0
    cdef double pw = pow(8.0, k)
    return pw / (1.0 + pw)


cdef inline double _powp(double d, double p) noexcept nogil:
    # d >= 0; glibc pow is correctly rounded, so these fast paths agree with
    # it bit-for-bit while skipping the libm call
    if p == 2.0:
        return d * d
    if p == 1.0:
        return d
    return pow(d, p)


cdef double _c0(const double[::1] y) noexcept nogil:
    cdef Py_ssize_t i, n = y.shape[0]
    cdef double best = 0.0, a
    for i in range(n):
        a = fabs(y[i])
        if a > best:
            best = a
    return best


cdef double _ell1(const double[::1] y) noexcept nogil:
    cdef Py_ssize_t i, n = y.shape[0]
    cdef double s = 0.0
    for i in range(n):
        s += fabs(y[i])
    return s


cdef double _ellp(const double[::1] y, double p) noexcept nogil:
    cdef Py_ssize_t i, n = y.shape[0]
    if n == 0:
        return 0.0
    cdef double s = 0.0
    for i in range(n):
        s += _powp(fabs(y[i]), p)
    return pow(s, 1.0 / p)


cdef double _lin(const double[::1] y) noexcept nogil:
    cdef Py_ssize_t i, n = y.shape[0]
    cdef double tail = 0.0, best = 0.0, v
    for i in range(n - 1, -1, -1):
        tail += fabs(y[i])
        v = _lin_weight(<double> (i + 1)) * tail
        if v > best:
            best = v
    return best


cdef double _james(const double[::1] y, double p, double[::1] x, double[::1] best) noexcept nogil:
    # x and best are scratch buffers of length >= n+1
    cdef Py_ssize_t i, j, n = y.shape[0]
    if n == 0:
        return 0.0
    for i in range(n):
        x[i] = y[i]
    x[n] = 0.0
    best[0] = 0.0
    cdef double b, cand, overall = 0.0
    for j in range(1, n + 1):
        b = -INFINITY
        for i in range(j):
            cand = best[i] + _powp(fabs(x[j] - x[i]), p)
            if cand > b:
                b = cand
        best[j] = b
        if b > overall:
            overall = b
    return pow(overall, 1.0 / p)


cdef double _prim(const double[::1] y, int code, double p, double[::1] jx, double[::1] jb) noexcept nogil:
    if code == CODE_C0:
        return _c0(y)
    elif code == CODE_ELL1:
        return _ell1(y)
    elif code == CODE_ELLP:
        return _ellp(y, p)
    elif code == CODE_LIN:
        return _lin(y)
    else:
        return _james(y, p, jx, jb)


def c0_norm(y):
    cdef const double[::1] v = np.ascontiguousarray(y, dtype=np.float64)
    return _c0(v)


def ell1_norm(y):
    cdef const double[::1] v = np.ascontiguousarray(y, dtype=np.float64)
    return _ell1(v)


def ellp_norm(y, double p):
    cdef const double[::1] v = np.ascontiguousarray(y, dtype=np.float64)
    return _ellp(v, p)


def lin_norm(y):
    cdef const double[::1] v = np.ascontiguousarray(y, dtype=np.float64)
    return _lin(v)


def james_norm(y, double p):
    cdef const double[::1] v = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    scratch_x = np.empty(n + 1, dtype=np.float64)
    scratch_b = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] jx = scratch_x
    cdef double[::1] jb = scratch_b
    return _james(v, p, jx, jb)


def prim_norm(y, int code, double p):
    cdef const double[::1] v = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t n = v.shape[0]
    scratch_x = np.empty(n + 1, dtype=np.float64)
    scratch_b = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] jx = scratch_x
    cdef double[::1] jb = scratch_b
    return _prim(v, code, p, jx, jb)


def norms_rows(Y, int code, double p):
    """Primitive norm of every row of Y."""
    arr = np.ascontiguousarray(Y, dtype=np.float64)
    cdef const double[:, ::1] v = arr
    cdef Py_ssize_t s, S = v.shape[0], n = v.shape[1]
    out = np.empty(S, dtype=np.float64)
    cdef double[::1] o = out
    scratch_x = np.empty(n + 1, dtype=np.float64)
    scratch_b = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] jx = scratch_x
    cdef double[::1] jb = scratch_b
    with nogil:
        for s in range(S):
            o[s] = _prim(v[s], code, p, jx, jb)
    return out


def interval_norms(A, M, int code, double p):
    """For each coefficient row a of A: sup over index intervals [i..j] of the
    primitive norm of M[:, i..j] @ a[i..j]."""
    a_arr = np.ascontiguousarray(A, dtype=np.float64)
    m_arr = np.ascontiguousarray(M, dtype=np.float64)
    cdef const double[:, ::1] a = a_arr
    cdef const double[:, ::1] mm = m_arr
    cdef Py_ssize_t s, i, j, r
    cdef Py_ssize_t S = a.shape[0], n = a.shape[1], m = mm.shape[0]
    out = np.zeros(S, dtype=np.float64)
    cdef double[::1] o = out
    if n == 0 or S == 0:
        return out
    work_arr = np.empty(m, dtype=np.float64)
    scratch_x = np.empty(m + 1, dtype=np.float64)
    scratch_b = np.empty(m + 1, dtype=np.float64)
    cdef double[::1] work = work_arr
    cdef double[::1] jx = scratch_x
    cdef double[::1] jb = scratch_b
    cdef double best, v, aj
    with nogil:
        for s in range(S):
            best = 0.0
            for i in range(n):
                for r in range(m):
                    work[r] = 0.0
                for j in range(i, n):
                    aj = a[s, j]
                    for r in range(m):
                        work[r] += mm[r, j] * aj
                    v = _prim(work, code, p, jx, jb)
                    if v > best:
                        best = v
            o[s] = best
    return out


def simplex_iterate(T, basis, long long cap, double tol):
    """Run Bland-rule simplex pivots on a tableau in place.

    T: float64 C-contiguous (m+1, K+1) tableau (objective row last, rhs
    column last); basis: int64 basic-variable indices per row. Returns
    (status, iterations): 0 optimal, 1 unbounded, 2 iteration cap.
    """
    cdef double[:, ::1] t = T
    cdef long long[::1] b = basis
    cdef Py_ssize_t m = t.shape[0] - 1, K = t.shape[1] - 1
    cdef Py_ssize_t i, j, c, enter, leave
    cdef long long it = 0
    cdef int status = 2
    cdef double best, r, piv, f, aij
    with nogil:
        while it < cap:
            enter = -1
            for j in range(K):
                if t[m, j] < -tol:
                    enter = j
                    break
            if enter < 0:
                status = 0
                break
            leave = -1
            best = INFINITY
            for i in range(m):
                aij = t[i, enter]
                if aij > tol:
                    r = t[i, K] / aij
                    if r < best:
                        best = r
                        leave = i
                    elif r == best and leave >= 0 and b[i] < b[leave]:
                        leave = i
            if leave < 0:
                status = 1
                break
            piv = t[leave, enter]
            for c in range(K + 1):
                t[leave, c] /= piv
            for i in range(m + 1):
                if i == leave:
                    continue
                f = t[i, enter]
                if f != 0.0:
                    for c in range(K + 1):
                        t[i, c] -= f * t[leave, c]
            b[leave] = enter
            it += 1
    return status, it
