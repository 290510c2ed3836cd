"""Optimization kernel: dense two-phase simplex LP, exact maximization over
extreme points, seeded pattern-search ascent, and section-vertex enumeration
for polytope balls cut by low-codimension subspaces.

The LP solver is written in-repo (dense tableau, Bland's rule) for
determinism and portability; the pivot loop runs in the selected kernel
backend.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import backend, rng
from .errors import (
    CycleSuspected,
    DimensionCap,
    EmptyInput,
    Infeasible,
    InvalidParameter,
    Unbounded,
)

_kern = backend.kernels

LP_TOL = 1e-9
LP_ITER_CAP = 10 ** 6
SECTION_CANDIDATE_CAP = 2_000_000


@dataclass(frozen=True)
class LinearProgram:
    """min/max c.x subject to rows (a, rel, b) with rel in {"<=", "=", ">="}
    and per-variable bounds (lo, hi), None meaning unbounded. Variables are
    free by default."""

    objective: np.ndarray
    sense: str = "min"
    rows: tuple = ()
    bounds: tuple | None = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise InvalidParameter("objective must be finite")
        if self.sense not in ("min", "max"):
            raise InvalidParameter("sense must be 'min' or 'max'")
        rows = []
        for a, rel, b in self.rows:
            a = np.asarray(a, dtype=float).reshape(-1)
            if a.size != c.size or not np.all(np.isfinite(a)) or not np.isfinite(b):
                raise InvalidParameter("constraint dimensions or values invalid")
            if rel not in ("<=", "=", ">="):
                raise InvalidParameter(f"unknown relation {rel!r}")
            rows.append((a, rel, float(b)))
        bounds = self.bounds
        if bounds is None:
            bounds = tuple((None, None) for _ in range(c.size))
        else:
            bounds = tuple(bounds)
            if len(bounds) != c.size:
                raise InvalidParameter("bounds length mismatch")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return self.objective.size


@dataclass
class SearchReport:
    """Outcome of an optimization run; best_point re-evaluates to best_value."""

    best_value: float
    best_point: np.ndarray
    iterations: int
    converged: bool
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "best_value": self.best_value,
            "best_point": np.asarray(self.best_point).tolist(),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
            "seed": self.seed,
        }


def _standardize(lp: LinearProgram):
    """Rewrite in standard form (min c.y, rows rel b, y >= 0).

    Returns (c_std, rows_std, recover) where recover maps a standard-form
    solution back to the original variables.
    """
    n = lp.n_vars
    c = lp.objective if lp.sense == "min" else -lp.objective
    var_map = []  # per original var: ("shift", j, lo) | ("neg", j, hi) | ("split", j_pos, j_neg)
    extra_rows = []
    nxt = 0
    for j in range(n):
        lo, hi = lp.bounds[j]
        if lo is not None and not np.isfinite(lo):
            lo = None
        if hi is not None and not np.isfinite(hi):
            hi = None
        if lo is not None:
            var_map.append(("shift", nxt, float(lo)))
            if hi is not None:
                extra_rows.append((j, float(hi)))  # std_row applies the shift
            nxt += 1
        elif hi is not None:
            var_map.append(("neg", nxt, float(hi)))
            nxt += 1
        else:
            var_map.append(("split", nxt, nxt + 1))
            nxt += 2
    n_std = nxt

    c_std = np.zeros(n_std)
    shift_cost = 0.0
    for j in range(n):
        kind = var_map[j]
        if kind[0] == "shift":
            c_std[kind[1]] = c[j]
            shift_cost += c[j] * kind[2]
        elif kind[0] == "neg":
            c_std[kind[1]] = -c[j]
            shift_cost += c[j] * kind[2]
        else:
            c_std[kind[1]] = c[j]
            c_std[kind[2]] = -c[j]

    def std_row(a: np.ndarray) -> tuple[np.ndarray, float]:
        row = np.zeros(n_std)
        offset = 0.0
        for j in range(n):
            aj = a[j]
            if aj == 0.0:
                continue
            kind = var_map[j]
            if kind[0] == "shift":
                row[kind[1]] += aj
                offset += aj * kind[2]
            elif kind[0] == "neg":
                row[kind[1]] -= aj
                offset += aj * kind[2]
            else:
                row[kind[1]] += aj
                row[kind[2]] -= aj
        return row, offset

    rows_std = []
    for a, rel, b in lp.rows:
        row, offset = std_row(a)
        rows_std.append((row, rel, b - offset))
    for j, ub in extra_rows:
        a = np.zeros(n)
        a[j] = 1.0
        row, offset = std_row(a)
        rows_std.append((row, "<=", ub - offset))

    def recover(y: np.ndarray) -> np.ndarray:
        x = np.zeros(n)
        for j in range(n):
            kind = var_map[j]
            if kind[0] == "shift":
                x[j] = kind[2] + y[kind[1]]
            elif kind[0] == "neg":
                x[j] = kind[2] - y[kind[1]]
            else:
                x[j] = y[kind[1]] - y[kind[2]]
        return x

    return c_std, rows_std, recover, shift_cost


def lp_solve(lp: LinearProgram, tol: float = LP_TOL, iter_cap: int = LP_ITER_CAP) -> SearchReport:
    """Optimal basic solution via two-phase dense simplex with Bland's rule.

    Raises Infeasible, Unbounded, or CycleSuspected (iteration cap).
    """
    c_std, rows_std, recover, _ = _standardize(lp)
    n_std = c_std.size
    m = len(rows_std)

    if m == 0:
        # Feasible iff objective over y >= 0 is bounded below: need c_std >= 0.
        if np.any(c_std < -tol):
            raise Unbounded("objective unbounded over the nonnegative orthant")
        x = recover(np.zeros(n_std))
        val = float(np.dot(lp.objective, x))
        return SearchReport(val, x, 0, True, None)

    A = np.zeros((m, n_std))
    rel = []
    b = np.zeros(m)
    for i, (row, r, bb) in enumerate(rows_std):
        A[i] = row
        rel.append(r)
        b[i] = bb
    flip = b < 0.0
    A[flip] *= -1.0
    b[flip] *= -1.0
    rel = [
        {"<=": ">=", ">=": "<=", "=": "="}[r] if f else r
        for r, f in zip(rel, flip)
    ]

    n_slack = sum(1 for r in rel if r == "<=")
    n_surp = sum(1 for r in rel if r == ">=")
    n_art = sum(1 for r in rel if r in (">=", "="))
    slack0, surp0, art0 = n_std, n_std + n_slack, n_std + n_slack + n_surp
    K = art0 + n_art

    T = np.zeros((m + 1, K + 1))
    T[:m, :n_std] = A
    T[:m, K] = b
    basis = np.empty(m, dtype=np.int64)
    si = ti = ai = 0
    for i, r in enumerate(rel):
        if r == "<=":
            T[i, slack0 + si] = 1.0
            basis[i] = slack0 + si
            si += 1
        elif r == ">=":
            T[i, surp0 + ti] = -1.0
            T[i, art0 + ai] = 1.0
            basis[i] = art0 + ai
            ti += 1
            ai += 1
        else:
            T[i, art0 + ai] = 1.0
            basis[i] = art0 + ai
            ai += 1

    total_iters = 0
    if n_art:
        # phase 1: minimize the sum of artificials
        cost = np.zeros(K + 1)
        cost[art0:K] = 1.0
        for i in range(m):
            if basis[i] >= art0:
                cost -= T[i]
        T[m] = cost
        status, it = _kern.simplex_iterate(T, basis, iter_cap, tol)
        total_iters += it
        if status == 2:
            raise CycleSuspected(f"phase-1 iteration cap {iter_cap} hit")
        if status == 1:  # cannot happen: phase-1 objective is bounded below by 0
            raise Infeasible("phase-1 unbounded, program malformed")
        if -T[m, K] > 1e-7:
            raise Infeasible(f"phase-1 optimum {-T[m, K]:.3e} > 0")
        # drive remaining artificial basics out, drop redundant rows
        drop = []
        for i in range(m):
            if basis[i] >= art0:
                piv_col = -1
                for j in range(art0):
                    if abs(T[i, j]) > 1e-9:
                        piv_col = j
                        break
                if piv_col < 0:
                    drop.append(i)
                    continue
                piv = T[i, piv_col]
                T[i] /= piv
                factors = T[:, piv_col].copy()
                factors[i] = 0.0
                T -= factors[:, None] * T[i][None, :]
                basis[i] = piv_col
        if drop:
            keep = [i for i in range(m) if i not in set(drop)]
            T = np.vstack([T[keep], T[m][None, :]])
            basis = basis[keep]
            m = len(keep)
    # remove artificial columns
    T = np.ascontiguousarray(np.hstack([T[:, :art0], T[:, K:]]))
    K = art0

    # phase 2
    cost = np.zeros(K + 1)
    cost[:n_std] = c_std
    for i in range(m):
        bj = basis[i]
        if bj < n_std and c_std[bj] != 0.0:
            cost -= c_std[bj] * T[i]
    T[m] = cost
    status, it = _kern.simplex_iterate(T, basis, iter_cap, tol)
    total_iters += it
    if status == 2:
        raise CycleSuspected(f"phase-2 iteration cap {iter_cap} hit")
    if status == 1:
        raise Unbounded("phase-2 objective unbounded")

    y = np.zeros(K)
    for i in range(m):
        y[basis[i]] = T[i, K]
    x = recover(y[:n_std])
    val = float(np.dot(lp.objective, x))
    certified = bool(np.all(T[m, :K] >= -10 * tol))
    return SearchReport(val, x, total_iters, certified, None)


def max_over_extreme_points(objective, points) -> SearchReport:
    """Exact maximum of a convex evaluator over a finite point list.

    `objective` is either a callable on vectors or a Space (batched norms).
    """
    if isinstance(points, np.ndarray):
        P = points
    else:
        points = list(points)
        if not points:
            raise EmptyInput("no extreme points supplied")
        from .spaces import as_array

        P = np.vstack([as_array(p) for p in points])
    if P.shape[0] == 0:
        raise EmptyInput("no extreme points supplied")
    if hasattr(objective, "norm_rows"):
        vals = objective.norm_rows(P)
    else:
        vals = np.array([float(objective(row)) for row in P])
    k = int(np.argmax(vals))
    return SearchReport(float(vals[k]), P[k].copy(), P.shape[0], True, None)


def sampled_ascent(
    objective,
    domain_projector,
    trials: int,
    seed: int,
    dim: int,
    step0: float = 0.5,
    min_step: float = 1e-9,
    max_evals: int = 20000,
) -> SearchReport:
    """Best of `trials` random starts, each followed by coordinate pattern
    search (expand step on success, halve on a full stalled sweep) projected
    to the domain. Deterministic under a fixed seed; an uncertified bound.
    """
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    f = objective.norm if hasattr(objective, "norm") else objective
    best_val = -np.inf
    best_x = None
    all_stalled = True
    total_evals = 0
    for g in rng.spawn(seed, trials):
        x = domain_projector(g.standard_normal(dim))
        fx = float(f(x))
        step = step0
        evals = 0
        while step > min_step and evals < max_evals:
            improved = False
            for i in range(dim):
                for s in (1.0, -1.0):
                    cand = x.copy()
                    cand[i] += s * step
                    cand = domain_projector(cand)
                    fc = float(f(cand))
                    evals += 1
                    if fc > fx:
                        x, fx = cand, fc
                        improved = True
            step = step * 2.0 if improved else step * 0.5
        total_evals += evals
        if evals >= max_evals and step > min_step:
            all_stalled = False
        if fx > best_val:
            best_val, best_x = fx, x
    return SearchReport(best_val, best_x, total_evals, all_stalled, seed)


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u + (1.0 - css) / idx > 0.0)[0][-1]
    lam = (1.0 - css[rho]) / (rho + 1.0)
    return np.maximum(v + lam, 0.0)


def radial_projector(norm_fn):
    """Retraction onto a unit ball: scale down anything outside."""

    def proj(v: np.ndarray) -> np.ndarray:
        nv = float(norm_fn(v))
        return v if nv <= 1.0 else v / nv

    return proj


def null_functionals(B: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Orthonormal functionals F with F @ B = 0 (rows span the complement
    of the column space of B)."""
    B = np.asarray(B, dtype=float)
    u, s, _ = np.linalg.svd(B, full_matrices=True)
    rank = int(np.sum(s > tol * (s[0] if s.size else 1.0)))
    return u[:, rank:].T.copy()


def _dedupe_rows(P: np.ndarray, decimals: int = 10) -> np.ndarray:
    if P.shape[0] == 0:
        return P
    _, idx = np.unique(np.round(P, decimals), axis=0, return_index=True)
    return P[np.sort(idx)]


def polytope_section_vertices(kind: str, F: np.ndarray, cand_cap: int = SECTION_CANDIDATE_CAP) -> np.ndarray:
    """All vertices of (unit ball of `kind` in R^m) intersected with the
    subspace {c : F c = 0}, F being (codim x m) with independent rows.

    Every vertex of the section lies on a ball face of dimension <= codim, so
    enumerating codim-face crossings is exhaustive; extra non-vertex crossing
    points are harmless for maximizing a convex function. Supported kinds:
    "cube" (sup ball) and "cross" (ell1 ball).
    """
    F = np.atleast_2d(np.asarray(F, dtype=float))
    c, m = F.shape
    if c == 0:
        raise InvalidParameter("empty functional set; use extreme points directly")
    pts = []
    if kind == "cube":
        n_cand = _comb(m, c) * (2 ** (m - c))
        if n_cand > cand_cap:
            raise DimensionCap(f"cube section needs {n_cand} candidates > cap {cand_cap}")
        from .spaces import sign_vectors

        for free in itertools.combinations(range(m), c):
            free = list(free)
            fixed = [j for j in range(m) if j not in free]
            Ff = F[:, free]
            det = np.linalg.det(Ff) if c > 1 else Ff[0, 0]
            if abs(det) < 1e-12:
                continue
            S = sign_vectors(len(fixed)) if fixed else np.zeros((1, 0))
            X = np.linalg.solve(Ff, -F[:, fixed] @ S.T).T  # (2^{m-c}, c)
            ok = np.all(np.abs(X) <= 1.0 + 1e-10, axis=1)
            if not np.any(ok):
                continue
            block = np.empty((int(ok.sum()), m))
            block[:, fixed] = S[ok]
            block[:, free] = np.clip(X[ok], -1.0, 1.0)
            pts.append(block)
    elif kind == "cross":
        n_cand = _comb(m, c + 1) * (2 ** (c + 1))
        if n_cand > cand_cap:
            raise DimensionCap(f"cross section needs {n_cand} candidates > cap {cand_cap}")
        from .spaces import sign_vectors

        signs = sign_vectors(c + 1)
        ones = np.ones(c + 1)
        for I in itertools.combinations(range(m), c + 1):
            I = list(I)
            FI = F[:, I]
            for s in signs:
                Msys = np.vstack([FI * s[None, :], ones[None, :]])
                det = np.linalg.det(Msys)
                if abs(det) < 1e-12:
                    continue
                rhs = np.zeros(c + 1)
                rhs[c] = 1.0
                lam = np.linalg.solve(Msys, rhs)
                if np.any(lam < -1e-10):
                    continue
                y = np.zeros(m)
                y[I] = s * np.clip(lam, 0.0, None)
                pts.append(y[None, :])
    else:
        raise InvalidParameter(f"unsupported ball kind {kind!r} for sections")
    if not pts:
        return np.zeros((0, m))
    return _dedupe_rows(np.vstack(pts))


def _comb(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


def minimize_norm_over_simplex(plan, G: np.ndarray, tol: float = LP_TOL) -> SearchReport:
    """Exact LP: min ||G t|| over the probability simplex, for LP-representable
    norms (plan from spaces.lp_plan at dimension G.shape[0]).

    Variables are (t, auxiliaries); the returned best_point is t.
    """
    if plan is None:
        raise InvalidParameter("norm is not LP-representable; use the sampled path")
    G = np.asarray(G, dtype=float)
    m, n = G.shape
    kind = plan[0]
    rows = []
    if kind == "sup_rows":
        R = plan[1] @ G  # (r, n)
        r = R.shape[0]
        nv = n + 1  # t, z
        cvec = np.zeros(nv)
        cvec[n] = 1.0
        for i in range(r):
            a = np.zeros(nv)
            a[:n] = R[i]
            a[n] = -1.0
            rows.append((a, "<=", 0.0))
            a2 = np.zeros(nv)
            a2[:n] = -R[i]
            a2[n] = -1.0
            rows.append((a2, "<=", 0.0))
        bounds = [(0.0, None)] * nv
    elif kind == "sum_abs":
        nv = n + m  # t, u
        cvec = np.zeros(nv)
        cvec[n:] = 1.0
        for i in range(m):
            a = np.zeros(nv)
            a[:n] = G[i]
            a[n + i] = -1.0
            rows.append((a, "<=", 0.0))
            a2 = np.zeros(nv)
            a2[:n] = -G[i]
            a2[n + i] = -1.0
            rows.append((a2, "<=", 0.0))
        bounds = [(0.0, None)] * nv
    elif kind == "lin_tails":
        w = plan[1]
        nv = n + m + 1  # t, u, z
        cvec = np.zeros(nv)
        cvec[-1] = 1.0
        for i in range(m):
            a = np.zeros(nv)
            a[:n] = G[i]
            a[n + i] = -1.0
            rows.append((a, "<=", 0.0))
            a2 = np.zeros(nv)
            a2[:n] = -G[i]
            a2[n + i] = -1.0
            rows.append((a2, "<=", 0.0))
        for k in range(m):
            a = np.zeros(nv)
            a[n + k : n + m] = w[k]
            a[-1] = -1.0
            rows.append((a, "<=", 0.0))
        bounds = [(0.0, None)] * nv
    else:
        raise InvalidParameter(f"unknown LP plan kind {kind!r}")

    simplex_row = np.zeros(nv)
    simplex_row[:n] = 1.0
    rows.append((simplex_row, "=", 1.0))
    lp = LinearProgram(cvec, "min", tuple(rows), tuple(bounds))
    rep = lp_solve(lp, tol=tol)
    t = rep.best_point[:n]
    return SearchReport(rep.best_value, t, rep.iterations, rep.converged, None)
