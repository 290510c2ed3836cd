"""Fixed-point experiments on the truncated coefficient simplex: applying the
affine self-maps, Picard orbits, certified minimum displacement, fixed-point
system analysis, and (uniform) Lipschitz estimation.

A positive certified minimum displacement at truncation N shows the map has
no fixed point on the support-N simplex; the triangular certificate from
fixed_point_solve is the companion exact argument. Neither claims anything
beyond the truncation, and reports always carry N.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import optim, rng
from .basis import (
    BasicSequenceSpec,
    CERTIFIED_TOL,
    ConstantEstimate,
    METHOD_EXACT,
    METHOD_SAMPLED,
    SimplexPoint,
    difference_ball_vertex_matrix,
)
from .constructions import AffineMapSpec, AlphaSchedule, composed_map_matrix
from .errors import DimensionCap, InvalidParameter, NotPolyhedral, TruncationOverflow
from .optim import SearchReport, null_functionals, polytope_section_vertices
from .spaces import CoeffVector, Space, lp_plan, primitive_structure

ORBIT_TRACE_COORDS = 8


@dataclass
class OrbitRecord:
    """A Picard orbit with per-step displacements, leading coordinate traces,
    and the tracked simplex mass defect of every iterate."""

    points: list
    step_displacements: list
    coordinate_traces: dict
    mass_defects: list
    space: Space
    map_kind: str

    def to_json(self) -> dict:
        return {
            "map": self.map_kind,
            "space": self.space.to_json(),
            "steps": len(self.step_displacements),
            "points": [p.tolist() for p in self.points],
            "step_displacements": list(self.step_displacements),
            "coordinate_traces": {str(k): v for k, v in self.coordinate_traces.items()},
            "mass_defects": list(self.mass_defects),
        }

    def csv_rows(self) -> list[dict]:
        rows = []
        for k, d in enumerate(self.step_displacements):
            row = {"step": k + 1, "displacement": d}
            for i, trace in self.coordinate_traces.items():
                row[f"coord_{i}"] = trace[k + 1]
            rows.append(row)
        return rows


def map_apply(m: AffineMapSpec, t: SimplexPoint) -> SimplexPoint:
    """One application of the column-stochastic transformation; the result
    satisfies the simplex invariants up to the map's tracked mass defect."""
    tv = t.t
    support = int(np.nonzero(tv)[0][-1]) + 1 if np.any(tv) else 1
    if support > m.n:
        raise TruncationOverflow(
            f"point support {support} exceeds map domain {m.n}; rebuild the map larger"
        )
    x = np.zeros(m.n)
    k = min(tv.size, m.n)
    x[:k] = tv[:k]
    out = m.matrix @ x
    # the expected mass shortfall is exactly the tracked defect of the
    # columns actually used; widen the simplex tolerance by it
    expected = float(m.column_sums() @ x)
    return SimplexPoint(out, tol=abs(1.0 - expected) + 1e-9)


def picard_orbit(
    m: AffineMapSpec, t0: SimplexPoint, steps: int, space: Space
) -> OrbitRecord:
    """Iterate map_apply from t0, recording displacements in `space` (the
    coefficient-space oracle of the ambient expansion) and the decay of the
    leading coordinates."""
    if steps < 1:
        raise InvalidParameter("steps must be >= 1")
    support = int(np.nonzero(t0.t)[0][-1]) + 1 if np.any(t0.t) else 1
    needed = support + (steps - 1) * max(m.band, 0)
    if needed > m.n:
        raise TruncationOverflow(
            f"orbit needs domain truncation >= {needed}, map was built at {m.n}"
        )
    pts = [t0.t.copy()]
    cur = t0
    for _ in range(steps):
        cur = map_apply(m, cur)
        pts.append(cur.t.copy())
    width = max(p.size for p in pts)
    padded = np.zeros((len(pts), width))
    for i, p in enumerate(pts):
        padded[i, : p.size] = p
    disp = space.norm_rows(padded[1:] - padded[:-1])
    traces = {
        i + 1: padded[:, i].tolist() for i in range(min(ORBIT_TRACE_COORDS, width))
    }
    defects = np.abs(1.0 - padded.sum(axis=1)).tolist()
    return OrbitRecord(
        [padded[i] for i in range(len(pts))],
        [float(d) for d in disp],
        traces,
        defects,
        space,
        m.kind,
    )


def _displacement_matrix(m: AffineMapSpec) -> np.ndarray:
    D = m.matrix.copy()
    D[np.arange(m.n), np.arange(m.n)] -= 1.0
    return D


def min_displacement(
    m: AffineMapSpec, space: Space, seed: int = 0, trials: int = 400
) -> SearchReport:
    """min over the support-N simplex of ||(A - I) t|| in `space`.

    Exact via an epigraph LP for the LP-representable families; otherwise a
    seeded projected pattern-search descent (uncertified). A strictly
    positive certified value proves the truncated simplex holds no fixed
    point.
    """
    G = _displacement_matrix(m)
    plan = lp_plan(space, G.shape[0])
    if plan is not None:
        try:
            rep = optim.minimize_norm_over_simplex(plan, G)
        except optim.Infeasible as exc:  # the simplex is never empty
            raise InvalidParameter(f"internal error: displacement LP infeasible: {exc}")
        rep.meta["method"] = "lp"
        rep.meta["certified"] = bool(rep.converged)
        return rep
    obj = lambda t: -space.norm(G @ t)  # noqa: E731
    rep = optim.sampled_ascent(
        obj, optim.project_to_simplex, trials, seed, m.n
    )
    rep.best_value = -rep.best_value
    rep.converged = False
    rep.meta["method"] = "sampled"
    rep.meta["certified"] = False
    return rep


def _triangular_certificate(m: AffineMapSpec) -> list[str] | None:
    """The forced-zero chain for the lower-bidiagonal maps: row 1 forces
    t_1 = 0 and row k propagates t_{k-1} = 0 => t_k = 0."""
    if m.kind == "f-main":
        a = np.array(m.alphas)
        if np.any(a == 0.0):
            return None
        steps = [f"row 1: -a_1 t_1 = 0 with a_1 = {a[0]!r} != 0, so t_1 = 0"]
        steps += [
            f"row {k + 1}: a_{k} t_{k} = a_{k + 1} t_{k + 1} and t_{k} = 0, so t_{k + 1} = 0"
            for k in range(1, m.n)
        ]
        return steps
    if m.kind == "f0":
        steps = ["row 1: -t_1 = 0, so t_1 = 0"]
        steps += [
            f"row {k + 1}: t_{k} = t_{k + 1} and t_{k} = 0, so t_{k + 1} = 0"
            for k in range(1, m.n)
        ]
        return steps
    return None


def _f1_chains(n: int) -> list[list[int]]:
    """Orbit chains of the bilateral-shift index map inside 1..n."""
    from .constructions import _f1_target

    succ = {j: _f1_target(j) for j in range(1, n + 1) if _f1_target(j) <= n}
    starts = set(range(1, n + 1)) - set(succ.values())
    chains = []
    for s in sorted(starts):
        chain = [s]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        chains.append(chain)
    return chains


def fixed_point_solve(m: AffineMapSpec) -> dict:
    """Solve (A - I) t = 0 at truncation and intersect with the simplex.

    For the banded maps this reproduces the forced-zero induction (reported
    as a certificate); for the bilateral shift the chain structure of the
    index map is reported. The linear part of a permutation map fixes only
    vectors constant on cycles, and no finite truncation closes a cycle.
    """
    D = _displacement_matrix(m)
    svals = np.linalg.svd(D, compute_uv=False)
    tol = max(D.shape) * np.finfo(float).eps * (svals[0] if svals.size else 1.0)
    rank = int(np.sum(svals > tol))
    null_dim = m.n - rank
    out = {
        "kind": m.kind,
        "n": m.n,
        "nullspace_dim": null_dim,
        "only_zero_solution": null_dim == 0,
        "certificate": _triangular_certificate(m),
        "simplex_fixed_point": None,
    }
    if m.kind == "f1":
        out["index_chains"] = _f1_chains(m.n)
        out["finite_cycles"] = []
    if null_dim == 0:
        out["conclusion"] = "only t = 0 solves (A - I) t = 0; it violates sum t = 1"
        return out
    # nonzero solution space: look for a simplex point inside it
    rows = [(D[i], "=", 0.0) for i in range(D.shape[0])]
    rows.append((np.ones(m.n), "=", 1.0))
    lp = optim.LinearProgram(
        np.zeros(m.n), "min", tuple(rows), tuple((0.0, None) for _ in range(m.n))
    )
    try:
        rep = optim.lp_solve(lp)
        out["simplex_fixed_point"] = rep.best_point.tolist()
        out["conclusion"] = (
            "every simplex point is fixed"
            if null_dim == m.n
            else "the solution space meets the simplex"
        )
    except optim.Infeasible:
        out["conclusion"] = "the solution space misses the simplex"
    return out


def _difference_vertices_of_space(space: Space, n: int) -> np.ndarray:
    canon = BasicSequenceSpec.canonical(space, n)
    return difference_ball_vertex_matrix(canon)


def _centered_radial_projector(space: Space):
    def proj(d: np.ndarray) -> np.ndarray:
        d = d - d.mean()
        nv = space.norm(d)
        return d if nv <= 1.0 else d / nv

    return proj


def lipschitz_estimate(
    m: AffineMapSpec,
    space: Space,
    method: str = "EXACT",
    direction: str = "FORWARD",
    trials: int = 200,
    seed: int = 0,
    analytic_upper: float | None = None,
) -> ConstantEstimate:
    """Lipschitz data of the affine map over simplex differences {sum d = 0}.

    FORWARD: sup ||A d|| / ||d||, exact over the difference-ball vertices
    when the space ball is cube- or cross-structured, else a sampled lower
    bound. INVERSE: a positive c with ||A d|| >= c ||d||; the default route
    bounds it through the unrestricted equivalence constant of the image
    sequence (lower), with the difference-restricted exact value attached as
    the upper cross-check. An analytic upper bound, when supplied, is
    attached for comparison.
    """
    n = m.n
    A = m.matrix
    if direction == "FORWARD":
        if method == "EXACT":
            try:
                D = _difference_vertices_of_space(space, n)
                vals = space.norm_rows(D @ A.T)
                j = int(np.argmax(vals))
                val = float(vals[j])
                return ConstantEstimate(
                    val, val, CoeffVector(D[j]), METHOD_EXACT, True,
                    truncation=n, analytic_upper=analytic_upper,
                )
            except (NotPolyhedral, DimensionCap) as reason:
                note = f"downgraded to sampling: {reason}"
        else:
            note = None
        rep = optim.sampled_ascent(
            lambda d: space.norm(A @ d),
            _centered_radial_projector(space),
            trials,
            seed,
            n,
        )
        return ConstantEstimate(
            float(rep.best_value),
            analytic_upper,
            CoeffVector(rep.best_point),
            METHOD_SAMPLED,
            False,
            truncation=n,
            note=note,
            analytic_upper=analytic_upper,
        )
    if direction != "INVERSE":
        raise InvalidParameter("direction must be FORWARD or INVERSE")

    if method == "EXACT":
        try:
            kind, W = primitive_structure(space, A.shape[0])
            if kind not in ("cube", "cross"):
                raise DimensionCap(f"no section enumeration for {space.family!r}")
            G = A if W is None else W @ A
            H = null_functionals(np.ones((n, 1)))  # rows span {sum d = 0}
            if np.linalg.matrix_rank(G @ H.T) < n - 1:
                return ConstantEstimate(
                    0.0, None, None, METHOD_EXACT, False, truncation=n,
                    note="linear part singular on differences",
                )
            # equivalence route: sup ||a|| over the full pullback ball
            F_full = null_functionals(G)
            C = polytope_section_vertices(kind, F_full)
            pts = np.linalg.lstsq(G, C.T, rcond=None)[0].T
            vals = space.norm_rows(pts)
            j = int(np.argmax(vals))
            equiv_lower = 1.0 / float(vals[j])
            # direct route on differences (the exact restricted constant)
            V = G @ H.T
            F_diff = null_functionals(V)
            C2 = polytope_section_vertices(kind, F_diff)
            pts2 = np.linalg.lstsq(G, C2.T, rcond=None)[0].T
            direct = 1.0 / float(space.norm_rows(pts2).max())
            # the two routes coincide up to float noise when the restriction
            # is inactive; keep the interval ordered
            equiv_lower = min(equiv_lower, direct)
            return ConstantEstimate(
                equiv_lower,
                direct,
                CoeffVector(pts[j]),
                METHOD_EXACT,
                True,
                truncation=n,
                note="lower: equivalence route (all coefficients); upper: exact on differences",
                analytic_upper=analytic_upper,
            )
        except (NotPolyhedral, DimensionCap) as reason:
            note = f"downgraded to sampling: {reason}"
    else:
        note = None
    # sampled inverse: ratios only bound the infimum from above
    g = rng.generator(seed)
    best = np.inf
    for _ in range(trials):
        d = g.standard_normal(n)
        d -= d.mean()
        nd = space.norm(d)
        if nd < 1e-12:
            continue
        best = min(best, space.norm(A @ d) / nd)
    return ConstantEstimate(
        0.0,
        float(best),
        None,
        METHOD_SAMPLED,
        False,
        truncation=n,
        note=note or "sampled ratios bound the inverse constant from above only",
        analytic_upper=analytic_upper,
    )


def uniform_lipschitz_probe(
    kind: str,
    space: Space,
    n: int,
    p_max: int,
    alphas: AlphaSchedule | None = None,
    j_max: int = 60,
    tol: float = CERTIFIED_TOL,
    trials: int = 100,
    seed: int = 0,
) -> dict:
    """FORWARD Lipschitz constants of the p-fold compositions, p = 1..p_max,
    over simplex differences; reports the sup over p and whether the profile
    is flat within tolerance."""
    if p_max < 1:
        raise InvalidParameter("p_max must be >= 1")
    try:
        D = _difference_vertices_of_space(space, n)
        exact = True
    except (NotPolyhedral, DimensionCap):
        D = None
        exact = False
    per_p = []
    proj = _centered_radial_projector(space)
    for p in range(1, p_max + 1):
        Ap = composed_map_matrix(kind, n, p, alphas=alphas, j_max=j_max)
        if exact:
            vals = space.norm_rows(D @ Ap.T)
            j = int(np.argmax(vals))
            per_p.append(
                ConstantEstimate(
                    float(vals[j]), float(vals[j]), CoeffVector(D[j]),
                    METHOD_EXACT, True, truncation=n,
                )
            )
        else:
            rep = optim.sampled_ascent(
                lambda d, M=Ap: space.norm(M @ d), proj, trials, seed + p, n
            )
            per_p.append(
                ConstantEstimate(
                    float(rep.best_value), None, CoeffVector(rep.best_point),
                    METHOD_SAMPLED, False, truncation=n,
                )
            )
    values = [e.lower for e in per_p]
    return {
        "per_p": per_p,
        "values": values,
        "sup": float(max(values)),
        "flat": bool(max(values) - min(values) <= tol),
        "exact": exact,
        "p_max": p_max,
        "truncation": n,
    }
