"""Constructions on basic sequences: decreasing weight schedules, scaled and
pairwise-convex bases, the interval renorming, the monotonicity and scaling
equivalence checks behind them, and the four affine self-map builders.

Two weight regimes coexist and are deliberately kept apart:

* non-decreasing weights in (0, 1] (scaled_basis, the equivalence check,
  the monotonicity check), and
* strictly decreasing schedules with 0 < a_n < 1/2 and a controlled sum
  (AlphaSchedule, used by the convex-basis and self-map constructions).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng
from .basis import (
    ALGEBRAIC_TOL,
    BasicSequenceSpec,
    CERTIFIED_TOL,
    basis_constant,
    coefficient_ball_vertex_matrix,
    domination_constant,
)
from .errors import (
    DimensionMismatch,
    IdenticalSequences,
    InvalidParameter,
    InvalidScaling,
    InvalidSchedule,
)
from .spaces import Space, as_array

TRUNCATION_HARD_CAP = 512

F_MAIN = "f-main"
F0 = "f0"
F1 = "f1"
F2 = "f2"
MAP_KINDS = (F_MAIN, F0, F1, F2)


# -- decreasing weight schedules ---------------------------------------------


@dataclass(frozen=True)
class AlphaSchedule:
    """A finite strictly decreasing weight schedule with 0 < a_n < 1/2.

    Geometric schedules a_n = r * 2^-n know their exact infinite sum (= r),
    so the sum condition is validated against the full series rather than
    the truncated one.
    """

    alphas: tuple
    generator: str = "explicit"
    r: float | None = None

    def __post_init__(self):
        a = tuple(float(x) for x in self.alphas)
        if not a:
            raise InvalidSchedule("schedule must be nonempty")
        object.__setattr__(self, "alphas", a)

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.alphas)

    @property
    def total(self) -> float:
        """The sum used by condition (3): exact series sum for geometric
        schedules, finite sum otherwise."""
        if self.generator == "geometric" and self.r is not None:
            return self.r
        return float(sum(self.alphas))

    def head(self, n: int) -> "AlphaSchedule":
        if n > self.n:
            raise InvalidSchedule(f"schedule has {self.n} < {n} terms")
        return AlphaSchedule(self.alphas[:n], self.generator, self.r)

    def to_json(self) -> dict:
        return {"alphas": list(self.alphas), "generator": self.generator, "r": self.r}

    @classmethod
    def from_json(cls, obj: dict) -> "AlphaSchedule":
        return cls(tuple(obj["alphas"]), obj.get("generator", "explicit"), obj.get("r"))


def alpha_generate(
    K: float, inf_norm: float, sup_norm: float, n: int, family: str = "geometric"
) -> AlphaSchedule:
    """Produce a schedule passing all three conditions with strict margin:
    a_n = r * 2^-n with r = 0.9 * min(1/2, inf/(4 K sup))."""
    if family != "geometric":
        raise InvalidParameter(f"unknown schedule family {family!r}")
    if K < 1.0 or not 0.0 < inf_norm <= sup_norm:
        raise InvalidParameter("need K >= 1 and 0 < inf_norm <= sup_norm")
    r = 0.9 * min(0.5, inf_norm / (4.0 * K * sup_norm))
    alphas = r * 2.0 ** (-np.arange(1.0, n + 1.0))
    sched = AlphaSchedule(tuple(alphas), "geometric", r)
    rep = alpha_validate(sched, K, inf_norm, sup_norm)
    assert rep["passed"], f"generated schedule failed validation: {rep}"
    return sched


def alpha_validate(
    sched: AlphaSchedule, K: float, inf_norm: float, sup_norm: float
) -> dict:
    """Check the three schedule conditions; failures are data, not errors."""
    a = sched.array
    c1 = bool(np.all(a > 0.0) and np.all(a < 0.5))
    m1 = float(min(a.min(), (0.5 - a).min()))
    diffs = a[:-1] - a[1:]
    c2 = bool(np.all(diffs > 0.0)) if a.size > 1 else True
    m2 = float(diffs.min()) if a.size > 1 else float(a[0])
    bound = inf_norm / (4.0 * K * sup_norm)
    total = sched.total
    c3 = total < bound
    report = {
        "range_condition": {"passed": c1, "margin": m1},
        "decreasing_condition": {"passed": c2, "margin": m2},
        "sum_condition": {
            "passed": c3,
            "total": total,
            "bound": bound,
            "margin": bound - total,
        },
        "passed": c1 and c2 and c3,
    }
    return report


def _check_nondecreasing_unit(alphas: np.ndarray):
    if alphas.size == 0:
        raise InvalidScaling("empty weight vector")
    if np.any(alphas <= 0.0) or np.any(alphas > 1.0):
        raise InvalidScaling("weights must lie in (0, 1]")
    if np.any(np.diff(alphas) < 0.0):
        raise InvalidScaling("weights must be non-decreasing")


# -- basis constructions -----------------------------------------------------


def scaled_basis(seq: BasicSequenceSpec, alphas) -> BasicSequenceSpec:
    """(a_n x_n) for non-decreasing weights in (0, 1]. This regime is the
    opposite of AlphaSchedule's and gets its own validation."""
    a = as_array(alphas)
    _check_nondecreasing_unit(a)
    if a.size != seq.n:
        raise InvalidScaling(f"need {seq.n} weights, got {a.size}")
    return seq.scaled(a)


def convex_basis(seq: BasicSequenceSpec, sched: AlphaSchedule) -> BasicSequenceSpec:
    """z_n = (1 - a_n) x_n + a_n x_{n+1}; consumes one extra basis vector."""
    a = sched.array
    if np.any(a <= 0.0) or np.any(a >= 0.5) or (a.size > 1 and np.any(np.diff(a) >= 0.0)):
        raise InvalidSchedule("schedule must be strictly decreasing inside (0, 1/2)")
    if seq.n < a.size + 1:
        raise InvalidParameter(
            f"need {a.size + 1} basis vectors, sequence has {seq.n}"
        )
    return seq.truncated(a.size + 1).convex_pair_combination(a)


def interval_renorm(seq: BasicSequenceSpec) -> Space:
    """The norm sup over index intervals I of ||P_I x|| in the ambient norm.
    All head and tail projections have norm exactly 1 under it."""
    return Space("interval-renorm", seq=seq)


# -- checks -------------------------------------------------------------------


def monotone_weight_check(
    seq: BasicSequenceSpec,
    trials: int,
    seed: int,
    alphas=None,
    tol: float = CERTIFIED_TOL,
) -> dict:
    """Under the interval renorm (which forces unit tail projections), verify
    |||sum a_n w_n x_n||| <= |||sum w_n x_n||| for non-decreasing weights
    w in (0, 1] on random coefficient vectors. Violations are findings."""
    space = interval_renorm(seq)
    n = seq.n
    fixed = None
    if alphas is not None:
        fixed = as_array(alphas)
        _check_nondecreasing_unit(fixed)
        if fixed.size != n:
            raise InvalidParameter(f"need {n} weights")
    g = rng.generator(seed)
    A = g.standard_normal((trials, n))
    if fixed is None:
        W = np.sort(g.uniform(1e-3, 1.0, size=(trials, n)), axis=1)
    else:
        W = np.broadcast_to(fixed, (trials, n))
    lhs = space.norm_rows(A * W)
    rhs = space.norm_rows(A)
    viol = lhs - rhs
    worst = int(np.argmax(viol))
    return {
        "trials": trials,
        "seed": seed,
        "max_violation": float(viol[worst]),
        "violations": int(np.sum(viol > tol)),
        "passed": bool(np.all(viol <= tol)),
    }


def scaling_equivalence_check(
    seq: BasicSequenceSpec,
    alphas,
    mode: str = "ENUM",
    trials: int = 1000,
    seed: int = 0,
    tol: float = CERTIFIED_TOL,
) -> dict:
    """Verify (x_n) and (a_n x_n) are L-equivalent with L = 2K/a_1 for
    non-decreasing weights a in (0, 1], K the basis constant at truncation.

    ENUM is exhaustive over the coefficient-ball extreme points (certified);
    SAMPLE checks scale-invariant ratios on random coefficient vectors.
    """
    a = as_array(alphas)
    _check_nondecreasing_unit(a)
    if a.size != seq.n:
        raise InvalidParameter(f"need {seq.n} weights, got {a.size}")
    K = basis_constant(seq)
    L = 2.0 * K.upper / float(a[0]) if K.upper is not None else None
    out = {
        "mode": mode,
        "basis_constant": K.upper,
        "L": L,
        "truncation": seq.n,
    }
    if mode == "ENUM":
        if not K.certified or L is None:
            raise InvalidParameter("ENUM mode needs a certified basis constant")
        V = coefficient_ball_vertex_matrix(seq)
        # forward: scaled expansions over the x-ball; backward: the scaled
        # ball's vertices are V / a componentwise (substitute c = a * b)
        fwd = float(seq.norms_of_rows(V * a[None, :]).max())
        bwd = float(seq.norms_of_rows(V / a[None, :]).max())
        out.update(
            forward=fwd,
            backward=bwd,
            certified=True,
            passed=bool(fwd <= L + tol and bwd <= L + tol),
            margin=float(min(L - fwd, L - bwd)),
        )
        return out
    if mode == "SAMPLE":
        if L is None:
            raise InvalidParameter("SAMPLE mode needs a basis-constant upper bound")
        g = rng.generator(seed)
        A = g.standard_normal((trials, seq.n))
        base = seq.norms_of_rows(A)
        scal = seq.norms_of_rows(A * a[None, :])
        ok = base > 1e-12
        fwd = float((scal[ok] / base[ok]).max())
        bwd = float((base[ok] / scal[ok]).max())
        out.update(
            forward=fwd,
            backward=bwd,
            certified=False,
            trials=trials,
            seed=seed,
            passed=bool(fwd <= L + tol and bwd <= L + tol),
            margin=float(min(L - fwd, L - bwd)),
        )
        return out
    raise InvalidParameter(f"unknown mode {mode!r}")


def abel_summation_residual(a, alphas) -> float:
    """Residual of the partial-summation identity, evaluated in coefficient
    space:

      sum_n a_n w_n e_n
        = sum_{n<N} (w_n - w_{n+1}) * (prefix_n of a) + w_N * (full prefix).
    """
    av = as_array(a)
    w = as_array(alphas)
    if av.size != w.size:
        raise DimensionMismatch(f"lengths {av.size} != {w.size}")
    n = av.size
    if n == 0:
        return 0.0
    lhs = av * w
    rhs = np.zeros(n)
    prefix = np.zeros(n)
    for k in range(n - 1):
        prefix[k] = av[k]
        rhs += (w[k] - w[k + 1]) * prefix
    prefix[n - 1] = av[n - 1]
    rhs += w[n - 1] * prefix
    return float(np.max(np.abs(lhs - rhs)))


def small_perturbation_sum(seq: BasicSequenceSpec, sched: AlphaSchedule) -> dict:
    """sum_n a_n ||x_{n+1}|| / ((1 - a_n) ||x_n||) compared against 1/(2K):
    below the threshold, the pairwise convex combinations stay equivalent to
    the scaled basis they perturb."""
    a = sched.array
    if seq.n < a.size + 1:
        raise InvalidParameter(f"need {a.size + 1} basis vectors, have {seq.n}")
    norms = seq.vector_norms()
    terms = a * norms[1 : a.size + 1] / ((1.0 - a) * norms[: a.size])
    total = float(terms.sum())
    K = basis_constant(seq)
    bound = 1.0 / (2.0 * K.upper) if K.upper else None
    return {
        "sum": total,
        "bound": bound,
        "passed": bool(bound is not None and total < bound),
        "basis_constant": K.upper,
        "truncation": seq.n,
    }


def convex_basis_equivalence_bound(seq: BasicSequenceSpec, sched: AlphaSchedule) -> float | None:
    """Analytic upper bound for the equivalence constant between (x_n) and
    the pairwise convex combinations z_n, combining the scaling equivalence
    of w_n = (1 - a_n) x_n (weights non-decreasing, so L_wx = 2K/(1 - a_1))
    with the quantitative perturbation factor 1/(1 - theta),
    theta = 2 K_w * sum ||w_n - z_n||/||w_n||. None when theta >= 1."""
    a = sched.array
    K = basis_constant(seq)
    if not K.certified or K.upper is None:
        return None
    w_seq = seq.scaled(np.concatenate([1.0 - a, np.ones(seq.n - a.size)]))
    Kw = basis_constant(w_seq)
    if not Kw.certified or Kw.upper is None:
        return None
    pert = small_perturbation_sum(seq, sched)
    theta = 2.0 * Kw.upper * pert["sum"]
    if theta >= 1.0:
        return None
    L_wx = 2.0 * K.upper / (1.0 - a[0])
    return float(L_wx / (1.0 - theta))


def separation_lower_bound(
    seq_x: BasicSequenceSpec,
    seq_z: BasicSequenceSpec,
    kappa,
    ell,
    n: int | None = None,
) -> dict:
    """Computable lower bound on the distance between the two operators built
    from different index sequences into (z_n): the direct term
    ||z_{k_j} - z_{l_j}|| / ||x_j|| at the first mismatch j, and the uniform
    floor inf_n ||z_n|| / (K_z sup_n ||x_n||)."""
    ka = [int(v) for v in kappa]
    le = [int(v) for v in ell]
    depth = min(len(ka), len(le))
    first = next((j for j in range(depth) if ka[j] != le[j]), None)
    if first is None:
        raise IdenticalSequences("index sequences agree on their common range")
    xs = seq_x.truncated(n) if n is not None else seq_x
    zs = seq_z.truncated(n) if n is not None else seq_z
    ki, li = ka[first], le[first]
    if not (1 <= ki <= zs.n and 1 <= li <= zs.n):
        raise InvalidParameter("mismatch index beyond the z truncation")
    diff = zs.matrix[:, ki - 1] - zs.matrix[:, li - 1]
    x_norms = xs.vector_norms()
    z_norms = zs.vector_norms()
    direct = float(zs.ambient.norm(diff)) / float(x_norms[first])
    Kz = basis_constant(zs)
    floor = float(z_norms.min()) / (Kz.upper * float(x_norms.max())) if Kz.upper else None
    return {
        "first_mismatch": first + 1,
        "direct_term": direct,
        "floor": floor,
        "z_basis_constant": Kz.upper,
        "inf_z_norm": float(z_norms.min()),
        "sup_x_norm": float(x_norms.max()),
    }


# -- affine map builders ------------------------------------------------------


@dataclass(frozen=True)
class AffineMapSpec:
    """An affine self-map of the coefficient simplex, stored as a
    column-stochastic coefficient transformation (column n lists the output
    rows fed by t_n). Rows may extend past the domain truncation by the
    map's band; per-column mass defect is tracked for the truncated f2."""

    kind: str
    matrix: np.ndarray
    mass_defect_col: float = 0.0
    alphas: tuple | None = None
    j_max: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        M = np.ascontiguousarray(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[1] < 1:
            raise InvalidParameter("map matrix must be 2-D with at least one column")
        if np.any(M < -ALGEBRAIC_TOL):
            raise InvalidParameter("map weights must be nonnegative")
        M.setflags(write=False)
        object.__setattr__(self, "matrix", M)

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def n_out(self) -> int:
        return self.matrix.shape[0]

    @property
    def band(self) -> int:
        return self.n_out - self.n

    def columns(self) -> list[list[tuple[int, float]]]:
        """Per column: (row, weight) pairs, 1-indexed rows."""
        out = []
        for j in range(self.n):
            col = self.matrix[:, j]
            out.append([(int(i) + 1, float(col[i])) for i in np.nonzero(col)[0]])
        return out

    def column_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    @classmethod
    def from_matrix(cls, matrix, kind: str = "custom") -> "AffineMapSpec":
        return cls(kind, np.asarray(matrix, dtype=float))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "band": self.band,
            "mass_defect_col": self.mass_defect_col,
            "alphas": None if self.alphas is None else list(self.alphas),
            "j_max": self.j_max,
            "columns": [
                [[i, w] for i, w in col] for col in self.columns()
            ],
        }


def _f1_target(j: int) -> int:
    """The bilateral-shift index map: 2 -> 1, odd j -> j+2, even j >= 4 -> j-2."""
    if j == 2:
        return 1
    if j % 2 == 1:
        return j + 2
    return j - 2


def map_build(kind: str, n: int, alphas: AlphaSchedule | None = None, j_max: int = 60) -> AffineMapSpec:
    """Build one of the four affine self-maps at domain truncation n.

    f-main needs a validated decreasing schedule with at least n terms; f2
    truncates its geometric tail at j_max and records the per-column mass
    defect 2^-j_max.
    """
    if n < 1 or n > TRUNCATION_HARD_CAP:
        raise InvalidParameter(f"domain truncation must be in 1..{TRUNCATION_HARD_CAP}")
    if kind == F_MAIN:
        if alphas is None or alphas.n < n:
            raise InvalidSchedule(f"f-main needs a schedule with >= {n} terms")
        a = alphas.array[:n]
        if np.any(a <= 0.0) or np.any(a >= 0.5) or (n > 1 and np.any(np.diff(a) >= 0.0)):
            raise InvalidSchedule("f-main schedule must be strictly decreasing in (0, 1/2)")
        M = np.zeros((n + 1, n))
        idx = np.arange(n)
        M[idx, idx] = 1.0 - a
        M[idx + 1, idx] = a
        return AffineMapSpec(F_MAIN, M, 0.0, tuple(a), None)
    if kind == F0:
        M = np.zeros((n + 1, n))
        M[np.arange(1, n + 1), np.arange(n)] = 1.0
        return AffineMapSpec(F0, M)
    if kind == F1:
        M = np.zeros((n + 2, n))
        for j in range(1, n + 1):
            M[_f1_target(j) - 1, j - 1] = 1.0
        return AffineMapSpec(F1, M)
    if kind == F2:
        if j_max < 1:
            raise InvalidParameter("j_max must be >= 1")
        M = np.zeros((n + j_max, n))
        weights = 2.0 ** (-np.arange(1.0, j_max + 1.0))
        for j in range(n):
            M[j + 1 : j + 1 + j_max, j] = weights
        return AffineMapSpec(F2, M, float(2.0 ** (-j_max)), None, j_max)
    raise InvalidParameter(f"unknown map kind {kind!r}")


def composed_map_matrix(
    kind: str, n: int, p: int, alphas: AlphaSchedule | None = None, j_max: int = 60
) -> np.ndarray:
    """Matrix of the p-fold composition, chaining stages at growing domains."""
    if p < 1:
        raise InvalidParameter("p must be >= 1")
    stage = map_build(kind, n, alphas=alphas, j_max=j_max)
    out = stage.matrix
    for _ in range(1, p):
        stage = map_build(kind, out.shape[0], alphas=alphas, j_max=j_max)
        out = stage.matrix @ out
    return out
