"""Basic-sequence machinery over a finite truncation.

A BasicSequenceSpec holds an ambient norm oracle together with a
change-of-basis matrix M mapping basis coefficients to ambient canonical
coordinates, so that the norm of sum a_n x_n is ambient.norm(M @ a). All
constants computed here are "constants at truncation N": monotone
approximations of the infinite-sequence quantities, always reported with N.

Certified constants are computed exactly by enumerating the extreme points
of the relevant coefficient ball (a convex function attains its maximum over
a polytope at a vertex). When the ball is not polyhedral, or enumeration
exceeds the caps, operations downgrade to seeded sampled lower bounds with
certified=False rather than failing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import optim
from .errors import (
    DimensionCap,
    InvalidParameter,
    NotInSimplex,
    NotInSpan,
    NotPolyhedral,
)
from .optim import SearchReport, null_functionals, polytope_section_vertices
from .spaces import (
    CoeffVector,
    Space,
    as_array,
    extreme_point_matrix,
    primitive_structure,
    tail_matrix,
)

CERTIFIED_TOL = 1e-9
ALGEBRAIC_TOL = 1e-12

METHOD_EXACT = "EXACT_EXTREME_POINTS"
METHOD_SAMPLED = "SAMPLED_ASCENT"
METHOD_ANALYTIC = "ANALYTIC_BOUND"


@dataclass
class ConstantEstimate:
    """Certified interval for a norm-type constant.

    lower always comes with a witness that reproduces it on re-evaluation;
    upper is None when no upper bound is known. certified means lower and
    upper agree (exact extreme-point evaluation) at the stated truncation.
    """

    lower: float
    upper: float | None
    lower_witness: CoeffVector | None
    method: str
    certified: bool
    truncation: int | None = None
    note: str | None = None
    analytic_upper: float | None = None

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper + CERTIFIED_TOL:
            raise InvalidParameter(
                f"estimate lower {self.lower} exceeds upper {self.upper}"
            )

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_witness": None
            if self.lower_witness is None
            else self.lower_witness.to_list(),
            "method": self.method,
            "certified": self.certified,
            "truncation": self.truncation,
            "note": self.note,
            "analytic_upper": self.analytic_upper,
        }


class SimplexPoint:
    """Nonnegative coefficients summing to 1: a point of the truncated hull."""

    __slots__ = ("_t",)

    def __init__(self, t, tol: float = ALGEBRAIC_TOL):
        t = np.asarray(t, dtype=float).reshape(-1).copy()
        if t.size == 0:
            raise NotInSimplex("empty coefficient vector")
        neg = t.min()
        if neg < -tol:
            raise NotInSimplex(f"negative coordinate {neg:.3e} at index {int(t.argmin()) + 1}")
        s = t.sum()
        if abs(s - 1.0) > tol:
            raise NotInSimplex(f"coordinate sum {s!r} != 1")
        t = np.clip(t, 0.0, None)
        t.setflags(write=False)
        self._t = t

    @classmethod
    def unit(cls, k: int, n: int) -> "SimplexPoint":
        t = np.zeros(n)
        t[k - 1] = 1.0
        return cls(t)

    @property
    def t(self) -> np.ndarray:
        return self._t

    def __len__(self) -> int:
        return self._t.size

    def __repr__(self) -> str:
        return f"SimplexPoint({self._t.tolist()!r})"


class BasicSequenceSpec:
    """A basic sequence x_1..x_N given by a triangular (or injective banded)
    change of basis into the ambient space's canonical coordinates."""

    __slots__ = ("ambient", "matrix", "name", "n", "meta")

    def __init__(self, ambient: Space, matrix: np.ndarray, name: str, meta: dict | None = None):
        M = np.ascontiguousarray(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] < M.shape[1] or M.shape[1] < 1:
            raise InvalidParameter("change-of-basis matrix must be m x n with m >= n >= 1")
        if not np.all(np.isfinite(M)):
            raise InvalidParameter("change-of-basis entries must be finite")
        if np.linalg.matrix_rank(M) < M.shape[1]:
            raise InvalidParameter("basis vectors are linearly dependent at this truncation")
        M.setflags(write=False)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "name", name)
        object.__setattr__(self, "n", M.shape[1])
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, *_):
        raise AttributeError("BasicSequenceSpec is immutable")

    # -- presets -----------------------------------------------------------
    @classmethod
    def canonical(cls, ambient: Space, n: int) -> "BasicSequenceSpec":
        return cls(ambient, np.eye(n), "canonical")

    @classmethod
    def summing(cls, ambient: Space, n: int) -> "BasicSequenceSpec":
        """x_n = e_1 + ... + e_n; ambient coordinates are coefficient tail sums."""
        return cls(ambient, np.asarray(tail_matrix(n)), "summing")

    def shifted(self, p: int) -> "BasicSequenceSpec":
        """The p-fold right shift y_n = x_{n+p}, truncated to n - p terms."""
        if p < 1 or p >= self.n:
            raise InvalidParameter(f"shift must satisfy 1 <= p < N = {self.n}")
        return BasicSequenceSpec(
            self.ambient,
            self.matrix[:, p:],
            "shifted",
            {"p": p, "base": self.to_json()},
        )

    def scaled(self, weights) -> "BasicSequenceSpec":
        w = as_array(weights)
        if w.size != self.n:
            raise InvalidParameter("one weight per basis vector required")
        return BasicSequenceSpec(
            self.ambient,
            self.matrix * w[None, :],
            "scaled",
            {"weights": w.tolist(), "base": self.to_json()},
        )

    def convex_pair_combination(self, alphas) -> "BasicSequenceSpec":
        """z_n = (1 - a_n) x_n + a_n x_{n+1} for n = 1..N-1 (needs x_{N})."""
        a = as_array(alphas)
        n_out = self.n - 1
        if a.size != n_out:
            raise InvalidParameter(f"need {n_out} mixing weights for N+1 = {self.n} vectors")
        B = np.zeros((self.n, n_out))
        idx = np.arange(n_out)
        B[idx, idx] = 1.0 - a
        B[idx + 1, idx] = a
        return BasicSequenceSpec(
            self.ambient,
            self.matrix @ B,
            "convex-alpha",
            {"alphas": a.tolist(), "base": self.to_json()},
        )

    # -- helpers -----------------------------------------------------------
    def truncated(self, n: int) -> "BasicSequenceSpec":
        """The same sequence cut to its first n vectors (zero rows trimmed)."""
        if n == self.n:
            return self
        if not 1 <= n <= self.n:
            raise InvalidParameter(f"truncation {n} out of range 1..{self.n}")
        M = self.matrix[:, :n]
        nz = np.nonzero(np.any(M != 0.0, axis=1))[0]
        M = M[: nz[-1] + 1] if nz.size else M[:1]
        return BasicSequenceSpec(self.ambient, M, self.name, dict(self.meta))

    def expand(self, a) -> np.ndarray:
        """Ambient canonical coordinates of sum a_n x_n."""
        arr = as_array(a)
        if arr.size > self.n:
            raise InvalidParameter(f"coefficient length {arr.size} exceeds truncation {self.n}")
        if arr.size < self.n:
            arr = np.concatenate([arr, np.zeros(self.n - arr.size)])
        return self.matrix @ arr

    def norm_of(self, a) -> float:
        """Ambient norm of sum a_n x_n."""
        return self.ambient.norm(self.expand(a))

    def norms_of_rows(self, A: np.ndarray) -> np.ndarray:
        return self.ambient.norm_rows(A @ self.matrix.T)

    def vector_norms(self) -> np.ndarray:
        """Ambient norms of x_1..x_N."""
        return self.ambient.norm_rows(self.matrix.T.copy())

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "preset": self.name,
            "ambient": self.ambient.to_json(),
            "N": self.n,
            "params": dict(self.meta),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BasicSequenceSpec":
        ambient = Space.from_json(obj["ambient"])
        name = obj["preset"]
        n = obj["N"]
        params = obj.get("params", {})
        if name == "canonical":
            return cls.canonical(ambient, n)
        if name == "summing":
            return cls.summing(ambient, n)
        if name == "shifted":
            return cls.from_json(params["base"]).shifted(params["p"])
        if name == "scaled":
            return cls.from_json(params["base"]).scaled(params["weights"])
        if name == "convex-alpha":
            return cls.from_json(params["base"]).convex_pair_combination(params["alphas"])
        raise InvalidParameter(f"unknown preset {name!r}")

    def __repr__(self) -> str:
        return f"BasicSequenceSpec({self.name!r}, ambient={self.ambient.family!r}, N={self.n})"


def exemplar_preset(ambient: Space, n: int) -> BasicSequenceSpec:
    """The natural wide-(s) exemplar of a space: the summing basis for the
    sup-normed c0 family, the canonical basis otherwise."""
    if ambient.family == "c0-sup":
        return BasicSequenceSpec.summing(ambient, n)
    return BasicSequenceSpec.canonical(ambient, n)


def from_preset_string(name: str, ambient: Space, n: int, alphas=None) -> BasicSequenceSpec:
    """Resolve the config-level preset names: "canonical", "summing",
    "shifted:<p>", "convex_alpha"."""
    if name == "canonical":
        return BasicSequenceSpec.canonical(ambient, n)
    if name == "summing":
        return BasicSequenceSpec.summing(ambient, n)
    if name.startswith("shifted:"):
        p = int(name.split(":", 1)[1])
        return exemplar_preset(ambient, n + p).shifted(p)
    if name in ("convex_alpha", "convex-alpha"):
        if alphas is None:
            raise InvalidParameter("convex_alpha preset requires mixing weights")
        return exemplar_preset(ambient, n + 1).convex_pair_combination(alphas)
    raise InvalidParameter(f"unknown preset {name!r}")


# -- coefficient extraction and projections --------------------------------


def coefficients(seq: BasicSequenceSpec, v, tol: float = CERTIFIED_TOL) -> CoeffVector:
    """Solve sum a_n x_n = v for the coefficients (triangular back-substitution
    for square specs, least squares plus residual check otherwise)."""
    w = as_array(v)
    m = seq.matrix.shape[0]
    if w.size > m:
        extra = w[m:]
        if np.any(extra != 0.0):
            raise NotInSpan(f"vector has support beyond ambient dimension {m}")
        w = w[:m]
    if w.size < m:
        w = np.concatenate([w, np.zeros(m - w.size)])
    if m == seq.n:
        a = np.linalg.solve(seq.matrix, w)
    else:
        a = np.linalg.lstsq(seq.matrix, w, rcond=None)[0]
    resid = float(np.max(np.abs(seq.matrix @ a - w))) if w.size else 0.0
    if resid > tol * max(1.0, float(np.max(np.abs(w), initial=0.0))):
        raise NotInSpan(f"residual {resid:.3e} after solve")
    return CoeffVector(a)


def project(seq: BasicSequenceSpec, a, n: int, side: str) -> CoeffVector:
    """Head (P) or tail (R) coefficient projection at cut n; P + R = identity."""
    if n < 1:
        raise IndexError(f"projection index {n} out of range")
    arr = as_array(a).copy()
    if side == "P":
        arr[n:] = 0.0
    elif side == "R":
        arr[: min(n, arr.size)] = 0.0
    else:
        raise InvalidParameter("side must be 'P' or 'R'")
    return CoeffVector(arr)


# -- coefficient-ball vertex machinery --------------------------------------


def coefficient_ball_vertex_matrix(seq: BasicSequenceSpec) -> np.ndarray:
    """Extreme points (rows) of {a : ||sum a_n x_n|| <= 1}.

    Square specs invert the change of basis on the ambient ball's vertices;
    injective rectangular specs (e.g. pairwise convex combinations) cut the
    ambient ball by the expansion range and enumerate section vertices.
    """
    m, n = seq.matrix.shape
    if m == n:
        V = extreme_point_matrix(seq.ambient, m)
        return np.linalg.solve(seq.matrix, V.T).T
    kind, W = primitive_structure(seq.ambient, m)
    if kind not in ("cube", "cross"):
        raise DimensionCap(
            f"no section enumeration for ambient family {seq.ambient.family!r}"
        )
    G = seq.matrix if W is None else W @ seq.matrix
    F = null_functionals(G)
    C = polytope_section_vertices(kind, F)
    if C.shape[0] == 0:
        raise DimensionCap("degenerate section: no vertices found")
    return np.linalg.lstsq(G, C.T, rcond=None)[0].T


def difference_ball_vertex_matrix(seq: BasicSequenceSpec) -> np.ndarray:
    """Extreme points of {a : ||sum a_n x_n|| <= 1, sum a_n = 0}: the
    normalized difference directions of simplex points."""
    m, n = seq.matrix.shape
    kind, W = primitive_structure(seq.ambient, m)
    if kind not in ("cube", "cross"):
        raise DimensionCap(
            f"no difference-ball enumeration for ambient family {seq.ambient.family!r}"
        )
    G = seq.matrix if W is None else W @ seq.matrix
    if m == n:
        f = np.linalg.solve(G.T, np.ones(n))[None, :]
        C = polytope_section_vertices(kind, f)
        return np.linalg.solve(G, C.T).T
    H = null_functionals(np.ones((n, 1)))  # basis of {sum = 0}, (n-1) x n
    V = G @ H.T  # image of the difference subspace, m x (n-1)
    F = null_functionals(V)
    C = polytope_section_vertices(kind, F)
    return np.linalg.lstsq(G, C.T, rcond=None)[0].T


# -- certified constants -----------------------------------------------------

#: truncation cap for the closed-form sup-type operator-norm route
MATRIX_NORM_CAP = 128


def _sup_coords(seq: BasicSequenceSpec) -> np.ndarray | None:
    """G with norm_of(a) = ||G a||_inf when the ambient norm is sup-type."""
    kind, W = primitive_structure(seq.ambient, seq.matrix.shape[0])
    if kind != "cube":
        return None
    return seq.matrix if W is None else W @ seq.matrix


def _exact_domination_value(f: BasicSequenceSpec, g: BasicSequenceSpec):
    """(value, witness) exactly, or None when no certified route applies.

    Primary route: maximize the target norm over the from-ball vertices.
    Fallback for sup-type -> sup-type pairs beyond the vertex caps: the
    operator norm between sup-normed coordinates is the maximal absolute row
    sum of the conjugated matrix, with a sign-vector preimage as witness.
    """
    try:
        A = coefficient_ball_vertex_matrix(f)
        vals = g.norms_of_rows(A)
        j = int(np.argmax(vals))
        return float(vals[j]), CoeffVector(A[j])
    except (NotPolyhedral, DimensionCap):
        pass
    if f.matrix.shape[0] != f.n or f.n > MATRIX_NORM_CAP:
        return None
    Gf = _sup_coords(f)
    Gt = _sup_coords(g)
    if Gf is None or Gt is None:
        return None
    T = Gt @ np.linalg.inv(Gf)
    rows = np.abs(T).sum(axis=1)
    i = int(np.argmax(rows))
    s = np.sign(T[i])
    s[s == 0.0] = 1.0
    return float(rows[i]), CoeffVector(np.linalg.solve(Gf, s))


def _sampled_norm_sup(seq_from, objective_rows, trials, seed):
    """Sampled sup of `objective_rows` (callable on a batch of coefficient
    rows) over the from-ball, via radially projected pattern search."""
    proj = optim.radial_projector(seq_from.norm_of)

    def f(a):
        return float(objective_rows(a[None, :])[0])

    return optim.sampled_ascent(f, proj, trials, seed, seq_from.n)


def basis_constant(
    seq: BasicSequenceSpec,
    n: int | None = None,
    trials: int = 64,
    seed: int = 0,
) -> ConstantEstimate:
    """max over k <= N of the operator norm of the head projection P_k,
    measured in the ambient norm. Exact on polyhedral balls within caps."""
    sub = seq.truncated(n) if n is not None else seq
    N = sub.n
    try:
        A = coefficient_ball_vertex_matrix(sub)
        best, wit = -np.inf, None
        for k in range(1, N + 1):
            Ak = A.copy()
            Ak[:, k:] = 0.0
            vals = sub.norms_of_rows(Ak)
            j = int(np.argmax(vals))
            if vals[j] > best:
                best, wit = float(vals[j]), CoeffVector(A[j])
        return ConstantEstimate(best, best, wit, METHOD_EXACT, True, truncation=N)
    except (NotPolyhedral, DimensionCap) as reason:
        G = _sup_coords(sub)
        if G is not None and G.shape[0] == N and N <= MATRIX_NORM_CAP:
            # sup-type ambient beyond the vertex cap: each head projection's
            # operator norm is a maximal absolute row sum in sup coordinates
            Ginv = np.linalg.inv(G)
            best, wit = -np.inf, None
            for k in range(1, N + 1):
                T = G[:, :k] @ Ginv[:k]
                rows = np.abs(T).sum(axis=1)
                i = int(np.argmax(rows))
                if rows[i] > best:
                    s = np.sign(T[i])
                    s[s == 0.0] = 1.0
                    best, wit = float(rows[i]), CoeffVector(np.linalg.solve(G, s))
            return ConstantEstimate(best, best, wit, METHOD_EXACT, True, truncation=N)

        def obj_rows(rows):
            out = np.zeros(rows.shape[0])
            for k in range(1, N + 1):
                rk = rows.copy()
                rk[:, k:] = 0.0
                out = np.maximum(out, sub.norms_of_rows(rk))
            return out

        rep = _sampled_norm_sup(sub, obj_rows, trials, seed)
        return ConstantEstimate(
            float(rep.best_value),
            None,
            CoeffVector(rep.best_point),
            METHOD_SAMPLED,
            False,
            truncation=N,
            note=f"downgraded to sampling: {reason}",
        )


def domination_constant(
    seq_from: BasicSequenceSpec,
    seq_to: BasicSequenceSpec,
    n: int | None = None,
    trials: int = 64,
    seed: int = 0,
    analytic_upper: float | None = None,
) -> ConstantEstimate:
    """Operator norm of the coefficient-identity map x_n -> y_n:
    sup { ||sum a_n y_n|| : ||sum a_n x_n|| <= 1 }."""
    f = seq_from.truncated(n) if n is not None else seq_from
    g = seq_to.truncated(min(f.n, seq_to.n)) if (n is not None or seq_to.n != f.n) else seq_to
    if g.n != f.n:
        raise InvalidParameter("sequences must share the truncation length")
    exact = _exact_domination_value(f, g)
    if exact is not None:
        val, wit = exact
        return ConstantEstimate(
            val, val, wit, METHOD_EXACT, True,
            truncation=f.n, analytic_upper=analytic_upper,
        )
    rep = _sampled_norm_sup(f, g.norms_of_rows, trials, seed)
    return ConstantEstimate(
        float(rep.best_value),
        analytic_upper,
        CoeffVector(rep.best_point),
        METHOD_SAMPLED,
        False,
        truncation=f.n,
        note="downgraded to sampling: no certified enumeration route",
        analytic_upper=analytic_upper,
    )


def equivalence_constants(
    seq_x: BasicSequenceSpec,
    seq_y: BasicSequenceSpec,
    n: int | None = None,
    trials: int = 64,
    seed: int = 0,
) -> tuple[ConstantEstimate, ConstantEstimate]:
    """(forward, backward) domination constants; the equivalence constant is
    the max of the two uppers when both are certified."""
    fwd = domination_constant(seq_x, seq_y, n=n, trials=trials, seed=seed)
    bwd = domination_constant(seq_y, seq_x, n=n, trials=trials, seed=seed)
    return fwd, bwd


def wide_s_constant(
    seq: BasicSequenceSpec,
    n: int | None = None,
    trials: int = 64,
    seed: int = 0,
) -> ConstantEstimate:
    """Best L with L * |sum a_n| <= ||sum a_n x_n||: the reciprocal of the
    maximum of |sum a_n| over the unit coefficient ball."""
    sub = seq.truncated(n) if n is not None else seq
    try:
        A = coefficient_ball_vertex_matrix(sub)
        sums = np.abs(A.sum(axis=1))
        j = int(np.argmax(sums))
        mx = float(sums[j])
        if mx <= ALGEBRAIC_TOL:
            return ConstantEstimate(
                0.0, 0.0, None, METHOD_EXACT, True, truncation=sub.n, note="NotWideS"
            )
        val = 1.0 / mx
        return ConstantEstimate(
            val, val, CoeffVector(A[j]), METHOD_EXACT, True, truncation=sub.n
        )
    except (NotPolyhedral, DimensionCap) as reason:
        proj = optim.radial_projector(sub.norm_of)
        rep = optim.sampled_ascent(
            lambda a: abs(float(a.sum())), proj, trials, seed, sub.n
        )
        mx = float(rep.best_value)
        return ConstantEstimate(
            0.0,
            (1.0 / mx) if mx > ALGEBRAIC_TOL else None,
            None,
            METHOD_SAMPLED,
            False,
            truncation=sub.n,
            note=f"sampled sup of |sum a| only bounds L from above: {reason}",
        )


def simplex_membership(seq: BasicSequenceSpec, v, tol: float = ALGEBRAIC_TOL) -> SimplexPoint:
    """Extract coefficients of an ambient vector and clamp them to the exact
    simplex; raises NotInSpan / NotInSimplex with the violated constraint."""
    t = coefficients(seq, v).entries.copy()
    neg = float(t.min())
    if neg < -tol:
        raise NotInSimplex(
            f"negative coordinate {neg:.3e} at index {int(t.argmin()) + 1}"
        )
    s = float(t.sum())
    if abs(s - 1.0) > tol:
        raise NotInSimplex(f"coordinate sum {s!r} != 1")
    t = np.clip(t, 0.0, None)
    t /= t.sum()
    return SimplexPoint(t, tol=1e-9)


def reevaluate_witness(est: ConstantEstimate, evaluator) -> float:
    """Value of the stored witness under `evaluator` (for certification tests)."""
    if est.lower_witness is None:
        raise InvalidParameter("estimate carries no witness")
    return float(evaluator(est.lower_witness.entries))
