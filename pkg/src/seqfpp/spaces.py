"""Sequence-space norm oracles, evaluated exactly at finite truncation.

A vector of length N stands for an eventually-zero real sequence, so every
supremum in a norm definition reduces to a finite computation and the
returned value is exact up to floating point.

Families
--------
c0-sup        sup |x_n|                                   (polyhedral)
ell-p         (sum |x_n|^p)^(1/p), p >= 1                 (polyhedral iff p == 1)
summing-c0    coefficients w.r.t. the summing basis of c0: the ambient
              canonical coordinates are the tail sums, normed in sup   (polyhedral)
lin-ell1      sup_k w_k sum_{n>=k} |x_n| with w_k = 8^k/(1+8^k)        (polyhedral)
james         sup over increasing index subsequences of the zero-extended
              vector of (sum |x_{p_{i+1}} - x_{p_i}|^p)^(1/p)          (not polyhedral)
interval-renorm  built from a basic-sequence spec: sup over index
              intervals I of the ambient norm of the expansion of the
              coefficients restricted to I    (polyhedral iff the base is)

The james family is evaluated on the zero-extended sequence (one virtual
trailing zero), which makes it a genuine norm on eventually-zero sequences
and invariant under padding with trailing zeros; cyclic variants are out of
scope.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache

import numpy as np

from . import backend
from ._codes import C0, ELL1, ELLP, JAMES, LIN
from .errors import (
    DimensionCap,
    InvalidParameter,
    InvalidVector,
    NotPolyhedral,
)

_kern = backend.kernels

FAMILIES = ("c0-sup", "ell-p", "summing-c0", "lin-ell1", "james", "interval-renorm")

#: exact extreme-point enumeration cap for 2^N-vertex (sign-vector) families
SIGN_VECTOR_CAP = 16
#: cap for the lin-ell1 ball, which has 2 * 3^(N-1) vertices
LIN_VERTEX_CAP = 10


def as_array(v) -> np.ndarray:
    """Coerce a CoeffVector or array-like to a finite float64 1-D array."""
    if isinstance(v, CoeffVector):
        return v.entries
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.size and not np.all(np.isfinite(a)):
        raise InvalidVector("vector entries must be finite")
    return a


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


class CoeffVector:
    """A finite real coefficient tuple, indexed from 1 in the math sense.

    Trailing zeros are permitted; two vectors that agree up to trailing zeros
    compare equal.
    """

    __slots__ = ("_a",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float).reshape(-1).copy()
        if a.size and not np.all(np.isfinite(a)):
            raise InvalidVector("vector entries must be finite")
        a.setflags(write=False)
        self._a = a

    @classmethod
    def unit(cls, k: int, n: int | None = None) -> "CoeffVector":
        """e_k, optionally padded to length n."""
        if k < 1:
            raise InvalidParameter("unit index must be >= 1")
        a = np.zeros(max(k, n or k))
        a[k - 1] = 1.0
        return cls(a)

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def stripped(self) -> np.ndarray:
        """Entries with trailing zeros removed."""
        a = self._a
        nz = np.nonzero(a)[0]
        return a[: nz[-1] + 1] if nz.size else a[:0]

    def padded(self, n: int) -> np.ndarray:
        a = self._a
        if a.size >= n:
            return a
        out = np.zeros(n)
        out[: a.size] = a
        return out

    def __len__(self) -> int:
        return self._a.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffVector):
            return NotImplemented
        x, y = self.stripped(), other.stripped()
        return x.size == y.size and bool(np.all(x == y))

    def __hash__(self):
        return hash(self.stripped().tobytes())

    def __repr__(self) -> str:
        return f"CoeffVector({self._a.tolist()!r})"

    def to_list(self) -> list[float]:
        return self._a.tolist()


@lru_cache(maxsize=None)
def tail_matrix(n: int) -> np.ndarray:
    """Upper-triangular all-ones matrix: (T a)_i = sum_{k >= i} a_k."""
    return _readonly(np.triu(np.ones((n, n))))


@lru_cache(maxsize=None)
def lin_weights(n: int) -> np.ndarray:
    """Weights w_k = 8^k / (1 + 8^k) for k = 1..n (w_k -> 1 quickly)."""
    ks = np.minimum(np.arange(1.0, n + 1.0), 300.0)
    pw = 8.0 ** ks
    return _readonly(pw / (1.0 + pw))


def sign_vectors(n: int) -> np.ndarray:
    """All 2^n sign vectors of length n, in a fixed deterministic order."""
    bits = np.arange(2 ** n)
    return 1.0 - 2.0 * ((bits[:, None] >> np.arange(n)[None, :]) & 1)


class Space:
    """A named norm family with parameters; immutable and evaluation-pure."""

    __slots__ = ("family", "p", "seq")

    def __init__(self, family: str, p: float | None = None, seq=None):
        if family not in FAMILIES:
            raise InvalidParameter(f"unknown space family {family!r}")
        if family in ("ell-p", "james"):
            if p is None or p < 1:
                raise InvalidParameter(f"{family} requires p >= 1, got {p!r}")
            p = float(p)
        elif p is not None:
            raise InvalidParameter(f"{family} takes no parameter p")
        if family == "interval-renorm":
            if seq is None:
                raise InvalidParameter("interval-renorm requires a basic-sequence spec")
        elif seq is not None:
            raise InvalidParameter(f"{family} takes no sequence spec")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "seq", seq)

    def __setattr__(self, *_):
        raise AttributeError("Space is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def c0_sup(cls) -> "Space":
        return cls("c0-sup")

    @classmethod
    def ell_p(cls, p: float) -> "Space":
        return cls("ell-p", p=p)

    @classmethod
    def ell1(cls) -> "Space":
        return cls("ell-p", p=1.0)

    @classmethod
    def summing_c0(cls) -> "Space":
        return cls("summing-c0")

    @classmethod
    def lin_ell1(cls) -> "Space":
        return cls("lin-ell1")

    @classmethod
    def james(cls, p: float) -> "Space":
        return cls("james", p=p)

    # -- properties --------------------------------------------------------
    @property
    def polyhedral(self) -> bool:
        if self.family in ("c0-sup", "summing-c0", "lin-ell1"):
            return True
        if self.family == "ell-p":
            return self.p == 1.0
        if self.family == "interval-renorm":
            return self.seq.ambient.polyhedral
        return False

    def _flat_plan(self, n: int):
        """(code, W) with norm(v) = prim(code, W @ v); W None means identity.

        Only for the flat families; interval-renorm is handled separately.
        """
        if self.family == "c0-sup":
            return C0, None
        if self.family == "ell-p":
            return (ELL1, None) if self.p == 1.0 else (ELLP, None)
        if self.family == "summing-c0":
            return C0, tail_matrix(n)
        if self.family == "lin-ell1":
            return LIN, None
        if self.family == "james":
            return JAMES, None
        raise InvalidParameter(f"{self.family} has no flat evaluation plan")

    def _interval_ingredients(self):
        """(M_eff, code, p) so that norm(a) = sup_I prim(M_eff[:, I] @ a_I)."""
        seq = self.seq
        amb = seq.ambient
        m = seq.matrix.shape[0]
        if amb.family == "interval-renorm":
            return None  # nested renorm: generic slow path
        code, W = amb._flat_plan(m)
        M_eff = seq.matrix if W is None else W @ seq.matrix
        return np.ascontiguousarray(M_eff), code, (amb.p or 0.0)

    # -- evaluation --------------------------------------------------------
    def norm(self, v) -> float:
        """Exact norm of a finite vector (nonnegative real)."""
        a = as_array(v)
        if self.family == "interval-renorm":
            return self._interval_norm_rows(a[None, :])[0]
        code, W = self._flat_plan(a.size)
        y = a if W is None else W @ a
        return float(_kern.prim_norm(y, code, self.p or 0.0))

    def norm_rows(self, V) -> np.ndarray:
        """Norms of the rows of a matrix of vectors (batched)."""
        V = np.ascontiguousarray(V, dtype=float)
        if V.ndim != 2:
            raise InvalidParameter("norm_rows expects a 2-D array")
        if not np.all(np.isfinite(V)):
            raise InvalidVector("vector entries must be finite")
        if self.family == "interval-renorm":
            return self._interval_norm_rows(V)
        code, W = self._flat_plan(V.shape[1])
        Y = V if W is None else V @ W.T
        return _kern.norms_rows(Y, code, self.p or 0.0)

    def _interval_norm_rows(self, V: np.ndarray) -> np.ndarray:
        n_spec = self.seq.n
        if V.shape[1] > n_spec:
            raise InvalidVector(
                f"interval-renorm oracle is truncated at N={n_spec}; got length {V.shape[1]}"
            )
        if V.shape[1] < n_spec:
            pad = np.zeros((V.shape[0], n_spec))
            pad[:, : V.shape[1]] = V
            V = pad
        ing = self._interval_ingredients()
        if ing is not None:
            M_eff, code, p = ing
            return _kern.interval_norms(V, M_eff, code, p)
        # nested interval-renorm ambient: direct enumeration
        seq = self.seq
        out = np.empty(V.shape[0])
        for s in range(V.shape[0]):
            a = V[s]
            best = 0.0
            for i in range(n_spec):
                for j in range(i, n_spec):
                    piece = np.zeros(n_spec)
                    piece[i : j + 1] = a[i : j + 1]
                    best = max(best, seq.ambient.norm(seq.matrix @ piece))
            out[s] = best
        return out

    # -- serialization -----------------------------------------------------
    def to_json(self) -> dict:
        params: dict = {}
        if self.p is not None:
            params["p"] = self.p
        if self.seq is not None:
            params["seq"] = self.seq.to_json()
        return {"family": self.family, "params": params}

    @classmethod
    def from_json(cls, obj: dict) -> "Space":
        family = obj["family"]
        params = obj.get("params", {})
        if family == "interval-renorm":
            from .basis import BasicSequenceSpec

            return cls(family, seq=BasicSequenceSpec.from_json(params["seq"]))
        return cls(family, p=params.get("p"))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Space):
            return NotImplemented
        return json.dumps(self.to_json(), sort_keys=True) == json.dumps(
            other.to_json(), sort_keys=True
        )

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))

    def __repr__(self) -> str:
        bits = [repr(self.family)]
        if self.p is not None:
            bits.append(f"p={self.p}")
        if self.seq is not None:
            bits.append(f"seq={self.seq.name}")
        return f"Space({', '.join(bits)})"


def norm_eval(space: Space, v) -> float:
    """Functional form of Space.norm."""
    return space.norm(v)


def primitive_structure(space: Space, m: int):
    """Combinatorial shape of the unit ball in primitive coordinates.

    Returns (kind, W) where prim coords are c = W @ v (W None = identity) and
    kind is "cube" (sup ball), "cross" (ell1 ball), "staircase" (lin-ell1),
    or None when no exact polyhedral structure is available.
    """
    if space.family == "c0-sup":
        return "cube", None
    if space.family == "summing-c0":
        return "cube", tail_matrix(m)
    if space.family == "ell-p" and space.p == 1.0:
        return "cross", None
    if space.family == "lin-ell1":
        return "staircase", None
    return None, None


def _lin_ball_vertex_matrix(n: int) -> np.ndarray:
    """Vertices of the lin-ell1 unit ball at dimension n.

    With c_k = 1 + 8^(-k) (reciprocal weights), the tail sums T_k = sum_{i>=k}
    |x_i| of a vertex form a staircase: pick a support set S containing index
    1; T is constant between consecutive elements of S with value c_l at the
    block ending at l in S, and zero past max(S). Signs on the support are
    free, giving 2 * 3^(n-1) vertices in total.
    """
    c = 1.0 + 8.0 ** (-np.arange(1.0, n + 1.0))
    rows = []
    for mask in range(2 ** (n - 1)):
        support = [0] + [k for k in range(1, n) if (mask >> (k - 1)) & 1]
        u = np.zeros(n)
        for idx, s in enumerate(support):
            nxt = c[support[idx + 1]] if idx + 1 < len(support) else 0.0
            u[s] = c[s] - nxt
        for signs in itertools.product((1.0, -1.0), repeat=len(support)):
            v = u.copy()
            for s, sg in zip(support, signs):
                v[s] *= sg
            rows.append(v)
    return np.array(rows)


def extreme_point_matrix(space: Space, n: int) -> np.ndarray:
    """Extreme points of the n-dimensional unit ball, one per row. Exact."""
    if n < 1:
        raise InvalidParameter("dimension must be >= 1")
    if not space.polyhedral:
        raise NotPolyhedral(f"{space.family} ball is not polyhedral")
    fam = space.family
    if fam == "ell-p":  # p == 1 guaranteed by the polyhedral check
        return np.vstack([np.eye(n), -np.eye(n)])
    if fam == "c0-sup":
        if n > SIGN_VECTOR_CAP:
            raise DimensionCap(f"c0-sup enumeration capped at N={SIGN_VECTOR_CAP}")
        return sign_vectors(n)
    if fam == "summing-c0":
        if n > SIGN_VECTOR_CAP:
            raise DimensionCap(f"summing-c0 enumeration capped at N={SIGN_VECTOR_CAP}")
        # preimages of the sign vectors under the tail-sum coordinate change
        s = sign_vectors(n)
        a = np.empty_like(s)
        a[:, :-1] = s[:, :-1] - s[:, 1:]
        a[:, -1] = s[:, -1]
        return a
    if fam == "lin-ell1":
        if n > LIN_VERTEX_CAP:
            raise DimensionCap(f"lin-ell1 enumeration capped at N={LIN_VERTEX_CAP}")
        return _lin_ball_vertex_matrix(n)
    # interval-renorm over a polyhedral base is polyhedral, but its vertex
    # set has no closed form here; callers treat this as an over-cap case
    # and fall back to sampled bounds.
    raise DimensionCap("no exact vertex enumeration for interval-renorm balls")


def extreme_points(space: Space, n: int) -> list[CoeffVector]:
    """Extreme points of the n-dimensional unit ball as CoeffVectors."""
    return [CoeffVector(row) for row in extreme_point_matrix(space, n)]


def lp_plan(space: Space, m: int):
    """Epigraph description of the norm at output dimension m, for the LP
    reductions in `optim`. Returns one of

      ("sup_rows", R)   norm(y) = max_r |(R y)_r|
      ("sum_abs",)      norm(y) = sum |y_i|
      ("lin_tails", w)  norm(y) = max_k w_k sum_{n>=k} |y_n|

    or None when the norm is not LP-representable here.
    """
    fam = space.family
    if fam == "c0-sup":
        return ("sup_rows", np.eye(m))
    if fam == "summing-c0":
        return ("sup_rows", np.asarray(tail_matrix(m)))
    if fam == "ell-p" and space.p == 1.0:
        return ("sum_abs",)
    if fam == "lin-ell1":
        return ("lin_tails", np.asarray(lin_weights(m)))
    return None
