"""Norm-oracle tests: pinned example values, the norm axioms in bulk, the
equivalence sandwich for the weighted-tail renorming, extreme-point
soundness, and bit-exact serialization."""

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqfpp.errors import DimensionCap, InvalidParameter, InvalidVector, NotPolyhedral
from seqfpp.optim import LinearProgram, lp_solve
from seqfpp.spaces import (
    CoeffVector,
    Space,
    extreme_point_matrix,
    extreme_points,
    sign_vectors,
)
from oracles import interval_norm_direct, lin_norm_direct, summing_norm_direct

ALL_SPACES = [
    Space.c0_sup(),
    Space.ell1(),
    Space.ell_p(2.0),
    Space.summing_c0(),
    Space.lin_ell1(),
    Space.james(2.0),
]


# -- pinned examples ---------------------------------------------------------


def test_c0_example():
    assert Space.c0_sup().norm([1, -2, 3]) == 3.0


def test_lin_unit_vectors():
    lin = Space.lin_ell1()
    # the norm of e_k is the k-th weight itself
    for k in range(1, 11):
        e = np.zeros(k)
        e[-1] = 1.0
        assert lin.norm(e) == 8.0 ** k / (1.0 + 8.0 ** k)
    assert lin.norm([0, 0, 1]) == pytest.approx(512.0 / 513.0, abs=0)


def test_james_example_zero_extended():
    # brute force over increasing subsequences of (1, 0, 1, 0) gives sqrt 3;
    # the zero extension is what keeps the james family a norm on
    # eventually-zero sequences
    j2 = Space.james(2.0)
    assert j2.norm([1, 0, 1]) == pytest.approx(math.sqrt(3.0), rel=1e-15)
    assert j2.norm([1, 0, 1]) == pytest.approx(j2.norm([1, 0, 1, 0, 0]), abs=0)
    assert j2.norm([5.0]) == 5.0


def test_summing_example():
    assert Space.summing_c0().norm([2, -1]) == 1.0


def test_norm_errors():
    with pytest.raises(InvalidVector):
        Space.c0_sup().norm([1.0, float("nan")])
    with pytest.raises(InvalidParameter):
        Space.ell_p(0.5)
    with pytest.raises(InvalidParameter):
        Space.james(0.99)


# -- norm axioms -------------------------------------------------------------


@pytest.mark.parametrize("space", ALL_SPACES, ids=lambda s: s.family + (f":{s.p}" if s.p else ""))
def test_norm_axioms_bulk(space, gen):
    n = 9
    V = gen.standard_normal((10000, n))
    U = gen.standard_normal((10000, n))
    nv, nu, nsum = space.norm_rows(V), space.norm_rows(U), space.norm_rows(V + U)
    # definiteness: generic nonzero vectors have positive norm, zero has zero
    assert space.norm(np.zeros(n)) == 0.0
    assert nv.min() > 0.0
    # absolute homogeneity to 1e-12 relative
    c = -2.375
    np.testing.assert_allclose(space.norm_rows(c * V), abs(c) * nv, rtol=1e-12)
    # triangle inequality with slack >= -1e-12
    assert float((nv + nu - nsum).min()) >= -1e-12


@pytest.mark.parametrize("space", ALL_SPACES, ids=lambda s: s.family + (f":{s.p}" if s.p else ""))
def test_trailing_zero_invariance(space, gen):
    for _ in range(50):
        v = gen.standard_normal(6)
        padded = np.concatenate([v, np.zeros(4)])
        assert space.norm(v) == pytest.approx(space.norm(padded), rel=1e-14)


def test_lin_ell1_sandwich(gen):
    lin, l1 = Space.lin_ell1(), Space.ell1()
    V = gen.standard_normal((10000, 12))
    a = lin.norm_rows(V)
    b = l1.norm_rows(V)
    assert np.all(a <= b + 1e-12)
    assert np.all(a >= (8.0 / 9.0) * b - 1e-12)


def test_lin_matches_direct_formula(gen):
    lin = Space.lin_ell1()
    for _ in range(200):
        v = gen.standard_normal(int(gen.integers(1, 15)))
        assert lin.norm(v) == pytest.approx(lin_norm_direct(v), rel=1e-13)


def test_summing_matches_direct(gen):
    sm = Space.summing_c0()
    for _ in range(200):
        v = gen.standard_normal(int(gen.integers(1, 15)))
        assert sm.norm(v) == pytest.approx(summing_norm_direct(v), rel=1e-12, abs=1e-13)


# -- extreme points ----------------------------------------------------------


def test_extreme_points_examples():
    l1 = extreme_point_matrix(Space.ell1(), 2)
    assert sorted(map(tuple, l1.tolist())) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    cube = extreme_point_matrix(Space.c0_sup(), 2)
    assert sorted(map(tuple, cube.tolist())) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    summing = extreme_point_matrix(Space.summing_c0(), 2)
    assert sorted(map(tuple, summing.tolist())) == [(-2, 1), (0, -1), (0, 1), (2, -1)]


@pytest.mark.parametrize(
    "space,n",
    [
        (Space.ell1(), 7),
        (Space.c0_sup(), 7),
        (Space.summing_c0(), 7),
        (Space.lin_ell1(), 6),
    ],
    ids=["ell1", "c0", "summing", "lin"],
)
def test_extreme_points_soundness(space, n, gen):
    E = extreme_point_matrix(space, n)
    np.testing.assert_allclose(space.norm_rows(E), 1.0, rtol=1e-12)
    # maximizing random functionals over the list dominates ball samples
    dirs = gen.standard_normal((10000, n))
    samples = dirs / space.norm_rows(dirs)[:, None]
    for _ in range(20):
        phi = gen.standard_normal(n)
        assert float((E @ phi).max()) >= float((samples @ phi).max()) - 1e-9


def test_lin_vertex_count():
    for n in range(1, 7):
        assert extreme_point_matrix(Space.lin_ell1(), n).shape[0] == 2 * 3 ** (n - 1)


def test_lin_vertices_match_lp_support_function(gen):
    """Independent route: maximize random functionals over the staircase
    vertex list versus an LP over the sign-expanded tail constraints."""
    n = 4
    E = extreme_point_matrix(Space.lin_ell1(), n)
    rows = []
    for k in range(1, n + 1):
        w = 8.0 ** k / (1.0 + 8.0 ** k)
        for s in sign_vectors(n - k + 1):
            a = np.zeros(n)
            a[k - 1 :] = w * s
            rows.append((a, "<=", 1.0))
    for _ in range(25):
        phi = gen.standard_normal(n)
        lp = LinearProgram(phi, "max", tuple(rows))
        rep = lp_solve(lp)
        assert float((E @ phi).max()) == pytest.approx(rep.best_value, rel=1e-9, abs=1e-9)


def test_extreme_points_caps_and_errors():
    with pytest.raises(NotPolyhedral):
        extreme_point_matrix(Space.ell_p(2.0), 3)
    with pytest.raises(DimensionCap):
        extreme_point_matrix(Space.c0_sup(), 17)
    with pytest.raises(DimensionCap):
        extreme_point_matrix(Space.lin_ell1(), 11)
    with pytest.raises(InvalidParameter):
        extreme_point_matrix(Space.ell1(), 0)
    pts = extreme_points(Space.ell1(), 2)
    assert all(isinstance(p, CoeffVector) for p in pts)


# -- interval oracle against direct enumeration ------------------------------


def test_interval_norm_against_direct(gen):
    from seqfpp.basis import BasicSequenceSpec
    from seqfpp.constructions import interval_renorm

    seq = BasicSequenceSpec.summing(Space.c0_sup(), 7)
    space = interval_renorm(seq)
    for _ in range(50):
        a = gen.standard_normal(7)
        direct = interval_norm_direct(
            lambda y: float(np.abs(y).max()), np.asarray(seq.matrix), a
        )
        assert space.norm(a) == pytest.approx(direct, rel=1e-12)


# -- serialization ------------------------------------------------------------


def test_space_json_roundtrip_bit_exact():
    for space in ALL_SPACES:
        blob = json.dumps(space.to_json())
        back = Space.from_json(json.loads(blob))
        assert back == space
        assert json.dumps(back.to_json()) == blob


def test_interval_space_roundtrip():
    from seqfpp.basis import BasicSequenceSpec
    from seqfpp.constructions import interval_renorm

    seq = BasicSequenceSpec.summing(Space.c0_sup(), 5)
    space = interval_renorm(seq)
    blob = json.dumps(space.to_json(), sort_keys=True)
    back = Space.from_json(json.loads(blob))
    assert json.dumps(back.to_json(), sort_keys=True) == blob
    assert back.norm([2, -1, 0, 0, 0]) == space.norm([2, -1])


# -- CoeffVector semantics -----------------------------------------------------


@given(st.lists(st.floats(-100, 100), max_size=8))
def test_coeff_vector_trailing_zero_equality(entries):
    v = CoeffVector(entries)
    w = CoeffVector(list(entries) + [0.0, 0.0])
    assert v == w
    assert hash(v) == hash(w)


def test_coeff_vector_basics():
    assert CoeffVector.unit(3).to_list() == [0.0, 0.0, 1.0]
    assert CoeffVector([1, 2]) != CoeffVector([1, 2, 3])
    with pytest.raises(InvalidVector):
        CoeffVector([float("inf")])
