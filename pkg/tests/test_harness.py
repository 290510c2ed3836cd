"""Simplex dynamics: map application, orbits, displacement minima, fixed-point
analysis, and Lipschitz estimates."""

import numpy as np
import pytest

from seqfpp.basis import BasicSequenceSpec, SimplexPoint
from seqfpp.constructions import (
    AffineMapSpec,
    AlphaSchedule,
    alpha_generate,
    convex_basis_equivalence_bound,
    map_build,
)
from seqfpp.errors import TruncationOverflow
from seqfpp.harness import (
    fixed_point_solve,
    lipschitz_estimate,
    map_apply,
    min_displacement,
    picard_orbit,
    uniform_lipschitz_probe,
)
from seqfpp.spaces import Space
from oracles import grid_min_over_simplex

C0 = Space.c0_sup()
L1 = Space.ell1()
SMC = Space.summing_c0()


# -- map application -----------------------------------------------------------


def test_map_apply_examples():
    sched = alpha_generate(2.0, 1.0, 1.0, 6)
    fm = map_build("f-main", 6, alphas=sched)
    out = map_apply(fm, SimplexPoint.unit(1, 1))
    assert out.t[0] == 1.0 - sched.alphas[0]
    assert out.t[1] == sched.alphas[0]
    f1 = map_build("f1", 6)
    assert np.array_equal(map_apply(f1, SimplexPoint.unit(2, 2)).t[:1], [1.0])
    f2 = map_build("f2", 4, j_max=20)
    out = map_apply(f2, SimplexPoint.unit(1, 1))
    assert out.t[0] == 0.0 and out.t[1] == 0.5 and out.t[2] == 0.25
    assert abs(1.0 - out.t.sum()) <= 2.0 ** -20 + 1e-15


def test_map_apply_simplex_preservation_bulk(gen):
    sched = alpha_generate(2.0, 1.0, 1.0, 8)
    for spec in [map_build("f-main", 8, alphas=sched), map_build("f0", 8),
                 map_build("f1", 8), map_build("f2", 8)]:
        T = gen.dirichlet(np.ones(8), size=10000)
        out = T @ spec.matrix.T
        assert out.min() >= -1e-15
        np.testing.assert_allclose(out.sum(axis=1), spec.column_sums() @ T.T, atol=1e-12)
        defect = np.abs(1.0 - out.sum(axis=1)).max()
        assert defect <= spec.mass_defect_col + 1e-12


def test_map_apply_overflow():
    f0 = map_build("f0", 3)
    with pytest.raises(TruncationOverflow):
        map_apply(f0, SimplexPoint.unit(4, 4))


def test_f1_permutes_coordinate_multiset(gen):
    f1 = map_build("f1", 10)
    for _ in range(50):
        t = gen.dirichlet(np.ones(10))
        out = map_apply(f1, SimplexPoint(t)).t
        assert sorted(out[out > 0].tolist()) == sorted(t[t > 0].tolist())


# -- orbits ----------------------------------------------------------------------


def test_orbit_f0_constant_displacement():
    f0 = map_build("f0", 8)
    rec = picard_orbit(f0, SimplexPoint.unit(1, 1), 5, L1)
    assert rec.step_displacements == [2.0] * 5


def test_orbit_f_main_coordinate_decay():
    sched = alpha_generate(2.0, 1.0, 1.0, 12)
    fm = map_build("f-main", 12, alphas=sched)
    rec = picard_orbit(fm, SimplexPoint.unit(1, 1), 8, SMC)
    a1 = sched.alphas[0]
    for p, val in enumerate(rec.coordinate_traces[1]):
        assert val == pytest.approx((1.0 - a1) ** p, rel=1e-12)


def test_orbit_f1_permutation_dynamics():
    f1 = map_build("f1", 12)
    rec = picard_orbit(f1, SimplexPoint.unit(2, 2), 3, C0)
    supports = [int(np.nonzero(p)[0][0]) + 1 for p in rec.points]
    assert supports == [2, 1, 3, 5]


def test_orbit_overflow_guard():
    f0 = map_build("f0", 4)
    with pytest.raises(TruncationOverflow):
        picard_orbit(f0, SimplexPoint.unit(1, 1), 10, L1)


# -- minimum displacement ----------------------------------------------------------


def test_min_displacement_f0_ell1():
    rep = min_displacement(map_build("f0", 10), L1)
    assert rep.best_value == pytest.approx(0.2, abs=1e-9)
    np.testing.assert_allclose(rep.best_point, np.full(10, 0.1), atol=1e-9)


def test_min_displacement_identity_zero():
    rep = min_displacement(AffineMapSpec.from_matrix(np.eye(6), "identity"), L1)
    assert rep.best_value == pytest.approx(0.0, abs=1e-12)


def test_min_displacement_f_main_closed_form():
    # optimum equalizes a_n t_n, giving 1 / sum(1/a_n) in the summing norm
    for n in (5, 10, 20):
        sched = alpha_generate(2.0, 1.0, 1.0, n)
        rep = min_displacement(map_build("f-main", n, alphas=sched), SMC)
        closed = 1.0 / float(np.sum(1.0 / sched.array))
        assert rep.best_value == pytest.approx(closed, rel=1e-9)
        assert rep.best_value > 1e-9


def test_min_displacement_matches_grid_oracle():
    # coarse grid here; the acceptance suite runs the full step-1e-3 grid
    sched = alpha_generate(2.0, 1.0, 1.0, 4)
    spec = map_build("f-main", 4, alphas=sched)
    rep = min_displacement(spec, SMC)
    D = spec.matrix.copy()
    D[np.arange(4), np.arange(4)] -= 1.0

    def objective(rows):
        # summing-c0 norm from the definition, plain numpy
        tails = np.cumsum((rows @ D.T)[:, ::-1], axis=1)
        return np.abs(tails).max(axis=1)

    grid = grid_min_over_simplex(objective, 4, 250)
    assert abs(grid - rep.best_value) <= 8e-3
    assert grid >= rep.best_value - 1e-9


def test_min_displacement_sampled_path():
    rep = min_displacement(map_build("f0", 6), Space.ell_p(2.0), seed=3, trials=40)
    assert rep.meta["method"] == "sampled"
    assert not rep.meta["certified"]
    assert rep.best_value > 0.0


# -- fixed points -------------------------------------------------------------------


def test_fixed_point_solve_f_main_and_f0():
    sched = alpha_generate(2.0, 1.0, 1.0, 8)
    ana = fixed_point_solve(map_build("f-main", 8, alphas=sched))
    assert ana["only_zero_solution"]
    assert ana["simplex_fixed_point"] is None
    assert len(ana["certificate"]) == 8
    ana0 = fixed_point_solve(map_build("f0", 8))
    assert ana0["only_zero_solution"]


def test_fixed_point_solve_f1_chains():
    ana = fixed_point_solve(map_build("f1", 8))
    assert ana["only_zero_solution"]
    assert ana["finite_cycles"] == []
    chains = ana["index_chains"]
    flat = sorted(i for chain in chains for i in chain)
    assert flat == list(range(1, 9))


def test_fixed_point_solve_identity():
    ana = fixed_point_solve(AffineMapSpec.from_matrix(np.eye(5), "identity"))
    assert ana["nullspace_dim"] == 5
    assert ana["simplex_fixed_point"] is not None
    assert sum(ana["simplex_fixed_point"]) == pytest.approx(1.0, abs=1e-9)


# -- Lipschitz ------------------------------------------------------------------------


def test_lipschitz_f0_isometry():
    f0 = map_build("f0", 8)
    fwd = lipschitz_estimate(f0, L1, method="EXACT", direction="FORWARD")
    assert fwd.certified and fwd.lower == pytest.approx(1.0, abs=1e-12)
    inv = lipschitz_estimate(f0, L1, method="EXACT", direction="INVERSE")
    assert inv.certified
    assert inv.lower == pytest.approx(1.0, abs=1e-9)
    fwd_s = lipschitz_estimate(f0, SMC, method="EXACT", direction="FORWARD")
    assert fwd_s.lower == pytest.approx(1.0, abs=1e-9)


def test_lipschitz_consistency_chain():
    n = 8
    sched = alpha_generate(2.0, 1.0, 1.0, n + 1)
    fm = map_build("f-main", n, alphas=sched)
    seq = BasicSequenceSpec.summing(C0, n + 1)
    bound = convex_basis_equivalence_bound(seq, sched.head(n))
    exact = lipschitz_estimate(fm, SMC, method="EXACT", direction="FORWARD")
    sampled = lipschitz_estimate(fm, SMC, method="SAMPLE", direction="FORWARD",
                                 trials=40, seed=9)
    assert sampled.lower <= exact.lower + 1e-9
    assert bound is not None and exact.lower <= bound + 1e-9
    # witnesses reproduce their values
    d = exact.lower_witness.entries
    assert SMC.norm(fm.matrix @ d) == pytest.approx(exact.lower, abs=1e-9)


def test_lipschitz_inverse_routes_ordered():
    n = 8
    sched = alpha_generate(2.0, 1.0, 1.0, n + 1)
    fm = map_build("f-main", n, alphas=sched)
    inv = lipschitz_estimate(fm, SMC, method="EXACT", direction="INVERSE")
    assert inv.certified
    assert 0.0 < inv.lower <= inv.upper + 1e-12
    samp = lipschitz_estimate(fm, SMC, method="SAMPLE", direction="INVERSE",
                              trials=300, seed=2)
    # sampled ratios can only over-estimate the infimum
    assert samp.upper >= inv.upper - 1e-9


def test_lipschitz_lin_downgrades():
    f0 = map_build("f0", 6)
    est = lipschitz_estimate(f0, Space.lin_ell1(), method="EXACT", direction="FORWARD",
                             trials=20, seed=1)
    assert not est.certified
    assert "downgraded" in (est.note or "")


def test_uniform_probe_f0():
    rep = uniform_lipschitz_probe("f0", L1, 8, 12)
    assert rep["exact"] and rep["flat"] and rep["sup"] == pytest.approx(1.0, abs=1e-12)
    rep = uniform_lipschitz_probe("f0", SMC, 8, 12)
    assert rep["flat"] and rep["sup"] == pytest.approx(1.0, abs=1e-9)


def test_uniform_probe_f_main_reports_profile():
    sched = alpha_generate(2.0, 1.0, 1.0, 40)
    rep = uniform_lipschitz_probe("f-main", SMC, 8, 8, alphas=sched)
    assert len(rep["values"]) == 8
    assert all(v >= 1.0 - 1e-9 for v in rep["values"])
