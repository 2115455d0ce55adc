"""Integrals of motion, their gradients and fields, Poisson algebra, counts."""

import numpy as np
import pytest

from liecubic import algebra as alg
from liecubic import full_dynamics as fd
from liecubic import group as grp
from liecubic import invariants as inv
from liecubic import reduction as red


def _random_reduced(sc, rng, scale=1.0):
    return red.ReducedState(scale * rng.normal(size=sc.n),
                            scale * rng.normal(size=sc.n),
                            scale * rng.normal(size=sc.n))


def test_invariant_with_zero_velocity():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(0)
    theta = rng.normal(size=3)
    r = red.make_reduced_state(sc, theta=theta)
    for i in range(2, 5):
        assert inv.invariant(sc, r, i) == theta[i - 2]


def test_invariant_index_range():
    sc = alg.catalog("so3")
    r = red.make_reduced_state(sc)
    with pytest.raises(IndexError):
        inv.invariant(sc, r, 0)
    with pytest.raises(IndexError):
        inv.invariant(sc, r, 6)
    with pytest.raises(IndexError):
        inv.invariant_gradient(sc, r, 5)
    with pytest.raises(IndexError):
        inv.invariant_field(sc, r, -1)


def test_invariants_equal_momentum_coefficients_on_level_set():
    """Through the projection, l_{i+1} recovers mu_i of the full state."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(1)
    for _ in range(20):
        eta = rng.normal(size=3)
        x = grp.exp_map(sc, rng.normal(size=3))
        s = red.embed_level_set(x, rng.normal(size=3), rng.normal(size=3), eta)
        r = red.project_level_set(s, eta)
        for i in range(2, 5):
            assert inv.invariant(sc, r, i) == pytest.approx(s.mu[i - 2], abs=1e-13)


def test_invariants_conserved_along_flow():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(2)
    r0 = _random_reduced(sc, rng, scale=0.2)
    traj = red.integrate_reduced(sc, r0, 2.0, 1e-3)
    ls = inv.invariant_series(sc, traj.thetas, traj.Ys, traj.xis)
    assert np.abs(ls - ls[0]).max() <= 1e-10


@pytest.mark.parametrize("name", ["so3", "su2", "so4"])
def test_invariant_drift_is_fourth_order(name):
    """Raw conservation drift scales as h^4 under step halving."""
    sc = alg.catalog(name)
    rng = np.random.default_rng(21)
    r0 = _random_reduced(sc, rng, scale=0.8)

    def drift(h):
        traj = red.integrate_reduced(sc, r0, 2.0, h, renormalize=False)
        ls = inv.invariant_series(sc, traj.thetas, traj.Ys, traj.xis)
        return np.abs(ls - ls[0]).max()

    assert np.log2(drift(8e-3) / drift(4e-3)) >= 3.5


def test_gradient_at_rest():
    sc = alg.catalog("so3")
    r = red.make_reduced_state(sc, theta=[1.0, 2.0, 3.0])
    for i in range(2, 5):
        a, b, c = inv.invariant_gradient(sc, r, i)
        assert np.array_equal(a, np.eye(3)[i - 2])
        assert not b.any() and not c.any()


def test_gradient_so3_frozen_entry():
    """For the first basis invariant with Y = A_2, xi = e^3 the xi-slot is
    [A_2, A_1] = -A_3."""
    sc = alg.catalog("so3")
    r = red.make_reduced_state(sc, Y=[0, 1, 0], xi=[0, 0, 1])
    a, b, c = inv.invariant_gradient(sc, r, 2)
    assert np.allclose(c, [0, 0, -1])
    assert np.allclose(b, -alg.ad_star(sc, np.eye(3)[0], r.xi))


def test_gradient_matches_finite_differences():
    eps = 1e-5
    for name in ("so3", "so4"):
        sc = alg.catalog(name)
        rng = np.random.default_rng(3)
        for _ in range(10):
            r = _random_reduced(sc, rng)
            for i in range(2, sc.n + 2):
                grad = inv.invariant_gradient(sc, r, i)
                for slot in range(3):
                    for k in range(sc.n):
                        parts = [r.theta.copy(), r.Y.copy(), r.xi.copy()]
                        parts[slot][k] += eps
                        hi = inv.invariant(sc, red.ReducedState(*parts), i)
                        parts[slot][k] -= 2 * eps
                        lo = inv.invariant(sc, red.ReducedState(*parts), i)
                        assert abs((hi - lo) / (2 * eps) - grad[slot][k]) <= 1e-8


def test_field_abelian_vanishes():
    sc = alg.catalog("abelian3")
    rng = np.random.default_rng(4)
    r = _random_reduced(sc, rng)
    for j in range(2, 5):
        assert all(not p.any() for p in inv.invariant_field(sc, r, j))


def test_field_so3_frozen_entry():
    """Third basis invariant at theta = e^1: theta-slot is ad*_{A_3} e^1."""
    sc = alg.catalog("so3")
    r = red.make_reduced_state(sc, theta=[1, 0, 0])
    tdot, ydot, xidot = inv.invariant_field(sc, r, 4)
    assert np.allclose(tdot, alg.ad_star(sc, np.eye(3)[2], r.theta))
    assert np.allclose(tdot, [0, -1, 0])
    assert not ydot.any() and not xidot.any()


def test_field_pairs_to_bracket_by_construction():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(5)
    r = _random_reduced(sc, rng)
    for i in range(1, 5):
        for j in range(1, 5):
            grad = inv.invariant_gradient(sc, r, i)
            fld = inv.invariant_field(sc, r, j)
            manual = (alg.pair(fld[0], grad[0]) + alg.pair(grad[1], fld[1])
                      + alg.pair(fld[2], grad[2]))
            assert inv.poisson_bracket(sc, r, i, j) == manual


@pytest.mark.parametrize("name", ["so3", "so4", "su2"])
def test_poisson_bracket_closes_on_structure_constants(name):
    sc = alg.catalog(name)
    rng = np.random.default_rng(6)
    for _ in range(50):
        r = _random_reduced(sc, rng)
        for i in range(2, sc.n + 2):
            for j in range(2, sc.n + 2):
                assert abs(inv.poisson_bracket(sc, r, i, j)
                           - inv.structural_bracket(sc, r, i, j)) <= 1e-10


def test_poisson_bracket_so3_example():
    """{l_2, l_3} = -l_4 on so(3)."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(7)
    for _ in range(10):
        r = _random_reduced(sc, rng)
        assert inv.poisson_bracket(sc, r, 2, 3) == pytest.approx(
            -inv.invariant(sc, r, 4), abs=1e-12)


def test_hamiltonian_commutes_with_everything():
    for name in ("so3", "so4", "su2"):
        sc = alg.catalog(name)
        rng = np.random.default_rng(8)
        for _ in range(20):
            r = _random_reduced(sc, rng)
            for j in range(1, sc.n + 2):
                assert abs(inv.poisson_bracket(sc, r, 1, j)) <= 1e-12


def test_abelian_brackets_all_vanish():
    sc = alg.catalog("abelian3")
    rng = np.random.default_rng(9)
    for _ in range(20):
        m = inv.bracket_matrix(sc, _random_reduced(sc, rng))
        assert np.abs(m).max() <= 1e-12


def test_bracket_matrix_shape_and_antisymmetry():
    sc = alg.catalog("so4")
    rng = np.random.default_rng(10)
    m = inv.bracket_matrix(sc, _random_reduced(sc, rng))
    assert m.shape == (7, 7)
    assert np.abs(m + m.T).max() <= 1e-8
    assert np.abs(m[0]).max() <= 1e-12 and np.abs(m[:, 0]).max() <= 1e-12


def test_bracket_rank_catalog_values():
    assert inv.bracket_rank(alg.catalog("so3"))[0] == 1
    assert inv.bracket_rank(alg.catalog("su2"))[0] == 1
    assert inv.bracket_rank(alg.catalog("abelian3"))[0] == 0
    assert inv.bracket_rank(alg.catalog("so4"))[0] == 2
    assert inv.bracket_rank(alg.catalog("so5"))[0] == 4


def test_bracket_rank_witness_and_parity():
    for name in ("so3", "so4", "so5", "su2"):
        sc = alg.catalog(name)
        r_g, witness = inv.bracket_rank(sc)
        rank = inv._svd_rank(inv._matrix_pencil(sc, witness))
        assert rank == 2 * r_g  # witness achieves the (even) maximal rank
    with pytest.raises(ValueError):
        inv.bracket_rank(alg.catalog("so3"), trials=0)


def test_orbit_dimension():
    so3 = alg.catalog("so3")
    assert inv.orbit_dimension(so3, [0, 0, 1.0]) == 2
    assert inv.orbit_dimension(so3, [0, 0, 0.0]) == 0
    so4 = alg.catalog("so4")
    rng = np.random.default_rng(11)
    assert inv.orbit_dimension(so4, rng.normal(size=6)) == 4
    assert inv.orbit_dimension(alg.catalog("abelian3"), [1.0, 2.0, 3.0]) == 0


def test_report_so3_counts():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(12)
    eta = np.array([0.0, 0.0, 1.0])
    x = grp.exp_map(sc, rng.normal(size=3))
    r = red.ReducedState(grp.coadjoint(x, eta), rng.normal(size=3),
                         rng.normal(size=3))
    rep = inv.lie_cartan_report(sc, r, eta)
    assert (rep.n, rep.m, rep.r_g) == (3, 1, 1)
    assert rep.lie_cartan_count == 3
    assert rep.reduced_dim == 2
    assert rep.phase_dim == 8
    assert not rep.completely_integrable
    assert rep.values.shape == (4,) and rep.bracket_matrix.shape == (4, 4)
    d = rep.to_dict()
    assert d["algebra_id"] == "so3" and len(d["bracket_matrix"]) == 16


def test_report_abelian_flags_integrable():
    sc = alg.catalog("abelian3")
    rng = np.random.default_rng(13)
    eta = rng.normal(size=3)
    r = red.ReducedState(eta.copy(), rng.normal(size=3), rng.normal(size=3))
    rep = inv.lie_cartan_report(sc, r, eta)
    assert (rep.m, rep.r_g, rep.lie_cartan_count) == (0, 0, 4)
    assert rep.completely_integrable


def test_report_so4_counts():
    sc = alg.catalog("so4")
    rng = np.random.default_rng(14)
    eta = rng.normal(size=6)
    x = grp.exp_map(sc, rng.normal(size=6))
    r = red.ReducedState(grp.coadjoint(x, eta), rng.normal(size=6),
                         rng.normal(size=6))
    rep = inv.lie_cartan_report(sc, r, eta)
    assert (rep.n, rep.m, rep.r_g) == (6, 2, 2)
    assert rep.lie_cartan_count == 5
    assert rep.reduced_dim == 6


def test_report_rejects_inconsistent_eta():
    sc = alg.catalog("so3")
    r = red.make_reduced_state(sc, theta=[0, 0, 2.0])
    with pytest.raises(ValueError, match="orbit"):
        inv.lie_cartan_report(sc, r, np.array([0.0, 0.0, 1.0]))


def test_independence_jacobian_full_rank():
    for name in ("so3", "so4"):
        sc = alg.catalog(name)
        rng = np.random.default_rng(15)
        for _ in range(20):
            r = _random_reduced(sc, rng)
            jac = inv.independence_jacobian(sc, r)
            m = inv.orbit_dimension(sc, r.theta) // 2
            assert jac.shape == (sc.n + 1, 2 * m + 2 * sc.n)
            s = np.linalg.svd(jac, compute_uv=False)
            assert s[-1] / s[0] > 1e-8


def test_classical_invariants_geodesic():
    sc = alg.catalog("so3")
    r = red.make_reduced_state(sc, Y=[0.3, 0.0, -0.5])
    i1, i2 = inv.classical_invariants_from_reduced(sc, r)
    assert i1 == 0.0 and i2 == 0.0


@pytest.mark.parametrize("name", ["so3", "so4", "su2"])
def test_classical_invariant_identities(name):
    sc = alg.catalog(name)
    rng = np.random.default_rng(16)
    for _ in range(20):
        r = _random_reduced(sc, rng)
        i1, i2 = inv.classical_invariants_from_reduced(sc, r)
        ls = inv.invariant_values(sc, r)
        assert abs(i1 - ls[0]) <= 1e-10
        assert abs(2 * i2 - np.sum(ls[1:] ** 2)
                   - float(np.dot(r.theta, r.theta))) <= 1e-10


def test_classical_invariants_from_samples():
    """Differenced derivatives reproduce the analytic values to O(h^2)."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(17)
    r0 = _random_reduced(sc, rng, scale=0.4)
    h = 1e-3
    traj = red.integrate_reduced(sc, r0, 10 * h, h)
    mid = 5
    r_mid = traj.state(mid)
    ref = inv.classical_invariants_from_reduced(sc, r_mid)
    got = inv.classical_invariants_from_samples(sc, traj.Ys[mid - 2:mid + 3], h)
    assert got[0] == pytest.approx(ref[0], abs=1e-5)
    assert got[1] == pytest.approx(ref[1], abs=1e-3)
    with pytest.raises(ValueError, match="insufficient"):
        inv.classical_invariants_from_samples(sc, traj.Ys[:4], h)


def test_classical_invariants_conserved_along_flow():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(18)
    r0 = _random_reduced(sc, rng, scale=0.3)
    traj = red.integrate_reduced(sc, r0, 2.0, 1e-3)
    vals = np.array([inv.classical_invariants_from_reduced(sc, traj.state(k))
                     for k in range(0, len(traj), 200)])
    assert np.abs(vals - vals[0]).max() <= 1e-10
