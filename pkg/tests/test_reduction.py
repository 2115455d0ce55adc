"""Level-set embedding/projection and the reduced dynamics."""

import numpy as np
import pytest

from liecubic import algebra as alg
from liecubic import full_dynamics as fd
from liecubic import group as grp
from liecubic import reduction as red
from liecubic.errors import LevelSetError


def _random_level_set_state(sc, rng, scale=1.0):
    eta = scale * rng.normal(size=sc.n)
    x = grp.exp_map(sc, rng.normal(size=sc.n))
    s = red.embed_level_set(x, scale * rng.normal(size=sc.n),
                            scale * rng.normal(size=sc.n), eta)
    return s, eta, x


def test_embed_at_identity_with_zero_velocity():
    sc = alg.catalog("so3")
    eta = np.array([0.4, -0.2, 1.0])
    s = red.embed_level_set(grp.identity(sc), np.zeros(3), np.zeros(3), eta)
    assert np.allclose(s.mu, eta, atol=1e-15)


@pytest.mark.parametrize("name", ["so3", "so4", "su2"])
def test_embed_lands_on_level_set(name):
    sc = alg.catalog(name)
    rng = np.random.default_rng(0)
    for _ in range(30):
        s, eta, _ = _random_level_set_state(sc, rng)
        assert np.abs(fd.momentum_map(s) - eta).max() <= 1e-10


def test_embed_so3_rotated_covector():
    """eta = e^3 carried by a quarter turn about the first axis."""
    sc = alg.catalog("so3")
    x = grp.exp_map(sc, [1, 0, 0], t=np.pi / 2)
    eta = np.array([0.0, 0.0, 1.0])
    s = red.embed_level_set(x, np.zeros(3), np.zeros(3), eta)
    # oracle: conjugation matrix acting on the dual by its transpose
    admat = np.array([grp.adjoint(x, e) for e in np.eye(3)]).T
    assert np.allclose(s.mu, admat.T @ eta, atol=1e-12)
    assert np.allclose(s.mu, [0.0, 1.0, 0.0], atol=1e-12)


def test_project_inverts_embed():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(1)
    for _ in range(20):
        s, eta, x = _random_level_set_state(sc, rng)
        r = red.project_level_set(s, eta)
        assert np.abs(r.theta - grp.coadjoint(x, eta)).max() <= 1e-10
        assert np.array_equal(r.Y, s.Y) and np.array_equal(r.xi, s.xi)


def test_project_rejects_off_level_set():
    sc = alg.catalog("so3")
    s = fd.make_state(sc, mu=[1.0, 0, 0])
    with pytest.raises(LevelSetError, match="residual") as err:
        red.project_level_set(s, np.array([0.0, 0.0, 1.0]))
    assert err.value.residual > err.value.tol


def test_reduced_hamiltonian_examples():
    sc = alg.catalog("so3")
    assert red.reduced_hamiltonian(sc, red.make_reduced_state(sc)) == 0.0
    r = red.make_reduced_state(sc, theta=[0, 1, 0], Y=[0, 1, 0])
    assert red.reduced_hamiltonian(sc, r) == 1.0


def test_reduced_hamiltonian_matches_full():
    """h o project = H on the level set (same arithmetic up to rounding)."""
    sc = alg.catalog("so4")
    rng = np.random.default_rng(2)
    for _ in range(30):
        s, eta, _ = _random_level_set_state(sc, rng)
        r = red.project_level_set(s, eta)
        assert red.reduced_hamiltonian(sc, r) == pytest.approx(
            fd.hamiltonian(s), rel=1e-13, abs=1e-13)


def test_reduced_field_examples():
    sc = alg.catalog("so3")
    zero = red.make_reduced_state(sc)
    assert all(not p.any() for p in red.reduced_vector_field(sc, zero))
    r = red.make_reduced_state(sc, theta=[0, 0, 1], Y=[1, 0, 0])
    tdot, ydot, xidot = red.reduced_vector_field(sc, r)
    assert np.allclose(tdot, [0, 1, 0])
    assert np.allclose(ydot, 0.0)
    assert np.allclose(xidot, [0, 0, -1])
    # theta is fixed by its own metric dual
    r2 = red.make_reduced_state(sc, theta=[0.3, -1.2, 0.4],
                                Y=alg.sharp([0.3, -1.2, 0.4]))
    assert np.abs(red.reduced_vector_field(sc, r2)[0]).max() <= 1e-15


def test_integrate_reduced_stationary():
    sc = alg.catalog("so3")
    traj = red.integrate_reduced(sc, red.make_reduced_state(sc), 1.0, 1e-2)
    assert not traj.thetas.any() and not traj.Ys.any() and not traj.xis.any()


def test_reduced_conservation_smoke():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(3)
    r0 = red.ReducedState(*(0.2 * rng.normal(size=(3, 3))))
    traj = red.integrate_reduced(sc, r0, 2.0, 1e-3)
    hs = traj.hamiltonian_series()
    assert np.abs(hs - hs[0]).max() <= 1e-10
    cs = traj.casimir_series()["norm"]
    assert np.abs(cs - cs[0]).max() <= 1e-12


def test_casimir_drift_without_renormalization():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(4)
    r0 = red.ReducedState(*(0.3 * rng.normal(size=(3, 3))))
    traj = red.integrate_reduced(sc, r0, 10.0, 1e-3, renormalize=False)
    cs = traj.casimir_series()["norm"]
    assert np.abs(cs - cs[0]).max() <= 1e-9


def test_so4_pfaffian_is_coadjoint_invariant():
    sc = alg.catalog("so4")
    rng = np.random.default_rng(5)
    theta = rng.normal(size=6)
    pf0 = red.casimirs(sc, theta)["pfaffian"]
    for _ in range(10):
        moved = grp.coadjoint(grp.exp_map(sc, rng.normal(size=6)), theta)
        assert red.casimirs(sc, moved)["pfaffian"] == pytest.approx(pf0, abs=1e-12)


def test_so4_casimirs_along_flow():
    sc = alg.catalog("so4")
    rng = np.random.default_rng(6)
    r0 = red.ReducedState(*(0.3 * rng.normal(size=(3, 6))))
    traj = red.integrate_reduced(sc, r0, 5.0, 1e-3)
    cas = traj.casimir_series()
    assert np.abs(cas["norm"] - cas["norm"][0]).max() <= 1e-12
    assert np.abs(cas["pfaffian"] - cas["pfaffian"][0]).max() <= 1e-10


def test_commuting_diagram_smoke():
    """Projecting the full flow equals flowing the projection."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(7)
    T, h = 2.0, 2e-3
    s0, eta, _ = _random_level_set_state(sc, rng, scale=0.1)
    path_a = red.project_trajectory(fd.integrate_full(s0, T, h), eta)
    path_b = red.integrate_reduced(sc, red.project_level_set(s0, eta), T, h)
    diff = max(np.abs(path_a.thetas - path_b.thetas).max(),
               np.abs(path_a.Ys - path_b.Ys).max(),
               np.abs(path_a.xis - path_b.xis).max())
    assert diff <= 10 * h**4 * T


def test_commuting_diagram_deviation_is_fourth_order():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(17)
    s0, eta, _ = _random_level_set_state(sc, rng, scale=0.4)

    def deviation(h):
        path_a = red.project_trajectory(fd.integrate_full(s0, 2.0, h), eta)
        path_b = red.integrate_reduced(sc, red.project_level_set(s0, eta), 2.0, h)
        return max(np.abs(path_a.thetas - path_b.thetas).max(),
                   np.abs(path_a.Ys - path_b.Ys).max(),
                   np.abs(path_a.xis - path_b.xis).max())

    assert deviation(8e-3) / deviation(4e-3) >= 8.0


def test_projected_trajectory_satisfies_reduced_equations():
    """Differenced time derivatives of the projected full flow match the
    reduced field to differencing accuracy."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(18)
    T, h = 1.0, 1e-2
    s0, eta, _ = _random_level_set_state(sc, rng, scale=0.2)
    proj = red.project_trajectory(fd.integrate_full(s0, T, h), eta)

    def residual(series, field_rows):
        dot = (series[2:] - series[:-2]) / (2 * h)
        return np.abs(dot - field_rows[1:-1]).max()

    tdot = alg.ad_star(sc, proj.Ys, proj.thetas)
    res = max(residual(proj.thetas, tdot),
              residual(proj.Ys, alg.sharp(proj.xis)),
              residual(proj.xis, -proj.thetas))
    assert res <= 1e-4  # central-difference truncation at h=1e-2 scale


def test_embed_equivariance_under_isotropy():
    """Level-set embedding commutes with the residual symmetry: group elements
    fixing eta act on x alone and leave the momentum component unchanged."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(8)
    for _ in range(10):
        eta = rng.normal(size=3)
        x = grp.exp_map(sc, rng.normal(size=3))
        Y, xi = rng.normal(size=(2, 3))
        g = grp.exp_map(sc, alg.sharp(eta), t=rng.uniform(-2, 2))
        assert np.abs(grp.coadjoint(g, eta) - eta).max() <= 1e-12
        moved = red.embed_level_set(grp.multiply(g, x), Y, xi, eta)
        base = red.embed_level_set(x, Y, xi, eta)
        assert np.abs(moved.mu - base.mu).max() <= 1e-12


def test_orbit_check():
    sc = alg.catalog("so3")
    red.check_orbit(sc, np.array([0, 0, 1.0]), np.array([1.0, 0, 0]))
    with pytest.raises(ValueError, match="orbit"):
        red.check_orbit(sc, np.array([0, 0, 2.0]), np.array([1.0, 0, 0]))


# --- finite-difference residual of the body cubic equation ---------------


def test_el_residual_abelian():
    """Differencing a quadratic leaves only rounding error."""
    sc = alg.catalog("abelian3")
    rng = np.random.default_rng(9)
    Y0, mu0, xi0 = rng.normal(size=(3, 3))
    traj = fd.integrate_full(fd.make_state(sc, Y=Y0, mu=mu0, xi=xi0), 1.0, 1e-2)
    assert red.euler_lagrange_residual(sc, traj.Ys, 1e-2) <= 1e-9


def test_el_residual_constant_geodesic():
    sc = alg.catalog("so3")
    r0 = red.make_reduced_state(sc, Y=[0.0, 0.7, 0.0])
    traj = red.integrate_reduced(sc, r0, 1.0, 1e-2)
    assert red.euler_lagrange_residual(sc, traj.Ys, 1e-2) <= 1e-13


def test_el_residual_second_order():
    """Residual drops ~4x when the sampling step halves."""
    sc = alg.catalog("so3")
    rng = np.random.default_rng(10)
    r0 = red.ReducedState(*(0.5 * rng.normal(size=(3, 3))))

    def residual(h):
        traj = red.integrate_reduced(sc, r0, 2.0, h)
        return red.euler_lagrange_residual(sc, traj.Ys, h)

    ratio = residual(2e-2) / residual(1e-2)
    assert ratio >= 3.5


def test_el_residual_minimal_window():
    sc = alg.catalog("so3")
    rng = np.random.default_rng(11)
    r0 = red.ReducedState(*(0.3 * rng.normal(size=(3, 3))))
    traj = red.integrate_reduced(sc, r0, 4e-3, 1e-3)
    assert traj.Ys.shape[0] == 5
    assert red.euler_lagrange_residual(sc, traj.Ys[:4], 1e-3) < 1e-2
    with pytest.raises(ValueError, match="insufficient"):
        red.euler_lagrange_residual(sc, traj.Ys[:3], 1e-3)
