"""Point reduction to the coadjoint-orbit phase space O_eta x g x g*.

A full state on the momentum level set J^-1(eta) projects to the reduced
state (theta, Y, xi) with theta = Ad*_x eta = mu - ad*_Y xi; the reduced
dynamics is

    dtheta/dt = ad*_Y theta
    dY/dt     = X_xi
    dxi/dt    = -theta

with reduced Hamiltonian h = theta(Y) + 1/2 xi(X_xi).  theta is stored
extrinsically as a covector; orbit membership is monitored through Casimir
functions (the metric norm of theta, plus the Pfaffian for so(4)) and can
be enforced by per-step renormalization of the norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from . import full_dynamics as fd
from . import group as grp
from .algebra import StructureConstants
from .errors import IntegrationError, LevelSetError
from .full_dynamics import FullState, FullTrajectory
from .group import GroupElement

LEVEL_SET_TOL = 1e-8
ORBIT_TOL = 1e-9


@dataclass(frozen=True)
class ReducedState:
    """Reduced phase point (theta, Y, xi); theta lives on a coadjoint orbit."""

    theta: np.ndarray
    Y: np.ndarray
    xi: np.ndarray


def make_reduced_state(sc: StructureConstants, theta=None, Y=None, xi=None) -> ReducedState:
    zeros = np.zeros(sc.n)
    theta = zeros.copy() if theta is None else np.asarray(theta, dtype=float)
    Y = zeros.copy() if Y is None else np.asarray(Y, dtype=float)
    xi = zeros.copy() if xi is None else np.asarray(xi, dtype=float)
    alg._check_dim(sc, theta, Y, xi)
    return ReducedState(theta, Y, xi)


def casimirs(sc: StructureConstants, theta) -> dict:
    """Casimir monitors of a coadjoint-orbit point.

    The metric norm is a Casimir for every catalog algebra; so(4) carries the
    additional Pfaffian-type quadratic invariant.
    """
    theta = np.asarray(theta, dtype=float)
    out = {"norm": float(np.sqrt(alg.inner(theta, theta)))}
    if sc.name == "so4":
        # basis order (L12, L13, L14, L23, L24, L34)
        t = theta
        out["pfaffian"] = float(t[0] * t[5] - t[1] * t[4] + t[2] * t[3])
    return out


def check_orbit(sc: StructureConstants, theta, eta, tol: float = ORBIT_TOL):
    """Verify theta and eta share their Casimir monitors to `tol`."""
    ct, ce = casimirs(sc, theta), casimirs(sc, eta)
    for key in ct:
        if abs(ct[key] - ce[key]) > tol:
            raise ValueError(
                f"theta is not on the orbit of eta: {key} mismatch "
                f"{ct[key]:.12g} vs {ce[key]:.12g}"
            )


def embed_level_set(x: GroupElement, Y, xi, eta) -> FullState:
    """(x, Y, xi) -> (x, Y, Ad*_x eta + ad*_Y xi, xi), a point of J^-1(eta)."""
    sc = x.algebra
    Y = np.asarray(Y, dtype=float)
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    alg._check_dim(sc, Y, xi, eta)
    mu = grp.coadjoint(x, eta) + alg.ad_star(sc, Y, xi)
    return FullState(x, Y.copy(), mu, xi.copy())


def project_level_set(s: FullState, eta, tol: float = LEVEL_SET_TOL) -> ReducedState:
    """Project a level-set state to (Ad*_x eta, Y, xi) = (mu - ad*_Y xi, Y, xi).

    Raises LevelSetError when the momentum of `s` is farther than `tol`
    from eta.
    """
    sc = s.algebra
    eta = np.asarray(eta, dtype=float)
    alg._check_dim(sc, eta)
    residual = np.linalg.norm(fd.momentum_map(s) - eta)
    if residual > tol:
        raise LevelSetError(residual, tol)
    theta = s.mu - alg.ad_star(sc, s.Y, s.xi)
    return ReducedState(theta, s.Y.copy(), s.xi.copy())


def reduced_hamiltonian(sc: StructureConstants, r: ReducedState) -> float:
    """h = theta(Y) + 1/2 xi(X_xi); equals the full H through the projection."""
    return float(alg.pair(r.theta, r.Y) + 0.5 * alg.inner(r.xi, r.xi))


def reduced_vector_field(sc: StructureConstants, r: ReducedState):
    """(dtheta/dt, dY/dt, dxi/dt) = (ad*_Y theta, X_xi, -theta)."""
    return (
        alg.ad_star(sc, r.Y, r.theta),
        alg.sharp(r.xi),
        -r.theta.copy(),
    )


@dataclass(frozen=True)
class ReducedTrajectory:
    """Uniformly sampled integral curve of the reduced system."""

    sc: StructureConstants
    times: np.ndarray     # (M,)
    thetas: np.ndarray    # (M, n)
    Ys: np.ndarray        # (M, n)
    xis: np.ndarray       # (M, n)

    def __len__(self):
        return len(self.times)

    def state(self, k: int) -> ReducedState:
        return ReducedState(self.thetas[k].copy(), self.Ys[k].copy(),
                            self.xis[k].copy())

    def hamiltonian_series(self) -> np.ndarray:
        return np.einsum("mi,mi->m", self.thetas, self.Ys) + 0.5 * np.einsum(
            "mi,mi->m", self.xis, self.xis)

    def casimir_series(self) -> dict:
        norms = np.sqrt(np.einsum("mi,mi->m", self.thetas, self.thetas))
        out = {"norm": norms}
        if self.sc.name == "so4":
            t = self.thetas
            out["pfaffian"] = t[:, 0] * t[:, 5] - t[:, 1] * t[:, 4] + t[:, 2] * t[:, 3]
        return out


def _integrate_reduced_arrays(sc, theta0, Y0, xi0, T, h, renormalize=True):
    """Classical RK4 on stacked reduced states; optional per-step rescaling
    of theta back to its initial Casimir norm."""
    if h <= 0:
        raise ValueError("step size h must be positive")
    if T < h:
        raise ValueError("horizon T must be at least one step h")
    n_steps = int(round(T / h))
    times = h * np.arange(n_steps + 1)

    theta = np.array(theta0, dtype=float)
    Y = np.array(Y0, dtype=float)
    xi = np.array(xi0, dtype=float)
    norm0 = np.sqrt(np.einsum("...i,...i->...", theta, theta))

    thetas = np.empty((n_steps + 1,) + theta.shape)
    Ys = np.empty_like(thetas)
    xis = np.empty_like(thetas)
    thetas[0], Ys[0], xis[0] = theta, Y, xi

    def field(t, y, x):
        return alg.ad_star(sc, y, t), x.copy(), -t

    for step in range(n_steps):
        if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(Y))
                and np.all(np.isfinite(xi))):
            raise IntegrationError(step, times[step])
        k1 = field(theta, Y, xi)
        k2 = field(theta + 0.5 * h * k1[0], Y + 0.5 * h * k1[1], xi + 0.5 * h * k1[2])
        k3 = field(theta + 0.5 * h * k2[0], Y + 0.5 * h * k2[1], xi + 0.5 * h * k2[2])
        k4 = field(theta + h * k3[0], Y + h * k3[1], xi + h * k3[2])
        theta = theta + (h / 6.0) * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        Y = Y + (h / 6.0) * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        xi = xi + (h / 6.0) * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        if renormalize:
            norm = np.sqrt(np.einsum("...i,...i->...", theta, theta))
            scale = np.where(norm > 0.0, norm0 / np.where(norm > 0.0, norm, 1.0), 1.0)
            theta = theta * scale[..., None] if theta.ndim > 1 else theta * scale
        thetas[step + 1], Ys[step + 1], xis[step + 1] = theta, Y, xi

    if not np.all(np.isfinite(theta)):
        raise IntegrationError(n_steps, times[-1])
    return times, thetas, Ys, xis


def integrate_reduced(sc: StructureConstants, r0: ReducedState, T: float,
                      h: float, renormalize: bool = True) -> ReducedTrajectory:
    """Integrate the reduced system over [0, T] with uniform step h (rounded
    to a whole number of steps)."""
    times, thetas, Ys, xis = _integrate_reduced_arrays(
        sc, r0.theta, r0.Y, r0.xi, T, h, renormalize=renormalize)
    return ReducedTrajectory(sc, times, thetas, Ys, xis)


def project_trajectory(traj: FullTrajectory, eta, tol: float = LEVEL_SET_TOL) -> ReducedTrajectory:
    """Project every sample of a full trajectory onto the reduced space."""
    sc = traj.sc
    eta = np.asarray(eta, dtype=float)
    J = fd._momentum_series(sc, traj.xs, traj.Ys, traj.mus, traj.xis)
    residual = np.abs(J - eta).max()
    if residual > tol:
        raise LevelSetError(residual, tol)
    thetas = traj.mus - alg.ad_star(sc, traj.Ys, traj.xis)
    return ReducedTrajectory(sc, traj.times.copy(), thetas,
                             traj.Ys.copy(), traj.xis.copy())


def euler_lagrange_residual(sc: StructureConstants, Ys, h: float) -> float:
    """Finite-difference residual of the body-frame cubic equation.

    Ys holds >= 4 consecutive uniform samples of Y(t); the third and second
    derivatives are estimated by central differences and the result is the
    largest norm of (d3Y/dt3 + [Y, d2Y/dt2]) over the interior points.
    Converges to zero at second order in h along true trajectories.
    """
    Ys = np.asarray(Ys, dtype=float)
    if Ys.ndim != 2 or Ys.shape[1] != sc.n:
        raise ValueError(f"expected (M, {sc.n}) array of samples")
    m = Ys.shape[0]
    if m < 4:
        raise ValueError("insufficient samples: need at least 4")
    if m == 4:
        # unique cubic through 4 points: constant third derivative
        yddd = (Ys[3] - 3 * Ys[2] + 3 * Ys[1] - Ys[0]) / h**3
        ydd = (Ys[2] - 2 * Ys[1] + Ys[0]) / h**2
        res = yddd + alg.bracket(sc, Ys[1], ydd)
        return float(np.linalg.norm(res))
    ydd = (Ys[3:-1] - 2 * Ys[2:-2] + Ys[1:-3]) / h**2
    yddd = (Ys[4:] - 2 * Ys[3:-1] + 2 * Ys[1:-3] - Ys[:-4]) / (2 * h**3)
    res = yddd + alg.bracket(sc, Ys[2:-2], ydd)
    return float(np.linalg.norm(res, axis=-1).max())
