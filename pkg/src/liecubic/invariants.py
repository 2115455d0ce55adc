"""Integrals of motion of the reduced system and their Poisson algebra.

The n+1 integrals are indexed 1..n+1 to match the usual presentation:
index 1 is the reduced Hamiltonian h, and index i+1 (for basis element A_i)
is the function (theta + ad*_Y xi)(A_i).  Their pairwise Poisson brackets
close on the structure constants of the algebra, which bounds the number of
independent commuting invariants through the Lie-Cartan theorem: with
r_g = half the maximal rank of M(a)_ij = sum_k C^k_ij a_k, there are
n + 1 - r_g independent integrals in involution and the system drops to
dimension 2(m + r_g - 1), where 2m is the coadjoint-orbit dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from . import reduction as red
from .algebra import StructureConstants
from .reduction import ReducedState

# Relative singular-value cutoff for every rank decision in this module.
RANK_TOL = 1e-10
RANK_SEED = 0xC0FFEE
RANK_TRIALS = 256


def _check_index(sc, i, low):
    if not (low <= i <= sc.n + 1):
        raise IndexError(f"invariant index {i} out of range {low}..{sc.n + 1}")


def invariant(sc: StructureConstants, r: ReducedState, i: int) -> float:
    """Value of the i-th integral of motion (1-based; index 1 is h)."""
    _check_index(sc, i, 1)
    if i == 1:
        return red.reduced_hamiltonian(sc, r)
    return float((r.theta + alg.ad_star(sc, r.Y, r.xi))[i - 2])


def invariant_values(sc: StructureConstants, r: ReducedState) -> np.ndarray:
    """All n+1 integrals at a state, index k holding l_{k+1}."""
    out = np.empty(sc.n + 1)
    out[0] = red.reduced_hamiltonian(sc, r)
    out[1:] = r.theta + alg.ad_star(sc, r.Y, r.xi)
    return out


def invariant_series(sc: StructureConstants, thetas, Ys, xis) -> np.ndarray:
    """Integrals along stacked samples; shape (..., n+1)."""
    thetas = np.asarray(thetas, dtype=float)
    Ys = np.asarray(Ys, dtype=float)
    xis = np.asarray(xis, dtype=float)
    h = np.einsum("...i,...i->...", thetas, Ys) + 0.5 * np.einsum(
        "...i,...i->...", xis, xis)
    rest = thetas + alg.ad_star(sc, Ys, xis)
    return np.concatenate([h[..., None], rest], axis=-1)


def invariant_gradient(sc: StructureConstants, r: ReducedState, i: int):
    """Differential of the i-th integral as a triple over (theta, Y, xi).

    Slots live in (g, g*, g): the theta-slot pairs with covector increments,
    the Y-slot with vector increments, the xi-slot with covector increments.
    For i >= 2 this is (A_{i-1}, -ad*_{A_{i-1}} xi, [Y, A_{i-1}]); for i = 1
    (the Hamiltonian) it is (Y, theta, X_xi).
    """
    _check_index(sc, i, 1)
    if i == 1:
        return r.Y.copy(), r.theta.copy(), alg.sharp(r.xi)
    e = np.zeros(sc.n)
    e[i - 2] = 1.0
    return e, -alg.ad_star(sc, e, r.xi), alg.bracket(sc, r.Y, e)


def invariant_field(sc: StructureConstants, r: ReducedState, j: int):
    """Hamiltonian vector field of the j-th integral on the reduced space.

    For j >= 2: (ad*_{A_{j-1}} theta, [Y, A_{j-1}], ad*_{A_{j-1}} xi); for
    j = 1 this is the dynamical field X_h itself.
    """
    _check_index(sc, j, 1)
    if j == 1:
        return red.reduced_vector_field(sc, r)
    e = np.zeros(sc.n)
    e[j - 2] = 1.0
    return (alg.ad_star(sc, e, r.theta), alg.bracket(sc, r.Y, e),
            alg.ad_star(sc, e, r.xi))


def _pair_gradient_field(grad, fld) -> float:
    a, b, c = grad
    u, v, w = fld
    return float(alg.pair(u, a) + alg.pair(b, v) + alg.pair(w, c))


def poisson_bracket(sc: StructureConstants, r: ReducedState, i: int, j: int) -> float:
    """{l_i, l_j} at the state, computed as the pairing dl_i(X_{l_j}).

    For i, j >= 2 the value closes on the structure constants,
    {l_i, l_j} = sum_k C^k_{(j-1)(i-1)} l_{k+1}; brackets with l_1 vanish.
    """
    _check_index(sc, i, 1)
    _check_index(sc, j, 1)
    return _pair_gradient_field(invariant_gradient(sc, r, i),
                                invariant_field(sc, r, j))


def bracket_matrix(sc: StructureConstants, r: ReducedState) -> np.ndarray:
    """Numerical Poisson brackets of all pairs, (n+1) x (n+1)."""
    k = sc.n + 1
    grads = [invariant_gradient(sc, r, i) for i in range(1, k + 1)]
    flds = [invariant_field(sc, r, j) for j in range(1, k + 1)]
    out = np.empty((k, k))
    for a in range(k):
        for b in range(k):
            out[a, b] = _pair_gradient_field(grads[a], flds[b])
    return out


def structural_bracket(sc: StructureConstants, r: ReducedState, i: int, j: int) -> float:
    """Closed form sum_k C^k_{(j-1)(i-1)} l_{k+1} for i, j >= 2."""
    _check_index(sc, i, 2)
    _check_index(sc, j, 2)
    vals = r.theta + alg.ad_star(sc, r.Y, r.xi)
    return float(np.dot(sc.c[j - 2, i - 2], vals))


def _matrix_pencil(sc: StructureConstants, a) -> np.ndarray:
    """M(a)_ij = sum_k C^k_ij a_k."""
    return np.einsum("ijk,...k->...ij", sc.c, np.asarray(a, dtype=float))


def _svd_rank(m: np.ndarray, tol: float = RANK_TOL) -> int:
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def bracket_rank(sc: StructureConstants, trials: int = RANK_TRIALS,
                 seed: int = RANK_SEED):
    """Half the maximal rank of M(a) over directions a, plus a witness.

    The maximum is generic, so it is searched over `trials` unit-sphere
    samples (fixed seed for reproducibility) together with the canonical
    basis directions; skew-symmetry makes the maximal rank even.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    candidates = list(np.eye(sc.n))
    draws = rng.normal(size=(trials, sc.n))
    norms = np.linalg.norm(draws, axis=1)
    candidates.extend(draws[norms > 0] / norms[norms > 0, None])
    best_rank, witness = 0, np.zeros(sc.n)
    for a in candidates:
        rank = _svd_rank(_matrix_pencil(sc, a))
        if rank > best_rank:
            best_rank, witness = rank, a
    return best_rank // 2, witness


def orbit_dimension(sc: StructureConstants, eta) -> int:
    """Dimension of the coadjoint orbit through eta: rank of Y -> ad*_Y eta."""
    eta = np.asarray(eta, dtype=float)
    alg._check_dim(sc, eta)
    cols = np.stack([alg.ad_star(sc, e, eta) for e in np.eye(sc.n)], axis=1)
    return _svd_rank(cols)


def orbit_tangent_basis(sc: StructureConstants, theta) -> np.ndarray:
    """Orthonormal basis (columns) of the orbit tangent space at theta."""
    theta = np.asarray(theta, dtype=float)
    cols = np.stack([alg.ad_star(sc, e, theta) for e in np.eye(sc.n)], axis=1)
    u, s, _ = np.linalg.svd(cols)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((sc.n, 0))
    return u[:, : int(np.sum(s > RANK_TOL * s[0]))]


def independence_jacobian(sc: StructureConstants, r: ReducedState) -> np.ndarray:
    """Jacobian of (l_1, ..., l_{n+1}) in local coordinates: an orthonormal
    orbit-tangent basis for the theta directions plus the flat Y and xi
    coordinates.  Shape (n+1, 2m + 2n)."""
    tangent = orbit_tangent_basis(sc, r.theta)
    rows = []
    for i in range(1, sc.n + 2):
        a, b, c = invariant_gradient(sc, r, i)
        rows.append(np.concatenate([tangent.T @ a, b, c]))
    return np.stack(rows)


def classical_invariants(sc: StructureConstants, y, ydot, yddot, ydddot):
    """The two classical invariants of a cubic from body derivatives of Y.

    Uses the bi-invariant covariant derivative along the curve,
    D w/dt = dw/dt + 1/2 [Y, w], applied recursively to V = Y:
        I1 = 1/2 <V1, V1> - <V2, V>
        I2 = <V2, V2> - <V3, V1>
    """
    y = np.asarray(y, dtype=float)
    derivs = [np.asarray(d, dtype=float) for d in (ydot, yddot, ydddot)]
    # covariant derivatives V1, V2, V3 of the velocity V = Y
    v1 = derivs[0]
    v1_dot = derivs[1]
    v1_ddot = derivs[2]
    v2 = v1_dot + 0.5 * alg.bracket(sc, y, v1)
    v2_dot = v1_ddot + 0.5 * (alg.bracket(sc, derivs[0], v1)
                              + alg.bracket(sc, y, v1_dot))
    v3 = v2_dot + 0.5 * alg.bracket(sc, y, v2)
    i1 = 0.5 * alg.inner(v1, v1) - alg.inner(v2, y)
    i2 = alg.inner(v2, v2) - alg.inner(v3, v1)
    return float(i1), float(i2)


def classical_invariants_from_reduced(sc: StructureConstants, r: ReducedState):
    """Classical invariants with derivatives read off the reduced state:
    dY/dt = X_xi, d2Y/dt2 = -X_theta, d3Y/dt3 = -[Y, d2Y/dt2]."""
    ydot = alg.sharp(r.xi)
    yddot = -alg.sharp(r.theta)
    ydddot = -alg.bracket(sc, r.Y, yddot)
    return classical_invariants(sc, r.Y, ydot, yddot, ydddot)


def classical_invariants_from_samples(sc: StructureConstants, Ys, h: float):
    """Classical invariants at the window center from >= 5 uniform samples,
    derivatives by central differences."""
    Ys = np.asarray(Ys, dtype=float)
    if Ys.ndim != 2 or Ys.shape[0] < 5:
        raise ValueError("insufficient samples: need at least 5")
    k = Ys.shape[0] // 2
    ydot = (Ys[k + 1] - Ys[k - 1]) / (2 * h)
    yddot = (Ys[k + 1] - 2 * Ys[k] + Ys[k - 1]) / h**2
    ydddot = (Ys[k + 2] - 2 * Ys[k + 1] + 2 * Ys[k - 1] - Ys[k - 2]) / (2 * h**3)
    return classical_invariants(sc, Ys[k], ydot, yddot, ydddot)


@dataclass(frozen=True)
class InvariantReport:
    """Counting data for the integrals of motion at a reduced state."""

    algebra_id: str
    n: int
    m: int
    r_g: int
    lie_cartan_count: int
    reduced_dim: int
    phase_dim: int
    completely_integrable: bool
    values: np.ndarray = field(repr=False)          # (n+1,)
    bracket_matrix: np.ndarray = field(repr=False)  # (n+1, n+1)

    def to_dict(self) -> dict:
        return {
            "algebra_id": self.algebra_id,
            "n": self.n,
            "m": self.m,
            "r_g": self.r_g,
            "lie_cartan_count": self.lie_cartan_count,
            "reduced_dim": self.reduced_dim,
            "phase_dim": self.phase_dim,
            "completely_integrable": self.completely_integrable,
            "values": [float(v) for v in self.values],
            "bracket_matrix": [float(v) for v in self.bracket_matrix.ravel()],
        }


def lie_cartan_report(sc: StructureConstants, r: ReducedState, eta,
                      trials: int = RANK_TRIALS) -> InvariantReport:
    """Counting report at a state: orbit half-dimension m, rank quantity r_g,
    the Lie-Cartan count n+1-r_g of commuting invariants, and the expected
    reduced dimension 2(m + r_g - 1).

    The completely-integrable flag records m + r_g <= 1, which only happens
    in the degenerate cases (abelian algebra or point orbit).
    """
    eta = np.asarray(eta, dtype=float)
    red.check_orbit(sc, r.theta, eta)
    m = orbit_dimension(sc, eta) // 2
    r_g, _ = bracket_rank(sc, trials=trials)
    return InvariantReport(
        algebra_id=sc.name,
        n=sc.n,
        m=m,
        r_g=r_g,
        lie_cartan_count=sc.n + 1 - r_g,
        reduced_dim=2 * (m + r_g - 1),
        phase_dim=2 * (sc.n + m),
        completely_integrable=(m + r_g) <= 1,
        values=invariant_values(sc, r),
        bracket_matrix=bracket_matrix(sc, r),
    )
