"""Compact Lie algebras over a fixed orthonormal basis.

Elements of the algebra and of its dual are plain length-n coefficient
arrays over an orthonormal basis {A_1, ..., A_n}.  Orthonormality is with
respect to the bi-invariant inner product, realized for the matrix
algebras as <A, B> = -1/2 trace(A B); with that choice the standard so(3)
basis is orthonormal and the musical isomorphisms are the identity on
coefficients.

Sign conventions (everything else is derived from these):
    [A_i, A_j] = sum_k C^k_ij A_k         with c[i, j, k] = C^k_ij
    (ad*_Y xi)(Z) = xi([Y, Z])
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

# Structure constants of catalog algebras are exact small integers (0, +-1,
# +-2), so the validation tolerance can sit at rounding level.
STRUCTURE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Structure-constant tensor of a compact Lie algebra plus a faithful
    matrix realization of its orthonormal basis.

    Immutable after construction; safe to share across threads.
    """

    name: str
    n: int
    c: np.ndarray        # (n, n, n), c[i, j, k] = C^k_ij
    basis: np.ndarray    # (n, d, d) matrices of A_1..A_n
    family: str = "so"   # "so" | "su2" | "abelian"

    def __post_init__(self):
        self.c.setflags(write=False)
        self.basis.setflags(write=False)

    @property
    def rep_dim(self) -> int:
        return self.basis.shape[-1]

    def __repr__(self):
        return f"StructureConstants({self.name!r}, n={self.n})"


def _check_dim(sc: StructureConstants, *vecs):
    for v in vecs:
        if np.shape(v)[-1] != sc.n:
            raise DimensionError(
                f"expected length-{sc.n} coefficients for {sc.name}, "
                f"got shape {np.shape(v)}"
            )


def bracket(sc: StructureConstants, y, z):
    """Lie bracket [Y, Z] in coefficients: sum_ij C^k_ij y_i z_j."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    _check_dim(sc, y, z)
    return np.einsum("ijk,...i,...j->...k", sc.c, y, z)


def ad_star(sc: StructureConstants, y, xi):
    """Coadjoint action of the algebra, (ad*_Y xi)(Z) = xi([Y, Z]).

    Componentwise (ad*_Y xi)_j = sum_ik C^k_ij y_i xi_k.
    """
    y = np.asarray(y, dtype=float)
    xi = np.asarray(xi, dtype=float)
    _check_dim(sc, y, xi)
    return np.einsum("ijk,...i,...k->...j", sc.c, y, xi)


def sharp(xi):
    """Dual vector -> algebra vector via the metric; identity on coefficients."""
    return np.asarray(xi, dtype=float).copy()


def flat(y):
    """Algebra vector -> dual vector via the metric; identity on coefficients."""
    return np.asarray(y, dtype=float).copy()


def inner(y, z):
    """Bi-invariant inner product: Euclidean dot of coefficient arrays."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    if y.shape[-1] != z.shape[-1]:
        raise DimensionError(f"shape mismatch {y.shape} vs {z.shape}")
    return np.einsum("...i,...i->...", y, z)


def pair(xi, y):
    """Dual pairing xi(Y); with an orthonormal basis this is the dot product."""
    return inner(xi, y)


# ---------------------------------------------------------------------------
# catalog


def _so_basis(d: int) -> np.ndarray:
    """Orthonormal basis L_ij = E_ij - E_ji (i<j) of so(d), so(3) sign-matched.

    For d = 3 the rows are reordered/signed so that the basis is the standard
    one with [A_1, A_2] = A_3 (C^k_ij = epsilon_ijk).
    """
    if d == 3:
        mats = np.zeros((3, 3, 3))
        eps = _levi_civita()
        for i in range(3):
            mats[i] = -eps[i]
        return mats
    mats = []
    for i in range(d):
        for j in range(i + 1, d):
            m = np.zeros((d, d))
            m[i, j] = 1.0
            m[j, i] = -1.0
            mats.append(m)
    return np.array(mats)


def _su2_basis() -> np.ndarray:
    """Basis -i*sigma_k of su(2), orthonormal under -1/2 trace(AB)."""
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    return -1j * np.array([s1, s2, s3])


def _abelian_basis(n: int) -> np.ndarray:
    """Translation generators E_{i,n} in (n+1)x(n+1) matrices; all brackets 0."""
    mats = np.zeros((n, n + 1, n + 1))
    for i in range(n):
        mats[i, i, n] = 1.0
    return mats


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


def _constants_from_matrices(basis: np.ndarray) -> np.ndarray:
    """C^k_ij = <[A_i, A_j], A_k> with <a, b> = -1/2 trace(a b)."""
    comm = np.einsum("ipq,jqr->ijpr", basis, basis)
    comm = comm - np.einsum("jpq,iqr->ijpr", basis, basis)
    c = -0.5 * np.einsum("ijpq,kqp->ijk", comm, basis)
    if np.iscomplexobj(c):
        c = c.real.copy()
    return c


def validate_structure(sc: StructureConstants, tol: float = STRUCTURE_TOL):
    """Raise ValueError unless antisymmetry, Jacobi and total antisymmetry of
    the structure constants hold to `tol`."""
    c = sc.c
    anti = np.abs(c + np.swapaxes(c, 0, 1)).max()
    if anti > tol:
        raise ValueError(f"{sc.name}: C^k_ij antisymmetry residual {anti:.3e}")
    total = np.abs(c + np.swapaxes(c, 1, 2)).max()
    if total > tol:
        raise ValueError(f"{sc.name}: metric ad-invariance residual {total:.3e}")
    jac = (
        np.einsum("ijm,mkl->ijkl", c, c)
        + np.einsum("jkm,mil->ijkl", c, c)
        + np.einsum("kim,mjl->ijkl", c, c)
    )
    jmax = np.abs(jac).max()
    if jmax > tol:
        raise ValueError(f"{sc.name}: Jacobi residual {jmax:.3e}")


_CACHE: dict[str, StructureConstants] = {}
_ABELIAN_RE = re.compile(r"^abelian([1-9][0-9]*)$")


def catalog(name: str) -> StructureConstants:
    """Return the structure constants of a named algebra.

    Known identifiers: "so3", "so4", "so5", "su2", "abelianN" (N >= 1).
    """
    if name in _CACHE:
        return _CACHE[name]
    if name in ("so3", "so4", "so5"):
        d = int(name[2])
        basis = _so_basis(d)
        family = "so"
    elif name == "su2":
        basis = _su2_basis()
        family = "su2"
    else:
        m = _ABELIAN_RE.match(name)
        if not m:
            raise ValueError(
                f"unknown algebra {name!r}; expected so3, so4, so5, su2 or abelianN"
            )
        basis = _abelian_basis(int(m.group(1)))
        family = "abelian"
    c = _constants_from_matrices(basis)
    sc = StructureConstants(name=name, n=basis.shape[0], c=c, basis=basis,
                            family=family)
    validate_structure(sc)
    _CACHE[name] = sc
    return sc
