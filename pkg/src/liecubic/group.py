"""Matrix realization of the group: exp, Ad, Ad*, semidirect-product helpers.

Group elements carry their algebra so the adjoint maps can re-expand
conjugated matrices in the orthonormal basis.  All maps accept stacked
inputs (leading batch axes) where noted; the public API works on single
elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import StructureConstants, _check_dim, bracket
from .errors import RepresentationError

MEMBERSHIP_TOL = 1e-9
# Residual allowed when re-expanding a conjugated basis matrix in the basis;
# larger values signal the element drifted off the representation.
REEXPANSION_TOL = 1e-9

# Pade-13 coefficients for scaling-and-squaring expm (Higham 2005).
_PADE13 = np.array([
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0, 670442572800.0,
    33522128640.0, 1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
])
_THETA13 = 5.371920351148152


def _expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential of a stack of small matrices, Pade-13 with scaling
    and squaring.  Exact to rounding for the d <= 5 matrices used here."""
    a = np.asarray(a)
    d = a.shape[-1]
    norm = np.abs(a).sum(axis=-2).max(axis=-1) if a.size else 0.0
    max_norm = float(np.max(norm)) if np.ndim(norm) else float(norm)
    if not np.isfinite(max_norm):
        raise ValueError("matrix exponential of a non-finite matrix")
    s = max(0, int(np.ceil(np.log2(max_norm / _THETA13))) if max_norm > _THETA13 else 0)
    if s > 64:
        # beyond ~1e20 the squaring cascade only manufactures rounding noise
        raise ValueError(f"matrix norm {max_norm:.3e} too large for exp")
    if s:
        a = a / (2.0 ** s)
    eye = np.broadcast_to(np.eye(d, dtype=a.dtype), a.shape)
    b = _PADE13
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A point of the group in its faithful matrix representation."""

    mat: np.ndarray
    algebra: StructureConstants

    def __post_init__(self):
        self.mat.setflags(write=False)

    @property
    def algebra_id(self) -> str:
        return self.algebra.name

    def __repr__(self):
        return f"GroupElement({self.algebra.name}, mat={np.array2string(self.mat, precision=4)})"


def identity(sc: StructureConstants) -> GroupElement:
    d = sc.rep_dim
    return GroupElement(np.eye(d, dtype=sc.basis.dtype), sc)


def hat(sc: StructureConstants, y) -> np.ndarray:
    """Coefficients -> matrix, sum_i y_i A_i.  Batched over leading axes."""
    y = np.asarray(y, dtype=float)
    _check_dim(sc, y)
    return np.einsum("...i,ipq->...pq", y, sc.basis)


def unhat(sc: StructureConstants, m: np.ndarray, tol: float = REEXPANSION_TOL):
    """Matrix -> coefficients via <m, A_k> = -1/2 trace(m A_k).

    Raises RepresentationError if the matrix is not in the span of the basis
    (re-expansion residual above `tol`); for the abelian family the metric is
    read off the translation column instead of the trace form.
    """
    if sc.family == "abelian":
        y = m[..., :-1, -1].real.copy()
    else:
        y = -0.5 * np.einsum("...pq,kqp->...k", m, sc.basis)
        if np.iscomplexobj(y):
            y = y.real
    residual = np.abs(m - hat(sc, y)).max()
    if residual > tol:
        raise RepresentationError(
            f"matrix is not in {sc.name} (re-expansion residual {residual:.3e})"
        )
    return y


def membership_residual(x: GroupElement) -> float:
    """How far the matrix sits from the group it should belong to."""
    sc = x.algebra
    m = x.mat
    d = sc.rep_dim
    if sc.family == "abelian":
        r = np.abs(m[..., :-1, :-1] - np.eye(d - 1)).max()
        return float(max(r, np.abs(m[..., -1, :] - np.eye(d)[-1]).max()))
    gram = np.swapaxes(m, -1, -2).conj() @ m
    r = np.abs(gram - np.eye(d)).max()
    det = np.linalg.det(m)
    return float(max(r, np.abs(det - 1.0).max()))


def check_membership(x: GroupElement, tol: float = MEMBERSHIP_TOL):
    r = membership_residual(x)
    if r > tol:
        raise RepresentationError(
            f"matrix is not in the group for {x.algebra.name} (residual {r:.3e})"
        )


def project_to_group(sc: StructureConstants, m: np.ndarray) -> np.ndarray:
    """Re-orthonormalize a near-group matrix (QR with positive diagonal).

    Used as per-step drift control by the integrators; batched.
    """
    if sc.family == "abelian":
        out = m.copy()
        d = sc.rep_dim
        out[..., :-1, :-1] = np.eye(d - 1)
        out[..., -1, :] = 0.0
        out[..., -1, -1] = 1.0
        return out
    q, r = np.linalg.qr(m)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phase = diag / np.abs(diag)
    q = q * phase[..., None, :]
    if sc.family == "su2":
        # pin det to +1 (unitary phase remains after QR)
        det = np.linalg.det(q)
        q = q / np.sqrt(det)[..., None, None]
    return q


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    return GroupElement(a.mat @ b.mat, a.algebra)


def inverse(x: GroupElement) -> GroupElement:
    return GroupElement(_inverse_mat(x.algebra, x.mat), x.algebra)


def _inverse_mat(sc: StructureConstants, m: np.ndarray) -> np.ndarray:
    if sc.family == "abelian":
        out = m.copy()
        out[..., :-1, -1] *= -1.0
        return out
    return np.swapaxes(m, -1, -2).conj().copy()


def exp_map(sc: StructureConstants, y, t: float = 1.0) -> GroupElement:
    """exp(t * sum_i y_i A_i) in the matrix representation."""
    return GroupElement(_expm(t * hat(sc, y)), sc)


def _ad_matrix(sc: StructureConstants, m: np.ndarray) -> np.ndarray:
    """Matrix of Ad_x on coefficients, column j = coefficients of x A_j x^-1.

    Batched over leading axes of `m`; raises if conjugation leaves the
    algebra span.
    """
    minv = _inverse_mat(sc, m)
    conj = np.einsum("...pq,jqr,...rs->...jps", m, sc.basis, minv)
    cols = unhat(sc, conj)              # (..., n, n): [j, k] = k-coeff of Ad A_j
    return np.swapaxes(cols, -1, -2)    # [k, j]


def adjoint(x: GroupElement, y):
    """Ad_x Y: conjugate the matrix of Y and re-expand in the basis."""
    sc = x.algebra
    y = np.asarray(y, dtype=float)
    _check_dim(sc, y)
    m = x.mat @ hat(sc, y) @ _inverse_mat(sc, x.mat)
    return unhat(sc, m)


def coadjoint(x: GroupElement, xi):
    """Ad*_x xi, the precomposition with Ad_x: (Ad*_x xi)(Y) = xi(Ad_x Y).

    On coefficients this is the transpose of the Ad_x matrix.
    """
    sc = x.algebra
    xi = np.asarray(xi, dtype=float)
    _check_dim(sc, xi)
    return _ad_matrix(sc, x.mat).T @ xi


def semidirect_left_translate(x: GroupElement, y, z, u):
    """Left translation of the tangent vector (Z, U) at the identity of the
    semidirect product to the point (x, Y).

    Returns (Z_body, U + [Y, Z]); the first slot is the body-frame vector to
    be carried at x.
    """
    sc = x.algebra
    z = np.asarray(z, dtype=float)
    u = np.asarray(u, dtype=float)
    _check_dim(sc, y, z, u)
    return z.copy(), u + bracket(sc, y, z)
