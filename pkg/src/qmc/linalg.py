"""Quaternion QR, exact quaternion SVD, singular value thresholding, nuclear norm.

The QR factorization runs modified Gram-Schmidt over quaternion columns with a
second full reorthogonalization sweep, which keeps Q orthonormal to machine
precision even for badly conditioned inputs. The SVD is computed exactly by
taking a complex SVD of the structured 2M x 2N adjoint and folding the paired
singular vectors back into quaternion form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    QuatMatrix,
    _conj_transpose_planes,
    _matmul_planes,
    complex_adjoint,
)

__all__ = ["QqrResult", "QsvdResult", "qqr", "orth", "qsvd", "svt", "nuclear_norm"]

# A column counts as linearly dependent once its residual after projection
# drops below _DEP_TOL * (original norm + 1).
_DEP_TOL = 1e-12


@dataclass(frozen=True)
class QqrResult:
    """Economy factorization A = Q @ R.

    Q has orthonormal columns, R is upper triangular with a real nonnegative
    diagonal. Dependent columns get a zero pivot and an arbitrary unit column
    orthogonal to the preceding ones.
    """

    Q: QuatMatrix
    R: QuatMatrix


@dataclass(frozen=True)
class QsvdResult:
    """Economy SVD A = U * diag(sigma) * V^H with sigma real, nonincreasing."""

    U: QuatMatrix
    sigma: np.ndarray
    V: QuatMatrix


def _conj_dot(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    # conj(q)^T . v for one finalized column q (4, M) against columns v (4, M, c).
    a0, a1, a2, a3 = q
    b0, b1, b2, b3 = v
    return np.stack((
        a0 @ b0 + a1 @ b1 + a2 @ b2 + a3 @ b3,
        a0 @ b1 - a1 @ b0 - a2 @ b3 + a3 @ b2,
        a0 @ b2 + a1 @ b3 - a2 @ b0 - a3 @ b1,
        a0 @ b3 - a1 @ b2 + a2 @ b1 - a3 @ b0,
    ))


def _subtract_outer(v: np.ndarray, q: np.ndarray, c: np.ndarray) -> None:
    # v -= q (outer) c with Hamilton ordering q(m) * c(j); updates v in place.
    a0, a1, a2, a3 = q
    c0, c1, c2, c3 = c
    v[0] -= (np.outer(a0, c0) - np.outer(a1, c1)
             - np.outer(a2, c2) - np.outer(a3, c3))
    v[1] -= (np.outer(a0, c1) + np.outer(a1, c0)
             + np.outer(a2, c3) - np.outer(a3, c2))
    v[2] -= (np.outer(a0, c2) - np.outer(a1, c3)
             + np.outer(a2, c0) + np.outer(a3, c1))
    v[3] -= (np.outer(a0, c3) + np.outer(a1, c2)
             - np.outer(a2, c1) + np.outer(a3, c0))


def _fill_column(q_prev: np.ndarray, m: int) -> np.ndarray:
    """Unit column orthogonal to the columns of q_prev (4, M, p), p < M.

    Deterministic: tries the canonical basis vectors, projects each against
    the existing columns twice, and keeps the largest residual. At least one
    basis vector has residual norm >= sqrt((M - p) / M), so this cannot fail.
    """
    best = None
    best_norm = -1.0
    ct = _conj_transpose_planes(q_prev)
    for t in range(m):
        cand = np.zeros((4, m, 1))
        cand[0, t, 0] = 1.0
        for _ in range(2):
            coeff = _matmul_planes(ct, cand)
            cand -= _matmul_planes(q_prev, coeff)
        cn = math.sqrt(float((cand * cand).sum()))
        if cn > best_norm:
            best_norm = cn
            best = cand
        if cn > 0.9:
            break
    return best[:, :, 0] / best_norm


def _mgs_sweep(v: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Right-looking modified Gram-Schmidt over the columns of v (consumed).

    Column p is normalized into Q, then every remaining column is immediately
    orthogonalized against it; this performs the same arithmetic as the
    classic column-at-a-time MGS loop but in vectorized rank-1 updates.
    """
    _, m, n = v.shape
    q = np.zeros((4, m, k))
    r = np.zeros((4, k, n))
    norms0 = np.sqrt((v * v).sum(axis=(0, 1)))
    for p in range(k):
        col = v[:, :, p]
        rho = math.sqrt(float((col * col).sum()))
        if rho < _DEP_TOL * (norms0[p] + 1.0):
            q[:, :, p] = _fill_column(q[:, :, :p], m)
            # pivot r[p, p] stays exactly zero
        else:
            q[:, :, p] = col / rho
            r[0, p, p] = rho
        if p + 1 < n:
            c = _conj_dot(q[:, :, p], v[:, :, p + 1:])
            r[:, p, p + 1:] = c
            _subtract_outer(v[:, :, p + 1:], q[:, :, p], c)
    return q, r


def qqr(a: QuatMatrix, width: int | None = None) -> QqrResult:
    """Economy quaternion QR factorization of a (M x N).

    Returns Q (M x k) with orthonormal columns and R (k x N) upper triangular
    with real nonnegative pivots, where k = min(M, N) or the requested width.
    Two Gram-Schmidt sweeps are run; the second restores orthogonality lost
    to cancellation, and the R factors compose exactly (R = R2 @ R1 keeps
    zero pivots zero and the strict lower triangle identically zero).
    """
    m, n = a.shape
    k = min(m, n) if width is None else width
    if not 1 <= k <= min(m, n):
        raise ValueError(f"width must lie in [1, {min(m, n)}], got {k}")
    q1, r1 = _mgs_sweep(a.planes.copy(), k)
    q2, r2 = _mgs_sweep(q1, k)
    return QqrResult(Q=QuatMatrix._wrap(q2),
                     R=QuatMatrix._wrap(_matmul_planes(r2, r1)))


def orth(a: QuatMatrix) -> QuatMatrix:
    """Orthonormal basis for the column span of a (M x r, r <= M)."""
    m, r = a.shape
    if r > m:
        raise ValueError(f"need at most as many columns as rows, got {a.shape}")
    return qqr(a).Q


def _fold_vector(w: np.ndarray, m: int) -> np.ndarray:
    # Complex 2M vector [wa; wb] -> quaternion column planes via wa + (-conj(wb)) j.
    top = w[:m]
    bot = -w[m:].conj()
    return np.stack((top.real, top.imag, bot.real, bot.imag))


def qsvd(a: QuatMatrix) -> QsvdResult:
    """Exact economy quaternion SVD via the complex adjoint.

    The adjoint's complex singular values occur in equal adjacent pairs once
    sorted; one representative per pair is kept. Each retained complex
    singular vector folds back to a quaternion vector by reading its top
    block as the Qa part and the negated conjugate bottom block as the Qb
    part. Within a pair the member whose top block carries more mass is
    used, the same index on the left and right side so the triplet stays
    consistent.
    """
    m, n = a.shape
    k = min(m, n)
    w, s, vh = np.linalg.svd(complex_adjoint(a), full_matrices=False)
    sigma = np.empty(k)
    up = np.empty((4, m, k))
    vp = np.empty((4, n, k))
    for t in range(k):
        i = 2 * t
        top_i = float(np.linalg.norm(w[:m, i]))
        top_j = float(np.linalg.norm(w[:m, i + 1]))
        pick = i if top_i >= top_j else i + 1
        sigma[t] = s[i]
        up[:, :, t] = _fold_vector(w[:, pick], m)
        vp[:, :, t] = _fold_vector(vh[pick, :].conj(), n)
    sigma.setflags(write=False)
    return QsvdResult(U=QuatMatrix._wrap(up), sigma=sigma, V=QuatMatrix._wrap(vp))


def svt(a: QuatMatrix, tau: float) -> QuatMatrix:
    """Singular value thresholding: shrink every singular value by tau, clamp at 0."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    f = qsvd(a)
    shrunk = np.maximum(f.sigma - tau, 0.0)
    scaled = QuatMatrix._wrap(f.U.planes * shrunk[None, None, :])
    return scaled @ f.V.H


def nuclear_norm(a: QuatMatrix) -> float:
    """Sum of the singular values."""
    return float(qsvd(a).sigma.sum())
