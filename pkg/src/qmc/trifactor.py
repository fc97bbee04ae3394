"""Iterative tri-factorization X ~ L D R approximating the top-r quaternion SVD.

Starting from identity-shaped factors, each sweep reorients L to an
orthonormal basis of X R^H, reorients R to an orthonormal row basis of
(X^H L)^H, and reads D off the triangular by-product of the second QR. The
captured subspaces converge to the dominant singular subspaces, D converges
to a diagonal whose entry magnitudes are the top-r singular values, and the
squared residual decreases monotonically. Only QR factorizations of tall
M x r and N x r matrices are needed, never a full SVD.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import QuatMatrix, fro_norm, matmul
from .linalg import qqr

__all__ = ["CqsvdConfig", "SweepRecord", "TriFactor", "cqsvd_qqr", "rmse", "diagonal_dominance"]


@dataclass(frozen=True)
class CqsvdConfig:
    """Target rank, residual tolerance and sweep cap for the tri-factorization."""

    r: int
    eps: float = 1e-10
    it_max: int = 100

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("rank must be at least 1")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.it_max < 1:
            raise ValueError("it_max must be at least 1")


@dataclass(frozen=True)
class SweepRecord:
    """Diagnostics captured after each sweep."""

    residual_sq: float
    diag_dominance: float
    orth_defect_l: float
    orth_defect_r: float


@dataclass(frozen=True)
class TriFactor:
    """Result of the tri-factorization.

    L (M x r) has orthonormal columns, R (r x N) orthonormal rows, D is r x r.
    residual is the squared Frobenius error of L D R against the input at
    exit; history holds one record per sweep.
    """

    L: QuatMatrix
    D: QuatMatrix
    R: QuatMatrix
    iterations: int
    residual: float
    history: tuple[SweepRecord, ...]


def _orth_defect(g: QuatMatrix) -> float:
    # ||G - I||_F for a square Gram product G.
    p = g.planes.copy()
    p[0] -= np.eye(g.rows)
    return math.sqrt(float((p * p).sum()))


def cqsvd_qqr(x: QuatMatrix, cfg: CqsvdConfig) -> TriFactor:
    """Factor x into L D R capturing the top cfg.r singular directions.

    Sweeps run until the squared residual drops to cfg.eps or cfg.it_max
    sweeps have been performed. A cheap cross-check asserts that D read from
    the QR by-product agrees with the explicit projection L^H X R^H; a
    mismatch would indicate a broken pivot sign convention.
    """
    m, n = x.shape
    if cfg.r > min(m, n):
        raise ValueError(f"rank {cfg.r} exceeds min(M, N) = {min(m, n)}")
    r = cfg.r
    ell = QuatMatrix.eye(m, r)
    dee = QuatMatrix.eye(r, r)
    arr = QuatMatrix.eye(r, n)
    history: list[SweepRecord] = []
    residual_sq = math.inf
    sweeps = 0
    for _ in range(cfg.it_max):
        sweeps += 1
        ell = qqr(matmul(x, arr.H)).Q
        second = qqr(matmul(x.H, ell))
        arr = second.Q.H
        dee = second.R.H

        if __debug__:
            alt = matmul(matmul(ell.H, x), arr.H)
            drift = fro_norm(dee - alt)
            assert drift <= 1e-8 * (1.0 + fro_norm(alt)), \
                f"triangular by-product disagrees with explicit projection: {drift:g}"

        diff = matmul(ell, matmul(dee, arr)) - x
        residual_sq = fro_norm(diff) ** 2
        history.append(SweepRecord(
            residual_sq=residual_sq,
            diag_dominance=diagonal_dominance(dee),
            orth_defect_l=_orth_defect(matmul(ell.H, ell)),
            orth_defect_r=_orth_defect(matmul(arr, arr.H)),
        ))
        if residual_sq <= cfg.eps:
            break
    return TriFactor(L=ell, D=dee, R=arr, iterations=sweeps,
                     residual=residual_sq, history=tuple(history))


def rmse(x: QuatMatrix, y: QuatMatrix) -> float:
    """Root-mean-square entry error sqrt(||x - y||_F^2 / (M N))."""
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {y.shape}")
    m, n = x.shape
    return fro_norm(x - y) / math.sqrt(m * n)


def diagonal_dominance(d: QuatMatrix) -> float:
    """Fraction of entrywise magnitude mass on the diagonal, in [0, 1].

    Returns 1 for the zero matrix (vacuously diagonal).
    """
    m, n = d.shape
    if m != n:
        raise ValueError("diagonal dominance needs a square matrix")
    mags = np.sqrt((d.planes ** 2).sum(axis=0))
    total = float(mags.sum())
    if total == 0.0:
        return 1.0
    return float(np.trace(mags)) / total
