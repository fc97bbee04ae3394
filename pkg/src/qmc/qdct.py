"""Orthonormal 2D DCT on real/complex planes and the left-handed quaternion DCT.

The quaternion transform splits its input into the Cayley-Dickson pair,
applies the plane DCT to each complex part, rejoins, and left-multiplies every
entry by a pure unit quaternion (the quaternionization factor). Because the
plane transform is orthonormal and the factor has unit norm, the whole
transform preserves the Frobenius norm and inverts exactly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .core import CayleyDicksonPair, QuatMatrix, Quaternion, join, left_scalar_mul, split

__all__ = ["QdctConfig", "DEFAULT_QFACTOR", "dct2", "idct2", "fqdct_l", "iqdct_l"]

_S3 = 1.0 / math.sqrt(3.0)

#: Conventional luminance-axis factor (i + j + k) / sqrt(3).
DEFAULT_QFACTOR = Quaternion(0.0, _S3, _S3, _S3)

_UNIT_TOL = 1e-12


@dataclass(frozen=True)
class QdctConfig:
    """Transform configuration: the quaternionization factor.

    The factor must be a pure unit quaternion (zero real part, norm 1), so
    that it squares to -1 and left-multiplication by it is invertible by
    left-multiplying with its negative.
    """

    qfactor: Quaternion = field(default=DEFAULT_QFACTOR)

    def __post_init__(self):
        q = self.qfactor
        if abs(q.q0) > _UNIT_TOL:
            raise ValueError("quaternionization factor must be pure (zero real part)")
        if abs(q.norm() - 1.0) > _UNIT_TOL:
            raise ValueError("quaternionization factor must have unit norm")


# Cosine basis matrices, one per dimension, built lazily and shared between
# threads. Reads are lock-free; writes go through the lock.
_BASIS: dict[int, np.ndarray] = {}
_BASIS_LOCK = threading.Lock()


def _cos_basis(n: int) -> np.ndarray:
    table = _BASIS.get(n)
    if table is None:
        u = np.arange(n)[:, None]
        x = np.arange(n)[None, :]
        table = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * x + 1) * u / (2 * n))
        table[0, :] = np.sqrt(1.0 / n)
        table.setflags(write=False)
        with _BASIS_LOCK:
            table = _BASIS.setdefault(n, table)
    return table


def dct2(p: np.ndarray) -> np.ndarray:
    """Orthonormal 2D DCT-II of a real or complex plane.

    Complex input transforms its real and imaginary parts independently
    (the cosine basis is real, so one complex matrix product does both).
    """
    p = np.asarray(p)
    cm = _cos_basis(p.shape[0])
    cn = _cos_basis(p.shape[1])
    return cm @ p @ cn.T


def idct2(c: np.ndarray) -> np.ndarray:
    """Exact inverse of :func:`dct2`."""
    c = np.asarray(c)
    cm = _cos_basis(c.shape[0])
    cn = _cos_basis(c.shape[1])
    return cm.T @ c @ cn


def fqdct_l(x: QuatMatrix, cfg: QdctConfig = QdctConfig()) -> QuatMatrix:
    """Left-handed forward quaternion DCT.

    Splits x into its Cayley-Dickson pair, plane-transforms each part, joins
    them back, and left-multiplies every entry by the quaternionization
    factor.
    """
    pair = split(x)
    hat = join(CayleyDicksonPair(qa=dct2(pair.qa), qb=dct2(pair.qb)))
    return left_scalar_mul(cfg.qfactor, hat)


def iqdct_l(c: QuatMatrix, cfg: QdctConfig = QdctConfig()) -> QuatMatrix:
    """Inverse of :func:`fqdct_l`.

    Left-multiplies by the inverse factor (-q, since q is pure and unit),
    then inverts the plane transform of both Cayley-Dickson parts.
    """
    hat = left_scalar_mul(-cfg.qfactor, c)
    pair = split(hat)
    return join(CayleyDicksonPair(qa=idct2(pair.qa), qb=idct2(pair.qb)))
