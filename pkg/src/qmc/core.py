"""Quaternion scalars and dense quaternion matrices stored as real component planes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "QuatMatrix",
    "CayleyDicksonPair",
    "hamilton_product",
    "conj",
    "norm",
    "matmul",
    "conj_transpose",
    "fro_norm",
    "complex_adjoint",
    "left_scalar_mul",
    "split",
    "join",
    "random_matrix",
]


class Quaternion:
    """Scalar q0 + q1*i + q2*j + q3*k with Hamilton multiplication.

    Multiplication follows i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i,
    ki = -ik = j and is therefore non-commutative.
    """

    __slots__ = ("q0", "q1", "q2", "q3")

    def __init__(self, q0=0.0, q1=0.0, q2=0.0, q3=0.0):
        self.q0 = float(q0)
        self.q1 = float(q1)
        self.q2 = float(q2)
        self.q3 = float(q3)

    def conj(self) -> "Quaternion":
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def norm(self) -> float:
        return math.sqrt(self.q0 * self.q0 + self.q1 * self.q1
                         + self.q2 * self.q2 + self.q3 * self.q3)

    __abs__ = norm

    @property
    def is_pure(self) -> bool:
        return self.q0 == 0.0

    def components(self) -> tuple[float, float, float, float]:
        return (self.q0, self.q1, self.q2, self.q3)

    def __add__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.q0 + other.q0, self.q1 + other.q1,
                          self.q2 + other.q2, self.q3 + other.q3)

    def __sub__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.q0 - other.q0, self.q1 - other.q1,
                          self.q2 - other.q2, self.q3 - other.q3)

    def __neg__(self):
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return hamilton_product(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.q0 * other, self.q1 * other,
                              self.q2 * other, self.q3 * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.q0 * other, self.q1 * other,
                              self.q2 * other, self.q3 * other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.q0 / other, self.q1 / other,
                              self.q2 / other, self.q3 / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def __repr__(self):
        return (f"Quaternion({self.q0!r}, {self.q1!r}, "
                f"{self.q2!r}, {self.q3!r})")


def hamilton_product(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a*b (order matters)."""
    return Quaternion(
        a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
        a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
        a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
        a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0,
    )


def conj(q: Quaternion) -> Quaternion:
    return q.conj()


def norm(q: Quaternion) -> float:
    return q.norm()


def _matmul_planes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Hamilton matrix product as 16 real multiply-accumulates over the planes.
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack((
        a0 @ b0 - a1 @ b1 - a2 @ b2 - a3 @ b3,
        a0 @ b1 + a1 @ b0 + a2 @ b3 - a3 @ b2,
        a0 @ b2 - a1 @ b3 + a2 @ b0 + a3 @ b1,
        a0 @ b3 + a1 @ b2 - a2 @ b1 + a3 @ b0,
    ))


def _conj_transpose_planes(p: np.ndarray) -> np.ndarray:
    q0, q1, q2, q3 = p
    return np.stack((q0.T, -q1.T, -q2.T, -q3.T))


class QuatMatrix:
    """Dense M x N quaternion matrix stored as four stacked real planes.

    The backing array has shape (4, M, N) and dtype float64; plane 0 holds the
    real part, planes 1..3 the i/j/k parts. Instances are immutable: the
    backing array is marked read-only, and every operation returns a new
    matrix. This makes values safe to share between threads.
    """

    __slots__ = ("_planes",)

    def __init__(self, planes):
        p = np.array(planes, dtype=np.float64, copy=True)
        if p.ndim != 3 or p.shape[0] != 4:
            raise ValueError(f"expected planes of shape (4, M, N), got {p.shape}")
        if p.shape[1] < 1 or p.shape[2] < 1:
            raise ValueError("matrix dimensions must be positive")
        p.setflags(write=False)
        self._planes = p

    @classmethod
    def _wrap(cls, planes: np.ndarray) -> "QuatMatrix":
        # Internal no-copy constructor; the caller hands over ownership.
        out = object.__new__(cls)
        planes.setflags(write=False)
        out._planes = planes
        return out

    @classmethod
    def from_planes(cls, q0, q1, q2, q3) -> "QuatMatrix":
        arrs = [np.asarray(q, dtype=np.float64) for q in (q0, q1, q2, q3)]
        shape = arrs[0].shape
        if any(a.shape != shape for a in arrs):
            raise ValueError("all four planes must share the same shape")
        return cls(np.stack(arrs))

    @classmethod
    def zeros(cls, m: int, n: int) -> "QuatMatrix":
        return cls._wrap(np.zeros((4, m, n)))

    @classmethod
    def eye(cls, m: int, n: int) -> "QuatMatrix":
        p = np.zeros((4, m, n))
        p[0] = np.eye(m, n)
        return cls._wrap(p)

    @property
    def planes(self) -> np.ndarray:
        return self._planes

    @property
    def q0(self) -> np.ndarray:
        return self._planes[0]

    @property
    def q1(self) -> np.ndarray:
        return self._planes[1]

    @property
    def q2(self) -> np.ndarray:
        return self._planes[2]

    @property
    def q3(self) -> np.ndarray:
        return self._planes[3]

    @property
    def shape(self) -> tuple[int, int]:
        return self._planes.shape[1:]

    @property
    def rows(self) -> int:
        return self._planes.shape[1]

    @property
    def cols(self) -> int:
        return self._planes.shape[2]

    @property
    def is_pure(self) -> bool:
        return bool(np.all(self._planes[0] == 0.0))

    @property
    def H(self) -> "QuatMatrix":
        return conj_transpose(self)

    def entry(self, m: int, n: int) -> Quaternion:
        return Quaternion(*self._planes[:, m, n])

    def __add__(self, other):
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        return QuatMatrix._wrap(self._planes + other._planes)

    def __sub__(self, other):
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        return QuatMatrix._wrap(self._planes - other._planes)

    def __neg__(self):
        return QuatMatrix._wrap(-self._planes)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return QuatMatrix._wrap(self._planes * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return QuatMatrix._wrap(self._planes / float(other))
        return NotImplemented

    def __matmul__(self, other):
        if not isinstance(other, QuatMatrix):
            return NotImplemented
        return matmul(self, other)

    def __repr__(self):
        return f"QuatMatrix(shape={self.shape})"


def matmul(a: QuatMatrix, b: QuatMatrix) -> QuatMatrix:
    """Quaternion matrix product; entry (m,n) is sum_k a(m,k)*b(k,n)."""
    if a.cols != b.rows:
        raise ValueError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    return QuatMatrix._wrap(_matmul_planes(a.planes, b.planes))


def conj_transpose(a: QuatMatrix) -> QuatMatrix:
    return QuatMatrix._wrap(_conj_transpose_planes(a.planes))


def fro_norm(a: QuatMatrix) -> float:
    """Frobenius norm: square root of the sum of all squared plane entries."""
    p = a.planes
    return math.sqrt(float(np.einsum("ijk,ijk->", p, p)))


def left_scalar_mul(q: Quaternion, a: QuatMatrix) -> QuatMatrix:
    """Elementwise left Hamilton product q * a(m,n)."""
    b0, b1, b2, b3 = a.planes
    return QuatMatrix._wrap(np.stack((
        q.q0 * b0 - q.q1 * b1 - q.q2 * b2 - q.q3 * b3,
        q.q0 * b1 + q.q1 * b0 + q.q2 * b3 - q.q3 * b2,
        q.q0 * b2 - q.q1 * b3 + q.q2 * b0 + q.q3 * b1,
        q.q0 * b3 + q.q1 * b2 - q.q2 * b1 + q.q3 * b0,
    )))


def complex_adjoint(a: QuatMatrix) -> np.ndarray:
    """Complex 2M x 2N representation [[Qa, Qb], [-conj(Qb), conj(Qa)]].

    Qa = Q0 + Q1*i and Qb = Q2 + Q3*i. The map is a ring homomorphism:
    it sends quaternion products to complex products and conjugate
    transposes to conjugate transposes.
    """
    q0, q1, q2, q3 = a.planes
    qa = q0 + 1j * q1
    qb = q2 + 1j * q3
    return np.block([[qa, qb], [-qb.conj(), qa.conj()]])


@dataclass(frozen=True)
class CayleyDicksonPair:
    """Complex pair (Qa, Qb) with Q = Qa + Qb*j; a pure repacking of planes."""

    qa: np.ndarray
    qb: np.ndarray


def split(a: QuatMatrix) -> CayleyDicksonPair:
    q0, q1, q2, q3 = a.planes
    return CayleyDicksonPair(qa=q0 + 1j * q1, qb=q2 + 1j * q3)


def join(pair: CayleyDicksonPair) -> QuatMatrix:
    qa = np.asarray(pair.qa)
    qb = np.asarray(pair.qb)
    if qa.shape != qb.shape:
        raise ValueError("Cayley-Dickson parts must share a shape")
    return QuatMatrix._wrap(np.stack((
        qa.real.astype(np.float64),
        qa.imag.astype(np.float64),
        qb.real.astype(np.float64),
        qb.imag.astype(np.float64),
    )))


def random_matrix(m: int, n: int, seed: int) -> QuatMatrix:
    """Seeded random quaternion matrix, all four planes i.i.d. standard normal.

    Draws come from numpy's PCG64 generator, so a fixed seed reproduces the
    same matrix on any platform.
    """
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    return QuatMatrix._wrap(rng.standard_normal((4, m, n)))
