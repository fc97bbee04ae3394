import math

import numpy as np
import pytest

from qmc.core import (
    QuatMatrix,
    complex_adjoint,
    fro_norm,
    matmul,
    random_matrix,
)
from qmc.linalg import nuclear_norm, orth, qqr, qsvd, svt


def orth_defect(g: QuatMatrix) -> float:
    p = g.planes.copy()
    p[0] -= np.eye(g.rows)
    return math.sqrt(float((p * p).sum()))


def real_diag(values) -> QuatMatrix:
    d = np.diag(np.asarray(values, dtype=float))
    z = np.zeros_like(d)
    return QuatMatrix.from_planes(d, z, z, z)


def rank_deficient(m: int, cols: int, rank: int, seed: int) -> QuatMatrix:
    base = random_matrix(m, rank, seed)
    mix = random_matrix(rank, cols - rank, seed + 1)
    planes = np.concatenate([base.planes, matmul(base, mix).planes], axis=2)
    return QuatMatrix(planes)


class TestQqr:
    def test_already_orthogonal_diagonal(self):
        a = real_diag([2.0, 3.0])
        f = qqr(a)
        assert np.allclose(f.Q.planes, QuatMatrix.eye(2, 2).planes, atol=1e-15)
        assert np.allclose(f.R.planes, a.planes, atol=1e-15)

    def test_single_imaginary_column(self):
        planes = np.zeros((4, 2, 1))
        planes[1, 0, 0] = 3.0
        planes[1, 1, 0] = 4.0
        f = qqr(QuatMatrix(planes))
        assert f.Q.entry(0, 0).components() == pytest.approx((0, 0.6, 0, 0))
        assert f.Q.entry(1, 0).components() == pytest.approx((0, 0.8, 0, 0))
        assert f.R.entry(0, 0).components() == pytest.approx((5, 0, 0, 0))

    def test_random_tall(self):
        a = random_matrix(20, 8, 1)
        f = qqr(a)
        assert orth_defect(matmul(f.Q.H, f.Q)) < 1e-10
        assert fro_norm(matmul(f.Q, f.R) - a) < 1e-10 * fro_norm(a)

    def test_random_wide(self):
        a = random_matrix(6, 15, 2)
        f = qqr(a)
        assert f.Q.shape == (6, 6)
        assert f.R.shape == (6, 15)
        assert orth_defect(matmul(f.Q.H, f.Q)) < 1e-10
        assert fro_norm(matmul(f.Q, f.R) - a) < 1e-10 * fro_norm(a)

    def test_pivots_real_nonnegative(self):
        for seed in range(4):
            a = random_matrix(12, 7, seed)
            r = qqr(a).R
            for p in range(7):
                d = r.entry(p, p)
                assert d.q0 >= 0.0
                assert abs(d.q1) < 1e-12 and abs(d.q2) < 1e-12 and abs(d.q3) < 1e-12

    def test_upper_triangular(self):
        r = qqr(random_matrix(10, 6, 3)).R
        for p in range(6):
            for q in range(p):
                assert r.entry(p, q).norm() == 0.0

    def test_rank_deficient_columns(self):
        a = rank_deficient(30, 8, 4, 9)
        f = qqr(a)
        assert orth_defect(matmul(f.Q.H, f.Q)) < 1e-10
        assert fro_norm(matmul(f.Q, f.R) - a) < 1e-10 * fro_norm(a)
        pivots = [f.R.entry(p, p).q0 for p in range(8)]
        assert all(p == 0.0 for p in pivots[4:])
        assert all(p > 0.0 for p in pivots[:4])

    def test_zero_column(self):
        planes = random_matrix(5, 3, 4).planes.copy()
        planes[:, :, 1] = 0.0
        f = qqr(QuatMatrix(planes))
        assert f.R.entry(1, 1).norm() == 0.0
        assert orth_defect(matmul(f.Q.H, f.Q)) < 1e-12

    def test_requested_width(self):
        a = random_matrix(10, 6, 5)
        f = qqr(a, width=3)
        assert f.Q.shape == (10, 3)
        assert f.R.shape == (3, 6)
        assert orth_defect(matmul(f.Q.H, f.Q)) < 1e-12

    def test_bad_width(self):
        with pytest.raises(ValueError):
            qqr(random_matrix(4, 4, 0), width=5)


class TestOrth:
    def test_identity_columns(self):
        a = QuatMatrix.eye(6, 3)
        assert np.allclose(orth(a).planes, a.planes, atol=1e-15)

    def test_scaled_identity_columns(self):
        a = QuatMatrix.eye(6, 3) * 2.0
        assert np.allclose(orth(a).planes, QuatMatrix.eye(6, 3).planes, atol=1e-15)

    def test_random(self):
        q = orth(random_matrix(30, 5, 8))
        assert q.shape == (30, 5)
        assert orth_defect(matmul(q.H, q)) < 1e-10

    def test_too_many_columns(self):
        with pytest.raises(ValueError):
            orth(random_matrix(3, 5, 0))


class TestQsvd:
    def test_scalar_cases(self):
        planes = np.zeros((4, 1, 1))
        planes[1, 0, 0] = 2.0
        assert qsvd(QuatMatrix(planes)).sigma[0] == pytest.approx(2.0)
        f = qsvd(real_diag([3.0, 1.0]))
        assert f.sigma == pytest.approx([3.0, 1.0])

    def test_reconstruction_and_orthogonality(self):
        for m, n, seed in [(5, 5, 0), (20, 12, 1), (12, 20, 2), (60, 40, 3)]:
            a = random_matrix(m, n, seed)
            f = qsvd(a)
            k = min(m, n)
            recon = matmul(QuatMatrix._wrap(f.U.planes * f.sigma[None, None, :]), f.V.H)
            assert fro_norm(recon - a) < 1e-10 * fro_norm(a)
            assert orth_defect(matmul(f.U.H, f.U)) < 1e-10
            assert orth_defect(matmul(f.V.H, f.V)) < 1e-10
            assert np.all(np.diff(f.sigma) <= 1e-12)
            assert np.all(f.sigma >= 0)

    def test_low_rank_construction(self):
        a = matmul(random_matrix(40, 4, 10), random_matrix(4, 30, 11))
        sig = qsvd(a).sigma
        assert np.all(sig[4:] < 1e-8 * sig[0])

    def test_adjoint_pairing(self):
        a = random_matrix(9, 7, 21)
        s = np.linalg.svd(complex_adjoint(a), compute_uv=False)
        pairs = s.reshape(-1, 2)
        rel = np.abs(pairs[:, 0] - pairs[:, 1]) / pairs[:, 0]
        assert np.all(rel < 1e-10)


class TestSvt:
    def test_shrink_and_clamp(self):
        out = svt(real_diag([3.0, 0.5]), 1.0)
        assert np.allclose(out.planes, real_diag([2.0, 0.0]).planes, atol=1e-12)

    def test_zeros(self):
        out = svt(QuatMatrix.zeros(3, 3), 0.7)
        assert fro_norm(out) == pytest.approx(0.0, abs=1e-12)

    def test_nuclear_matches_shrunk_sigma(self):
        a = random_matrix(6, 6, 33)
        sig = qsvd(a).sigma
        for tau in (0.5, 2.0, 10.0):
            want = float(np.maximum(sig - tau, 0.0).sum())
            assert nuclear_norm(svt(a, tau)) == pytest.approx(want, abs=1e-9)

    def test_requires_positive_tau(self):
        with pytest.raises(ValueError):
            svt(random_matrix(2, 2, 0), 0.0)


class TestNuclearNorm:
    def test_identity(self):
        assert nuclear_norm(QuatMatrix.eye(3, 3)) == pytest.approx(3.0)

    def test_zeros(self):
        assert nuclear_norm(QuatMatrix.zeros(2, 5)) == pytest.approx(0.0, abs=1e-12)

    def test_invariance_under_orthonormal_factors(self):
        # sandwiching by orthonormal-column L and orthonormal-row R preserves
        # the nuclear norm
        for seed in range(5):
            ell = orth(random_matrix(12, 5, seed))
            arr = orth(random_matrix(10, 5, seed + 50)).H
            dee = random_matrix(5, 5, seed + 100)
            lhs = nuclear_norm(matmul(ell, matmul(dee, arr)))
            rhs = nuclear_norm(dee)
            assert abs(lhs - rhs) <= 1e-8 * rhs
