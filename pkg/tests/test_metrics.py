import math

import numpy as np
import pytest
from skimage.metrics import structural_similarity

from qmc.metrics import ColorImage, psnr, ssim


def random_image(h, w, seed):
    rng = np.random.default_rng(seed)
    return ColorImage(*(rng.uniform(0, 255, (h, w)) for _ in range(3)))


def skimage_ssim(a: ColorImage, b: ColorImage) -> float:
    vals = [
        structural_similarity(x, y, gaussian_weights=True, sigma=1.5,
                              use_sample_covariance=False, data_range=255.0)
        for x, y in zip(a.channels, b.channels)
    ]
    return sum(vals) / 3.0


class TestColorImage:
    def test_clamping(self):
        img = ColorImage([[300.0, -5.0]], [[0.0, 255.0]], [[128.0, 1.0]])
        assert img.r[0, 0] == 255.0 and img.r[0, 1] == 0.0

    def test_dimension_checks(self):
        with pytest.raises(ValueError):
            ColorImage(np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))

    def test_planes_frozen(self):
        img = random_image(4, 4, 0)
        with pytest.raises(ValueError):
            img.r[0, 0] = 1.0


class TestPsnr:
    def test_identical_is_infinite(self):
        img = random_image(8, 8, 1)
        assert psnr(img, img) == math.inf

    def test_full_scale_difference_is_zero_db(self):
        z = np.zeros((4, 4))
        f = np.full((4, 4), 255.0)
        assert psnr(ColorImage(z, z, z), ColorImage(f, f, f)) == pytest.approx(0.0)

    def test_off_by_one_everywhere(self):
        rng = np.random.default_rng(2)
        base = rng.uniform(0, 254, (6, 6))
        ref = ColorImage(base, base, base)
        out = ColorImage(base + 1, base + 1, base + 1)
        assert psnr(ref, out) == pytest.approx(10 * math.log10(255.0 ** 2), rel=1e-12)

    def test_single_sample_perturbation_detected(self):
        img = random_image(5, 5, 3)
        r = img.r.copy()
        r[2, 2] = min(254.0, r[2, 2] + 1.0) if r[2, 2] < 254 else r[2, 2] - 1.0
        out = ColorImage(r, img.g, img.b)
        assert psnr(img, out) < math.inf

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            psnr(random_image(4, 4, 0), random_image(4, 5, 0))


class TestSsim:
    def test_self_similarity_is_one(self):
        img = random_image(16, 16, 4)
        assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)

    def test_symmetry(self):
        a = random_image(12, 12, 5)
        b = random_image(12, 12, 6)
        assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)

    def test_inverted_image_scores_low(self):
        # mid-contrast smooth image against its negative
        y, x = np.mgrid[0:32, 0:32] / 31.0
        plane = 60 + 130 * (0.5 + 0.5 * np.sin(4 * x) * np.cos(3 * y))
        img = ColorImage(plane, plane[::-1], plane.T)
        inv = ColorImage(255 - plane, 255 - plane[::-1], 255 - plane.T)
        score = ssim(img, inv)
        assert score < 0.3
        assert score == pytest.approx(skimage_ssim(img, inv), abs=1e-7)

    def test_matches_reference_implementation(self):
        a = random_image(24, 20, 7)
        b = random_image(24, 20, 8)
        assert ssim(a, b) == pytest.approx(skimage_ssim(a, b), abs=1e-7)
        noisy = ColorImage(np.clip(a.r + 12, 0, 255), a.g, a.b)
        assert ssim(a, noisy) == pytest.approx(skimage_ssim(a, noisy), abs=1e-7)

    def test_too_small_image(self):
        with pytest.raises(ValueError):
            tiny = random_image(8, 8, 9)
            ssim(tiny, tiny)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            ssim(random_image(16, 16, 0), random_image(16, 17, 0))
