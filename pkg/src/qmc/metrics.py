"""PSNR and SSIM for 8-bit RGB images."""

from __future__ import annotations

import math

import numpy as np
from scipy.signal import convolve2d

__all__ = ["ColorImage", "psnr", "ssim"]


class ColorImage:
    """RGB image with float64 channel planes clamped to [0, 255].

    Channels are (height, width) arrays; values outside [0, 255] are clamped
    on construction and the planes are frozen afterwards.
    """

    __slots__ = ("r", "g", "b")

    def __init__(self, r, g, b):
        chans = []
        shape = None
        for plane in (r, g, b):
            a = np.asarray(plane, dtype=np.float64)
            if a.ndim != 2:
                raise ValueError("channel planes must be 2-D")
            if shape is None:
                shape = a.shape
            elif a.shape != shape:
                raise ValueError("channel planes must share dimensions")
            a = np.clip(a, 0.0, 255.0)
            a.setflags(write=False)
            chans.append(a)
        if shape[0] < 1 or shape[1] < 1:
            raise ValueError("image dimensions must be positive")
        self.r, self.g, self.b = chans

    @property
    def height(self) -> int:
        return self.r.shape[0]

    @property
    def width(self) -> int:
        return self.r.shape[1]

    @property
    def channels(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.r, self.g, self.b)

    def __repr__(self):
        return f"ColorImage({self.width}x{self.height})"


def psnr(ref: ColorImage, out: ColorImage) -> float:
    """Peak signal-to-noise ratio in dB over all 3*W*H samples, peak 255.

    Identical images return math.inf.
    """
    if (ref.height, ref.width) != (out.height, out.width):
        raise ValueError("image dimensions differ")
    se = 0.0
    for a, b in zip(ref.channels, out.channels):
        d = a - b
        se += float((d * d).sum())
    if se == 0.0:
        return math.inf
    mse = se / (3 * ref.height * ref.width)
    return 10.0 * math.log10(255.0 ** 2 / mse)


# Single-scale SSIM parameters: 11x11 Gaussian window, sigma 1.5,
# K1 = 0.01, K2 = 0.03, dynamic range 255.
_WIN_RADIUS = 5
_SIGMA = 1.5
_C1 = (0.01 * 255.0) ** 2
_C2 = (0.03 * 255.0) ** 2


def _gauss_window() -> np.ndarray:
    x = np.arange(-_WIN_RADIUS, _WIN_RADIUS + 1, dtype=np.float64)
    g = np.exp(-0.5 * (x / _SIGMA) ** 2)
    g /= g.sum()
    return np.outer(g, g)


_WINDOW = _gauss_window()


def _ssim_plane(x: np.ndarray, y: np.ndarray) -> float:
    mu_x = convolve2d(x, _WINDOW, mode="valid")
    mu_y = convolve2d(y, _WINDOW, mode="valid")
    var_x = convolve2d(x * x, _WINDOW, mode="valid") - mu_x * mu_x
    var_y = convolve2d(y * y, _WINDOW, mode="valid") - mu_y * mu_y
    cov = convolve2d(x * y, _WINDOW, mode="valid") - mu_x * mu_y
    num = (2.0 * mu_x * mu_y + _C1) * (2.0 * cov + _C2)
    den = (mu_x * mu_x + mu_y * mu_y + _C1) * (var_x + var_y + _C2)
    return float((num / den).mean())


def ssim(ref: ColorImage, out: ColorImage) -> float:
    """Mean structural similarity, computed per channel and averaged."""
    if (ref.height, ref.width) != (out.height, out.width):
        raise ValueError("image dimensions differ")
    win = 2 * _WIN_RADIUS + 1
    if ref.height < win or ref.width < win:
        raise ValueError(f"image too small for the {win}x{win} window")
    vals = [_ssim_plane(a, b) for a, b in zip(ref.channels, out.channels)]
    return sum(vals) / 3.0
