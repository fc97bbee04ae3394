"""Netpbm image and mask I/O, image <-> quaternion conversion, mask generation.

Images travel as binary P6 PPM with maxval 255 and masks as binary P5 PGM
whose bytes are exactly 0 (missing) or 255 (observed); both formats round-trip
bit-exactly, so golden-file tests need no external codec.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import QuatMatrix
from .metrics import ColorImage

__all__ = [
    "PnmError",
    "MaskSpec",
    "image_to_quat",
    "quat_to_image",
    "gen_mask",
    "load_ppm",
    "save_ppm",
    "load_mask_pgm",
    "save_mask_pgm",
]


class PnmError(ValueError):
    """Malformed or unsupported netpbm data."""


def image_to_quat(img: ColorImage) -> QuatMatrix:
    """Encode RGB channels as the i/j/k planes of a pure quaternion matrix."""
    zero = np.zeros_like(img.r)
    return QuatMatrix.from_planes(zero, img.r, img.g, img.b)


def quat_to_image(q: QuatMatrix) -> ColorImage:
    """Decode a quaternion matrix to an image.

    The real plane is dropped; channels are rounded to the nearest integer
    and clamped to [0, 255] for 8-bit output.
    """
    return ColorImage(np.rint(q.q1), np.rint(q.q2), np.rint(q.q3))


@dataclass(frozen=True)
class MaskSpec:
    """Recipe for a reproducible observation mask.

    kind "random" removes exactly round(mr * M * N) entries chosen uniformly
    without replacement. kind "rhombus-blocks" removes `blocks` rhombi with
    half-diagonals (d1, d2) in pixels; each center is drawn uniformly over the
    image and then clamped so the whole block fits inside the bounds.
    """

    kind: str
    mr: float = 0.0
    blocks: int = 2
    d1: int = 22
    d2: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("random", "rhombus-blocks"):
            raise ValueError(f"unknown mask kind {self.kind!r}")
        if self.kind == "random" and not 0.0 <= self.mr < 1.0:
            raise ValueError("missing ratio must lie in [0, 1)")
        if self.kind == "rhombus-blocks":
            if self.blocks < 1:
                raise ValueError("need at least one block")
            if self.d1 < 1 or self.d2 < 1:
                raise ValueError("half-diagonals must be at least 1 pixel")


def gen_mask(spec: MaskSpec, m: int, n: int) -> np.ndarray:
    """Boolean observation mask (True = observed) for an M x N matrix.

    Pure function of (spec, m, n): the same inputs produce bit-identical
    masks on every platform.
    """
    if m < 1 or n < 1:
        raise ValueError("mask dimensions must be positive")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    if spec.kind == "random":
        mask = np.ones((m, n), dtype=bool)
        n_missing = int(round(spec.mr * m * n))
        if n_missing >= m * n:
            raise ValueError("missing ratio leaves no observed entries")
        if n_missing > 0:
            idx = rng.choice(m * n, size=n_missing, replace=False)
            mask.flat[idx] = False
        return mask
    if 2 * spec.d1 > m - 1 or 2 * spec.d2 > n - 1:
        raise ValueError(f"rhombus blocks of half-diagonals ({spec.d1}, {spec.d2}) "
                         f"cannot fit inside a {m}x{n} image")
    return _rhombus_mask(spec, m, n, rng)


def _rhombus_mask(spec: MaskSpec, m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    mask = np.ones((m, n), dtype=bool)
    rows = np.arange(m)[:, None]
    cols = np.arange(n)[None, :]
    for _ in range(spec.blocks):
        cm = int(rng.integers(0, m))
        cn = int(rng.integers(0, n))
        cm = min(max(cm, spec.d1), m - 1 - spec.d1)
        cn = min(max(cn, spec.d2), n - 1 - spec.d2)
        inside = (np.abs(rows - cm) / spec.d1 + np.abs(cols - cn) / spec.d2) <= 1.0
        mask &= ~inside
    return mask


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    # Skip whitespace and '#' comment lines, then collect one token.
    size = len(data)
    while pos < size:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < size and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < size and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise PnmError("unexpected end of header")
    return data[start:pos], pos


def _parse_header(data: bytes, magic: bytes) -> tuple[int, int, int]:
    tok, pos = _read_token(data, 0)
    if tok != magic:
        raise PnmError(f"expected magic {magic.decode()}, got {tok!r}")
    fields = []
    for _ in range(3):
        tok, pos = _read_token(data, pos)
        if not tok.isdigit():
            raise PnmError(f"non-numeric header field {tok!r}")
        fields.append(int(tok))
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise PnmError("missing separator before pixel data")
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise PnmError("image dimensions must be positive")
    if maxval != 255:
        raise PnmError(f"unsupported maxval {maxval}; only 8-bit (255) data is handled")
    return width, height, pos + 1


def load_ppm(path) -> ColorImage:
    """Read a binary (P6) PPM file with maxval 255."""
    with open(path, "rb") as fh:
        data = fh.read()
    width, height, start = _parse_header(data, b"P6")
    need = width * height * 3
    raster = data[start:start + need]
    if len(raster) < need:
        raise PnmError(f"truncated pixel data: expected {need} bytes, got {len(raster)}")
    px = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3)
    return ColorImage(px[:, :, 0], px[:, :, 1], px[:, :, 2])


def save_ppm(img: ColorImage, path) -> None:
    """Write a binary (P6) PPM file, header "P6\\n<w> <h>\\n255\\n"."""
    px = np.stack([np.clip(np.rint(c), 0, 255).astype(np.uint8) for c in img.channels],
                  axis=-1)
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(px.tobytes())


def load_mask_pgm(path) -> np.ndarray:
    """Read a binary (P5) PGM mask: byte 255 = observed, 0 = missing."""
    with open(path, "rb") as fh:
        data = fh.read()
    width, height, start = _parse_header(data, b"P5")
    need = width * height
    raster = data[start:start + need]
    if len(raster) < need:
        raise PnmError(f"truncated mask data: expected {need} bytes, got {len(raster)}")
    vals = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    bad = (vals != 0) & (vals != 255)
    if bad.any():
        raise PnmError(f"mask bytes must be 0 or 255; found {int(vals[bad][0])}")
    return vals == 255


def save_mask_pgm(mask: np.ndarray, path) -> None:
    mask = np.asarray(mask, dtype=bool)
    if mask.ndim != 2:
        raise ValueError("mask must be 2-D")
    height, width = mask.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.where(mask, 255, 0).astype(np.uint8).tobytes())
