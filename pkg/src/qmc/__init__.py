"""Quaternion matrix completion toolkit.

Quaternion linear algebra (Hamilton products, QR, SVD), a left-handed
quaternion DCT, an iterative tri-factorization that approximates the top-r
quaternion SVD using only QR sweeps, and an ADMM solver that combines a
low-rank prior with transform-domain sparsity to fill in missing entries of
quaternion matrices, in particular RGB images encoded as pure quaternions.
"""

from .core import (
    CayleyDicksonPair,
    QuatMatrix,
    Quaternion,
    complex_adjoint,
    conj,
    conj_transpose,
    fro_norm,
    hamilton_product,
    join,
    left_scalar_mul,
    matmul,
    norm,
    random_matrix,
    split,
)
from .linalg import QqrResult, QsvdResult, nuclear_norm, orth, qqr, qsvd, svt
from .qdct import QdctConfig, dct2, fqdct_l, idct2, iqdct_l
from .trifactor import CqsvdConfig, TriFactor, cqsvd_qqr, diagonal_dominance, rmse
from .completion import (
    Observation,
    SolveReport,
    SolverConfig,
    SolverState,
    solve,
)
from .metrics import ColorImage, psnr, ssim
from .imageio import (
    MaskSpec,
    gen_mask,
    image_to_quat,
    load_mask_pgm,
    load_ppm,
    quat_to_image,
    save_mask_pgm,
    save_ppm,
)

__version__ = "0.1.0"

__all__ = [
    "CayleyDicksonPair",
    "ColorImage",
    "CqsvdConfig",
    "MaskSpec",
    "Observation",
    "QdctConfig",
    "QqrResult",
    "QsvdResult",
    "QuatMatrix",
    "Quaternion",
    "SolveReport",
    "SolverConfig",
    "SolverState",
    "TriFactor",
    "complex_adjoint",
    "conj",
    "conj_transpose",
    "cqsvd_qqr",
    "dct2",
    "diagonal_dominance",
    "fqdct_l",
    "fro_norm",
    "gen_mask",
    "hamilton_product",
    "idct2",
    "image_to_quat",
    "iqdct_l",
    "join",
    "left_scalar_mul",
    "load_mask_pgm",
    "load_ppm",
    "matmul",
    "norm",
    "nuclear_norm",
    "orth",
    "psnr",
    "qqr",
    "qsvd",
    "quat_to_image",
    "random_matrix",
    "rmse",
    "save_mask_pgm",
    "save_ppm",
    "solve",
    "split",
    "ssim",
    "svt",
]
