"""ADMM solver for low-rank + sparse quaternion matrix completion.

The model seeks X = L D R with L, R kept orthonormal, a small nuclear norm of
the r x r core D, and an l1-sparse image of X under the left-handed quaternion
DCT, subject to X agreeing with the observations. Each iteration runs one
tri-factorization sweep on the multiplier-shifted iterate, shrinks the core's
singular values, averages the low-rank and sparse estimates into X (re-imposing
the observed entries exactly), soft-thresholds the transform coefficients, and
finally performs the dual ascent and penalty growth.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import QuatMatrix, fro_norm, matmul
from .linalg import qqr, svt
from .qdct import QdctConfig, fqdct_l, iqdct_l

__all__ = [
    "Observation",
    "SolverConfig",
    "SolverState",
    "SolveReport",
    "IterationStats",
    "quat_soft_threshold",
    "solve",
    "update_lr",
    "update_d",
    "update_x",
    "update_w",
    "update_multipliers",
    "stop_check",
]


class Observation:
    """Observed quaternion matrix plus boolean mask (True = observed).

    Entries outside the observed set are zeroed on construction so the stored
    matrix always satisfies the solver's input contract.
    """

    __slots__ = ("M", "mask")

    def __init__(self, m: QuatMatrix, mask: np.ndarray):
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != m.shape:
            raise ValueError(f"mask shape {mask.shape} differs from data shape {m.shape}")
        if not mask.any():
            raise ValueError("mask has no observed entries")
        mask = mask.copy()
        mask.setflags(write=False)
        self.mask = mask
        self.M = QuatMatrix._wrap(np.where(mask[None, :, :], m.planes, 0.0))

    @property
    def shape(self) -> tuple[int, int]:
        return self.M.shape

    @property
    def missing_ratio(self) -> float:
        return 1.0 - float(self.mask.mean())


@dataclass(frozen=True)
class SolverConfig:
    """Solver parameters.

    lam weights the transform-domain sparsity term; mu0/gamma/mu_max drive the
    penalty schedule mu <- min(gamma * mu, mu_max); r is the factor rank. The
    loop stops once the relative change of X falls below tol or it_max
    iterations have run. With sparse=False the transform, W and Z are skipped
    entirely and only the low-rank prior remains.

    The default lam/mu0 are calibrated for entries of order one, e.g. images
    scaled to [0, 1]; data at a very small scale can be swallowed whole by the
    initial thresholds (1/mu0 and 4*lam/mu0), freezing the iteration.
    """

    r: int
    lam: float = 0.1
    mu0: float = 0.05
    mu_max: float = 1e8
    gamma: float = 1.15
    tol: float = 1e-5
    it_max: int = 300
    qdct: QdctConfig = field(default_factory=QdctConfig)
    sparse: bool = True

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("rank must be at least 1")
        if self.lam <= 0:
            raise ValueError("lambda must be positive")
        if self.mu0 <= 0:
            raise ValueError("mu0 must be positive")
        if self.mu_max < self.mu0:
            raise ValueError("mu_max must not be below mu0")
        if self.gamma < 1.0:
            raise ValueError("gamma must be at least 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.it_max < 1:
            raise ValueError("it_max must be at least 1")

    def as_dict(self) -> dict:
        return {
            "rank": self.r,
            "lambda": self.lam,
            "mu0": self.mu0,
            "mu_max": self.mu_max,
            "gamma": self.gamma,
            "tol": self.tol,
            "max_iter": self.it_max,
            "qfactor": list(self.qdct.qfactor.components()),
            "sparse": self.sparse,
        }


@dataclass
class SolverState:
    """All iterates of the solver; owned exclusively by one solve call."""

    X: QuatMatrix
    W: QuatMatrix
    Y: QuatMatrix
    Z: QuatMatrix
    L: QuatMatrix
    D: QuatMatrix
    R: QuatMatrix
    mu: float
    t: int
    cfg: SolverConfig
    # internal caches carried between steps of one iteration
    _d_qr: Optional[QuatMatrix] = None
    _low: Optional[QuatMatrix] = None
    _tx: Optional[QuatMatrix] = None


@dataclass(frozen=True)
class IterationStats:
    t: int
    mu: float
    rel_change: float
    lowrank_residual: float
    sparse_residual: float


@dataclass(frozen=True)
class SolveReport:
    """Run summary: iteration count, final residuals, timing, config echo."""

    iterations: int
    final_rel_change: float
    lowrank_residual: float
    sparse_residual: float
    wall_time: float
    config: dict


def quat_soft_threshold(a: QuatMatrix, level: float) -> QuatMatrix:
    """Elementwise quaternion soft threshold.

    Each entry keeps its direction and has its magnitude reduced by level,
    clamping at zero; zero entries stay zero.
    """
    mags = np.sqrt((a.planes ** 2).sum(axis=0))
    scale = np.maximum(mags - level, 0.0) / np.maximum(mags, np.finfo(float).tiny)
    return QuatMatrix._wrap(a.planes * scale[None, :, :])


def init_state(obs: Observation, cfg: SolverConfig) -> SolverState:
    m, n = obs.shape
    if cfg.r > min(m, n):
        raise ValueError(f"rank {cfg.r} exceeds min(M, N) = {min(m, n)}")
    return SolverState(
        X=obs.M,
        W=QuatMatrix.zeros(m, n),
        Y=QuatMatrix.zeros(m, n),
        Z=QuatMatrix.zeros(m, n),
        L=QuatMatrix.eye(m, cfg.r),
        D=QuatMatrix.eye(cfg.r, cfg.r),
        R=QuatMatrix.eye(cfg.r, n),
        mu=cfg.mu0,
        t=0,
        cfg=cfg,
    )


def _shifted(state: SolverState) -> QuatMatrix:
    return state.X + state.Y / state.mu


def update_lr(state: SolverState, obs: Observation) -> SolverState:
    """One tri-factorization sweep on X + Y/mu: reorient L, then R."""
    b = _shifted(state)
    state.L = qqr(matmul(b, state.R.H)).Q
    second = qqr(matmul(b.H, state.L))
    state.R = second.Q.H
    state._d_qr = second.R.H
    return state


def update_d(state: SolverState, obs: Observation) -> SolverState:
    """Shrink the singular values of the projected core by 1/mu."""
    b = _shifted(state)
    core = matmul(matmul(state.L.H, b), state.R.H)
    if __debug__ and state._d_qr is not None:
        drift = fro_norm(core - state._d_qr)
        assert drift <= 1e-6 * (1.0 + fro_norm(core)), \
            f"core projection disagrees with QR by-product: {drift:g}"
    state.D = svt(core, 1.0 / state.mu)
    return state


def update_x(state: SolverState, obs: Observation) -> SolverState:
    """Blend the low-rank and sparse estimates, then restore observed entries."""
    low = matmul(state.L, matmul(state.D, state.R))
    state._low = low
    if state.cfg.sparse:
        back = iqdct_l(state.W + state.Z / state.mu, state.cfg.qdct)
        est = (low - state.Y / state.mu + back) * 0.5
    else:
        est = low - state.Y / state.mu
    planes = np.where(obs.mask[None, :, :], obs.M.planes, est.planes)
    state.X = QuatMatrix._wrap(planes)
    return state


def update_w(state: SolverState) -> SolverState:
    """Soft-threshold the shifted transform coefficients at level 4*lambda/mu."""
    if not state.cfg.sparse:
        return state
    tx = fqdct_l(state.X, state.cfg.qdct)
    state._tx = tx
    state.W = quat_soft_threshold(tx - state.Z / state.mu, 4.0 * state.cfg.lam / state.mu)
    return state


def update_multipliers(state: SolverState) -> SolverState:
    """Dual ascent on both constraints, then grow the penalty."""
    state.Y = state.Y + (state.X - state._low) * state.mu
    if state.cfg.sparse:
        state.Z = state.Z + (state.W - state._tx) * state.mu
    state.mu = min(state.cfg.gamma * state.mu, state.cfg.mu_max)
    state.t += 1
    return state


def stop_check(prev_x: QuatMatrix, x: QuatMatrix, t: int, cfg: SolverConfig) -> bool:
    """True once X has stopped moving relative to tol, or the budget is spent."""
    if t >= cfg.it_max:
        return True
    rel = fro_norm(x - prev_x) / max(fro_norm(prev_x), 1e-12)
    return rel < cfg.tol


Callback = Callable[[SolverState, IterationStats], None]


def solve(obs: Observation, cfg: SolverConfig,
          callback: Optional[Callback] = None,
          trace=None) -> tuple[QuatMatrix, SolveReport]:
    """Run the completion solver to convergence.

    The returned X agrees with the observations exactly on the observed set.
    callback, if given, is invoked after every iteration with the current
    state and its statistics. trace may be a path or writable text stream;
    it receives CSV rows "t,mu,rel_change,lowrank_residual,sparse_residual".
    """
    state = init_state(obs, cfg)
    own_trace = None
    sink = None
    if trace is not None:
        if hasattr(trace, "write"):
            sink = trace
        else:
            own_trace = open(trace, "w", encoding="ascii")
            sink = own_trace
        sink.write("t,mu,rel_change,lowrank_residual,sparse_residual\n")

    start = time.perf_counter()
    stats = IterationStats(0, cfg.mu0, math.inf, math.inf, math.nan)
    try:
        while True:
            prev_x = state.X
            mu_used = state.mu
            update_lr(state, obs)
            update_d(state, obs)
            update_x(state, obs)
            update_w(state)
            update_multipliers(state)

            rel = fro_norm(state.X - prev_x) / max(fro_norm(prev_x), 1e-12)
            low_res = fro_norm(state.X - state._low)
            if cfg.sparse:
                sparse_res = fro_norm(state.W - state._tx)
            else:
                sparse_res = math.nan
            stats = IterationStats(t=state.t, mu=mu_used, rel_change=rel,
                                   lowrank_residual=low_res,
                                   sparse_residual=sparse_res)
            if sink is not None:
                sink.write(f"{stats.t},{stats.mu:.10g},{stats.rel_change:.10g},"
                           f"{stats.lowrank_residual:.10g},{stats.sparse_residual:.10g}\n")
            if callback is not None:
                callback(state, stats)
            if stop_check(prev_x, state.X, state.t, cfg):
                break
    finally:
        if own_trace is not None:
            own_trace.close()

    report = SolveReport(
        iterations=state.t,
        final_rel_change=stats.rel_change,
        lowrank_residual=stats.lowrank_residual,
        sparse_residual=stats.sparse_residual,
        wall_time=time.perf_counter() - start,
        config=cfg.as_dict(),
    )
    return state.X, report
