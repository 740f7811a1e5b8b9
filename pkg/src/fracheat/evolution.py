"""Mild-solution machinery for u_t = -D^{2a}u + sigma u^2 on the torus.

The integral form is u(t) = S(t)u0 + sigma * L(u^2)(t) with
L(f)(t) = int_0^t S(t - r) f(r) dr. L is discretized by the exponential
trapezoid rule, which propagates the linear semigroup exactly and applies
a trapezoid correction to the source:

    I(t + dt) = E * I(t) + (dt/2) * (E * f(t) + f(t + dt)),  E = e^{-dt |xi|^{2a}}

The scheme is unconditionally stable for the stiff multiplier and second
order in dt. The fixed-point solver iterates the integral map itself, so
its per-iteration difference norms double as contraction diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import SolveConfig
from .dyadic import DyadicPartition, make_partition, sobolev_norm, x_norm
from .errors import DimensionError, DomainError, ResolutionError
from .grid import (SpectralField, TorusGrid, apply_semigroup, check_alpha,
                   dealiased_product_coeffs)
from .trajectory import Trajectory

__all__ = [
    "SolveConfig",
    "IterationReport",
    "duhamel_integrate",
    "fixed_point_solve",
    "integral_residual",
    "weighted_sup_norm",
    "smoothing_constant",
    "existence_time_estimate",
    "dilation_rescale",
]


def duhamel_integrate(source: Trajectory, alpha: float) -> Trajectory:
    """L(f)(t_i) = int_0^{t_i} S(t_i - r) f(r) dr along the source nodes."""
    check_alpha(alpha)
    g = source.grid
    sym = np.abs(g.frequencies) ** (2.0 * alpha)
    decay = np.exp(-source.dt * sym)
    half = 0.5 * source.dt
    out = np.zeros_like(source.coeffs)
    for i in range(source.n_nodes - 1):
        out[i + 1] = decay * out[i] + half * (decay * source.coeffs[i]
                                              + source.coeffs[i + 1])
    return Trajectory(g, source.dt, out, is_real=source.is_real)


def _free_coeffs(u0: SpectralField, times: np.ndarray, alpha: float) -> np.ndarray:
    sym = np.abs(u0.grid.frequencies) ** (2.0 * alpha)
    return u0.coeffs[None, :] * np.exp(-np.outer(times, sym))


def _squared_coeffs(traj_coeffs: np.ndarray, grid: TorusGrid,
                    is_real: bool) -> np.ndarray:
    out = np.empty_like(traj_coeffs)
    for i in range(traj_coeffs.shape[0]):
        row = traj_coeffs[i]
        out[i] = dealiased_product_coeffs(row, row, grid, real_inputs=is_real)
    return out


@dataclass(frozen=True)
class IterationReport:
    """Per-iteration record of one fixed-point solve.

    diff_norms[m] is the X-norm of u^{(m+1)} - u^{(m)}; contraction_factors
    are their successive ratios. A blow-up (NaN/Inf in an iterate) is data,
    not an exception: blowup_time carries the first offending node time.
    """

    diff_norms: tuple
    contraction_factors: tuple
    converged: bool
    n_iter: int
    blowup_time: Optional[float] = None

    @property
    def diverged(self) -> bool:
        return not self.converged


def fixed_point_solve(u0: SpectralField, config: SolveConfig):
    """Iterate u -> S u0 + sigma L(u^2) from the free flow; returns
    (trajectory, IterationReport).

    Convergence is declared when the X-norm of the difference of successive
    iterates drops below picard_tol. Non-convergence within max_iter yields
    converged=False (ill-posedness experiments consume these reports); a
    non-finite iterate stops immediately and reports the blow-up time, the
    last finite iterate being returned.
    """
    g = u0.grid
    config.check_stability(g.max_frequency)
    times = config.dt * np.arange(config.n_steps + 1)
    free = _free_coeffs(u0, times, config.alpha)
    part = make_partition(g)

    cur = free.copy()
    diff_norms = []
    converged = False
    blowup_time = None
    n_iter = 0
    for _ in range(config.max_iter):
        n_iter += 1
        if config.sign == 0:
            new = free
        else:
            # overflow during a genuine blow-up is caught below, not warned
            with np.errstate(over="ignore", invalid="ignore"):
                sq = _squared_coeffs(cur, g, u0.is_real)
                src = Trajectory(g, config.dt, sq, is_real=u0.is_real)
                new = free + config.sign * duhamel_integrate(src,
                                                             config.alpha).coeffs
        bad = ~np.isfinite(new)
        if bad.any():
            blowup_time = float(times[int(np.argwhere(bad.any(axis=1))[0, 0])])
            break
        diff = Trajectory(g, config.dt, new - cur, is_real=u0.is_real)
        # huge pre-blow-up iterates may overflow the norm; inf is handled
        with np.errstate(over="ignore", invalid="ignore"):
            d = x_norm(diff, config.s, config.q, config.alpha, part)
        diff_norms.append(d)
        cur = new
        if d < config.picard_tol:
            converged = True
            break
    factors = tuple(diff_norms[i + 1] / diff_norms[i]
                    for i in range(len(diff_norms) - 1)
                    if diff_norms[i] > 0)
    report = IterationReport(tuple(diff_norms), factors, converged,
                             n_iter, blowup_time)
    return Trajectory(g, config.dt, cur, is_real=u0.is_real), report


def integral_residual(traj: Trajectory, u0: SpectralField,
                      config: SolveConfig) -> float:
    """Certificate norm ||u - S u0 - sigma L(u^2)||_{Linf_T L^2}.

    A converged fixed_point_solve output keeps this below 10 * picard_tol.
    """
    g = traj.grid
    if g != u0.grid:
        raise DimensionError("trajectory and datum live on different grids")
    times = traj.dt * np.arange(traj.n_nodes)
    rhs = _free_coeffs(u0, times, config.alpha)
    if config.sign != 0:
        sq = _squared_coeffs(traj.coeffs, g, traj.is_real)
        src = Trajectory(g, traj.dt, sq, is_real=traj.is_real)
        rhs = rhs + config.sign * duhamel_integrate(src, config.alpha).coeffs
    defect = traj.coeffs - rhs
    node_l2 = np.sqrt(g.period * np.sum(np.abs(defect) ** 2, axis=1))
    return float(np.max(node_l2))


def weighted_sup_norm(traj: Trajectory, s0: float, s: float,
                      alpha: float) -> float:
    """sup over nodes t > 0 of t^{(s0-s)/(2a)} ||u(t)||_{H^{s0}}.

    The t = 0 node carries a vanishing or singular weight and is excluded.
    """
    check_alpha(alpha)
    if not s0 > s:
        raise DomainError(f"need s0 > s, got s0={s0}, s={s}")
    if traj.n_nodes < 2:
        raise DomainError("weighted sup norm needs at least one node with t > 0")
    w = (s0 - s) / (2.0 * alpha)
    best = 0.0
    for i in range(1, traj.n_nodes):
        t = traj.dt * i
        best = max(best, t**w * sobolev_norm(traj.field(i), s0))
    return best


_PROBE_GRID = (64.0, 8192)


def smoothing_constant(s1: float, s2: float, alpha: float, t: float,
                       grid: TorusGrid = None, n_probe: int = 400) -> float:
    """Empirical constant in ||S(t)f||_{H^{s2}} <= C t^{-(s2-s1)/(2a)} ||f||_{H^{s1}}.

    Probes single-mode fields on a log-spaced scan of lattice modes and
    returns the max of t^{(s2-s1)/(2a)} ||S(t)f||_{H^{s2}} / ||f||_{H^{s1}}.
    """
    check_alpha(alpha)
    if s2 < s1:
        raise DomainError(f"need s2 >= s1, got s1={s1}, s2={s2}")
    if not t > 0:
        raise DomainError(f"need t > 0, got {t}")
    if grid is None:
        grid = TorusGrid(*_PROBE_GRID)
    k_max = grid.mode_count // 2 - 1
    ks = np.unique(np.rint(np.geomspace(1, k_max, n_probe)).astype(int))
    ks = np.concatenate([[0], ks])
    weight = t ** ((s2 - s1) / (2.0 * alpha))
    best = 0.0
    for k in ks:
        c = np.zeros(grid.mode_count, dtype=complex)
        c[k] = 1.0
        f = SpectralField(grid, c, is_real=False)
        ratio = sobolev_norm(apply_semigroup(f, t, alpha), s2) / sobolev_norm(f, s1)
        best = max(best, weight * ratio)
    return best


_REGIMES = ("subcritical", "critical", "s-half")


def existence_time_estimate(u0_norm: float, alpha: float, s: float,
                            regime: str) -> float:
    """Guaranteed-existence-time power law, unit prefactor.

    regimes: "subcritical" gives (1 + N)^{-4a/(2a-1)} for the B^{-a,2} theory
    (a > 1/2); "critical" gives N^{-2a/(s-(1/2-2a))} for s above the scaling
    line; "s-half" gives N^{-4/3} at s = 1/2. Only the exponents carry
    content; prefactors are a reporting convention.
    """
    check_alpha(alpha)
    if u0_norm < 0:
        raise DomainError(f"norm must be nonnegative, got {u0_norm}")
    if regime == "subcritical":
        if not alpha > 0.5:
            raise DomainError(f"subcritical regime needs alpha > 1/2, got {alpha}")
        return float((1.0 + u0_norm) ** (-4.0 * alpha / (2.0 * alpha - 1.0)))
    if regime == "critical":
        gap = s - (0.5 - 2.0 * alpha)
        if not gap > 0:
            raise DomainError(
                f"critical regime needs s > 1/2 - 2 alpha, got s={s}, alpha={alpha}")
        if u0_norm == 0:
            raise DomainError("critical power law needs a positive norm")
        return float(u0_norm ** (-2.0 * alpha / gap))
    if regime == "s-half":
        if u0_norm == 0:
            raise DomainError("s-half power law needs a positive norm")
        return float(u0_norm ** (-4.0 / 3.0))
    raise DomainError(f"unknown regime {regime!r}; expected one of {_REGIMES}")


def dilation_rescale(traj: Trajectory, lam_d: float, alpha: float) -> Trajectory:
    """Dilation u(t,x) -> lam^{2a} u(lam^{2a} t, lam x) realized exactly.

    The target torus has period lam/lam_d and the same mode count, so the
    sample points lam_d * x'_n coincide with the source lattice: each node
    maps to coefficients lam_d^{2a} c_k on relabeled frequencies, and the
    node times rescale to dt / lam_d^{2a}. Solutions map to solutions.
    """
    check_alpha(alpha)
    if not lam_d > 0:
        raise DomainError(f"dilation scale must be positive, got {lam_d}")
    new_period = traj.grid.period / lam_d
    if new_period < 1.0:
        raise ResolutionError(
            f"dilated period {new_period} drops below the minimum 1; "
            f"resampling across incompatible grids is not supported")
    target = TorusGrid(new_period, traj.grid.mode_count)
    scale = lam_d ** (2.0 * alpha)
    return Trajectory(target, traj.dt / scale, scale * traj.coeffs,
                      is_real=traj.is_real)
