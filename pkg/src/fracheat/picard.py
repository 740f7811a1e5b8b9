"""Picard/Taylor expansion of the quadratic heat flow in frequency variables.

Terms follow the recurrence A_1(t) = S(t) u0,
A_k(t) = sigma sum_{k1+k2=k} int_0^t S(t-t') A_{k1}(t') A_{k2}(t') dt' (k >= 2),
so u = sum_k A_k solves u = S u0 + sigma L(u^2) order by order; replacing the
seed by mu*u0 scales A_k by mu^k, and flipping sigma flips every even term.

second_iterate_hat is a different normalization kept deliberately: it returns
the lattice Riemann sum of 2 int phihat(xi1) phihat(xi-xi1) K(xi,xi1,t) dxi1,
the raw convolution-form transform WITHOUT the 1/2pi of F(fg) = (1/2pi)Ff*Fg.
Against the series term this means second_iterate_hat(xi_k) equals
4 pi lam sigma c_k(A_2(t)) exactly in the continuum-time limit; the factor is
pure bookkeeping and the dual-route tests exercise the time quadrature only.
"""

from __future__ import annotations

from typing import Callable, List, Sequence

import numpy as np

from . import _kernels
from .config import SolveConfig
from .errors import ConfigError, DomainError, ResolutionError
from .grid import SpectralField, TorusGrid, check_alpha, fractional_symbol
from .trajectory import Trajectory


def theta(xi, xi1, alpha: float):
    """Symbol mismatch |xi|^{2a} - |xi1|^{2a} - |xi-xi1|^{2a}."""
    check_alpha(alpha)
    p = 2.0 * alpha
    xi = np.asarray(xi, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    out = np.abs(xi) ** p - np.abs(xi1) ** p - np.abs(xi - xi1) ** p
    return float(out) if out.ndim == 0 else out


def duhamel_kernel(xi, xi1, t: float, alpha: float):
    """Nonnegative kernel e^{-|xi|^{2a}t} (e^{theta t}-1)/theta.

    The quotient is computed via expm1; |theta t| < 1e-6 switches to
    t e^{-|xi|^{2a}t} (1 + theta t/2 + (theta t)^2/6).
    """
    check_alpha(alpha)
    if t < 0:
        raise DomainError(f"kernel time must be >= 0, got {t}")
    xi = np.asarray(xi, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    a, b = np.broadcast_arrays(xi, xi1)
    shape = a.shape
    out = _kernels.duhamel_kernel_values(
        np.ascontiguousarray(a, dtype=float).ravel(),
        np.ascontiguousarray(b, dtype=float).ravel(), float(t), float(alpha))
    return float(out[0]) if shape == () else out.reshape(shape)


def second_iterate_hat(phihat: Callable[[np.ndarray], np.ndarray], t: float,
                       xi, alpha: float, lattice: TorusGrid):
    """Closed-form second iterate transform at frequencies xi.

    Riemann sum 2 (2 pi/lam) sum_{xi1 lattice} phihat(xi1) phihat(xi-xi1)
    K(xi, xi1, t) over the support of phihat, which must sit strictly inside
    the lattice band.
    """
    check_alpha(alpha)
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    freqs = lattice.frequencies
    w1 = np.asarray(phihat(freqs), dtype=float)
    if w1.shape != freqs.shape:
        raise DomainError("phihat returned wrong shape on the lattice")
    lo, hi = np.argmin(freqs), np.argmax(freqs)
    if w1[lo] != 0.0 or w1[hi] != 0.0:
        raise ResolutionError(
            "phihat support reaches the edge of the lattice band; enlarge the band")
    nz = np.flatnonzero(w1)
    targets = np.atleast_1d(np.asarray(xi, dtype=float))
    if nz.size == 0:
        vals = np.zeros(targets.shape[0])
    else:
        xi1 = np.ascontiguousarray(freqs[nz])
        w = w1[nz][None, :] * np.asarray(phihat(targets[:, None] - xi1[None, :]),
                                         dtype=float)
        prefac = 4.0 * np.pi / lattice.period
        vals = _kernels.second_iterate_values(
            targets, xi1, np.ascontiguousarray(w), float(t), float(alpha), prefac)
    return float(vals[0]) if np.isscalar(xi) or np.ndim(xi) == 0 else vals


def picard_terms(seed: SpectralField, n_terms: int, config: SolveConfig,
                 store_stride: int = 1) -> List[Trajectory]:
    """First n_terms Taylor trajectories A_1..A_k of the flow from `seed`.

    Exponential-trapezoid time stepping on the shared Duhamel structure;
    quadratic sources are 2/3-rule dealiased. store_stride keeps every
    stride-th node (stride must divide the step count), so large-M runs can
    retain endpoints only.
    """
    if n_terms < 1:
        raise DomainError(f"need at least one term, got {n_terms}")
    grid = seed.grid
    config.check_stability(grid.max_frequency)
    n = config.n_steps
    if store_stride < 1 or n % store_stride != 0:
        raise ConfigError(
            f"store_stride {store_stride} must divide the step count {n}")
    m = grid.mode_count
    sigma = float(config.sign)
    decay = np.exp(-config.dt * fractional_symbol(grid, config.alpha))
    mask = grid.dealias_mask
    real = seed.is_real

    def to_phys(c):
        # inputs to quadratic sources must themselves be 2/3-rule truncated
        s = np.fft.ifft(np.where(mask, c, 0.0)) * m
        return s.real if real else s

    def to_freq_masked(s):
        c = np.fft.fft(s) / m
        c[~mask] = 0.0
        return c

    coeff = [None] + [np.zeros(m, dtype=complex) for _ in range(n_terms)]
    coeff[1] = seed.coeffs.copy()
    phys = [None] + [to_phys(coeff[k]) for k in range(1, n_terms + 1)]
    # f_k(t) = sum over splits of the physical product, transformed and masked
    fprev = [None, None]
    for k in range(2, n_terms + 1):
        src = np.zeros(m, dtype=complex if not real else float)
        for k1 in range(1, k):
            src = src + phys[k1] * phys[k - k1]
        fprev.append(to_freq_masked(src))

    n_stored = n // store_stride + 1
    stored = [np.zeros((n_stored, m), dtype=complex) for _ in range(n_terms)]
    stored[0][0] = coeff[1]
    row = 1
    half = 0.5 * config.dt * sigma
    for i in range(1, n + 1):
        coeff[1] = decay * coeff[1]
        phys[1] = to_phys(coeff[1])
        for k in range(2, n_terms + 1):
            src = np.zeros(m, dtype=complex if not real else float)
            for k1 in range(1, k):
                src = src + phys[k1] * phys[k - k1]
            fnext = to_freq_masked(src)
            coeff[k] = decay * coeff[k] + half * (decay * fprev[k] + fnext)
            fprev[k] = fnext
            phys[k] = to_phys(coeff[k])
        if i % store_stride == 0:
            for k in range(1, n_terms + 1):
                stored[k - 1][row] = coeff[k]
            row += 1
    out_dt = config.dt * store_stride
    return [Trajectory(grid, out_dt, arr, is_real=real) for arr in stored]


def _log_pow(base: float, expo: float) -> float:
    return expo * np.log(base)


def tail_bound(k: int, n_freq: int, r: float, t: float, c0: float) -> float:
    """Series-tail majorant 8^k c0^{k-1} (N+ln k)^{1/2} R^k 2^{(k-1)N} k t^{k-1}
    for the H^{-1/2} size of term k >= 3 at window exponent N."""
    if k < 3:
        raise DomainError(f"tail bound applies to k >= 3, got {k}")
    if r <= 0 or c0 <= 0 or n_freq < 1:
        raise DomainError("need r > 0, c0 > 0, n_freq >= 1")
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0.0:
        return 0.0
    log_val = (k * np.log(8.0) + (k - 1) * np.log(c0)
               + 0.5 * np.log(n_freq + np.log(k)) + k * np.log(r)
               + (k - 1) * n_freq * np.log(2.0) + np.log(k)
               + (k - 1) * np.log(t))
    return float(np.exp(log_val))


def modulation_growth_bound(k: int, n_freq: int, r: float, t: float,
                            c0: float) -> float:
    """Modulation-norm majorant 4^k c0^{k-1} t^{k-1} R^k 2^{(2k-1)N/2}, k >= 1."""
    if k < 1:
        raise DomainError(f"term index must be >= 1, got {k}")
    if r <= 0 or c0 <= 0 or n_freq < 1:
        raise DomainError("need r > 0, c0 > 0, n_freq >= 1")
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    if t == 0.0 and k > 1:
        return 0.0
    log_val = (k * np.log(4.0) + (k - 1) * np.log(c0)
               + ((k - 1) * np.log(t) if k > 1 else 0.0) + k * np.log(r)
               + 0.5 * (2 * k - 1) * n_freq * np.log(2.0))
    return float(np.exp(log_val))


def hs_norm_from_hat_scan(xi_scan: np.ndarray, hat_values: np.ndarray,
                          s: float) -> float:
    """H^s norm of an even continuum transform sampled on a nonnegative scan.

    Trapezoid of (1/2pi) int (1+xi^2)^s |hat|^2 dxi, doubled for the xi < 0
    half; the scan must start at 0 and increase.
    """
    xi = np.asarray(xi_scan, dtype=float)
    if xi[0] != 0.0 or np.any(np.diff(xi) <= 0):
        raise DomainError("scan must start at 0 and be strictly increasing")
    integrand = (1.0 + xi**2) ** s * np.asarray(hat_values, dtype=float) ** 2
    return float(np.sqrt(2.0 * np.trapezoid(integrand, xi) / (2.0 * np.pi)))


def series_sum_field(terms: Sequence[Trajectory], node: int) -> SpectralField:
    """Sum of the stored terms at one node, as a field."""
    total = np.zeros(terms[0].coeffs.shape[1], dtype=complex)
    for tr in terms:
        total = total + tr.coeffs[node]
    return SpectralField(terms[0].grid, total, is_real=terms[0].is_real)
