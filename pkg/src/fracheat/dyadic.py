"""Littlewood-Paley analysis: dyadic blocks, Besov / Sobolev / modulation norms.

The dyadic bump is glued from g(x) = e^{-1/x}: eta = 1 on [-1,1], supported in
[-2,2], strictly decreasing in |xi| between; phi(xi) = eta(xi/2) - eta(xi).
Block j >= 0 multiplies by phi(xi/2^j), whose support is 2^j <= |xi| <= 2^{j+2}
with phi(2) = 1; block -1 multiplies by eta. The blocks telescope, so
eta(xi) + sum_{j=0}^{J} phi(xi/2^j) = eta(xi/2^{J+1}) = 1 for |xi| <= 2^{J+1},
which covers the whole grid band once J = floor(log2(max|xi_k|)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from .errors import DegenerateWindowError, DimensionError, DomainError, ResolutionError
from .grid import SpectralField, TorusGrid, check_alpha, dealiased_product
from .trajectory import Trajectory


def eta(xi) -> np.ndarray:
    """Even C-infinity cutoff: 1 on [-1,1], 0 outside (-2,2), glue between."""
    a = np.abs(np.asarray(xi, dtype=float))
    out = np.ones_like(a)
    out[a >= 2.0] = 0.0
    mid = (a > 1.0) & (a < 2.0)
    am = a[mid]
    g_hi = np.exp(-1.0 / (2.0 - am))  # vanishes to all orders at |xi| = 2
    g_lo = np.exp(-1.0 / (am - 1.0))  # vanishes to all orders at |xi| = 1
    out[mid] = g_hi / (g_hi + g_lo)
    return out


def phi_profile(xi) -> np.ndarray:
    """Annulus bump phi(xi) = eta(xi/2) - eta(xi); support 1 <= |xi| <= 4, phi(2) = 1."""
    xi = np.asarray(xi, dtype=float)
    return eta(xi / 2.0) - eta(xi)


@dataclass(frozen=True)
class DyadicPartition:
    """Dyadic multiplier table for one grid; blocks j = -1 .. j_max."""

    grid: TorusGrid
    j_max: int
    _cache: Dict[int, np.ndarray] = field(default_factory=dict, compare=False, repr=False)

    def multiplier(self, j: int) -> np.ndarray:
        if j < -1:
            raise DomainError(f"block index must be >= -1, got {j}")
        if j > self.j_max:
            raise ResolutionError(
                f"block {j} exceeds j_max = {self.j_max} for this grid band")
        m = self._cache.get(j)
        if m is None:
            xi = self.grid.frequencies
            m = eta(xi) if j == -1 else phi_profile(xi / 2.0**j)
            self._cache[j] = m
        return m

    @property
    def block_range(self) -> range:
        return range(-1, self.j_max + 1)


def make_partition(grid: TorusGrid) -> DyadicPartition:
    j_max = max(-1, int(np.floor(np.log2(grid.max_frequency))))
    return DyadicPartition(grid, j_max)


def lp_block(u: SpectralField, j: int, partition: DyadicPartition) -> SpectralField:
    """Delta_j u: multiply the spectrum by the block-j bump."""
    if u.grid != partition.grid:
        raise DimensionError("field and partition live on different grids")
    return u.copy_with(u.coeffs * partition.multiplier(j))


@dataclass(frozen=True)
class NormReport:
    """One computed norm plus its per-block magnitudes (j = -1 upward)."""

    norm_kind: str
    s: float | None
    q: float | None
    alpha: float | None
    value: float
    blocks: tuple

    def to_csv_row(self) -> str:
        def fmt(v):
            if v is None:
                return ""
            if v == np.inf:
                return "inf"
            return f"{v:.17g}"
        cells = [self.norm_kind, fmt(self.s), fmt(self.q), fmt(self.alpha),
                 fmt(self.value)]
        cells.extend(fmt(b) for b in self.blocks)
        return ",".join(cells)


def _check_q(q: float) -> float:
    q = float(q)
    if not (q >= 1.0):
        raise DomainError(f"summability index q must be >= 1 (or inf), got {q}")
    return q


def _lq(values: np.ndarray, q: float) -> float:
    if q == np.inf:
        return float(np.max(values)) if values.size else 0.0
    return float(np.sum(values**q) ** (1.0 / q))


def _block_l2_table(coeffs2d: np.ndarray, partition: DyadicPartition) -> np.ndarray:
    """(n_blocks, n_nodes) table of ||Delta_j u(t_i)||_{L^2}."""
    lam = partition.grid.period
    mags = np.abs(coeffs2d) ** 2
    rows = []
    for j in partition.block_range:
        m2 = partition.multiplier(j) ** 2
        rows.append(np.sqrt(lam * (mags @ m2)))
    return np.asarray(rows)


def besov_norm(u: SpectralField, s: float, q: float,
               partition: DyadicPartition) -> NormReport:
    """B^{s,q} norm: l^q over j of 2^{js} ||Delta_j u||_{L^2}."""
    q = _check_q(q)
    if u.grid != partition.grid:
        raise DimensionError("field and partition live on different grids")
    raw = _block_l2_table(u.coeffs[None, :], partition)[:, 0]
    js = np.arange(-1, partition.j_max + 1)
    weighted = 2.0 ** (js * s) * raw
    return NormReport("besov", s, q, None, _lq(weighted, q), tuple(weighted))


def sobolev_norm(u: SpectralField, s: float) -> float:
    """H^s norm (lam sum (1+xi^2)^s |c_k|^2)^{1/2}."""
    xi = u.grid.frequencies
    w = (1.0 + xi**2) ** s
    return float(np.sqrt(u.grid.period * np.sum(w * np.abs(u.coeffs) ** 2)))


def spacetime_besov_norm(traj: Trajectory, p: float, s: float, q: float,
                         partition: DyadicPartition) -> NormReport:
    """Tilde norm: per block, L^p in time of ||Delta_j u(t)||_{L^2}, then
    2^{js}-weighted l^q over blocks.

    p in {1, 2}: composite trapezoid on the p-th power over the trajectory
    nodes; p = inf: max over nodes.
    """
    q = _check_q(q)
    if p not in (1, 2, np.inf):
        raise DomainError(f"time exponent p must be 1, 2, or inf, got {p}")
    if traj.grid != partition.grid:
        raise DimensionError("trajectory and partition live on different grids")
    table = _block_l2_table(traj.coeffs, partition)
    if p == np.inf:
        per_block = table.max(axis=1)
    else:
        per_block = np.trapezoid(table**p, dx=traj.dt, axis=1) ** (1.0 / p)
    js = np.arange(-1, partition.j_max + 1)
    weighted = 2.0 ** (js * s) * per_block
    kind = "Linf-t-besov" if p == np.inf else f"L{int(p)}-t-besov"
    return NormReport(kind, s, q, None, _lq(weighted, q), tuple(weighted))


def x_norm(traj: Trajectory, s: float, q: float, alpha: float,
           partition: DyadicPartition) -> float:
    """Work norm: Linf_t B^{s,q} + L2_t B^{s+alpha,q} over the trajectory."""
    check_alpha(alpha)
    a = spacetime_besov_norm(traj, np.inf, s, q, partition)
    b = spacetime_besov_norm(traj, 2, s + alpha, q, partition)
    return a.value + b.value


def modulation_norm(u: SpectralField, n_window: int) -> float:
    """(M_{2,1})_N norm with windows [m 2^N, (m+1) 2^N): sum over windows of
    the lattice L^2 mass (lam sum_{window} |c_k|^2)^{1/2}."""
    width = 2.0 ** float(n_window)
    g = u.grid
    if width < g.spacing:
        raise DomainError(
            f"window width 2^{n_window} is below the frequency spacing {g.spacing:.3e}")
    if width > g.max_frequency:
        raise DegenerateWindowError(
            f"window width 2^{n_window} exceeds the band {g.max_frequency:.3e}")
    idx = np.floor(u.grid.frequencies / width).astype(np.int64)
    idx -= idx.min()
    mass = np.bincount(idx, weights=np.abs(u.coeffs) ** 2)
    return float(np.sum(np.sqrt(g.period * mass)))


@dataclass(frozen=True)
class AlgebraReport:
    """Empirical product constant for the modulation algebra at one window size."""

    n_window: int
    n_pairs: int
    max_ratio: float
    c0: float


def algebra_constant(grid: TorusGrid, n_window: int, n_pairs: int = 100,
                     seed: int = 0x5EED) -> AlgebraReport:
    """Estimate C0 in ||uv||_M <= C0 2^{N/2} ||u||_M ||v||_M.

    Draws seeded random real fields band-limited to |k| <= M/8 (so the product
    is an exact convolution under the 2/3 rule) and returns 1.1 x the largest
    observed ratio.
    """
    rng = np.random.default_rng(seed)
    m = grid.mode_count
    keep = np.abs(grid.wavenumbers) <= m // 8
    half = 2.0 ** (n_window / 2.0)
    worst = 0.0
    for _ in range(n_pairs):
        fields = []
        for _ in range(2):
            c = np.fft.fft(rng.standard_normal(m)) / m
            fields.append(SpectralField(grid, np.where(keep, c, 0.0)))
        u, v = fields
        num = modulation_norm(dealiased_product(u, v), n_window)
        den = half * modulation_norm(u, n_window) * modulation_norm(v, n_window)
        worst = max(worst, num / den)
    return AlgebraReport(n_window, n_pairs, worst, 1.1 * worst)
