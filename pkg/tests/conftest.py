import numpy as np
import pytest

from fracheat.grid import SpectralField, TorusGrid

SEED = 0x5EED


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def random_band_field(grid: TorusGrid, band: float, rng, scale: float = 1.0) -> SpectralField:
    """Random real field with spectrum confined to |xi| <= band.

    Built from real white-noise samples so Hermitian symmetry is exact.
    """
    samples = rng.standard_normal(grid.mode_count)
    coeffs = np.fft.fft(samples) / grid.mode_count
    keep = np.abs(grid.frequencies) <= band
    keep &= np.abs(grid.wavenumbers) < grid.mode_count // 2  # drop the lone Nyquist mode
    coeffs = np.where(keep, coeffs, 0.0)
    peak = np.max(np.abs(coeffs))
    if peak > 0:
        coeffs = coeffs * (scale / peak)
    return SpectralField(grid, coeffs, is_real=True)
