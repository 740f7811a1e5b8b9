import numpy as np
import pytest
from scipy.integrate import simpson

from fracheat.errors import DimensionError, DomainError, SymmetryError
from fracheat.grid import (
    SpectralField,
    TorusGrid,
    apply_semigroup,
    dealiased_product,
    dealiased_square,
    fractional_symbol,
    from_spectral,
    l2_norm,
    pair_with_test_function,
    to_spectral,
)

from conftest import SEED, random_band_field


def test_grid_validation():
    with pytest.raises(DomainError):
        TorusGrid(0.5, 64)
    with pytest.raises(DomainError):
        TorusGrid(4.0, 48)  # not a power of two
    g = TorusGrid(4.0, 64)
    assert g.spacing == pytest.approx(np.pi / 2)
    assert g.max_frequency == pytest.approx(np.pi * 16)
    # fft ordering of the wavenumbers
    assert g.wavenumbers[0] == 0
    assert g.wavenumbers[31] == 31
    assert g.wavenumbers[32] == -32
    assert g.wavenumbers[-1] == -1


def test_to_spectral_dc_and_harmonic():
    g = TorusGrid(8.0, 128)
    # constant a -> c_0 = a, all else 0
    f = to_spectral(np.full(g.mode_count, 3.25), g)
    assert f.coeffs[0] == pytest.approx(3.25)
    assert np.max(np.abs(f.coeffs[1:])) < 1e-14
    # cos(2 pi x / lam) -> c_{+-1} = 1/2
    f = to_spectral(np.cos(2 * np.pi * g.sample_points / g.period), g)
    assert f.coeffs[1] == pytest.approx(0.5)
    assert f.coeffs[-1] == pytest.approx(0.5)
    others = np.delete(f.coeffs, [1, g.mode_count - 1])
    assert np.max(np.abs(others)) < 1e-14


def test_roundtrip_and_parseval():
    g = TorusGrid(16.0, 256)
    rng = np.random.default_rng(SEED)
    for _ in range(20):
        samples = rng.standard_normal(g.mode_count)
        f = to_spectral(samples, g)
        assert f.is_real
        back = from_spectral(f)
        assert np.allclose(back, samples, atol=1e-12)
        # (lam/M) sum samples^2 = lam sum |c|^2
        phys = (g.period / g.mode_count) * np.sum(samples**2)
        assert l2_norm(f) ** 2 == pytest.approx(phys, rel=1e-12)


def test_field_validation_errors():
    g = TorusGrid(4.0, 64)
    with pytest.raises(DimensionError):
        SpectralField(g, np.zeros(32, dtype=complex))
    bad = np.zeros(64, dtype=complex)
    bad[3] = 1.0  # no conjugate partner at -3
    with pytest.raises(SymmetryError):
        SpectralField(g, bad, is_real=True)
    SpectralField(g, bad, is_real=False)  # fine as a complex field
    nan = np.zeros(64, dtype=complex)
    nan[0] = np.nan
    with pytest.raises(DomainError):
        SpectralField(g, nan, is_real=False)


def test_fractional_symbol():
    g = TorusGrid(4.0, 64)
    with pytest.raises(DomainError):
        fractional_symbol(g, 0.0)
    with pytest.raises(DomainError):
        fractional_symbol(g, 1.5)
    assert np.allclose(fractional_symbol(g, 0.5), np.abs(g.frequencies))
    assert np.allclose(fractional_symbol(g, 1.0), g.frequencies**2)


def test_semigroup_identity_law_and_decay():
    g = TorusGrid(8.0, 128)
    rng = np.random.default_rng(SEED)
    u = random_band_field(g, 20.0, rng)
    with pytest.raises(DomainError):
        apply_semigroup(u, -0.1, 0.75)
    for alpha in (0.4, 0.5, 0.75, 1.0):
        v0 = apply_semigroup(u, 0.0, alpha)
        assert np.array_equal(v0.coeffs, u.coeffs)
        # S(t)S(s) = S(t+s), multiplier exactness
        a = apply_semigroup(apply_semigroup(u, 0.3, alpha), 0.45, alpha)
        b = apply_semigroup(u, 0.75, alpha)
        assert np.allclose(a.coeffs, b.coeffs, rtol=0, atol=1e-15 * np.max(np.abs(u.coeffs)))
    # single mode decays by exactly e^{-t|xi|^{2 alpha}}
    c = np.zeros(g.mode_count, dtype=complex)
    c[2] = 1.0
    c[-2] = 1.0
    mode = SpectralField(g, c)
    xi = g.frequencies[2]
    got = apply_semigroup(mode, 0.2, 0.6).coeffs[2]
    assert got == pytest.approx(np.exp(-0.2 * abs(xi) ** 1.2), rel=1e-14)


def test_energy_identity():
    # ||u(T)||^2 + 2 int_0^T ||D^alpha u||^2 = ||phi||^2 for the free flow,
    # quadrature via composite Simpson at dt = 1e-3
    g = TorusGrid(16.0, 64)
    rng = np.random.default_rng(SEED)
    phi = random_band_field(g, 5.0, rng)
    T = 1.0
    ts = np.linspace(0.0, T, 1001)
    for alpha in (0.5, 0.75, 1.0):
        sym = fractional_symbol(g, alpha)
        w = g.period * np.abs(phi.coeffs) ** 2
        # ||D^alpha u(t)||^2 = sum_k |xi_k|^{2 alpha} e^{-2 t |xi_k|^{2 alpha}} w_k
        dissip = (sym * w) @ np.exp(-2.0 * np.outer(sym, ts))
        lhs = l2_norm(apply_semigroup(phi, T, alpha)) ** 2 + 2.0 * simpson(dissip, x=ts)
        rhs = l2_norm(phi) ** 2
        assert abs(lhs - rhs) / rhs < 1e-6


def brute_dealiased_product(cu, cv, grid):
    """O(M^2) direct convolution of the kept bands, zero outside the kept band."""
    m = grid.mode_count
    keep = grid.dealias_mask
    k = grid.wavenumbers
    out = np.zeros(m, dtype=complex)
    idx = {int(kk): i for i, kk in enumerate(k)}
    for i in range(m):
        if not keep[i]:
            continue
        acc = 0.0 + 0.0j
        for j in range(m):
            if not keep[j]:
                continue
            rem = int(k[i]) - int(k[j])
            p = idx.get(rem)
            if p is not None and keep[p]:
                acc += cu[j] * cv[p]
        out[i] = acc
    return out


def test_dealiased_square_against_brute_convolution():
    g = TorusGrid(4.0, 64)
    rng = np.random.default_rng(SEED)
    for _ in range(5):
        u = random_band_field(g, g.max_frequency, rng)  # full band, forces dealiasing
        got = dealiased_square(u).coeffs
        want = brute_dealiased_product(u.coeffs, u.coeffs, g)
        assert np.allclose(got, want, atol=1e-13 * max(1.0, np.max(np.abs(want))))
        assert np.all(got[~g.dealias_mask] == 0)
    v = random_band_field(g, g.max_frequency, rng)
    got = dealiased_product(u, v).coeffs
    want = brute_dealiased_product(u.coeffs, v.coeffs, g)
    assert np.allclose(got, want, atol=1e-13 * max(1.0, np.max(np.abs(want))))


def test_dealiased_square_exact_on_harmonics():
    g = TorusGrid(8.0, 256)
    x = g.sample_points
    # (a + cos(xi1 x))^2 = a^2 + 1/2 + 2a cos(xi1 x) + cos(2 xi1 x)/2, all in band
    a = 0.7
    xi1 = 2 * np.pi * 3 / g.period
    u = to_spectral(a + np.cos(xi1 * x), g)
    sq = dealiased_square(u)
    want = to_spectral(a**2 + 0.5 + 2 * a * np.cos(xi1 * x) + 0.5 * np.cos(2 * xi1 * x), g)
    assert np.allclose(sq.coeffs, want.coeffs, atol=1e-14)


def indicator_quarter(xi):
    # chi_{[-1/4, 1/4]} with midpoint convention at the edges
    xi = np.asarray(xi, dtype=float)
    inside = (np.abs(xi) < 0.25).astype(float)
    edge = (np.abs(xi) == 0.25).astype(float)
    return inside + 0.5 * edge


def pairing_value(lam: float) -> float:
    m = 4096  # band far exceeds the support; M is irrelevant past that
    g = TorusGrid(lam, m)
    coeffs = indicator_quarter(g.frequencies) / g.period
    u = SpectralField(g, coeffs)
    return pair_with_test_function(u, indicator_quarter)


def test_pairing_indicator_refinement():
    # uhat = ghat = chi_{[-1/4,1/4]}: continuum pairing (1/2pi) * 1/2
    target = 1.0 / (4.0 * np.pi)
    errs = [abs(pairing_value(2.0**p) - target) for p in (11, 12, 13, 14)]
    assert errs[-1] < 1e-3
    # mode-count jitter bounds the error by 1/lam (not monotone, only enveloped)
    for p, err in zip((11, 12, 13, 14), errs):
        assert err <= 1.0 / 2.0**p + 1e-12
    # exact lattice count at lam = 2^14: 2*651+1 modes inside, none on the edge
    lam = 2.0**14
    count = 2 * int(lam / (8 * np.pi)) + 1
    assert pairing_value(lam) == pytest.approx(count / lam, rel=1e-13)


def test_pairing_shape_check():
    g = TorusGrid(4.0, 64)
    u = SpectralField(g, np.zeros(64, dtype=complex))
    with pytest.raises(DimensionError):
        pair_with_test_function(u, lambda xi: np.ones(3))
