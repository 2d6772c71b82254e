import numpy as np
import pytest

from pcs_shaper import (
    ConstellationKind,
    OfdmConfig,
    SymbolDistribution,
    SystemParams,
    TimeFrame,
    attenuation_factor,
    build_constellation,
    clip_signal,
    clip_stats,
    clipping_noise_variance,
    q_function,
    signal_variance,
    uniform_distribution,
)

# frozen oracle values (30-digit erfc evaluation)
Q_AT_2 = 0.022750131948179207
R_M2_25 = 0.971040202726044658
CLIPVAR_UNIT_PM1 = 0.049993608287321033


def test_q_function_values():
    assert q_function(0.0) == pytest.approx(0.5, abs=1e-15)
    assert q_function(2.0) == pytest.approx(Q_AT_2, rel=1e-12)
    for x in (-3.0, -0.7, 0.4, 2.2, 5.0):
        assert q_function(x) + q_function(-x) == pytest.approx(1.0, abs=1e-14)
    xs = np.linspace(-8, 8, 100)
    assert np.all(np.diff(q_function(xs)) < 0)


def test_system_params_validation_and_derived():
    sp = SystemParams(
        i_min=100, i_max=1000, i_dc=500, eta=0.44, gamma=0.54, h_gain=3e-6,
        bandwidth=2e7, n0=1e-16,
    )
    assert sp.rho == pytest.approx(0.44 * 0.54 * 3e-6, rel=1e-15)
    assert sp.noise_var == pytest.approx(2e-9, rel=1e-15)
    with pytest.raises(ValueError):
        SystemParams(i_min=500, i_max=400, i_dc=450, eta=1, gamma=1, h_gain=1, bandwidth=1, n0=1)
    with pytest.raises(ValueError):
        SystemParams(i_min=0, i_max=10, i_dc=5, eta=-1, gamma=1, h_gain=1, bandwidth=1, n0=1)
    with pytest.raises(ValueError):
        SystemParams(
            i_min=100, i_max=1000, i_dc=500, eta=0.44, gamma=0.54, h_gain=3e-6,
            bandwidth=2e7, n0=1e-16, rho=1.0,
        )


def test_signal_variance_examples(link_params):
    c = build_constellation(ConstellationKind.QAM, 16)
    cfg = OfdmConfig(128)
    p = uniform_distribution(16)
    assert signal_variance(c, p, cfg) == pytest.approx(126.0 / 128.0, abs=1e-15)
    big = OfdmConfig(2**14)
    assert signal_variance(c, p, big) == pytest.approx(1.0, rel=2e-4)
    lowest = np.zeros(16)
    lowest[np.argmin(c.symbol_energies)] = 1.0
    assert signal_variance(c, SymbolDistribution(lowest), OfdmConfig(128)) == pytest.approx(
        0.2 * 126 / 128, rel=1e-12
    )


def test_clip_signal_branches(link_params):
    frame = TimeFrame(np.array([0.0, 100.0, -100.0, 399.0, -399.0]))
    assert np.array_equal(clip_signal(frame, link_params).samples, frame.samples)
    spike = TimeFrame(np.array([2000.0, -2000.0, 10.0]))
    clipped = clip_signal(spike, link_params)
    assert np.array_equal(clipped.samples, [500.0, -400.0, 10.0])
    wide = SystemParams(
        i_min=-1e12, i_max=1e12, i_dc=0.0, eta=1, gamma=1, h_gain=1, bandwidth=1, n0=1
    )
    assert np.array_equal(clip_signal(spike, wide).samples, spike.samples)


def test_attenuation_factor_values():
    assert attenuation_factor(-40.0, 40.0) == pytest.approx(1.0, abs=1e-12)
    assert attenuation_factor(0.0, 40.0) == pytest.approx(0.5, abs=1e-12)
    assert attenuation_factor(-2.0, 2.5) == pytest.approx(R_M2_25, rel=1e-12)
    with pytest.raises(ValueError):
        attenuation_factor(1.0, 1.0)


def test_attenuation_factor_tightening_monotonic():
    widths = np.linspace(0.2, 4.0, 15)
    values = [attenuation_factor(-w, w) for w in widths]
    assert np.all(np.diff(values) > 0)
    assert all(0 < v < 1 for v in values)


def test_clipping_noise_variance_values():
    assert clipping_noise_variance(1.0, -40.0, 40.0) == pytest.approx(0.0, abs=1e-9)
    assert clipping_noise_variance(1.0, -1.0, 1.0) == pytest.approx(CLIPVAR_UNIT_PM1, rel=1e-10)
    v1 = clipping_noise_variance(1.0, -1.3, 0.8)
    v2 = clipping_noise_variance(2.0, -1.3, 0.8)
    assert v2 == pytest.approx(4.0 * v1, rel=1e-12)
    with pytest.raises(ValueError):
        clipping_noise_variance(-1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        clipping_noise_variance(1.0, 2.0, 1.0)


def test_clipping_noise_variance_monte_carlo_oracle(rng):
    x = rng.normal(0.0, 1.0, 10_000_000)
    c = np.clip(x, -1.0, 1.0)
    gain = np.cov(c, x, bias=True)[0, 1] / x.var()
    resid = c - gain * x
    mc_var = resid.var()
    assert mc_var == pytest.approx(CLIPVAR_UNIT_PM1, rel=0.02)
    assert gain == pytest.approx(attenuation_factor(-1.0, 1.0), rel=0.01)


def test_bussgang_consistency_and_orthogonality(rng):
    # least-squares gain == Q(a) - Q(b), residual variance == analytic value,
    # and the residual is uncorrelated with the input
    sigma = 180.0
    alpha, beta = -1.4, 1.9
    x = rng.normal(0.0, sigma, 2_000_000)
    c = np.clip(x, alpha * sigma, beta * sigma)
    xc, cc = x - x.mean(), c - c.mean()
    gain = (xc @ cc) / (xc @ xc)
    resid = cc - gain * xc
    assert gain == pytest.approx(attenuation_factor(alpha, beta), rel=0.01)
    assert resid.var() == pytest.approx(clipping_noise_variance(sigma, alpha, beta), rel=0.02)
    corr = (resid @ xc) / np.sqrt((resid @ resid) * (xc @ xc))
    assert abs(corr) < 1e-2


def test_clip_stats_composition(link_params, ofdm128):
    c = build_constellation(ConstellationKind.QAM, 16)
    # choose the scale so that sigma_x = 200 mA exactly: alpha=-2, beta=2.5
    target_var = 200.0**2
    factor = target_var / signal_variance(c, uniform_distribution(16), ofdm128)
    scaled = build_constellation(ConstellationKind.QAM, 16)
    from pcs_shaper import scale_to_power

    scaled = scale_to_power(scaled, factor)
    stats = clip_stats(scaled, uniform_distribution(16), ofdm128, link_params)
    assert stats.sigma_x == pytest.approx(200.0, rel=1e-12)
    assert stats.alpha == pytest.approx(-2.0, rel=1e-12)
    assert stats.beta == pytest.approx(2.5, rel=1e-12)
    assert stats.r_factor == pytest.approx(R_M2_25, rel=1e-12)


def test_clip_stats_symmetry_and_limits(ofdm128):
    sym = SystemParams(
        i_min=100, i_max=900, i_dc=500, eta=0.44, gamma=0.54, h_gain=3e-6,
        bandwidth=2e7, n0=1e-16,
    )
    c = build_constellation(ConstellationKind.QAM, 16)
    stats = clip_stats(c, uniform_distribution(16), ofdm128, sym)
    assert stats.alpha == pytest.approx(-stats.beta, rel=1e-12)

    from pcs_shaper import scale_to_power

    prev_r, prev_var = 0.0, np.inf
    for power in (1e6, 1e5, 1e4, 1e3):
        scaled = scale_to_power(c, power)
        s = clip_stats(scaled, uniform_distribution(16), ofdm128, sym)
        assert s.r_factor > prev_r
        assert s.clip_noise_var < prev_var
        prev_r, prev_var = s.r_factor, s.clip_noise_var
    assert prev_r > 0.999
    assert prev_var < 1e-3


def test_clip_noise_monotone_in_sigma(link_params):
    values = [
        clipping_noise_variance(s, (100 - 500) / s, (1000 - 500) / s)
        for s in np.linspace(50, 1200, 24)
    ]
    assert np.all(np.diff(values) > 0)
