import numpy as np
import pytest

from pcs_shaper import (
    CcdfCurve,
    ConstellationKind,
    OfdmConfig,
    OptimizerConfig,
    attenuation_factor,
    build_constellation,
    capacity,
    capacity_sweep,
    clipping_noise_variance,
    empirical_bussgang,
    mc_mutual_information,
    papr_ccdf,
    power_for_eb_n0,
    random_distribution,
    scale_to_power,
    subchannel_model,
    uniform_distribution,
)


def test_ccdf_curve_validation():
    with pytest.raises(ValueError):
        CcdfCurve(np.array([1.0, 2.0]), np.array([0.1, 0.5]), 10, "bad")  # increasing
    with pytest.raises(ValueError):
        CcdfCurve(np.array([2.0, 1.0]), np.array([0.5, 0.1]), 10, "bad")  # thresholds
    curve = CcdfCurve(np.array([1.0, 2.0]), np.array([0.5, 0.1]), 10, "ok")
    assert curve.label == "ok"


def test_papr_ccdf_extreme_thresholds(rng):
    c = build_constellation(ConstellationKind.QAM, 4)
    cfg = OfdmConfig(128)
    thresholds = [-5.0, -1.0, 40.0]
    curve = papr_ccdf(c, "uniform", cfg, 2000, 1, thresholds, rng)
    assert curve.exceed_prob[0] == 1.0
    assert curve.exceed_prob[1] == 1.0
    assert curve.exceed_prob[2] == 0.0


def test_papr_ccdf_reproducible_and_monotone():
    c = build_constellation(ConstellationKind.QAM, 16)
    cfg = OfdmConfig(64)
    thresholds = np.arange(5.0, 13.0, 1.0)
    a = papr_ccdf(c, "random_pcs", cfg, 500, 20, thresholds, np.random.default_rng(5))
    b = papr_ccdf(c, "random_pcs", cfg, 500, 20, thresholds, np.random.default_rng(5))
    assert np.array_equal(a.exceed_prob, b.exceed_prob)
    assert np.all(np.diff(a.exceed_prob) <= 0)


def test_papr_ccdf_workers_do_not_change_result():
    c = build_constellation(ConstellationKind.QAM, 4)
    cfg = OfdmConfig(64)
    thresholds = np.arange(5.0, 12.0, 1.0)
    serial = papr_ccdf(c, "random_pcs", cfg, 400, 12, thresholds, np.random.default_rng(8))
    threaded = papr_ccdf(
        c, "random_pcs", cfg, 400, 12, thresholds, np.random.default_rng(8), workers=4
    )
    assert np.array_equal(serial.exceed_prob, threaded.exceed_prob)


def test_papr_ccdf_pcs_exceeds_uniform(rng):
    c = build_constellation(ConstellationKind.QAM, 4)
    cfg = OfdmConfig(64)
    thresholds = np.array([8.0, 10.0])
    uniform = papr_ccdf(c, "uniform", cfg, 20_000, 1, thresholds, np.random.default_rng(10))
    pcs = papr_ccdf(c, "random_pcs", cfg, 2_000, 50, thresholds, np.random.default_rng(11))
    assert np.all(pcs.exceed_prob >= uniform.exceed_prob)


def test_papr_ccdf_input_validation(rng):
    c = build_constellation(ConstellationKind.QAM, 4)
    with pytest.raises(ValueError):
        papr_ccdf(c, "bogus", OfdmConfig(64), 100, 1, [5.0], rng)
    with pytest.raises(ValueError):
        papr_ccdf(c, "random_pcs", OfdmConfig(64), 100, 2, [5.0], rng, average_mode="nope")


def test_empirical_bussgang_no_clipping(rng):
    gain, var = empirical_bussgang(1.0, -40.0, 40.0, 100_000, rng)
    assert gain == pytest.approx(1.0, abs=1e-9)
    assert var == pytest.approx(0.0, abs=1e-9)


def test_empirical_bussgang_oracle_values(rng):
    gain, var = empirical_bussgang(1.0, -1.0, 1.0, 5_000_000, rng)
    assert var == pytest.approx(0.0499936, rel=0.02)
    assert gain == pytest.approx(attenuation_factor(-1.0, 1.0), rel=0.01)
    gain2, _ = empirical_bussgang(200.0, -2.0, 2.5, 2_000_000, rng)
    assert gain2 == pytest.approx(0.9710402, rel=0.01)


def test_bussgang_closure_grid(rng):
    sigma = 1.0
    for alpha in np.linspace(-3.0, -0.5, 3):
        for beta in np.linspace(0.5, 3.0, 3):
            gain, var = empirical_bussgang(sigma, alpha, beta, 1_000_000, rng)
            assert gain == pytest.approx(attenuation_factor(alpha, beta), rel=0.01)
            assert abs(var - clipping_noise_variance(sigma, alpha, beta)) <= 0.02 * sigma**2


def test_mc_mutual_information_cases(link_params, ofdm128, clean_link, rng):
    m = 4
    c = scale_to_power(build_constellation(ConstellationKind.QAM, m), 1e4)
    cfg = OfdmConfig(64)
    model = subchannel_model(c, uniform_distribution(m), cfg, clean_link)

    degenerate = np.zeros(m)
    degenerate[1] = 1.0
    from pcs_shaper import SymbolDistribution

    est = mc_mutual_information(SymbolDistribution(degenerate), c, model, 200_000, rng)
    assert abs(est.bits) <= 3 * est.stderr + 1e-6

    est_u = mc_mutual_information(uniform_distribution(m), c, model, 300_000, rng)
    assert est_u.bits == pytest.approx(2.0, abs=0.01)


def test_mc_mutual_information_matches_quadrature(link_params, ofdm128, rng):
    m = 16
    budget = power_for_eb_n0(13.0, m, ofdm128, link_params)
    c = scale_to_power(build_constellation(ConstellationKind.QAM, m), budget)
    p = random_distribution(m, rng)
    quad = capacity(p, c, ofdm128, link_params, 32).capacity_bits
    model = subchannel_model(c, p, ofdm128, link_params)
    est = mc_mutual_information(p, c, model, 1_000_000, rng)
    assert quad == pytest.approx(est.bits, abs=0.02)


def test_capacity_sweep_single_point(link_params, ofdm128):
    c = build_constellation(ConstellationKind.QAM, 16)
    points = capacity_sweep(
        c, ofdm128, link_params, [12.0],
        OptimizerConfig(power_budget=1.0, max_iters=40), nodes=16,
    )
    assert len(points) == 1
    pt = points[0]
    assert pt.capacity_shaped >= pt.capacity_uniform - 1e-3
    probs = np.asarray(pt.distribution.probs)
    assert abs(probs.sum() - 1.0) < 1e-6
    # power budget satisfied within 1e-6 relative
    energies = scale_to_power(c, pt.power_budget).symbol_energies
    assert energies @ probs <= pt.power_budget * (1 + 1e-6)
    with pytest.raises(ValueError):
        capacity_sweep(c, ofdm128, link_params, [], OptimizerConfig(power_budget=1.0))


def test_capacity_sweep_restarts_deterministic(link_params, ofdm128):
    c = build_constellation(ConstellationKind.QAM, 8)
    kw = dict(nodes=12, n_restarts=2)
    a = capacity_sweep(
        c, ofdm128, link_params, [10.0],
        OptimizerConfig(power_budget=1.0, max_iters=25),
        rng=np.random.default_rng(33), **kw,
    )
    b = capacity_sweep(
        c, ofdm128, link_params, [10.0],
        OptimizerConfig(power_budget=1.0, max_iters=25),
        rng=np.random.default_rng(33), **kw,
    )
    assert a[0].capacity_shaped == b[0].capacity_shaped
    assert np.array_equal(a[0].distribution.probs, b[0].distribution.probs)
