import numpy as np
import pytest

from auxeval.core import MetricKind
from auxeval.errors import DegenerateSignalError, InvalidInputError
from auxeval.simulate import (OracleParams, SimConfig, as_sim_dataset,
                              child_stream, gen_sim_dataset, kappa,
                              oracle_influence, oracle_m, oracle_params_for,
                              oracle_tau, preference_label, r_squared,
                              theoretical_variances)

P = OracleParams(sigma_sq=1.0, rho=0.8, sigma_eta=0.6)


def test_kappa_values():
    assert kappa(P) == pytest.approx(0.8, rel=1e-12)
    assert kappa(OracleParams(1.0, 0.0, 1.0)) == 0.0
    assert kappa(OracleParams(1.0, 0.5, 0.0)) == pytest.approx(2.0, rel=1e-12)


def test_kappa_degenerate():
    with pytest.raises(DegenerateSignalError):
        kappa(OracleParams(1.0, 0.0, 0.0))


def test_oracle_tau_values():
    assert oracle_tau(0.0, 1.2, P) == pytest.approx(1.2816, rel=1e-12)
    # quadratic term vanishes at w1 = x
    assert oracle_tau(0.7, 0.7, P) == pytest.approx((1 - 0.8 * 0.8) * 1.0, rel=1e-12)
    # uninformative auxiliary collapses tau to the constant m
    assert oracle_tau(0.0, 5.0, OracleParams(1.0, 0.0, 1.0)) == pytest.approx(1.0)


def test_oracle_m_values():
    assert oracle_m(P) == 1.0
    assert oracle_m(OracleParams(1.05, 0.8, 0.6)) == 1.05


def test_oracle_m_monte_carlo_cross_check():
    # integrate oracle_tau over fresh auxiliary draws at a fixed input
    rng = np.random.default_rng(101)
    x = 0.37
    n = 100_000
    latents = rng.standard_normal(n) * np.sqrt(P.sigma_sq)
    w1 = x + P.rho * latents + rng.standard_normal(n) * P.sigma_eta
    taus = oracle_tau(x, w1, P)
    se = taus.std(ddof=1) / np.sqrt(n)
    assert abs(taus.mean() - oracle_m(P)) < 3 * se


def test_oracle_influence_values():
    assert oracle_influence(0.0, 1.0, 0.0, 1.2, P) == pytest.approx(-0.2816, rel=1e-12)
    # rho = 0 reduces to the centered naive score
    p0 = OracleParams(1.0, 0.0, 1.0)
    assert oracle_influence(0.3, 1.3, 0.3, -2.0, p0) == pytest.approx(1.0 - 1.0)


def test_oracle_influence_mean_zero_at_scale():
    cfg = SimConfig(n=100_000, m=1, sigma_sq_per_model=(1.0,), seed=7, trials=1)
    ds = gen_sim_dataset(cfg, 0, child_stream(cfg.seed, 0, 0, 0))
    psi = oracle_influence(ds.x, ds.y, ds.g, ds.w1[:, 0], P)
    se = psi.std(ddof=1) / np.sqrt(len(ds))
    assert abs(psi.mean()) < 3 * se


def test_r_squared_values():
    assert r_squared(P) == pytest.approx(0.64, rel=1e-12)
    assert r_squared(OracleParams(1.0, 0.9, 0.0)) == pytest.approx(1.0)
    assert r_squared(OracleParams(1.0, 0.0, 1.0)) == 0.0


def test_theoretical_variances():
    var_naive, var_onestep, vr = theoretical_variances(P)
    assert var_naive == pytest.approx(2.0, rel=1e-12)
    assert vr == pytest.approx(0.4096, rel=1e-12)
    assert var_onestep == pytest.approx(1.1808, rel=1e-12)
    var_naive, var_onestep, vr = theoretical_variances(OracleParams(1.0, 0.0, 1.0))
    assert vr == 0.0 and var_onestep == var_naive


def test_vr_monotone_in_rho_and_sigma_eta():
    rhos = [0.1, 0.3, 0.5, 0.7, 0.9]
    vrs = [theoretical_variances(OracleParams(1.0, r, 0.6))[2] for r in rhos]
    assert all(a < b for a, b in zip(vrs, vrs[1:]))
    etas = [0.2, 0.5, 0.9, 1.4, 2.0]
    vrs = [theoretical_variances(OracleParams(1.0, 0.8, e))[2] for e in etas]
    assert all(a > b for a, b in zip(vrs, vrs[1:]))


def test_preference_label():
    assert preference_label(0.5, 1.0, 0.6) == 1
    assert preference_label(1.0, 0.5, 0.6) == 0
    # the <= comparison makes exact ties prefer the first response; the tie
    # inputs must be representable (0.8/0.4 around 0.6 are not a float tie)
    assert preference_label(0.75, 0.25, 0.5) == 1
    assert preference_label(1.25, 1.25, 0.5) == 1


def test_sim_config_validation():
    with pytest.raises(InvalidInputError):
        SimConfig(n=1)
    with pytest.raises(InvalidInputError):
        SimConfig(m=0)
    with pytest.raises(InvalidInputError):
        SimConfig(sigma_sq_per_model=(1.0, -1.0))
    with pytest.raises(InvalidInputError):
        SimConfig(trials=0)


def test_generation_is_deterministic():
    cfg = SimConfig(n=200, m=3, seed=42)
    a = gen_sim_dataset(cfg, 1, child_stream(cfg.seed, 0, 1, 0))
    b = gen_sim_dataset(cfg, 1, child_stream(cfg.seed, 0, 1, 0))
    for name in ("x", "y", "g", "w1", "w2", "v"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    c = gen_sim_dataset(cfg, 1, child_stream(cfg.seed, 1, 1, 0))
    assert not np.array_equal(a.x, c.x)


def test_degenerate_noise_free_config():
    # sigma_eta = 0 and rho1 = rho2 = 1: both responses coincide within every
    # round, the correction round reproduces y, and ties force v = 1
    cfg = SimConfig(n=50, m=2, sigma_sq_per_model=(1.0,), rho1=1.0, rho2=1.0,
                    sigma_eta=0.0, seed=5)
    ds = gen_sim_dataset(cfg, 0, child_stream(cfg.seed, 0, 0, 0))
    assert np.array_equal(ds.w1, ds.w2)
    assert np.array_equal(ds.w1[:, 0], ds.y)
    assert (ds.v == 1).all()


def test_correction_round_shares_latent_but_integration_rounds_do_not():
    cfg = SimConfig(n=100_000, m=2, sigma_sq_per_model=(1.0,), seed=11)
    ds = gen_sim_dataset(cfg, 0, child_stream(cfg.seed, 0, 0, 0))
    eps = ds.y - ds.x
    corr_first = np.corrcoef(eps, ds.w1[:, 0] - ds.x)[0, 1]
    expected = 0.8 / np.sqrt(0.8**2 + 0.6**2)
    assert abs(corr_first - expected) < 0.02
    corr_mc = np.corrcoef(eps, ds.w1[:, 1] - ds.x)[0, 1]
    assert abs(corr_mc) < 0.02


def test_sample_moments_match_theory():
    cfg = SimConfig(n=100_000, m=1, sigma_sq_per_model=(1.0,), seed=13)
    ds = gen_sim_dataset(cfg, 0, child_stream(cfg.seed, 0, 0, 0))
    phi = ds.phi(MetricKind.SQUARED_ERROR)
    assert abs(phi.mean() - 1.0) < 3 * np.sqrt(2.0 / len(ds))
    assert abs(np.var(phi, ddof=1) - 2.0) < 0.05 * 2.0
    psi = oracle_influence(ds.x, ds.y, ds.g, ds.w1[:, 0], P)
    assert abs(np.var(psi, ddof=1) - 1.1808) < 0.05 * 1.1808


def test_model_index_selects_sigma():
    cfg = SimConfig(n=50_000, m=1, sigma_sq_per_model=(0.25, 4.0), seed=19)
    low = gen_sim_dataset(cfg, 0, child_stream(cfg.seed, 0, 0, 0))
    high = gen_sim_dataset(cfg, 1, child_stream(cfg.seed, 0, 1, 0))
    assert np.var(low.y - low.x) < 0.5 < 3.0 < np.var(high.y - high.x)
    with pytest.raises(InvalidInputError):
        gen_sim_dataset(cfg, 2, child_stream(cfg.seed, 0, 2, 0))
    assert oracle_params_for(cfg, 1).sigma_sq == 4.0


def test_record_view_and_roundtrip():
    cfg = SimConfig(n=8, m=2, seed=3)
    ds = gen_sim_dataset(cfg, 0, child_stream(cfg.seed, 0, 0, 0))
    records = list(ds)
    assert len(records) == 8 and all(len(r.aux) == 3 for r in records)
    assert records[4].aux[0].w1 == ds.w1[4, 0]
    back = as_sim_dataset(records)
    for name in ("x", "y", "g", "w1", "w2"):
        assert np.allclose(getattr(back, name), getattr(ds, name))
    assert np.array_equal(back.v, ds.v)
    assert as_sim_dataset(ds) is ds
