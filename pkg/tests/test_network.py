import math

import numpy as np
import pytest

from circuitlab.network import (
    BankNetwork,
    boundaries,
    clearing_vector,
    fig15_network,
    instrument_payoffs,
    kappa_coeffs,
    nondim_context,
    remove_bank,
    shifted_levels,
    simulate_paths,
    survival_probabilities,
    two_bank_survival_grid,
)
from circuitlab.rng import CorrelationMatrix, JumpSpec, RngStream
from circuitlab.wedge import survival_1d


def random_network(rng, n=None):
    n = n or rng.integers(2, 6)
    mutual = rng.uniform(0.0, 20.0, (n, n))
    np.fill_diagonal(mutual, 0.0)
    return BankNetwork(
        external_assets=rng.uniform(50.0, 150.0, n),
        external_liabilities=rng.uniform(30.0, 90.0, n),
        mutual=mutual,
        recoveries=rng.uniform(0.1, 0.9, n),
        sigma=rng.uniform(0.1, 0.6, n),
        mu=0.0,
    )


def test_boundaries_full_recovery_collapse():
    net = fig15_network()
    net.recoveries = np.array([1.0, 1.0])
    b = boundaries(net)
    assert np.allclose(b.interior, b.terminal)


def test_boundaries_fig15_values():
    b = boundaries(fig15_network())
    assert b.interior == pytest.approx([4.0, 22.0])
    assert b.terminal == pytest.approx([40.0, 70.0])


def test_boundaries_decoupled_black_cox():
    net = fig15_network()
    net.mutual[:] = 0.0
    b = boundaries(net)
    assert b.interior == pytest.approx([0.4 * 50.0, 0.4 * 60.0])
    assert b.terminal == pytest.approx([50.0, 60.0])


def test_remove_bank_estate_settlement():
    red = remove_bank(fig15_network(), 1)
    # survivors absorb their debt to the estate net of recovered claims:
    # 50 + 10 - 0.4 * 20
    assert red.external_liabilities == pytest.approx([52.0])
    assert red.n == 1 and red.mutual.shape == (1, 1)


def test_remove_bank_no_links_no_change():
    net = fig15_network()
    net.mutual[:] = 0.0
    red = remove_bank(net, 0)
    assert red.external_liabilities == pytest.approx([60.0])
    assert red.external_assets == pytest.approx([80.0])


def test_boundary_shift_identity_random():
    # interior shift (1 - R_i R_k) L_ki and terminal shift (1 - R_k) L_ki
    rng = np.random.default_rng(14)
    for _ in range(30):
        net = random_network(rng)
        k = int(rng.integers(0, net.n))
        old = boundaries(net)
        keep = [i for i in range(net.n) if i != k]
        red = remove_bank(net, k)
        new = boundaries(red)
        expect_int = (1.0 - net.recoveries[keep] * net.recoveries[k]) * net.mutual[k, keep]
        expect_term = (1.0 - net.recoveries[k]) * net.mutual[k, keep]
        assert np.allclose(new.interior - old.interior[keep], expect_int, atol=1e-9)
        assert np.allclose(new.terminal - old.terminal[keep], expect_term, atol=1e-9)


def test_clearing_all_solvent():
    net = fig15_network()
    cv = clearing_vector(net, np.array([200.0, 200.0]))
    assert np.all(cv.omega == 1.0) and np.all(cv.solvent)


def test_clearing_single_bank_half():
    net = BankNetwork(
        external_assets=np.array([10.0]), external_liabilities=np.array([40.0]),
        mutual=np.zeros((1, 1)), recoveries=np.array([0.5]),
        sigma=np.array([0.2]))
    cv = clearing_vector(net, np.array([20.0]))
    assert cv.omega[0] == pytest.approx(0.5)


def test_clearing_matches_grid_brute_force():
    # exhaustive residual scan over the unit square at 1e-4 resolution
    net = fig15_network()
    a_t = np.array([30.0, 40.0])
    cv = clearing_vector(net, a_t)
    total = net.external_liabilities + net.interbank_liabilities
    claims = net.mutual
    grid = np.linspace(0.0, 1.0, 10001)
    best = (np.inf, None)
    for w1_block in np.array_split(grid, 20):
        w1 = w1_block[:, None]
        w2 = grid[None, :]
        f1 = np.minimum((a_t[0] + claims[1, 0] * w2) / total[0], 1.0)
        f2 = np.minimum((a_t[1] + claims[0, 1] * w1) / total[1], 1.0)
        resid = np.maximum(np.abs(f1 - w1), np.abs(f2 - w2))
        k = np.unravel_index(np.argmin(resid), resid.shape)
        if resid[k] < best[0]:
            best = (resid[k], (w1_block[k[0]], grid[k[1]]))
    assert abs(best[1][0] - cv.omega[0]) < 1e-3
    assert abs(best[1][1] - cv.omega[1]) < 1e-3


def test_clearing_monotone_on_random_networks():
    rng = np.random.default_rng(15)
    for _ in range(200):
        net = random_network(rng)
        a_t = rng.uniform(0.0, 120.0, net.n)
        cv = clearing_vector(net, a_t)  # monotonicity asserted internally
        assert np.all((cv.omega >= 0.0) & (cv.omega <= 1.0))


def test_kappa_solves_detailed_balance():
    rng = np.random.default_rng(16)
    net = fig15_network()
    l1, l2 = net.external_liabilities
    l12, l21 = net.mutual[0, 1], net.mutual[1, 0]
    for _ in range(25):
        a1, a2 = rng.uniform(0.0, 50.0, 2)
        k1, k2 = kappa_coeffs(a1, a2, net)
        assert a1 + k2 * l21 == pytest.approx(k1 * (l1 + l12), rel=1e-12)
        assert a2 + k1 * l12 == pytest.approx(k2 * (l2 + l21), rel=1e-12)


def test_clearing_equals_kappa_when_both_default():
    net = fig15_network()
    a_t = np.array([30.0, 40.0])
    cv = clearing_vector(net, a_t)
    assert np.all(cv.omega < 1.0)
    assert cv.omega == pytest.approx(kappa_coeffs(30.0, 40.0, net), abs=1e-10)


def test_equity_invariant_under_mutual_rebooking():
    # moving a claim pair around while preserving A_hat - L_hat per bank
    net = fig15_network()
    e0 = net.equity.copy()
    net.mutual += np.array([[0.0, 5.0], [5.0, 0.0]])
    assert np.allclose(net.equity, e0)


def test_simulate_no_defaults_when_far_above():
    net = fig15_network(external_assets=(4000.0, 4000.0))
    rec = simulate_paths(net, horizon=1.0, dt=0.01, paths=200,
                         stream=RngStream(3))
    assert not rec.interior_default.any()
    assert np.all(rec.omega == 1.0)
    est = survival_probabilities(rec)
    assert est.joint == 1.0 and est.joint_stderr == 0.0


def test_single_bank_mc_matches_closed_form():
    net = BankNetwork(
        external_assets=np.array([100.0]), external_liabilities=np.array([80.0]),
        mutual=np.zeros((1, 1)), recoveries=np.array([0.5]),
        sigma=np.array([0.3]), mu=0.05)
    ctx = nondim_context(net)
    x0 = ctx.x_from_assets(net.external_assets)[0]
    horizon = 5.0
    rec = simulate_paths(net, horizon, dt=0.002, paths=20000,
                         stream=RngStream(11))
    est = survival_probabilities(rec)
    exact = survival_1d(x0, ctx.xi[0], 0.0, ctx.m_terminal[0],
                        ctx.scaled_time(horizon))
    assert abs(est.marginal[0] - exact) < 3.0 * est.marginal_stderr[0] + 0.004


def test_marginal_at_least_joint():
    net = fig15_network(external_assets=(48.0, 160.0))
    rec = simulate_paths(net, horizon=12.5, dt=0.02, paths=4000,
                         stream=RngStream(21))
    est = survival_probabilities(rec)
    assert np.all(est.marginal >= est.joint - 1e-12)


def test_grid_evaluator_matches_simulate_paths():
    # identical probabilistic content and identical drivers: estimates agree
    # to well inside one standard error on a common point
    net = fig15_network()
    ctx = nondim_context(net)
    x_pt = np.array([2.0, 2.0])
    assets = ctx.assets_from_x(x_pt)
    net_pt = fig15_network(external_assets=assets)
    horizon = 12.5
    dt_cal = horizon / 2000.0
    rec = simulate_paths(net_pt, horizon, dt=dt_cal, paths=8000,
                         stream=RngStream(7))
    est = survival_probabilities(rec)
    grid = two_bank_survival_grid(net, horizon, dt_scaled=0.16 * dt_cal,
                                  paths=8000, stream=RngStream(7),
                                  x1_grid=x_pt[:1], x2_grid=x_pt[1:])
    assert grid.joint[0, 0] == pytest.approx(est.joint, abs=1e-12)
    assert grid.marginal1[0, 0] == pytest.approx(est.marginal[0], abs=1e-12)


def test_jump_dynamics_increase_defaults():
    spec = JumpSpec.systemic_idiosyncratic(0.4, np.array([0.3, 0.3]),
                                           np.array([1.5, 1.5]))
    net = fig15_network(external_assets=(60.0, 120.0))
    net.jumps = spec
    rec_j = simulate_paths(net, horizon=5.0, dt=0.01, paths=3000,
                           stream=RngStream(5), dynamics="jump-diffusion")
    rec_d = simulate_paths(net, horizon=5.0, dt=0.01, paths=3000,
                           stream=RngStream(5), dynamics="lognormal")
    sj = survival_probabilities(rec_j)
    sd = survival_probabilities(rec_d)
    assert sj.joint < sd.joint


def test_simulation_reproducible():
    net = fig15_network(external_assets=(48.0, 150.0))
    a = simulate_paths(net, 2.0, 0.01, paths=500, stream=RngStream(9))
    b = simulate_paths(net, 2.0, 0.01, paths=500, stream=RngStream(9))
    assert np.array_equal(a.omega, b.omega)
    assert np.array_equal(a.default_time, b.default_time,  equal_nan=True)


def test_instrument_payoffs_basic():
    net = fig15_network(external_assets=(46.0, 100.0))
    rec = simulate_paths(net, 12.5, 0.02, paths=4000, stream=RngStream(31))
    cds1, se1 = instrument_payoffs(rec, "CDS_1")
    cds2, se2 = instrument_payoffs(rec, "CDS_2")
    ftd, _ = instrument_payoffs(rec, "FTD")
    assert 0.0 < cds1 < 1.0
    assert ftd >= max(cds1, cds2) - 1e-12
    # deep-in-the-money network: all payoffs zero
    rich = fig15_network(external_assets=(5000.0, 5000.0))
    rec2 = simulate_paths(rich, 1.0, 0.05, paths=100, stream=RngStream(1))
    assert instrument_payoffs(rec2, "FTD")[0] == 0.0
    with pytest.raises(ValueError, match="instrument"):
        instrument_payoffs(rec, "CDO")


def test_ftd_dominates_pathwise():
    net = fig15_network(external_assets=(46.0, 90.0))
    rec = simulate_paths(net, 12.5, 0.02, paths=2000, stream=RngStream(41))
    loss = np.where(np.isnan(rec.default_time), 0.0, 1.0 - rec.omega)
    ftd = loss.max(axis=1)
    assert np.all(ftd + 1e-15 >= loss[:, 0])
    assert np.all(ftd + 1e-15 >= loss[:, 1])


def test_interior_settlement_near_recovery():
    # a bank crossing its interior boundary pays out roughly its recovery
    net = fig15_network(external_assets=(42.0, 300.0))
    rec = simulate_paths(net, 12.5, 0.005, paths=2000, stream=RngStream(51))
    crossed = rec.interior_default[:, 0]
    assert crossed.any()
    payouts = rec.omega[crossed, 0]
    assert abs(np.median(payouts) - net.recoveries[0]) < 0.1
