import math

import numpy as np
import pytest

from circuitlab.network import fig15_network, nondim_context, shifted_levels
from circuitlab.rng import RngStream
from circuitlab.wedge import (
    QuadratureSpec,
    WedgeContext,
    boundary_flux,
    conservation_check,
    joint_survival_Q,
    marginal_survival_Q1,
    norm_cdf,
    q1_standalone,
    survival_1d,
    two_bank_domains,
    wedge_context,
    wedge_green,
)


def phi_t(z, t):
    return np.exp(-z * z / (2.0 * t)) / math.sqrt(2.0 * math.pi * t)


def product_green(t, x1, x2, xs, xi):
    """Independent-coordinate oracle: tilted method-of-images densities."""
    out = 1.0
    for x, s, drift in ((x1, xs[0], xi[0]), (x2, xs[1], xi[1])):
        p0 = phi_t(x - s, t) - phi_t(x + s, t)
        out = out * p0 * np.exp(drift * (x - s) - 0.5 * drift * drift * t)
    return out


def test_context_geometry():
    ctx = WedgeContext.build(0.0, [-0.5, -0.5])
    assert ctx.varpi == pytest.approx(math.pi / 2)
    assert [ctx.order(n) for n in (1, 2, 3)] == pytest.approx([2.0, 4.0, 6.0])
    # wedge opens with correlation, closes against it
    assert WedgeContext.build(0.6, [0, 0]).varpi > math.pi / 2
    assert WedgeContext.build(-0.6, [0, 0]).varpi < math.pi / 2
    r, phi = ctx.polar(1.0, 1.0)
    assert r == pytest.approx(math.sqrt(2.0))
    assert phi == pytest.approx(math.pi / 4)


def test_survival_1d_limits():
    assert survival_1d(60.0, -0.1, 0.0, 2.0, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert survival_1d(0.0, 0.3, 0.0, 1.0, 2.0) == 0.0
    assert survival_1d(-1.0, 0.3, 0.0, 1.0, 2.0) == 0.0


def test_survival_1d_closed_value():
    # N(0.5) - N(-1.5) for the driftless case X'=1, barrier 0, level 0.5, tau 1
    expected = float(norm_cdf(0.5) - norm_cdf(-1.5))
    assert survival_1d(1.0, 0.0, 0.0, 0.5, 1.0) == pytest.approx(expected, rel=1e-14)


def test_survival_1d_against_bridge_sampler():
    # exact Monte Carlo: terminal draw + Brownian-bridge crossing probability
    x0, m_lt, m_eq, tau = 1.0, 0.0, 0.5, 1.0
    gen = RngStream(2024).generator()
    n = 10**6
    x_t = x0 + math.sqrt(tau) * gen.standard_normal(n)
    above = x_t > m_eq
    p_no_cross = np.where(
        (x_t > m_lt) & (x0 > m_lt),
        1.0 - np.exp(-2.0 * np.clip((x0 - m_lt) * (x_t - m_lt), 0, None) / tau),
        0.0,
    )
    hits = above * p_no_cross
    est = hits.mean()
    se = hits.std() / math.sqrt(n)
    assert abs(survival_1d(x0, 0.0, m_lt, m_eq, tau) - est) < 3.0 * se


def test_survival_1d_with_drift_against_bridge_sampler():
    x0, m_lt, m_eq, tau, xi = 1.5, 0.3, 1.0, 2.0, -0.4
    gen = RngStream(77).generator()
    n = 10**6
    x_t = x0 + xi * tau + math.sqrt(tau) * gen.standard_normal(n)
    p_no_cross = np.where(
        x_t > m_lt,
        1.0 - np.exp(-2.0 * np.clip((x0 - m_lt) * (x_t - m_lt), 0, None) / tau),
        0.0,
    )
    hits = (x_t > m_eq) * p_no_cross
    est, se = hits.mean(), hits.std() / math.sqrt(n)
    assert abs(survival_1d(x0, xi, m_lt, m_eq, tau) - est) < 3.0 * se


def test_green_product_form_at_zero_correlation():
    ctx = WedgeContext.build(0.0, [-0.5, -0.25])
    xs = (1.3, 2.1)
    rng = np.random.default_rng(0)
    for _ in range(30):
        t = rng.uniform(0.2, 3.0)
        x1, x2 = rng.uniform(0.05, 5.0, 2)
        got = wedge_green(ctx, t, np.array([x1]), np.array([x2]), xs)[0]
        ref = product_green(t, x1, x2, xs, ctx.xi)
        assert got == pytest.approx(ref, abs=1e-10)


def test_green_symmetry_under_bank_swap():
    ctx = WedgeContext.build(0.0, [-0.3, -0.3])
    a = wedge_green(ctx, 1.2, np.array([0.8]), np.array([2.0]), (1.0, 1.5))[0]
    b = wedge_green(ctx, 1.2, np.array([2.0]), np.array([0.8]), (1.5, 1.0))[0]
    assert a == pytest.approx(b, rel=1e-12)


def test_green_subprobability_mass():
    net = fig15_network(rho=0.3)
    res = conservation_check(net, (1.5, 2.0), 1.0 / 0.16)
    assert res["interior"] <= 1.0 + 1e-9
    assert res["interior"] > 0.0


def test_flux_nonnegative_and_product_form():
    ctx = WedgeContext.build(0.0, [-0.5, -0.5])
    xs = (1.3, 2.1)
    rng = np.random.default_rng(1)
    for _ in range(25):
        t = rng.uniform(0.2, 3.0)
        x = rng.uniform(0.05, 5.0)
        g2 = boundary_flux(ctx, t, np.array([x]), xs, face=2)[0]
        assert g2 >= 0.0
        p1 = (phi_t(x - xs[0], t) - phi_t(x + xs[0], t)) * math.exp(
            ctx.xi[0] * (x - xs[0]) - 0.5 * ctx.xi[0] ** 2 * t)
        fp2 = xs[1] / math.sqrt(2 * math.pi * t**3) * math.exp(
            -(xs[1] + ctx.xi[1] * t) ** 2 / (2 * t))
        assert g2 == pytest.approx(p1 * fp2, abs=1e-10)


def test_conservation_identity():
    net = fig15_network()
    for t_cal in (0.5 / 0.16, 1.0 / 0.16, 5.0 / 0.16):
        res = conservation_check(net, (2.0, 1.5), t_cal)
        assert abs(res["total"] - 1.0) < 1e-6


def test_conservation_with_correlation():
    res = conservation_check(fig15_network(rho=0.5), (2.0, 1.5), 1.0 / 0.16)
    assert abs(res["total"] - 1.0) < 1e-6


def test_domain_endpoint_identities():
    # Theta_i(0) lands on the post-removal terminal level and
    # Theta_i(M_other) on the bank's own terminal level
    rng = np.random.default_rng(6)
    for _ in range(20):
        net = fig15_network(sigma=(rng.uniform(0.2, 0.6), rng.uniform(0.2, 0.6)))
        net.mutual = np.array([[0.0, rng.uniform(1.0, 15.0)],
                               [rng.uniform(1.0, 15.0), 0.0]])
        net.external_liabilities = rng.uniform(40.0, 80.0, 2)
        net.__post_init__()
        from circuitlab.network import boundaries
        if np.any(boundaries(net).interior <= 0):
            continue
        dom = two_bank_domains(net)
        ctx = nondim_context(net)
        assert dom.theta_curve(0, 0.0) == pytest.approx(dom.m_tilde_eq[0], abs=1e-12)
        assert dom.theta_curve(1, 0.0) == pytest.approx(dom.m_tilde_eq[1], abs=1e-12)
        assert dom.theta_curve(0, ctx.m_terminal[1]) == pytest.approx(
            ctx.m_terminal[0], abs=1e-12)
        assert dom.theta_curve(1, ctx.m_terminal[0]) == pytest.approx(
            ctx.m_terminal[1], abs=1e-12)
        # the post-removal terminal level IS the tilde boundary
        (_,), (m_eq_shift,) = shifted_levels(net, 1)
        assert m_eq_shift == pytest.approx(dom.m_tilde_eq[0], abs=1e-12)


def test_joint_survival_limits():
    # short horizon, source deep inside both terminal levels: survival -> 1
    net = fig15_network()
    q_short, _ = joint_survival_Q(net, (4.5, 4.5), 0.05 / 0.16)
    assert q_short > 0.9999
    q, err = joint_survival_Q(net, (2.0, 2.0), 12.5)
    q1, _ = marginal_survival_Q1(net, (2.0, 2.0), 12.5)
    assert 0.0 < q < q1 < 1.0
    assert err < 1e-6


def test_q1_decoupling_oracle():
    net = fig15_network()
    net.mutual[:] = 0.0
    net.__post_init__()
    q1, _ = marginal_survival_Q1(net, (2.5, 2.5), 12.5)
    assert q1 == pytest.approx(q1_standalone(net, 2.5, 12.5), abs=1e-6)


def test_q1_below_standalone():
    net = fig15_network()
    for x1 in (1.5, 2.5, 3.5):
        for x2 in (1.5, 3.0):
            q1, _ = marginal_survival_Q1(
                net, (x1, x2), 12.5,
                QuadratureSpec(panels=5, order=12, time_panels=10))
            assert q1_standalone(net, x1, 12.5) - q1 >= -1e-9


def test_wedge_context_rejects_jumps_and_bad_rho():
    from circuitlab.rng import JumpSpec
    net = fig15_network()
    net.jumps = JumpSpec(2, {frozenset([0]): 0.1}, np.array([1.0, 1.0]))
    with pytest.raises(ValueError, match="diffusion-only"):
        wedge_context(net)
    with pytest.raises(ValueError, match="correlation"):
        WedgeContext.build(1.0, [0.0, 0.0])
