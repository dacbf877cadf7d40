"""Semi-analytic two-bank survival machinery.

Works in the scaled coordinates of the network module: each bank's
log-distance to its interior default boundary is a unit-variance Brownian
motion with constant drift, absorbed on the positive-quadrant axes.  The
transition density is the classical wedge expansion: a drift tilt times a
Bessel series of orders n*pi/varpi, where cos(varpi) = -rho.

Survival probabilities are then quadratures of this density over the
terminal settlement domains, plus (for the marginal) the time integral of
the one-dimensional shifted survival law against the absorption flux on the
other bank's boundary face.  Jump dynamics are outside this module's scope;
the Monte Carlo engine covers them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import iv_scaled
from .network import BankNetwork, boundaries, nondim_context, shifted_levels

__all__ = [
    "WedgeContext", "TwoBankDomains", "norm_cdf", "survival_1d",
    "wedge_green", "boundary_flux", "joint_survival_Q",
    "marginal_survival_Q1", "q1_standalone", "conservation_check",
    "two_bank_domains", "wedge_context",
]


def norm_cdf(x):
    return 0.5 * np.array(np.vectorize(math.erfc)(-np.asarray(x, float) / math.sqrt(2.0)))


class SeriesError(RuntimeError):
    """Bessel series failed to reach the truncation target."""


@dataclass
class WedgeContext:
    rho: float
    xi: np.ndarray                 # scaled drift vector (2,)
    rho_bar: float
    varpi: float                   # wedge angle, cos(varpi) = -rho
    theta: np.ndarray              # C^{-1} xi (drift tilt)
    theta_dot_xi: float

    @classmethod
    def build(cls, rho: float, xi) -> "WedgeContext":
        if not -1.0 < rho < 1.0:
            raise ValueError("correlation must lie strictly inside (-1, 1)")
        xi = np.asarray(xi, dtype=float)
        rho_bar = math.sqrt(1.0 - rho * rho)
        varpi = math.acos(-rho)
        cinv = np.array([[1.0, -rho], [-rho, 1.0]]) / (rho_bar * rho_bar)
        theta = cinv @ xi
        return cls(rho=rho, xi=xi, rho_bar=rho_bar, varpi=varpi,
                   theta=theta, theta_dot_xi=float(theta @ xi))

    def order(self, n: int) -> float:
        return n * math.pi / self.varpi

    def polar(self, x1, x2):
        """Radial/angular coordinates of the transformed standard plane."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        r = np.sqrt((x1 * x1 - 2.0 * self.rho * x1 * x2 + x2 * x2)) / self.rho_bar
        phi = np.arctan2(self.rho_bar * x1, x2 - self.rho * x1)
        return r, phi


def wedge_context(net: BankNetwork) -> WedgeContext:
    if net.n != 2:
        raise ValueError("the wedge expansion covers exactly two banks")
    if net.jumps is not None:
        raise ValueError("the wedge expansion is diffusion-only; use Monte Carlo for jumps")
    ctx = nondim_context(net)
    return WedgeContext.build(float(net.corr.rho[0, 1]), ctx.xi)


def survival_1d(x: float, xi: float, m_lt: float, m_eq: float, tau: float):
    """Closed-form survival of drifted Brownian motion: never touch m_lt on
    [0, tau] and finish at or above m_eq (with m_eq >= m_lt)."""
    if tau <= 0:
        raise ValueError("tau must be positive")
    x = np.asarray(x, dtype=float)
    sq = math.sqrt(tau)
    first = norm_cdf(-(m_eq - x - xi * tau) / sq)
    refl = np.exp(-2.0 * xi * (x - m_lt)) * norm_cdf(
        -(m_eq + x - 2.0 * m_lt - xi * tau) / sq)
    out = first - refl
    out = np.where(x <= m_lt, 0.0, np.clip(out, 0.0, 1.0))
    return out if out.ndim else float(out)


def _bessel_series(ctx: WedgeContext, z: np.ndarray, phi: np.ndarray,
                   phi_src: float, n_terms: int, tol: float) -> np.ndarray:
    """Sum_n ive(nu_n, z) * sin(nu_n phi) * sin(nu_n phi'), truncated when
    the running contribution falls below tol relative to the sum (two quiet
    terms in a row, since the sines oscillate)."""
    total = np.zeros_like(z)
    scale = 0.0
    quiet = 0
    last = np.inf
    for n in range(1, n_terms + 1):
        nu = ctx.order(n)
        term = iv_scaled(nu, z) * np.sin(nu * phi) * math.sin(nu * phi_src)
        total += term
        last = float(np.max(np.abs(term)))
        scale = max(scale, float(np.max(np.abs(total))))
        if last <= tol * max(scale, 1e-300):
            quiet += 1
            if quiet >= 2:
                return total
        else:
            quiet = 0
    raise SeriesError(
        f"Bessel series not converged after {n_terms} terms; "
        f"last term magnitude {last:.3e}"
    )


def wedge_green(ctx: WedgeContext, t: float, x1, x2, x_src,
                n_terms: int = 800, tol: float = 1e-14,
                prune: float = 1e-30) -> np.ndarray:
    """Absorbed transition density G(t, X; X') on the open quadrant.

    Points whose Gaussian envelope falls below `prune` are returned as zero
    without evaluating the Bessel series (scaled I_nu is bounded by one, so
    the envelope dominates every term)."""
    if t <= 0:
        raise ValueError("t must be positive")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    xs1, xs2 = float(x_src[0]), float(x_src[1])
    if xs1 <= 0 or xs2 <= 0:
        raise ValueError("source point must be interior")
    r, phi = ctx.polar(x1, x2)
    r_src, phi_src = ctx.polar(xs1, xs2)
    gauss = np.exp(-((r - r_src) ** 2) / (2.0 * t))
    tilt = np.exp(-0.5 * ctx.theta_dot_xi * t
                  + ctx.theta[0] * (x1 - xs1) + ctx.theta[1] * (x2 - xs2))
    scale = tilt * 2.0 / (ctx.rho_bar * ctx.varpi * t) * gauss
    out = np.zeros_like(scale)
    live = scale > prune
    if np.any(live):
        z = r[live] * r_src / t
        series = _bessel_series(ctx, z, phi[live], float(phi_src), n_terms, tol)
        out[live] = scale[live] * series
    return out


def boundary_flux(ctx: WedgeContext, t, coord, x_src,
                  face: int = 2, n_terms: int = 800, tol: float = 1e-14) -> np.ndarray:
    """Absorption flux density g_k = G_{X_k}/2 on the face {X_k = 0}.

    face=2 gives the flux through bank 2's boundary as a function of X_1
    (the alternating series); face=1 the mirror through bank 1's boundary as
    a function of X_2.  `t` may be a scalar or an array matching `coord`,
    so whole time-space quadrature grids evaluate in one series sweep.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    coord = np.asarray(coord, dtype=float)
    t, coord = np.broadcast_arrays(t, coord)
    xs1, xs2 = float(x_src[0]), float(x_src[1])
    r_src, phi_src = ctx.polar(xs1, xs2)
    gauss = np.exp(-((coord / ctx.rho_bar - r_src) ** 2) / (2.0 * t))
    drift_component = ctx.theta[0] if face == 2 else ctx.theta[1]
    tilt = np.exp(-0.5 * ctx.theta_dot_xi * t + drift_component * coord
                  - ctx.theta[0] * xs1 - ctx.theta[1] * xs2)
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.where(coord > 0, 2.0 / (ctx.varpi * t * coord), 0.0)
    scale_factor = 0.5 * tilt * base * gauss
    out = np.zeros_like(coord)
    live = np.abs(scale_factor) > 1e-30
    if not np.any(live):
        return out
    z = coord[live] * r_src / (ctx.rho_bar * t[live])

    # sin(nu_n * phi) vanishes on the face; the differentiated series
    # carries nu_n and, on face 2, the alternating sign (-1)^{n+1}
    total = np.zeros_like(z)
    scale = 0.0
    quiet = 0
    last = np.inf
    for n in range(1, n_terms + 1):
        nu = ctx.order(n)
        term = nu * iv_scaled(nu, z) * math.sin(nu * phi_src)
        if face == 2 and n % 2 == 0:
            term = -term
        total += term
        last = float(np.max(np.abs(term)))
        scale = max(scale, float(np.max(np.abs(total))))
        if last <= tol * max(scale, 1e-300):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    else:
        raise SeriesError(
            f"flux series not converged after {n_terms} terms; "
            f"last term magnitude {last:.3e}"
        )
    out[live] = scale_factor[live] * total
    return out


@dataclass
class TwoBankDomains:
    """Terminal settlement geometry of the two-bank quadrant."""

    lambda_lt: np.ndarray      # interior boundaries (money units)
    lambda_eq: np.ndarray      # terminal boundaries
    lambda_tilde_lt: np.ndarray
    lambda_tilde_eq: np.ndarray
    delta: float               # L1 L2 + L1 L21 + L2 L12
    m_eq: np.ndarray           # terminal boundaries, scaled coordinates
    m_tilde_eq: np.ndarray     # post-removal terminal levels, scaled
    zeta: np.ndarray
    _net: BankNetwork

    def theta_curve(self, i: int, x_other) -> np.ndarray:
        """Scaled curvilinear boundary Theta_i(X_other) separating
        'bank i survives' from 'bank i defaults' while the other bank
        settles below par."""
        net = self._net
        j = 1 - i
        l_i = net.external_liabilities[i]
        l_j = net.external_liabilities[j]
        l_ij = net.mutual[i, j]
        l_ji = net.mutual[j, i]
        a_other = self.lambda_lt[j] * np.exp(np.asarray(x_other, float) / self.zeta[j])
        arg = (self.delta - l_ji * a_other) / (self.lambda_lt[i] * (l_j + l_ji))
        return self.zeta[i] * np.log(np.maximum(arg, 1e-300))


def two_bank_domains(net: BankNetwork) -> TwoBankDomains:
    if net.n != 2:
        raise ValueError("two banks required")
    b = boundaries(net)
    l = net.external_liabilities
    m = net.mutual
    r = net.recoveries
    tilde_lt = np.array([
        r[0] * (l[0] + m[0, 1] - r[1] * m[1, 0]),
        r[1] * (l[1] + m[1, 0] - r[0] * m[0, 1]),
    ])
    tilde_eq = np.array([
        l[0] + m[0, 1] - r[1] * m[1, 0],
        l[1] + m[1, 0] - r[0] * m[0, 1],
    ])
    delta = l[0] * l[1] + l[0] * m[1, 0] + l[1] * m[0, 1]
    ctx = nondim_context(net)
    m_eq = ctx.m_terminal
    m_tilde_eq = ctx.zeta * np.log(tilde_eq / b.interior)
    return TwoBankDomains(
        lambda_lt=b.interior, lambda_eq=b.terminal,
        lambda_tilde_lt=tilde_lt, lambda_tilde_eq=tilde_eq,
        delta=float(delta), m_eq=m_eq, m_tilde_eq=m_tilde_eq,
        zeta=ctx.zeta, _net=net,
    )


# ---------------------------------------------------------------------------
# quadrature helpers


def _gl_panels(a: float, b: float, panels: int, order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    xs = []
    ws = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        xs.append(0.5 * (lo + hi) + half * nodes)
        ws.append(half * weights)
    return np.concatenate(xs), np.concatenate(ws)


def _gl_panels_graded(cut: float, panels: int, order: int, levels: int = 30):
    """Panels on (0, cut] refined geometrically toward 0, where absorbed
    densities behave like fractional powers x^(nu_1 - 1)."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = [cut * 0.5 ** j for j in range(levels, 0, -1)]
    edges = [0.0] + edges + list(np.linspace(cut * 0.5, cut, max(panels // 2, 2) + 1)[1:])
    xs = []
    ws = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        half = 0.5 * (hi - lo)
        xs.append(0.5 * (lo + hi) + half * nodes)
        ws.append(half * weights)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass
class QuadratureSpec:
    panels: int = 8
    order: int = 16
    time_panels: int = 24
    target: float = 1e-6
    tail_sigmas: float = 8.5


def _upper_cut(x_src: float, xi: float, t: float, spec: QuadratureSpec) -> float:
    return x_src + max(xi * t, 0.0) + spec.tail_sigmas * math.sqrt(t) + 1.0


def _terminal_integral(wctx: WedgeContext, t: float, x_src,
                       lower1, upper1, lower2: float, upper2: float,
                       spec: QuadratureSpec) -> float:
    """Integral of G(t, .) over {lower1(x2) < x1 < upper1, lower2 < x2 < upper2},
    evaluated as one flat batch so the Bessel series runs once."""
    x2, w2 = _gl_panels(lower2, upper2, spec.panels, spec.order)
    xs1, xs2, ws = [], [], []
    for x2v, w2v in zip(x2, w2):
        lo1 = float(lower1(x2v)) if callable(lower1) else float(lower1)
        if lo1 >= upper1:
            continue
        x1, w1 = _gl_panels(lo1, upper1, spec.panels, spec.order)
        xs1.append(x1)
        xs2.append(np.full_like(x1, x2v))
        ws.append(w1 * w2v)
    if not xs1:
        return 0.0
    g = wedge_green(wctx, t, np.concatenate(xs1), np.concatenate(xs2), x_src)
    return float(np.dot(np.concatenate(ws), g))


def joint_survival_Q(net: BankNetwork, x_src, horizon: float,
                     spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Probability that neither bank touches its interior boundary on
    [0, T] and both settle in full at T; returns (value, error estimate)."""
    spec = spec or QuadratureSpec()
    wctx = wedge_context(net)
    nctx = nondim_context(net)
    t_bar = nctx.scaled_time(horizon)
    m1_eq, m2_eq = nctx.m_terminal
    u1 = _upper_cut(float(x_src[0]), wctx.xi[0], t_bar, spec)
    u2 = _upper_cut(float(x_src[1]), wctx.xi[1], t_bar, spec)
    val = _terminal_integral(wctx, t_bar, x_src, m1_eq, u1, m2_eq, u2, spec)
    finer = QuadratureSpec(panels=spec.panels + spec.panels // 2,
                           order=spec.order, target=spec.target,
                           tail_sigmas=spec.tail_sigmas)
    val2 = _terminal_integral(wctx, t_bar, x_src, m1_eq, u1, m2_eq, u2, finer)
    err = abs(val2 - val)
    if err > spec.target:
        raise RuntimeError(
            f"joint-survival quadrature achieved only {err:.2e} "
            f"(target {spec.target:.2e})"
        )
    return val2, err


def q1_standalone(net: BankNetwork, x1, horizon: float):
    """Bank 1 survival if bank 2 could never default: original boundaries."""
    wctx = wedge_context(net)
    nctx = nondim_context(net)
    t_bar = nctx.scaled_time(horizon)
    return survival_1d(x1, wctx.xi[0], 0.0, float(nctx.m_terminal[0]), t_bar)


def marginal_survival_Q1(net: BankNetwork, x_src, horizon: float,
                         spec: QuadratureSpec | None = None) -> tuple[float, float]:
    """Bank 1 survival probability: terminal mass over the domains where
    bank 1 settles in full plus the flux of bank-2 defaults followed by
    bank 1 surviving alone behind its shifted boundaries."""
    spec = spec or QuadratureSpec()
    coarse = _q1_once(net, x_src, horizon, spec)
    finer = QuadratureSpec(panels=spec.panels + spec.panels // 2,
                           order=spec.order,
                           time_panels=spec.time_panels + spec.time_panels // 2,
                           target=spec.target, tail_sigmas=spec.tail_sigmas)
    fine = _q1_once(net, x_src, horizon, finer)
    err = abs(fine - coarse)
    if err > spec.target:
        raise RuntimeError(
            f"marginal-survival quadrature achieved only {err:.2e} "
            f"(target {spec.target:.2e})"
        )
    return fine, err


def _q1_once(net: BankNetwork, x_src, horizon: float, spec: QuadratureSpec) -> float:
    wctx = wedge_context(net)
    nctx = nondim_context(net)
    dom = two_bank_domains(net)
    t_bar = nctx.scaled_time(horizon)
    m1_eq, m2_eq = nctx.m_terminal
    (m1_shift_lt,), (m1_shift_eq,) = shifted_levels(net, 1)
    u1 = _upper_cut(float(x_src[0]), wctx.xi[0], t_bar, spec)
    u2 = _upper_cut(float(x_src[1]), wctx.xi[1], t_bar, spec)

    # terminal: D(1,1) plus the curvilinear bank-2-defaults strip D(1,0)
    both = _terminal_integral(wctx, t_bar, x_src, m1_eq, u1, m2_eq, u2, spec)
    strip = _terminal_integral(
        wctx, t_bar, x_src, lambda x2: dom.theta_curve(0, x2), u1, 0.0, m2_eq, spec)

    # flux through bank 2's face against the shifted one-dimensional law;
    # substituting s = T - u^2 makes the remaining-life survival smooth in
    # the integration variable (it depends on u = sqrt(tau) directly)
    xs2 = float(x_src[1])
    u_nodes, u_weights = _gl_panels(0.0, math.sqrt(t_bar), spec.time_panels, 10)
    # the remaining-life survival develops a step at the shifted terminal
    # level as tau -> 0; panel edges placed there keep the rule spectral
    lo_nodes, lo_w = _gl_panels(m1_shift_lt, m1_shift_eq, max(spec.panels // 2, 2),
                                spec.order)
    hi_nodes, hi_w = _gl_panels(m1_shift_eq, u1, spec.panels, spec.order)
    x1_nodes = np.concatenate([lo_nodes, hi_nodes])
    x1_weights = np.concatenate([lo_w, hi_w])

    t_all, c_all, w_all = [], [], []
    for u, wu in zip(u_nodes, u_weights):
        tau = u * u
        s = t_bar - tau
        # flux bound: exp(-X2'^2 / 2s) caps the absorbed mass density
        if s <= 0.0 or xs2 * xs2 / (2.0 * s) > 42.0:
            continue
        if tau <= 1e-14:
            q1v = (x1_nodes >= m1_shift_eq).astype(float)
        else:
            q1v = survival_1d(x1_nodes, wctx.xi[0], m1_shift_lt, m1_shift_eq, tau)
        t_all.append(np.full_like(x1_nodes, s))
        c_all.append(x1_nodes)
        w_all.append(2.0 * u * wu * x1_weights * q1v)
    flux_total = 0.0
    if t_all:
        g2 = boundary_flux(wctx, np.concatenate(t_all), np.concatenate(c_all),
                           x_src, face=2)
        flux_total = float(np.dot(np.concatenate(w_all), g2))

    return both + strip + flux_total


def conservation_check(net: BankNetwork, x_src, horizon: float,
                       spec: QuadratureSpec | None = None) -> dict:
    """Interior mass plus cumulative boundary outflow; must total 1."""
    spec = spec or QuadratureSpec()
    wctx = wedge_context(net)
    nctx = nondim_context(net)
    t_bar = nctx.scaled_time(horizon)
    u1 = _upper_cut(float(x_src[0]), wctx.xi[0], t_bar, spec)
    u2 = _upper_cut(float(x_src[1]), wctx.xi[1], t_bar, spec)
    interior = _terminal_integral(wctx, t_bar, x_src, 0.0, u1, 0.0, u2, spec)

    flux = {1: 0.0, 2: 0.0}
    u_nodes, u_weights = _gl_panels(0.0, math.sqrt(t_bar), spec.time_panels, 10)
    for face, xs_other, cut in ((2, float(x_src[1]), u1), (1, float(x_src[0]), u2)):
        nodes, weights = _gl_panels_graded(cut, spec.panels, spec.order)
        t_all, c_all, w_all = [], [], []
        for u, wu in zip(u_nodes, u_weights):
            s = t_bar - u * u
            if s <= 0.0 or xs_other * xs_other / (2.0 * s) > 42.0:
                continue
            t_all.append(np.full_like(nodes, s))
            c_all.append(nodes)
            w_all.append(2.0 * u * wu * weights)
        if t_all:
            g = boundary_flux(wctx, np.concatenate(t_all), np.concatenate(c_all),
                              x_src, face=face)
            flux[face] = float(np.dot(np.concatenate(w_all), g))
    total = interior + flux[1] + flux[2]
    return {"interior": interior, "flux_face1": flux[1],
            "flux_face2": flux[2], "total": total}
