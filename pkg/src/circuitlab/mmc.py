"""Closed stochastic monetary-circuit system for rentiers, firms, and banks.

Stocks: rentier consumption C_r, deposits/loans D_r, L_r, D_f, L_f, firms'
physical assets K_f, and bank capital K_b, coupled to the regularized
employment block (theta_w, N_w, s_w, lambda_w) and the diagnostic price
level P.  Bank capital is the balancing item K_b = L_r + L_f - D_r - D_f;
with the capital-capacity constraint slack this identity propagates exactly
under the printed drifts, which the test suite asserts step by step.

Sign conventions: positive rentier/firm cash flow adds to deposits, negative
cash flow is financed by new loans, and new-loan creation is switched off
while the banking sector's capital capacity is exhausted (credit crunch).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .rng import PathNoise, RngStream

__all__ = [
    "MmcParams", "MmcState", "MmcDerived", "MmcResult",
    "net_interest", "logistic", "solve_upsilon", "derived_quantities",
    "mmc_drift_and_diffusion", "simulate", "FIG8_PARAMS", "FIG8_STATE",
]


def net_interest(deposits: float, loans: float, params: "MmcParams") -> float:
    """Net interest flow r_D * D - r_L * L."""
    return params.r_d * deposits - params.r_l * loans


def logistic(x):
    """Squashing map onto (0, 1): 1 / (1 + exp(-2x))."""
    return 1.0 / (1.0 + np.exp(-2.0 * np.asarray(x, dtype=float)))


@dataclass(frozen=True)
class MmcParams:
    kappa_c: float          # consumption mean-reversion rate
    sigma_c: float          # consumption volatility
    sigma_k: float          # physical-asset volatility
    alpha0: float           # consumption-target weight on distributed income
    alpha1: float           # consumption-target weight on capital productivity
    upsilon0: float         # investment-propensity intercept
    upsilon1: float         # weight on profit rate (> 0)
    upsilon2: float         # weight on deposits-to-assets (> 0)
    upsilon3: float         # weight on loans-to-assets (< 0)
    delta_rf: float         # rentiers' share of firms' profits
    delta_rb: float         # rentiers' share of banks' profits
    xi_delta: float         # default rate
    xi_a: float             # amortization rate
    r_d: float              # deposit rate
    r_l: float              # loan rate
    nu_f: float             # production rate
    nu_b: float             # capital adequacy ratio
    a: float                # employment-block coefficients
    b: float
    c: float
    omega: float = 0.0
    sigma_s: float = 0.0
    sigma_lambda: float = 0.0
    alpha: float = 0.02     # productivity growth (price diagnostics only)
    beta: float = 0.01      # workforce growth (price diagnostics only)

    def __post_init__(self) -> None:
        for name in ("delta_rf", "delta_rb"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        for name in ("xi_delta", "xi_a", "r_d", "r_l", "kappa_c"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.nu_f <= 0:
            raise ValueError("nu_f must be positive")
        if not 0.0 < self.nu_b < 1.0:
            raise ValueError("nu_b must lie in (0, 1)")

    @property
    def delta_ff(self) -> float:
        return 1.0 - self.delta_rf

    @property
    def delta_bb(self) -> float:
        return 1.0 - self.delta_rb


@dataclass
class MmcState:
    c_r: float
    d_r: float
    l_r: float
    d_f: float
    l_f: float
    k_f: float
    k_b: float
    theta_w: float = 1.0
    n_w: float = 100.0
    s_w: float = 0.7
    lambda_w: float = 0.95

    def balance_residual(self) -> float:
        """K_b - (L_r + L_f - D_r - D_f); zero on a consistent sheet."""
        return self.k_b - (self.l_r + self.l_f - self.d_r - self.d_f)

    def validate(self, tol: float = 1e-9) -> None:
        stocks = (self.d_r, self.l_r, self.d_f, self.l_f, self.k_f)
        if any(s < 0 for s in stocks):
            raise ValueError("stocks must be non-negative")
        if self.c_r <= 0:
            raise ValueError("C_r must be positive")
        if not (0 < self.s_w < 1 and 0 < self.lambda_w < 1):
            raise ValueError("(s_w, lambda_w) must lie inside the unit square")
        scale = max(abs(v) for v in stocks) + abs(self.k_b) + 1.0
        res = self.balance_residual()
        if abs(res) > tol * scale:
            raise ValueError(
                f"initial sheet violates K_b = L_r+L_f-D_r-D_f, residual {res:.6g}"
            )


# Representative non-stochastic circuit scenario (second upsilon_0 entry in
# the source listing read as upsilon_3, which must be negative).
FIG8_PARAMS = MmcParams(
    kappa_c=0.5, sigma_c=0.0, sigma_k=0.0, alpha0=0.5, alpha1=0.5,
    upsilon0=-1.6, upsilon1=1.1, upsilon2=0.1, upsilon3=-0.2,
    delta_rf=0.75, delta_rb=0.5, xi_delta=0.025, xi_a=0.02,
    r_d=0.02, r_l=0.04, nu_f=0.13, nu_b=0.1,
    a=0.05, b=0.05, c=0.075, omega=0.005,
)
FIG8_STATE = MmcState(c_r=3.0, d_r=30.0, l_r=20.0, d_f=20.0, l_f=50.0,
                      k_f=40.0, k_b=20.0, s_w=0.7, lambda_w=0.95)


class UpsilonError(RuntimeError):
    pass


# investment propensity this close to 1 means the self-consistency map has
# no interior fixed point (the propensity saturates); flows ~ C_r/(1-u)
# degenerate there
UPSILON_MAX = 1.0 - 1e-9


def _upsilon_map(u, c_r, d_f, l_f, k_f, p: MmcParams):
    z = (p.upsilon0
         + p.upsilon1 * c_r / ((1.0 - u) * p.nu_f * k_f)
         + p.upsilon2 * d_f / k_f
         + p.upsilon3 * l_f / k_f)
    return logistic(z)


def solve_upsilon(
    state: MmcState,
    params: MmcParams,
    mode: Literal["one-step", "fixed-point", "newton"] = "fixed-point",
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Investment propensity upsilon_f in (0, 1).

    one-step evaluates the single-iteration approximation seeded at
    logistic(upsilon_0); fixed-point damps the self-consistency map by 0.5;
    newton solves the same equation quadratically.
    """
    if state.k_f <= 0:
        raise ValueError("K_f must be positive")
    if state.c_r <= 0:
        raise ValueError("C_r must be positive")
    c_r, d_f, l_f, k_f = state.c_r, state.d_f, state.l_f, state.k_f

    if mode == "one-step":
        u0 = float(logistic(params.upsilon0))
        return float(_upsilon_map(u0, c_r, d_f, l_f, k_f, params))

    u = float(logistic(params.upsilon0))
    if mode == "fixed-point":
        for _ in range(max_iter):
            target = float(_upsilon_map(u, c_r, d_f, l_f, k_f, params))
            step = 0.5 * (target - u)
            u += step
            if u > UPSILON_MAX:
                raise UpsilonError(
                    f"degenerate investment propensity: upsilon_f saturated at {u}"
                )
            if abs(step) < tol:
                return u
        raise UpsilonError(
            f"fixed-point iteration did not converge; last step {step:.3e}"
        )
    if mode == "newton":
        for _ in range(max_iter):
            phi = float(_upsilon_map(u, c_r, d_f, l_f, k_f, params))
            # d(logistic(z))/du = 2*phi*(1-phi) * dz/du
            dz_du = params.upsilon1 * c_r / (params.nu_f * k_f * (1.0 - u) ** 2)
            g = phi - u
            gp = 2.0 * phi * (1.0 - phi) * dz_du - 1.0
            step = -g / gp
            u += step
            if u > UPSILON_MAX:
                raise UpsilonError(
                    f"degenerate investment propensity: upsilon_f saturated at {u}"
                )
            if abs(step) < tol:
                return u
        raise UpsilonError(f"newton did not converge; last step {step:.3e}")
    raise ValueError(f"unknown mode {mode!r}")


def _upsilon_vec(u, c_r, d_f, l_f, k_f, params, tol=1e-12, max_iter=200):
    """Damped fixed point, vectorized over paths, warm-started at u."""
    for _ in range(max_iter):
        target = _upsilon_map(u, c_r, d_f, l_f, k_f, params)
        step = 0.5 * (target - u)
        u = u + step
        if np.any(u > UPSILON_MAX):
            raise UpsilonError(
                f"degenerate investment propensity on {int(np.sum(u > UPSILON_MAX))} path(s)"
            )
        if np.max(np.abs(step)) < tol:
            return u
    raise UpsilonError(f"fixed-point iteration stalled at step {np.max(np.abs(step)):.3e}")


@dataclass
class MmcDerived:
    ni_r: float
    ni_f: float
    upsilon_f: float
    gamma_f: float
    y_f: float              # uncapped production (enters the accounting identities)
    y_f_capped: float
    capacity_capped: bool
    i_f: float
    u_f: float
    c_w: float
    pi_f_total: float
    pi_f_dist: float
    pi_f_undist: float
    pi_b_total: float
    pi_b_dist: float
    pi_b_undist: float
    profit_rate: float
    cf_r: float
    cf_f: float
    sigma_r: float
    price: float


def derived_quantities(state: MmcState, params: MmcParams,
                       upsilon: float | None = None) -> MmcDerived:
    """All intermediate flows implied by the current stocks."""
    u = solve_upsilon(state, params) if upsilon is None else upsilon
    if u >= 1.0:
        raise UpsilonError(f"degenerate investment propensity upsilon_f={u}")
    s_f = 1.0 - state.s_w
    ni_r = net_interest(state.d_r, state.l_r, params)
    ni_f = net_interest(state.d_f, state.l_f, params)
    y_f = state.c_r / ((1.0 - u) * s_f)
    cap = params.nu_f * state.k_f
    capped = y_f > cap
    i_f = u * state.c_r / (1.0 - u)
    u_f = y_f / cap
    c_w = state.s_w * y_f
    pi_f = state.c_r / (1.0 - u) + ni_f
    pi_b = -params.xi_delta * (state.l_r + state.l_f) - ni_r - ni_f
    cf_r = ni_r + params.delta_rf * pi_f + params.delta_rb * pi_b - state.c_r
    cf_f = params.delta_ff * pi_f - u * s_f * y_f
    sigma_r = (state.d_r - state.l_r + state.k_f + state.d_f - state.l_f
               + state.k_b)
    price = state.c_r / ((1.0 - u) * s_f * state.lambda_w
                         * state.theta_w * state.n_w)
    return MmcDerived(
        ni_r=ni_r, ni_f=ni_f, upsilon_f=u, gamma_f=u * s_f,
        y_f=y_f, y_f_capped=min(y_f, cap), capacity_capped=bool(capped),
        i_f=i_f, u_f=u_f, c_w=c_w,
        pi_f_total=pi_f, pi_f_dist=params.delta_rf * pi_f,
        pi_f_undist=params.delta_ff * pi_f,
        pi_b_total=pi_b, pi_b_dist=params.delta_rb * pi_b,
        pi_b_undist=params.delta_bb * pi_b,
        profit_rate=pi_f / state.k_f, cf_r=cf_r, cf_f=cf_f,
        sigma_r=sigma_r, price=price,
    )


@dataclass
class MmcDrift:
    drift: dict[str, float]
    diffusion: dict[str, float]
    credit_crunch: bool
    unmet_financing: float
    capacity_capped: bool
    upsilon_f: float


def mmc_drift_and_diffusion(state: MmcState, params: MmcParams,
                            upsilon: float | None = None) -> MmcDrift:
    """Per-component drift and diffusion loadings of the closed system.

    The capital-capacity switch zeroes new-loan creation (the (-CF)^+ terms)
    whenever K_b <= nu_b (L_r + L_f); the suppressed increment is reported
    as unmet financing demand.
    """
    p = params
    u = solve_upsilon(state, p) if upsilon is None else upsilon
    ni_r = net_interest(state.d_r, state.l_r, p)
    ni_f = net_interest(state.d_f, state.l_f, p)
    loans = state.l_r + state.l_f
    capital_ok = p.nu_b * loans - state.k_b < 0.0

    cf_r = (p.delta_bb * ni_r + (p.delta_rf - p.delta_rb) * ni_f
            - p.delta_rb * p.xi_delta * loans
            - (p.delta_ff - u) * state.c_r / (1.0 - u))
    cf_f = p.delta_ff * ni_f + (p.delta_ff - u) * state.c_r / (1.0 - u)

    new_l_r = max(-cf_r, 0.0)
    new_l_f = max(-cf_f, 0.0)
    unmet = 0.0
    if not capital_ok:
        unmet = new_l_r + new_l_f
        new_l_r = new_l_f = 0.0

    c_bar = (p.alpha0 * (p.delta_bb * ni_r + (p.delta_rf - p.delta_rb) * ni_f
                         + p.delta_rf * state.c_r / (1.0 - u))
             + p.alpha1 * p.nu_f * state.k_f)

    s_f = 1.0 - state.s_w
    lambda_u = 1.0 - state.lambda_w
    drift = {
        "c_r": p.kappa_c * (c_bar - state.c_r),
        "d_r": max(cf_r, 0.0),
        "l_r": -p.xi_delta * state.l_r + new_l_r,
        "d_f": max(cf_f, 0.0),
        "l_f": -p.xi_delta * state.l_f + new_l_f,
        "k_f": u * state.c_r / (1.0 - u) - p.xi_a * state.k_f,
        "k_b": -p.delta_bb * (p.xi_delta * loans + ni_r + ni_f),
        "theta_w": p.alpha * state.theta_w,
        "n_w": p.beta * state.n_w,
        "s_w": -(p.a - p.b * state.lambda_w - p.omega / lambda_u) * state.s_w,
        "lambda_w": (u * state.c_r / ((1.0 - u) * p.nu_f * state.k_f)
                     - p.c - p.omega / s_f) * state.lambda_w,
    }
    diffusion = {
        "c_r": p.sigma_c * state.c_r,
        "k_f": p.sigma_k * state.k_f,
        "s_w": p.sigma_s * math.sqrt(max(state.s_w * s_f, 0.0)),
        "lambda_w": p.sigma_lambda * math.sqrt(max(state.lambda_w * lambda_u, 0.0)),
    }
    cap = params.nu_f * state.k_f
    y_f = state.c_r / ((1.0 - u) * s_f)
    return MmcDrift(drift=drift, diffusion=diffusion,
                    credit_crunch=not capital_ok, unmet_financing=unmet,
                    capacity_capped=y_f > cap, upsilon_f=u)


STOCK_NAMES = ("c_r", "d_r", "l_r", "d_f", "l_f", "k_f", "k_b",
               "theta_w", "n_w", "s_w", "lambda_w")


@dataclass
class MmcResult:
    t: np.ndarray
    series: dict[str, np.ndarray]      # each (recorded step, path)
    upsilon_f: np.ndarray
    y_f: np.ndarray
    price: np.ndarray
    credit_crunch_steps: int
    capacity_cap_steps: int
    floor_hits: int
    clamp_events: int
    max_identity_residual: float

    def state_at(self, idx: int, path: int = 0) -> MmcState:
        return MmcState(**{k: float(self.series[k][idx, path]) for k in STOCK_NAMES})


def simulate(
    initial: MmcState,
    params: MmcParams,
    horizon: float,
    dt: float,
    paths: int = 1,
    stream: RngStream | None = None,
    c_r_floor: float = 1e-9,
    clamp_eps: float = 1e-9,
    record_stride: int = 1,
) -> MmcResult:
    """Joint Euler evolution of the circuit stocks, the employment block, and
    the diagnostic price level.

    The initial sheet must satisfy K_b = L_r + L_f - D_r - D_f.  New-loan
    terms are switched off during credit-crunch intervals; stock floors and
    unit-square clamps are counted.  The running maximum of the balance
    identity residual is reported (meaningful while the crunch never binds).
    """
    if dt <= 0 or horizon <= 0:
        raise ValueError("dt and horizon must be positive")
    initial.validate()
    p = params
    n_steps = int(round(horizon / dt))
    rec_idx = np.arange(0, n_steps + 1, record_stride)
    if rec_idx[-1] != n_steps:
        rec_idx = np.append(rec_idx, n_steps)

    cur = {k: np.full(paths, float(getattr(initial, k))) for k in STOCK_NAMES}
    series = {k: np.empty((len(rec_idx), paths)) for k in STOCK_NAMES}
    ups_rec = np.empty((len(rec_idx), paths))
    yf_rec = np.empty((len(rec_idx), paths))
    price_rec = np.empty((len(rec_idx), paths))

    stochastic = p.sigma_c > 0 or p.sigma_k > 0 or p.sigma_s > 0 or p.sigma_lambda > 0
    noise = PathNoise(stream or RngStream(0), paths) if stochastic else None
    sqdt = math.sqrt(dt)
    lo, hi = clamp_eps, 1.0 - clamp_eps

    u = np.full(paths, float(logistic(p.upsilon0)))
    crunch_steps = 0
    cap_steps = 0
    floor_hits = 0
    clamp_events = 0
    max_resid = 0.0
    next_rec = 0
    chunk = 4096

    def record(i):
        # upsilon re-solved at the recorded state so stored derived series
        # are self-consistent with the stored stocks
        u_rec = _upsilon_vec(u.copy(), cur["c_r"], cur["d_f"],
                             cur["l_f"], cur["k_f"], p)
        for k in STOCK_NAMES:
            series[k][i] = cur[k]
        s_f = 1.0 - cur["s_w"]
        yf = cur["c_r"] / ((1.0 - u_rec) * s_f)
        ups_rec[i] = u_rec
        yf_rec[i] = np.minimum(yf, p.nu_f * cur["k_f"])
        price_rec[i] = cur["c_r"] / ((1.0 - u_rec) * s_f * cur["lambda_w"]
                                     * cur["theta_w"] * cur["n_w"])

    u = _upsilon_vec(u, cur["c_r"], cur["d_f"], cur["l_f"], cur["k_f"], p)
    record(0)
    next_rec = 1

    k_step = 0
    while k_step < n_steps:
        block = min(chunk, n_steps - k_step)
        z = noise.normals(block, 4) if stochastic else None
        for j in range(block):
            c_r, d_r, l_r = cur["c_r"], cur["d_r"], cur["l_r"]
            d_f, l_f, k_f, k_b = cur["d_f"], cur["l_f"], cur["k_f"], cur["k_b"]
            s_w, lam = cur["s_w"], cur["lambda_w"]
            u = _upsilon_vec(u, c_r, d_f, l_f, k_f, p)

            ni_r = p.r_d * d_r - p.r_l * l_r
            ni_f = p.r_d * d_f - p.r_l * l_f
            loans = l_r + l_f
            capital_ok = p.nu_b * loans - k_b < 0.0
            crunch = ~capital_ok
            crunch_steps += int(crunch.sum())

            base = (p.delta_ff - u) * c_r / (1.0 - u)
            cf_r = (p.delta_bb * ni_r + (p.delta_rf - p.delta_rb) * ni_f
                    - p.delta_rb * p.xi_delta * loans - base)
            cf_f = p.delta_ff * ni_f + base
            new_l_r = np.where(capital_ok, np.maximum(-cf_r, 0.0), 0.0)
            new_l_f = np.where(capital_ok, np.maximum(-cf_f, 0.0), 0.0)

            c_bar = (p.alpha0 * (p.delta_bb * ni_r
                                 + (p.delta_rf - p.delta_rb) * ni_f
                                 + p.delta_rf * c_r / (1.0 - u))
                     + p.alpha1 * p.nu_f * k_f)
            s_f = 1.0 - s_w
            lam_u = 1.0 - lam
            cap_steps += int((c_r / ((1.0 - u) * s_f) > p.nu_f * k_f).sum())

            d_c_r = p.kappa_c * (c_bar - c_r) * dt
            d_d_r = np.maximum(cf_r, 0.0) * dt
            d_l_r = (-p.xi_delta * l_r + new_l_r) * dt
            d_d_f = np.maximum(cf_f, 0.0) * dt
            d_l_f = (-p.xi_delta * l_f + new_l_f) * dt
            d_k_f = (u * c_r / (1.0 - u) - p.xi_a * k_f) * dt
            d_k_b = -p.delta_bb * (p.xi_delta * loans + ni_r + ni_f) * dt
            d_s = -(p.a - p.b * lam - p.omega / lam_u) * s_w * dt
            d_lam = (u * c_r / ((1.0 - u) * p.nu_f * k_f)
                     - p.c - p.omega / s_f) * lam * dt

            if stochastic:
                zc, zk, zs, zl = z[j, 0], z[j, 1], z[j, 2], z[j, 3]
                d_c_r = d_c_r + p.sigma_c * c_r * sqdt * zc
                d_k_f = d_k_f + p.sigma_k * k_f * sqdt * zk
                d_s = d_s + p.sigma_s * np.sqrt(np.clip(s_w * s_f, 0, None)) * sqdt * zs
                d_lam = d_lam + p.sigma_lambda * np.sqrt(
                    np.clip(lam * lam_u, 0, None)) * sqdt * zl

            cur["c_r"] = c_r + d_c_r
            cur["d_r"] = d_r + d_d_r
            cur["l_r"] = l_r + d_l_r
            cur["d_f"] = d_f + d_d_f
            cur["l_f"] = l_f + d_l_f
            cur["k_f"] = k_f + d_k_f
            cur["k_b"] = k_b + d_k_b
            cur["theta_w"] = cur["theta_w"] * (1.0 + p.alpha * dt)
            cur["n_w"] = cur["n_w"] * (1.0 + p.beta * dt)
            cur["s_w"] = s_w + d_s
            cur["lambda_w"] = lam + d_lam

            # floors and clamps
            low = cur["c_r"] < c_r_floor
            floor_hits += int(low.sum())
            cur["c_r"] = np.maximum(cur["c_r"], c_r_floor)
            for name in ("d_r", "l_r", "d_f", "l_f", "k_f"):
                neg = cur[name] < 0.0
                floor_hits += int(neg.sum())
                cur[name] = np.maximum(cur[name], 0.0)
            out = ((cur["s_w"] < lo) | (cur["s_w"] > hi)
                   | (cur["lambda_w"] < lo) | (cur["lambda_w"] > hi))
            clamp_events += int(out.sum())
            cur["s_w"] = np.clip(cur["s_w"], lo, hi)
            cur["lambda_w"] = np.clip(cur["lambda_w"], lo, hi)

            resid = np.abs(cur["k_b"] - (cur["l_r"] + cur["l_f"]
                                         - cur["d_r"] - cur["d_f"]))
            max_resid = max(max_resid, float(resid.max()))

            k_step += 1
            if next_rec < len(rec_idx) and k_step == rec_idx[next_rec]:
                record(next_rec)
                next_rec += 1

    return MmcResult(
        t=rec_idx * dt, series=series, upsilon_f=ups_rec, y_f=yf_rec,
        price=price_rec, credit_crunch_steps=crunch_steps,
        capacity_cap_steps=cap_steps, floor_hits=floor_hits,
        clamp_events=clamp_events, max_identity_residual=max_resid,
    )
