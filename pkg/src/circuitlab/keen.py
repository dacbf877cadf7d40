"""Classical and regularized-stochastic Keen dynamics.

Adds firms' leverage Gamma_f = D_f / K_f to the Goodwin pair.  Investment
responds to the net profit share through f(x) = p + exp(q*x + r), so high
profits drive debt-financed expansion and leverage can run away (a Minsky
blow-up); runs crossing a leverage threshold stop early and report the
crossing time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable
import warnings

import numpy as np

from .goodwin import GoodwinParams
from .rng import PathNoise, RngStream

__all__ = ["KeenParams", "KeenState", "KeenResult", "profit_function",
           "keen_drift", "simulate", "FIG4_PARAMS", "FIG5_PARAMS", "FIG6_PARAMS"]

EXP_CAP_DEFAULT = 700.0


@dataclass(frozen=True)
class KeenParams:
    a: float
    b: float
    c: float
    d: float
    r_l: float
    nu_f: float
    p: float
    q: float
    r: float
    omega: float = 0.0
    sigma_s: float = 0.0
    sigma_lambda: float = 0.0

    def __post_init__(self) -> None:
        if self.nu_f <= 0:
            raise ValueError("nu_f must be positive")
        if self.q <= 0:
            raise ValueError("q must be positive (profit response is increasing)")


@dataclass(frozen=True)
class KeenState:
    s_w: float
    lambda_w: float
    gamma_f: float

    @property
    def s_f(self) -> float:
        return 1.0 - self.s_w


FIG4_PARAMS = KeenParams(a=0.225, b=0.20, c=0.075, d=0.03, r_l=0.03,
                         nu_f=0.1, p=-0.0065, q=20.0, r=-5.0)
FIG5_PARAMS = replace(FIG4_PARAMS, omega=0.005)
FIG6_PARAMS = replace(FIG5_PARAMS, sigma_s=0.005, sigma_lambda=0.005)


def profit_function(x, params: KeenParams, exp_cap: float = EXP_CAP_DEFAULT):
    """Net-profit response f(x) = p + exp(q*x + r), exponent capped against overflow."""
    arg = params.q * np.asarray(x, dtype=float) + params.r
    if np.any(arg > exp_cap):
        warnings.warn(
            f"profit exponent capped at {exp_cap} (max arg {np.max(arg):.3g})",
            stacklevel=2,
        )
        arg = np.minimum(arg, exp_cap)
    out = params.p + np.exp(arg)
    return float(out) if np.isscalar(x) else out


def keen_drift(
    state: KeenState,
    params: KeenParams,
    regularized: bool = False,
    with_nu_factor: bool = True,
    profit_fn: Callable | None = None,
) -> tuple[float, float, float]:
    """Time derivative of (s_w, lambda_w, Gamma_f).

    Unregularized form uses nu_f*f(.) - c in the lambda_w drift; the
    regularized form keeps nu_f*f(.) when with_nu_factor (the default,
    dimensionally consistent with the unregularized system) and drops the
    nu_f factor otherwise, matching the two printed variants.  The leverage
    drift is identical in both.
    """
    s, lam, g = state.s_w, state.lambda_w, state.gamma_f
    f = profit_fn if profit_fn is not None else (lambda x: profit_function(x, params))
    fx = f((1.0 - s) - params.r_l * g / params.nu_f)
    if regularized:
        if not (0 < s < 1 and 0 < lam < 1):
            raise ValueError("regularized drift requires interior (s_w, lambda_w)")
        ds = -(params.a - params.b * lam - params.omega / (1.0 - lam)) * s
        growth = (params.nu_f * fx if with_nu_factor else fx) - params.c \
            - params.omega / (1.0 - s)
    else:
        ds = -(params.a - params.b * lam) * s
        growth = params.nu_f * fx - params.c
    dl = growth * lam
    dg = (params.r_l - params.nu_f * fx + params.d) * g \
        + params.nu_f * (fx - (1.0 - s))
    return ds, dl, dg


def goodwin_equivalent(params: KeenParams) -> GoodwinParams:
    """Goodwin parameters reproducing the leverage-free Keen drift with f = identity."""
    return GoodwinParams(a=params.a, b=params.b,
                         c=params.nu_f - params.c, d=params.nu_f)


@dataclass
class KeenResult:
    t: np.ndarray
    s_w: np.ndarray
    lambda_w: np.ndarray
    gamma_f: np.ndarray
    clamp_events: int
    total_steps: int
    s_range: tuple[float, float]
    lambda_range: tuple[float, float]
    minsky_times: np.ndarray  # per path; nan when the threshold was never hit

    @property
    def clamp_rate(self) -> float:
        return self.clamp_events / max(self.total_steps, 1)

    @property
    def minsky_paths(self) -> int:
        return int(np.sum(~np.isnan(self.minsky_times)))


def simulate(
    initial: KeenState,
    params: KeenParams,
    horizon: float,
    dt: float,
    paths: int = 1,
    stream: RngStream | None = None,
    regularized: bool | None = None,
    with_nu_factor: bool = True,
    clamp_eps: float = 1e-9,
    gamma_cap: float = 10.0,
    record_stride: int = 1,
) -> KeenResult:
    """Euler paths of (s_w, lambda_w, Gamma_f).

    (s_w, lambda_w) are clamped as in the Goodwin module; Gamma_f is left
    free.  Paths whose leverage crosses gamma_cap freeze at the crossing
    ("Minsky event") and the crossing time is reported per path.
    """
    if dt <= 0 or horizon <= 0:
        raise ValueError("dt and horizon must be positive")
    if regularized is None:
        regularized = params.omega > 0
    stochastic = params.sigma_s > 0 or params.sigma_lambda > 0
    if (regularized or stochastic) and not (
        0 < initial.s_w < 1 and 0 < initial.lambda_w < 1
    ):
        raise ValueError("initial state must be interior for regularized/stochastic runs")

    n_steps = int(round(horizon / dt))
    rec_idx = np.arange(0, n_steps + 1, record_stride)
    if rec_idx[-1] != n_steps:
        rec_idx = np.append(rec_idx, n_steps)
    t = rec_idx * dt
    s_rec = np.empty((len(rec_idx), paths))
    lam_rec = np.empty((len(rec_idx), paths))
    g_rec = np.empty((len(rec_idx), paths))
    s = np.full(paths, float(initial.s_w))
    lam = np.full(paths, float(initial.lambda_w))
    g = np.full(paths, float(initial.gamma_f))
    s_rec[0], lam_rec[0], g_rec[0] = s, lam, g
    next_rec = 1

    noise = PathNoise(stream or RngStream(0), paths) if stochastic else None
    sqdt = math.sqrt(dt)
    lo, hi = clamp_eps, 1.0 - clamp_eps
    clamped = 0
    s_min = s_max = float(initial.s_w)
    l_min = l_max = float(initial.lambda_w)
    minsky = np.full(paths, np.nan)
    alive = np.ones(paths, dtype=bool)
    chunk = 4096

    k = 0
    while k < n_steps:
        block = min(chunk, n_steps - k)
        z = noise.normals(block, 2) if stochastic else None
        for j in range(block):
            arg = (1.0 - s) - params.r_l * g / params.nu_f
            fx = params.p + np.exp(np.minimum(params.q * arg + params.r, EXP_CAP_DEFAULT))
            if regularized:
                ds = -(params.a - params.b * lam - params.omega / (1.0 - lam)) * s
                growth = (params.nu_f * fx if with_nu_factor else fx) - params.c \
                    - params.omega / (1.0 - s)
            else:
                ds = -(params.a - params.b * lam) * s
                growth = params.nu_f * fx - params.c
            dl = growth * lam
            dg = (params.r_l - params.nu_f * fx + params.d) * g \
                + params.nu_f * (fx - (1.0 - s))
            s_next = s + ds * dt
            l_next = lam + dl * dt
            g_next = g + dg * dt
            if stochastic:
                s_next += params.sigma_s * np.sqrt(
                    np.clip(s * (1.0 - s), 0.0, None)) * sqdt * z[j, 0]
                l_next += params.sigma_lambda * np.sqrt(
                    np.clip(lam * (1.0 - lam), 0.0, None)) * sqdt * z[j, 1]
            if regularized or stochastic:
                out = alive & ((s_next < lo) | (s_next > hi)
                               | (l_next < lo) | (l_next > hi))
                clamped += int(out.sum())
                s_next = np.clip(s_next, lo, hi)
                l_next = np.clip(l_next, lo, hi)
            # frozen (post-Minsky) paths keep their last state
            s = np.where(alive, s_next, s)
            lam = np.where(alive, l_next, lam)
            g = np.where(alive, g_next, g)
            k += 1
            blown = alive & (g > gamma_cap)
            if np.any(blown):
                minsky[blown] = k * dt
                alive &= ~blown
            if np.any(alive):
                s_min = min(s_min, float(s[alive].min()))
                s_max = max(s_max, float(s[alive].max()))
                l_min = min(l_min, float(lam[alive].min()))
                l_max = max(l_max, float(lam[alive].max()))
            if next_rec < len(rec_idx) and k == rec_idx[next_rec]:
                s_rec[next_rec], lam_rec[next_rec], g_rec[next_rec] = s, lam, g
                next_rec += 1

    return KeenResult(t=t, s_w=s_rec, lambda_w=lam_rec, gamma_f=g_rec,
                      clamp_events=clamped, total_steps=n_steps * paths,
                      s_range=(s_min, s_max), lambda_range=(l_min, l_max),
                      minsky_times=minsky)
