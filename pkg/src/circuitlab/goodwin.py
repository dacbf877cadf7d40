"""Classical and regularized-stochastic Lotka-Volterra-Goodwin dynamics.

State is the pair (s_w, lambda_w): workers' output share and employment
rate.  The classical system is the predator-prey pair

    ds_w / s_w      = -(a - b*lambda_w) dt
    dlambda_w / lambda_w = (c - d*s_w) dt

The regularized system adds barrier terms omega/lambda_u and omega/s_f to
the drifts and Jacobi volatilities sigma*sqrt(x(1-x)) that vanish on the
boundary, confining paths to the open unit square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
import warnings

import numpy as np

from .rng import PathNoise, RngStream

__all__ = ["GoodwinParams", "GoodwinState", "GoodwinResult",
           "classical_drift", "regularized_drift", "conservation",
           "fixed_point", "simulate", "FIG1_PARAMS", "FIG2_PARAMS", "FIG3_PARAMS"]


@dataclass(frozen=True)
class GoodwinParams:
    a: float
    b: float
    c: float
    d: float
    omega: float = 0.0
    sigma_s: float = 0.0
    sigma_lambda: float = 0.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.omega < 0 or self.sigma_s < 0 or self.sigma_lambda < 0:
            raise ValueError("omega and volatilities must be non-negative")

    @classmethod
    def from_composites(
        cls,
        a: float,
        b: float,
        alpha: float,
        beta: float,
        gamma: float,
        nu_f: float,
        xi_a: float,
        c: float | None = None,
        d: float | None = None,
        **kw,
    ) -> "GoodwinParams":
        """Assemble c = nu_f - (alpha+beta+gamma+xi_a), d = nu_f.

        Directly supplied c, d win on conflict with a warning.
        """
        c_comp = nu_f - (alpha + beta + gamma + xi_a)
        d_comp = nu_f
        if c is not None and not math.isclose(c, c_comp, rel_tol=1e-9):
            warnings.warn(
                f"explicit c={c} overrides composite value {c_comp}", stacklevel=2
            )
        if d is not None and not math.isclose(d, d_comp, rel_tol=1e-9):
            warnings.warn(
                f"explicit d={d} overrides composite value {d_comp}", stacklevel=2
            )
        return cls(a=a, b=b, c=c if c is not None else c_comp,
                   d=d if d is not None else d_comp, **kw)


@dataclass(frozen=True)
class GoodwinState:
    s_w: float
    lambda_w: float

    @property
    def s_f(self) -> float:
        return 1.0 - self.s_w

    @property
    def lambda_u(self) -> float:
        return 1.0 - self.lambda_w


# Figure presets: a, b, c, d from the representative parameter set.
FIG1_PARAMS = GoodwinParams(a=0.225, b=0.20, c=0.4, d=0.6)
FIG2_PARAMS = replace(FIG1_PARAMS, omega=0.005)
FIG3_PARAMS = replace(FIG2_PARAMS, sigma_s=0.015, sigma_lambda=0.005)


def classical_drift(state: GoodwinState, params: GoodwinParams) -> tuple[float, float]:
    """Time derivative of (s_w, lambda_w) for the unregularized system."""
    ds = -(params.a - params.b * state.lambda_w) * state.s_w
    dl = (params.c - params.d * state.s_w) * state.lambda_w
    return ds, dl


def _check_interior(state: GoodwinState) -> None:
    if not (0.0 < state.s_w < 1.0):
        raise ValueError(f"s_w={state.s_w} must lie strictly inside (0, 1)")
    if not (0.0 < state.lambda_w < 1.0):
        raise ValueError(f"lambda_w={state.lambda_w} must lie strictly inside (0, 1)")


def regularized_drift(state: GoodwinState, params: GoodwinParams) -> tuple[float, float]:
    """Drift with barrier terms omega/lambda_u and omega/s_f added."""
    _check_interior(state)
    ds = -(params.a - params.b * state.lambda_w - params.omega / state.lambda_u) * state.s_w
    dl = (params.c - params.d * state.s_w - params.omega / state.s_f) * state.lambda_w
    return ds, dl


def conservation(state: GoodwinState, params: GoodwinParams, regularized: bool = False) -> float:
    """Conserved quantity Psi along deterministic orbits.

    Classical:   -ln(s_w^c * lambda_w^a) + d*s_w + b*lambda_w
    Regularized: -ln(s_w^(c-omega) * s_f^omega * lambda_w^(a-omega) * lambda_u^omega)
                 + d*s_w + b*lambda_w
    """
    s, lam = state.s_w, state.lambda_w
    if s <= 0 or lam <= 0:
        raise ValueError("conservation requires positive s_w and lambda_w")
    if not regularized:
        return -(params.c * math.log(s) + params.a * math.log(lam)) \
            + params.d * s + params.b * lam
    if s >= 1 or lam >= 1:
        raise ValueError("regularized conservation requires the open unit square")
    w = params.omega
    return -((params.c - w) * math.log(s) + w * math.log(1.0 - s)
             + (params.a - w) * math.log(lam) + w * math.log(1.0 - lam)) \
        + params.d * s + params.b * lam


def fixed_point(params: GoodwinParams, regularized: bool = False) -> tuple[float, float]:
    """Stationary point of the drift; minimizer of the conservation law."""
    if not regularized or params.omega == 0.0:
        return params.c / params.d, params.a / params.b
    a, b, c, d, w = params.a, params.b, params.c, params.d, params.omega
    s = (c + d - math.sqrt((c - d) ** 2 + 4.0 * d * w)) / (2.0 * d)
    lam = (a + b - math.sqrt((a - b) ** 2 + 4.0 * b * w)) / (2.0 * b)
    return s, lam


@dataclass
class GoodwinResult:
    """Simulated trajectories: arrays indexed (recorded step, path).

    Extremes are tracked over every step, including those thinned out by
    record_stride, so boundary checks do not depend on the stored sampling.
    """

    t: np.ndarray
    s_w: np.ndarray
    lambda_w: np.ndarray
    clamp_events: int
    total_steps: int
    s_range: tuple[float, float]
    lambda_range: tuple[float, float]

    @property
    def clamp_rate(self) -> float:
        return self.clamp_events / max(self.total_steps, 1)


def simulate(
    initial: GoodwinState,
    params: GoodwinParams,
    horizon: float,
    dt: float,
    paths: int = 1,
    stream: RngStream | None = None,
    regularized: bool | None = None,
    clamp_eps: float = 1e-9,
    record_stride: int = 1,
) -> GoodwinResult:
    """Euler paths of the Goodwin pair.

    regularized=None picks the regularized drift whenever omega > 0.
    Regularized/stochastic paths are clamped to [eps, 1-eps] after each step
    and clamp events are counted; classical runs are left free so boundary
    violations remain observable.  record_stride > 1 thins the stored
    trajectory; extremes are still tracked per step.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if horizon <= 0:
        raise ValueError("horizon must be positive")
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
    s = np.full(paths, float(initial.s_w))
    lam = np.full(paths, float(initial.lambda_w))
    s_rec[0], lam_rec[0] = s, lam
    next_rec = 1

    noise = PathNoise(stream or RngStream(0), paths) if stochastic else None
    sqdt = math.sqrt(dt)
    clamped = 0
    lo, hi = clamp_eps, 1.0 - clamp_eps
    s_min = s_max = float(initial.s_w)
    l_min = l_max = float(initial.lambda_w)
    chunk = 4096

    k = 0
    while k < n_steps:
        block = min(chunk, n_steps - k)
        z = noise.normals(block, 2) if stochastic else None
        for j in range(block):
            if regularized:
                ds = -(params.a - params.b * lam - params.omega / (1.0 - lam)) * s
                dl = (params.c - params.d * s - params.omega / (1.0 - s)) * lam
            else:
                ds = -(params.a - params.b * lam) * s
                dl = (params.c - params.d * s) * lam
            s_next = s + ds * dt
            l_next = lam + dl * dt
            if stochastic:
                s_next += params.sigma_s * np.sqrt(
                    np.clip(s * (1.0 - s), 0.0, None)) * sqdt * z[j, 0]
                l_next += params.sigma_lambda * np.sqrt(
                    np.clip(lam * (1.0 - lam), 0.0, None)) * sqdt * z[j, 1]
            if regularized or stochastic:
                out = (s_next < lo) | (s_next > hi) | (l_next < lo) | (l_next > hi)
                clamped += int(out.sum())
                s_next = np.clip(s_next, lo, hi)
                l_next = np.clip(l_next, lo, hi)
            s, lam = s_next, l_next
            k += 1
            s_min = min(s_min, float(s.min()))
            s_max = max(s_max, float(s.max()))
            l_min = min(l_min, float(lam.min()))
            l_max = max(l_max, float(lam.max()))
            if next_rec < len(rec_idx) and k == rec_idx[next_rec]:
                s_rec[next_rec], lam_rec[next_rec] = s, lam
                next_rec += 1

    return GoodwinResult(t=t, s_w=s_rec, lambda_w=lam_rec,
                         clamp_events=clamped, total_steps=n_steps * paths,
                         s_range=(s_min, s_max), lambda_range=(l_min, l_max))
