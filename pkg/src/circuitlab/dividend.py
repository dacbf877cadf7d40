"""Optimal dividend policy for bank equity under two downward jump sources.

Equity follows an arithmetic Brownian motion hit by solvency and liquidity
jumps with exponential sizes.  Paying dividends is a singular control: the
value function solves the variational inequality max{L(V), 1 - V_E} = 0
with V(tau=0, E) = E and V(tau, 0) = 0.

Two solution routes are provided and cross-validated:
  * the stationary (infinite-horizon) solution, built from the four real
    roots of the operator symbol and a five-equation system that pins the
    coefficients and the barrier E*;
  * a Crank-Nicolson march of the time-dependent inequality with the jump
    integrals reduced to companion ODEs in E (exact per-cell exponential
    integration) and the obstacle enforced by projection on the monotone
    envelope.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq

__all__ = [
    "EquityParams", "SymbolCoefficients", "BarrierSolution", "EquityValueGrid",
    "symbol", "symbol_roots", "stationary_barrier", "solve_variational",
    "jump_integral", "FIG13_PARAMS",
]


@dataclass(frozen=True)
class EquityParams:
    mu: float          # retained-earnings accumulation rate
    sigma: float       # earnings volatility
    discount: float    # shareholder discount rate R
    lambda1: float     # solvency jump intensity (rarer, larger)
    delta1: float      # solvency jump size decay
    lambda2: float     # liquidity jump intensity
    delta2: float      # liquidity jump size decay

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("jump intensities must be non-negative")
        if self.delta1 <= 0 or self.delta2 <= 0:
            raise ValueError("jump decays must be positive")
        if self.discount <= 0:
            raise ValueError("discount rate must be positive")


FIG13_PARAMS = EquityParams(mu=0.05, sigma=0.25, discount=0.10,
                            lambda1=0.05, delta1=3.00,
                            lambda2=0.02, delta2=1.00)


@dataclass(frozen=True)
class SymbolCoefficients:
    a2: float
    a1: float
    a0: float

    @classmethod
    def from_params(cls, p: EquityParams) -> "SymbolCoefficients":
        return cls(a2=0.5 * p.sigma ** 2, a1=p.mu,
                   a0=-(p.discount + p.lambda1 + p.lambda2))


def symbol(xi, params: EquityParams):
    """Symbol of the equity operator: a2 xi^2 + a1 xi + a0
    + lambda1 delta1/(xi+delta1) + lambda2 delta2/(xi+delta2).

    Inactive jump sources (lambda = 0) contribute nothing and carry no pole."""
    c = SymbolCoefficients.from_params(params)
    xi_arr = np.asarray(xi, dtype=float)
    out = c.a2 * xi_arr ** 2 + c.a1 * xi_arr + c.a0
    for lam, delta in ((params.lambda1, params.delta1),
                       (params.lambda2, params.delta2)):
        if lam == 0.0:
            continue
        if np.any(np.isclose(xi_arr, -delta, rtol=0.0, atol=1e-12)):
            raise ZeroDivisionError(f"symbol evaluated at its pole xi = {-delta}")
        out = out + lam * delta / (xi_arr + delta)
    return float(out) if np.isscalar(xi) else out


def _symbol_derivative(xi: float, params: EquityParams) -> float:
    c = SymbolCoefficients.from_params(params)
    out = 2.0 * c.a2 * xi + c.a1
    for lam, delta in ((params.lambda1, params.delta1),
                       (params.lambda2, params.delta2)):
        if lam > 0.0:
            out -= lam * delta / (xi + delta) ** 2
    return out


def symbol_roots(params: EquityParams, require_real: bool = True) -> np.ndarray:
    """All roots of the symbol: four with both jump sources active, fewer as
    intensities vanish.  Companion-matrix roots of the cleared-denominator
    polynomial, Newton-polished on the symbol itself."""
    c = SymbolCoefficients.from_params(params)
    poly = np.array([c.a2, c.a1, c.a0])
    poles = []
    for lam, delta in ((params.lambda1, params.delta1),
                       (params.lambda2, params.delta2)):
        if lam > 0.0:
            poly = np.convolve(poly, np.array([1.0, delta]))
            poles.append((lam, delta))
    # add lam*delta times the product of the OTHER active pole factors
    for lam, delta in poles:
        extra = np.array([lam * delta])
        for lam2, delta2 in poles:
            if delta2 != delta or lam2 != lam:
                extra = np.convolve(extra, np.array([1.0, delta2]))
        poly[len(poly) - len(extra):] += extra
    raw = np.roots(poly)
    imag_scale = np.max(np.abs(raw))
    complex_mask = np.abs(raw.imag) > 1e-9 * imag_scale
    if np.any(complex_mask) and require_real:
        raise ValueError(
            f"symbol has complex roots {raw[complex_mask]}; outside the "
            "all-real regime"
        )
    roots = np.sort(raw.real)
    for _, delta in poles:
        if np.any(np.isclose(roots, -delta, rtol=0.0, atol=1e-9)):
            raise ValueError(f"root collides with the symbol pole at {-delta}")
    for _ in range(3):
        roots = roots - symbol(roots, params) / np.array(
            [_symbol_derivative(r, params) for r in roots])
    return roots


@dataclass
class BarrierSolution:
    roots: np.ndarray
    coeffs: np.ndarray
    e_star: float
    params: EquityParams

    def value(self, e):
        """Stationary value: exponential combination below the barrier,
        linear payout beyond it."""
        e_arr = np.asarray(e, dtype=float)
        below = np.clip(e_arr, 0.0, self.e_star)
        v_below = np.exp(np.outer(below, self.roots)) @ self.coeffs
        v_star = float(np.exp(self.e_star * self.roots) @ self.coeffs)
        out = np.where(e_arr <= self.e_star, v_below,
                       e_arr + v_star - self.e_star)
        return float(out) if np.isscalar(e) else out

    def derivative(self, e, order: int = 1):
        e_arr = np.asarray(e, dtype=float)
        if np.any(e_arr > self.e_star):
            raise ValueError("closed-form derivatives apply below the barrier")
        out = np.exp(np.outer(e_arr, self.roots)) @ (self.coeffs * self.roots ** order)
        return float(out) if np.isscalar(e) else out


def _coeffs_for_barrier(roots: np.ndarray, params: EquityParams,
                        e_star: float) -> tuple[np.ndarray, float]:
    """Solve the 4x4 block (boundary value, both jump-residual rows, slope
    condition) and return the coefficients plus the curvature residual."""
    grow = np.exp(roots * e_star)
    m = np.array([
        np.ones(4),
        1.0 / (roots + params.delta1),
        1.0 / (roots + params.delta2),
        roots * grow,
    ])
    rhs = np.array([0.0, 0.0, 0.0, 1.0])
    try:
        coeffs = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(
            f"degenerate coefficient system at trial barrier {e_star}: {exc}"
        ) from exc
    residual = float((coeffs * roots ** 2 * grow).sum())
    return coeffs, residual


def stationary_barrier(
    params: EquityParams,
    bracket: tuple[float, float] = (1e-3, 50.0),
    scan_points: int = 220,
) -> BarrierSolution:
    """Stationary value function and optimal barrier E*.

    For each trial barrier the linear block enforces V(0) = 0, both jump
    consistency rows, and V_E(E*) = 1; the barrier is then the root of the
    remaining curvature condition V_EE(E*) = 0, bracketed on a geometric
    scan and polished to ~1e-12."""
    roots = symbol_roots(params)
    if len(roots) != 4:
        raise ValueError(
            "the stationary construction needs both jump sources active "
            f"(four symbol roots); got {len(roots)}"
        )
    scan = np.geomspace(bracket[0], bracket[1], scan_points)
    vals = np.array([_coeffs_for_barrier(roots, params, e)[1] for e in scan])
    sign_flip = np.nonzero(np.diff(np.sign(vals)) != 0)[0]
    if len(sign_flip) == 0:
        raise RuntimeError(
            "no sign change of the curvature residual on the scan grid; "
            f"residual range [{vals.min():.3e}, {vals.max():.3e}] over "
            f"barriers [{bracket[0]}, {bracket[1]}]"
        )
    lo, hi = scan[sign_flip[0]], scan[sign_flip[0] + 1]
    e_star = brentq(lambda e: _coeffs_for_barrier(roots, params, e)[1],
                    lo, hi, xtol=1e-14, rtol=8.9e-16)
    coeffs, _ = _coeffs_for_barrier(roots, params, e_star)
    return BarrierSolution(roots=roots, coeffs=coeffs, e_star=float(e_star),
                           params=params)


def jump_integral(v: np.ndarray, grid: np.ndarray, delta: float) -> np.ndarray:
    """I(E) = delta * int_0^E V(u) e^{-delta (E-u)} du for piecewise-linear V,
    via the exact per-cell exponential update of I' = delta (V - I)."""
    h = grid[1] - grid[0]
    decay = math.exp(-delta * h)
    w0 = 1.0 - decay                      # weight of the left value
    w1 = h - w0 / delta                   # weight of the slope
    out = np.empty_like(v)
    out[0] = 0.0
    slope = np.diff(v) / h
    acc = 0.0
    for k in range(len(v) - 1):
        acc = acc * decay + v[k] * w0 + slope[k] * w1
        out[k + 1] = acc
    return out


def _jump_integral_fast(v: np.ndarray, decay: float, w0: float, w1: float,
                        h: float) -> np.ndarray:
    """Vectorized scan of the same recurrence using cumulative products."""
    n = len(v)
    contrib = v[:-1] * w0 + (np.diff(v) / h) * w1
    # acc_k = sum_{j<=k} contrib_j * decay^{k-j}
    powers = decay ** np.arange(n - 1)
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        scaled = contrib / powers
        acc = np.cumsum(scaled) * powers
    out = np.empty(n)
    out[0] = 0.0
    out[1:] = acc
    return out


@dataclass
class EquityValueGrid:
    grid: np.ndarray
    tau: np.ndarray
    values: np.ndarray            # (len(tau), len(grid))
    free_boundary: np.ndarray     # per recorded slice
    params: EquityParams

    def final(self) -> np.ndarray:
        return self.values[-1]


def solve_variational(
    params: EquityParams,
    horizon: float,
    e_max: float,
    n_grid: int = 2000,
    dtau: float = 1e-3,
    record: int = 8,
    cfl_bound: float = 2000.0,
) -> EquityValueGrid:
    """Crank-Nicolson march of the dividend variational inequality.

    Drift/diffusion/discount are half-implicit; the jump integrals are
    rebuilt from the current slice by exact exponential integration and
    treated explicitly; the obstacle V_E >= 1 is enforced by projecting on
    the monotone envelope V_k >= V_{k-1} + h after each step.  Boundary
    rows: V = 0 at E = 0 and V_E = 1 at the truncated top (deep in the
    payout region)."""
    if e_max <= 0 or horizon <= 0:
        raise ValueError("horizon and e_max must be positive")
    c = SymbolCoefficients.from_params(params)
    grid = np.linspace(0.0, e_max, n_grid)
    h = grid[1] - grid[0]
    if dtau / h**2 > cfl_bound:
        warnings.warn(
            f"dtau/dE^2 = {dtau / h**2:.1f} exceeds {cfl_bound}; accuracy of "
            "the explicit jump terms may degrade", stacklevel=2)
    n_steps = int(round(horizon / dtau))
    v = grid.copy()                       # tau = 0 payoff

    lower = np.empty(n_grid)
    diag = np.empty(n_grid)
    upper = np.empty(n_grid)
    a_lo = c.a2 / h**2 - c.a1 / (2.0 * h)
    a_mid = -2.0 * c.a2 / h**2 + c.a0
    a_hi = c.a2 / h**2 + c.a1 / (2.0 * h)
    half = 0.5 * dtau
    # implicit side; boundary rows are Dirichlet (bottom) and V_E = 1 (top)
    lower[:] = -half * a_lo
    diag[:] = 1.0 - half * a_mid
    upper[:] = -half * a_hi
    diag[0] = 1.0
    diag[-1] = 1.0
    banded = np.zeros((3, n_grid))
    banded[0, 1:] = upper[1:]
    banded[1, :] = diag
    banded[2, :-1] = lower[1:]
    banded[0, 1] = 0.0      # row 0 couples to nothing
    banded[2, -2] = -1.0    # top row: V_{n-1} - V_{n-2} = h
    banded[1, -1] = 1.0

    dec1 = math.exp(-params.delta1 * h)
    w0_1 = 1.0 - dec1
    w1_1 = h - w0_1 / params.delta1
    dec2 = math.exp(-params.delta2 * h)
    w0_2 = 1.0 - dec2
    w1_2 = h - w0_2 / params.delta2

    rec_every = max(n_steps // max(record, 1), 1)
    taus = [0.0]
    slices = [v.copy()]
    fbs = [float(grid[_free_boundary_index(v, h)])]

    for step in range(1, n_steps + 1):
        i1 = _stable_jump_scan(v, dec1, w0_1, w1_1, h)
        i2 = _stable_jump_scan(v, dec2, w0_2, w1_2, h)
        rhs = np.empty(n_grid)
        rhs[1:-1] = (v[1:-1]
                     + half * (a_lo * v[:-2] + a_mid * v[1:-1] + a_hi * v[2:])
                     + dtau * (params.lambda1 * i1[1:-1]
                               + params.lambda2 * i2[1:-1]))
        rhs[0] = 0.0
        rhs[-1] = h
        v = solve_banded((1, 1), banded, rhs)
        np.maximum.accumulate(v + (-h) * np.arange(n_grid), out=v)
        v += h * np.arange(n_grid)
        if step % rec_every == 0 or step == n_steps:
            taus.append(step * dtau)
            slices.append(v.copy())
            fbs.append(float(grid[_free_boundary_index(v, h)]))

    return EquityValueGrid(grid=grid, tau=np.array(taus),
                           values=np.array(slices),
                           free_boundary=np.array(fbs), params=params)


def _stable_jump_scan(v, decay, w0, w1, h):
    """Jump integral scan; the vectorized cumulative form loses accuracy
    when decay^n underflows, so long grids fall back to blockwise scans."""
    n = len(v)
    if decay ** (n - 1) > 1e-280:
        return _jump_integral_fast(v, decay, w0, w1, h)
    # block the recurrence so each cumulative product stays representable
    block = max(int(-600.0 / math.log(decay)), 16)
    out = np.empty(n)
    out[0] = 0.0
    acc = 0.0
    slope = np.diff(v) / h
    contrib = v[:-1] * w0 + slope * w1
    for start in range(0, n - 1, block):
        end = min(start + block, n - 1)
        m = end - start
        powers = decay ** np.arange(1, m + 1)
        # acc carried in, then the in-block convolution
        seg = contrib[start:end] / (powers / decay)
        seg_sum = np.cumsum(seg) * (powers / decay)
        out[start + 1:end + 1] = acc * powers + seg_sum
        acc = out[end]
    return out


def _free_boundary_index(v: np.ndarray, h: float, tol: float = 1e-10) -> int:
    """First grid index where the payout region begins (V_E pinned at 1
    from there upward); the last index if the obstacle never binds."""
    slopes = np.diff(v) / h
    pinned = slopes <= 1.0 + tol
    # find the start of the trailing pinned run
    idx = len(v) - 1
    for k in range(len(pinned) - 1, -1, -1):
        if pinned[k]:
            idx = k
        else:
            break
    return idx
