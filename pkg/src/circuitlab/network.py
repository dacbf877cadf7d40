"""Interconnected banking network with structural defaults.

N banks hold external assets A_i and owe external liabilities L_i plus a
mutual-liability matrix L_ij (what i owes j).  Assets follow correlated
lognormal or common-shock jump-diffusion dynamics while all liabilities
grow deterministically at the common rate mu, so default boundaries scale
with e^{mu t} and boundary ratios are time-invariant.

A bank defaults during the horizon when its assets touch the interior
(recovery-discounted) boundary; it is then removed, survivors' external
liabilities absorb the net estate settlement L_i + L_ik - R_k L_ki, and
every surviving boundary moves outward by (1 - R_i R_k) L_ki, which is
asserted.  At the horizon the survivors settle via the Eisenberg-Noe
clearing fixed point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import CorrelationMatrix, JumpSpec, PathNoise, RngStream

__all__ = [
    "BankNetwork", "DefaultBoundarySet", "ClearingVector", "NondimContext",
    "boundaries", "remove_bank", "clearing_vector", "kappa_coeffs",
    "simulate_paths", "survival_probabilities", "instrument_payoffs",
    "two_bank_survival_grid", "PathRecords", "fig15_network",
]


@dataclass
class BankNetwork:
    external_assets: np.ndarray
    external_liabilities: np.ndarray
    mutual: np.ndarray                    # mutual[i, j] = liability of i to j
    recoveries: np.ndarray
    sigma: np.ndarray
    mu: float = 0.0
    corr: CorrelationMatrix | None = None
    jumps: JumpSpec | None = None

    def __post_init__(self) -> None:
        self.external_assets = np.asarray(self.external_assets, dtype=float)
        self.external_liabilities = np.asarray(self.external_liabilities, dtype=float)
        self.mutual = np.asarray(self.mutual, dtype=float)
        self.recoveries = np.asarray(self.recoveries, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        n = self.n
        if self.mutual.shape != (n, n):
            raise ValueError(f"mutual matrix must be {n}x{n}")
        if np.any(np.diag(self.mutual) != 0.0):
            raise ValueError("mutual matrix must have zero diagonal")
        if np.any(self.mutual < 0):
            raise ValueError("mutual liabilities must be non-negative")
        if np.any((self.recoveries < 0) | (self.recoveries > 1)):
            raise ValueError("recoveries must lie in [0, 1]")
        if self.corr is None:
            self.corr = CorrelationMatrix(np.eye(n))

    @property
    def n(self) -> int:
        return self.external_assets.shape[0]

    @property
    def interbank_assets(self) -> np.ndarray:
        """A_hat_i = sum_j L_ji: claims of i on the others."""
        return self.mutual.sum(axis=0)

    @property
    def interbank_liabilities(self) -> np.ndarray:
        """L_hat_i = sum_j L_ij."""
        return self.mutual.sum(axis=1)

    @property
    def equity(self) -> np.ndarray:
        return (self.external_assets + self.interbank_assets
                - self.external_liabilities - self.interbank_liabilities)

    def asset_matrix(self) -> np.ndarray:
        """Diagonal A_i with off-diagonal claims A_ij = L_ji."""
        a = self.mutual.T.copy()
        np.fill_diagonal(a, self.external_assets)
        return a

    def liability_matrix(self) -> np.ndarray:
        l = self.mutual.copy()
        np.fill_diagonal(l, self.external_liabilities)
        return l


def fig15_network(sigma=(0.4, 0.4), rho=0.0, mu=0.0,
                  external_assets=(60.0, 80.0)) -> BankNetwork:
    """Two-bank configuration with L1=50, L12=10, L2=60, L21=20, R=0.4."""
    return BankNetwork(
        external_assets=np.asarray(external_assets, dtype=float),
        external_liabilities=np.array([50.0, 60.0]),
        mutual=np.array([[0.0, 10.0], [20.0, 0.0]]),
        recoveries=np.array([0.4, 0.4]),
        sigma=np.asarray(sigma, dtype=float),
        mu=mu,
        corr=CorrelationMatrix.from_scalar(rho, 2),
    )


@dataclass(frozen=True)
class DefaultBoundarySet:
    interior: np.ndarray   # Lambda^< = R (L + L_hat) - A_hat, monitored for t < T
    terminal: np.ndarray   # Lambda^= = L + L_hat - A_hat, settlement level at T


def boundaries(net: BankNetwork) -> DefaultBoundarySet:
    total_liab = net.external_liabilities + net.interbank_liabilities
    a_hat = net.interbank_assets
    return DefaultBoundarySet(
        interior=net.recoveries * total_liab - a_hat,
        terminal=total_liab - a_hat,
    )


def remove_bank(net: BankNetwork, k: int) -> BankNetwork:
    """Reduced network after bank k defaults.

    Survivors' debts to k fall to the estate and become external; claims on
    k pay out at recovery and offset external liabilities:
        L_i <- L_i + L_ik - R_k L_ki.
    The implied boundary shifts (1 - R_i R_k) L_ki (interior) and
    (1 - R_k) L_ki (terminal) are non-negative, which is asserted.
    """
    n = net.n
    if not 0 <= k < n:
        raise IndexError(f"bank index {k} out of range for {n} banks")
    keep = [i for i in range(n) if i != k]
    old = boundaries(net)
    new_ext_liab = (net.external_liabilities[keep]
                    + net.mutual[keep, k]
                    - net.recoveries[k] * net.mutual[k, keep])
    sub_corr = CorrelationMatrix(net.corr.rho[np.ix_(keep, keep)])
    reduced = BankNetwork(
        external_assets=net.external_assets[keep].copy(),
        external_liabilities=new_ext_liab,
        mutual=net.mutual[np.ix_(keep, keep)].copy(),
        recoveries=net.recoveries[keep].copy(),
        sigma=net.sigma[keep].copy(),
        mu=net.mu,
        corr=sub_corr,
        jumps=None if net.jumps is None else _reduce_jumps(net.jumps, k),
    )
    new = boundaries(reduced)
    shift_int = new.interior - old.interior[keep]
    shift_term = new.terminal - old.terminal[keep]
    if np.any(shift_int < -1e-9) or np.any(shift_term < -1e-9):
        raise AssertionError(
            "default boundaries must move outward on removal; got shifts "
            f"{shift_int} / {shift_term}"
        )
    return reduced


def _reduce_jumps(spec: JumpSpec, k: int) -> JumpSpec:
    keep = [i for i in range(spec.n_banks) if i != k]
    remap = {old: new for new, old in enumerate(keep)}
    subsets: dict[frozenset[int], float] = {}
    for subset, lam in spec.subset_intensities.items():
        reduced = frozenset(remap[i] for i in subset if i != k)
        if reduced:
            subsets[reduced] = subsets.get(reduced, 0.0) + lam
    return JumpSpec(spec.n_banks - 1, subsets, spec.theta[keep])


@dataclass
class ClearingVector:
    omega: np.ndarray
    solvent: np.ndarray      # omega_i == 1 within tolerance
    iterations: int


def clearing_vector(
    net: BankNetwork,
    terminal_assets: np.ndarray,
    tol: float = 1e-12,
) -> ClearingVector:
    """Eisenberg-Noe terminal payout fractions.

    Iterates omega <- min((A_T + claims received) / total liabilities, 1)
    from omega = 1; each sweep is asserted monotone non-increasing and the
    returned vector is verified to be a fixed point.
    """
    a_t = np.asarray(terminal_assets, dtype=float)
    total = net.external_liabilities + net.interbank_liabilities
    zero_liab = total <= 0.0
    omega = np.ones(net.n)
    max_iter = max(10 * net.n * net.n, 50)
    claims = net.mutual  # claims[j, i] = L_ji owed to i
    it = 0
    for it in range(1, max_iter + 1):
        inflow = claims.T @ omega
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(zero_liab, 1.0, (a_t + inflow) / np.where(zero_liab, 1.0, total))
        new_omega = np.minimum(ratio, 1.0)
        if np.any(new_omega > omega + 1e-12):
            raise AssertionError(
                "clearing iteration from the all-ones vector must be "
                f"monotone non-increasing; step {it} increased a component"
            )
        done = np.max(np.abs(new_omega - omega)) < tol
        omega = new_omega
        if done:
            break
    else:
        raise RuntimeError(f"clearing iteration did not converge in {max_iter} sweeps")
    residual = np.max(np.abs(
        np.minimum(np.where(zero_liab, 1.0, (a_t + claims.T @ omega)
                            / np.where(zero_liab, 1.0, total)), 1.0) - omega))
    if residual > 1e-10:
        raise RuntimeError(f"clearing output is not a fixed point: residual {residual:.3e}")
    return ClearingVector(omega=omega, solvent=omega >= 1.0 - 1e-9, iterations=it)


def kappa_coeffs(a1: float, a2: float, net: BankNetwork) -> np.ndarray:
    """Two-bank both-default payout fractions from the detailed-balance
    linear system; equals the clearing vector on the both-default domain."""
    if net.n != 2:
        raise ValueError("kappa coefficients are defined for two banks")
    l1, l2 = net.external_liabilities
    l12 = net.mutual[0, 1]
    l21 = net.mutual[1, 0]
    delta = l1 * l2 + l1 * l21 + l2 * l12
    k1 = (l2 * a1 + l21 * (a1 + a2)) / delta
    k2 = (l1 * a2 + l12 * (a1 + a2)) / delta
    return np.array([k1, k2])


@dataclass
class NondimContext:
    """Scaled coordinates X_i = (Sigma/sigma_i) ln(A_i / Lambda_i^<) in which
    assets are unit-variance Brownian motions and the interior boundary sits
    at zero."""

    sigma_bar: float
    zeta: np.ndarray          # Sigma / sigma_i
    xi: np.ndarray            # scaled drifts
    m_terminal: np.ndarray    # terminal boundary levels in X units
    interior_levels: np.ndarray   # Lambda^< in money units (initial scale)
    varsigma: np.ndarray | None = None

    def x_from_assets(self, assets: np.ndarray) -> np.ndarray:
        return self.zeta * np.log(np.asarray(assets, float) / self.interior_levels)

    def assets_from_x(self, x: np.ndarray) -> np.ndarray:
        return self.interior_levels * np.exp(np.asarray(x, float) / self.zeta)

    def scaled_time(self, t: float) -> float:
        return self.sigma_bar ** 2 * t


def nondim_context(net: BankNetwork) -> NondimContext:
    b = boundaries(net)
    if np.any(b.interior <= 0):
        raise ValueError(
            "non-dimensionalization requires positive interior boundaries; "
            f"got {b.interior}"
        )
    sigma_bar = float(np.exp(np.mean(np.log(net.sigma))))
    zeta = sigma_bar / net.sigma
    lam_bar = None
    xi = -net.sigma / (2.0 * sigma_bar)
    varsigma = None
    if net.jumps is not None:
        lam_bar = net.jumps.bank_intensities() / sigma_bar ** 2
        xi = xi - net.jumps.compensators * lam_bar * zeta
        varsigma = net.sigma * net.jumps.theta / sigma_bar
    m_term = zeta * np.log(b.terminal / b.interior)
    return NondimContext(sigma_bar=sigma_bar, zeta=zeta, xi=xi,
                         m_terminal=m_term, interior_levels=b.interior,
                         varsigma=varsigma)


def shifted_levels(net: BankNetwork, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Post-default boundaries of the survivors, expressed in the ORIGINAL
    X coordinates (per surviving bank, in original indexing)."""
    ctx = nondim_context(net)
    reduced = remove_bank(net, k)
    b_new = boundaries(reduced)
    keep = [i for i in range(net.n) if i != k]
    m_lt = ctx.zeta[keep] * np.log(b_new.interior / ctx.interior_levels[keep])
    m_eq = ctx.zeta[keep] * np.log(b_new.terminal / ctx.interior_levels[keep])
    return m_lt, m_eq


@dataclass
class PathRecords:
    """Per-path outcome log of a network simulation."""

    n_banks: int
    horizon: float
    default_time: np.ndarray        # (paths, N), nan if never defaulted
    interior_default: np.ndarray    # (paths, N) bool
    omega: np.ndarray               # (paths, N) payout fraction, 1 if solvent
    terminal_assets: np.ndarray     # (paths, N) deflated by e^{mu T}; nan after interior default
    clamped_liabilities: bool = False

    @property
    def n_paths(self) -> int:
        return self.default_time.shape[0]

    @property
    def survived(self) -> np.ndarray:
        return ~self.interior_default & (self.omega >= 1.0 - 1e-9)


def simulate_paths(
    net: BankNetwork,
    horizon: float,
    dt: float,
    paths: int,
    stream: RngStream | None = None,
    dynamics: str = "lognormal",
    chunk: int = 4096,
) -> PathRecords:
    """Monte Carlo paths of the interconnected system.

    Assets evolve in log space (exact for the lognormal dynamics); all
    liabilities grow at e^{mu t}, so monitoring happens against fixed
    initial-scale boundary levels with deflated assets.  First crossings
    remove the bank (deepest relative breach first when several cross in one
    step) and the survivors' boundaries are recomputed; the horizon ends
    with Eisenberg-Noe settlement of the remaining banks.
    """
    if dynamics not in ("lognormal", "jump-diffusion"):
        raise ValueError(f"unknown dynamics {dynamics!r}")
    if dynamics == "jump-diffusion" and net.jumps is None:
        raise ValueError("jump-diffusion dynamics require a jump specification")
    if horizon <= 0 or dt <= 0:
        raise ValueError("horizon and dt must be positive")
    n = net.n
    n_steps = int(round(horizon / dt))
    stream = stream or RngStream(0)
    chol = net.corr.cholesky
    sqdt = math.sqrt(dt)
    use_jumps = dynamics == "jump-diffusion"
    kappa_lam = (net.jumps.compensators * net.jumps.bank_intensities()
                 if use_jumps else np.zeros(n))
    # deflated log-asset drift: growth mu cancels against liability growth
    drift = (-0.5 * net.sigma ** 2 - kappa_lam) * dt

    default_time = np.full((paths, n), np.nan)
    interior_default = np.zeros((paths, n), dtype=bool)
    omega_out = np.ones((paths, n))
    terminal_assets = np.full((paths, n), np.nan)

    for start in range(0, paths, chunk):
        width = min(chunk, paths - start)
        noise = PathNoise(stream, width, first_path=start)
        jump_events = (_draw_jump_events(noise, net.jumps, horizon, dt, width)
                       if use_jumps else {})
        log_a = np.tile(np.log(net.external_assets), (width, 1))
        alive = np.ones((width, n), dtype=bool)
        # per-path reduced bookkeeping, initial scale
        ext_liab = np.tile(net.external_liabilities, (width, 1))
        mutual = np.tile(net.mutual, (width, 1, 1))
        a_hat = np.tile(net.interbank_assets, (width, 1))
        l_hat = np.tile(net.interbank_liabilities, (width, 1))
        log_interior = _interior_log(ext_liab, l_hat, a_hat, net.recoveries)

        step_block = 512
        k_step = 0
        while k_step < n_steps:
            b = min(step_block, n_steps - k_step)
            zb = noise.normals(b, n)            # (b, n, width)
            for j in range(b):
                dw = (chol @ zb[j]).T * sqdt
                log_a = log_a + drift + net.sigma * dw
                ev = jump_events.get(k_step)
                if ev is not None:
                    rows, banks, amps = ev
                    np.add.at(log_a, (rows, banks), amps)
                breach = alive & (log_a <= log_interior)
                if np.any(breach):
                    for row in np.nonzero(breach.any(axis=1))[0]:
                        _settle_interior(
                            row, (k_step + 1) * dt, net, log_a, alive, ext_liab,
                            mutual, a_hat, l_hat, log_interior, default_time,
                            interior_default, omega_out, start,
                        )
                k_step += 1

        _settle_terminal(net, log_a, alive, ext_liab, mutual, a_hat, l_hat,
                         omega_out, terminal_assets, default_time,
                         horizon, start)

    return PathRecords(
        n_banks=n, horizon=horizon, default_time=default_time,
        interior_default=interior_default, omega=omega_out,
        terminal_assets=terminal_assets,
    )


def _interior_log(ext_liab, l_hat, a_hat, recoveries):
    lam = recoveries * (ext_liab + l_hat) - a_hat
    out = np.full_like(lam, -np.inf)
    pos = lam > 0
    out[pos] = np.log(lam[pos])
    return out


def _draw_jump_events(noise: PathNoise, spec: JumpSpec, horizon: float,
                      dt: float, width: int) -> dict:
    """Arrival steps, banks, and log amplitudes per path, drawn path-first so
    results are independent of chunking.  Returns {step: (rows, banks, amps)}."""
    per_step: dict[int, list[tuple[int, int, float]]] = {}
    subsets = sorted(spec.subset_intensities.items(), key=lambda kv: sorted(kv[0]))
    for j in range(width):
        gen = noise.generator(j)
        for subset, lam in subsets:
            t = 0.0
            while True:
                t += gen.exponential(1.0 / lam)
                if t >= horizon:
                    break
                step = min(int(t / dt), int(round(horizon / dt)) - 1)
                for bank in sorted(subset):
                    amp = -gen.exponential(1.0 / spec.theta[bank])
                    per_step.setdefault(step, []).append((j, bank, amp))
    out = {}
    for step, items in per_step.items():
        rows = np.array([it[0] for it in items], dtype=np.intp)
        banks = np.array([it[1] for it in items], dtype=np.intp)
        amps = np.array([it[2] for it in items])
        out[step] = (rows, banks, amps)
    return out


def _settle_interior(row, t, net, log_a, alive, ext_liab, mutual, a_hat,
                     l_hat, log_interior, default_time, interior_default,
                     omega_out, start):
    """Process all breaches on one path at one step, deepest first."""
    while True:
        depth = np.where(alive[row], log_interior[row] - log_a[row], -np.inf)
        k = int(np.argmax(depth))
        if depth[k] < 0 or not alive[row, k]:
            return
        # payout fraction at crossing: assets plus face-value claims on the
        # still-alive banks over total due
        total_due = ext_liab[row, k] + l_hat[row, k]
        assets_now = math.exp(log_a[row, k]) + a_hat[row, k]
        omega_out[start + row, k] = min(assets_now / total_due, 1.0) if total_due > 0 else 1.0
        default_time[start + row, k] = t
        interior_default[start + row, k] = True
        alive[row, k] = False
        live = alive[row]
        # estate settlement for survivors
        ext_liab[row, live] += mutual[row, live, k] - net.recoveries[k] * mutual[row, k, live]
        mutual[row, k, :] = 0.0
        mutual[row, :, k] = 0.0
        a_hat[row] = mutual[row].sum(axis=0)
        l_hat[row] = mutual[row].sum(axis=1)
        lam = net.recoveries * (ext_liab[row] + l_hat[row]) - a_hat[row]
        log_interior[row] = np.where(lam > 0, np.log(np.maximum(lam, 1e-300)), -np.inf)
        log_interior[row, ~alive[row]] = -np.inf


def _settle_terminal(net, log_a, alive, ext_liab, mutual, a_hat, l_hat,
                     omega_out, terminal_assets, default_time, horizon, start):
    width = log_a.shape[0]
    a_t = np.exp(log_a)
    total = ext_liab + l_hat
    # quick screen: every alive bank covers its terminal boundary outright
    solvent_all = np.all(~alive | (a_t >= total - a_hat), axis=1)
    for row in range(width):
        live = alive[row]
        terminal_assets[start + row, live] = a_t[row, live]
        if solvent_all[row] or not live.any():
            continue
        idx = np.nonzero(live)[0]
        sub = BankNetwork(
            external_assets=a_t[row, idx],
            external_liabilities=ext_liab[row, idx],
            mutual=mutual[row][np.ix_(idx, idx)],
            recoveries=net.recoveries[idx],
            sigma=net.sigma[idx],
            mu=net.mu,
            corr=CorrelationMatrix(net.corr.rho[np.ix_(idx, idx)]),
        )
        cv = clearing_vector(sub, a_t[row, idx])
        omega_out[start + row, idx] = cv.omega
        for pos, bank in enumerate(idx):
            if not cv.solvent[pos]:
                default_time[start + row, bank] = horizon


@dataclass
class SurvivalEstimate:
    joint: float
    joint_stderr: float
    marginal: np.ndarray
    marginal_stderr: np.ndarray
    n_paths: int


def survival_probabilities(records: PathRecords) -> SurvivalEstimate:
    """Joint and marginal survival frequencies with binomial standard errors."""
    n = records.n_paths
    if n < 1:
        raise ValueError("at least one path is required")
    surv = records.survived
    joint = surv.all(axis=1).mean()
    marg = surv.mean(axis=0)
    return SurvivalEstimate(
        joint=float(joint),
        joint_stderr=float(np.sqrt(joint * (1.0 - joint) / n)),
        marginal=marg,
        marginal_stderr=np.sqrt(marg * (1.0 - marg) / n),
        n_paths=n,
    )


def instrument_payoffs(records: PathRecords, instrument: str) -> tuple[float, float]:
    """Expected payoff and stderr of two-bank default-protection payoffs.

    CDS_i pays 1 - omega_i whenever bank i defaults (at the crossing for
    interior defaults, at clearing for terminal ones); the first-to-default
    basket pays the larger leg.
    """
    if records.n_banks != 2:
        raise ValueError("instrument payoffs are defined for two banks")
    loss = np.where(
        np.isnan(records.default_time), 0.0, 1.0 - records.omega)
    if instrument == "CDS_1":
        payoff = loss[:, 0]
    elif instrument == "CDS_2":
        payoff = loss[:, 1]
    elif instrument == "FTD":
        payoff = loss.max(axis=1)
    else:
        raise ValueError(f"unknown instrument {instrument!r}")
    mean = float(payoff.mean())
    stderr = float(payoff.std(ddof=1) / math.sqrt(len(payoff))) if len(payoff) > 1 else 0.0
    return mean, stderr


@dataclass
class GridSurvival:
    x1: np.ndarray
    x2: np.ndarray
    joint: np.ndarray            # (len(x1), len(x2))
    joint_stderr: np.ndarray
    marginal1: np.ndarray
    marginal1_stderr: np.ndarray
    n_paths: int


def two_bank_survival_grid(
    net: BankNetwork,
    horizon: float,
    dt_scaled: float,
    paths: int,
    stream: RngStream | None = None,
    x1_grid: np.ndarray | None = None,
    x2_grid: np.ndarray | None = None,
    chunk: int = 256,
) -> GridSurvival:
    """Joint and bank-1 marginal survival over a grid of initial scaled
    positions, sharing one driver ensemble across all grid points.

    Works in the scaled coordinates where each bank is a unit-variance
    Brownian motion with constant drift, the interior boundary sits at 0,
    and bank 2's default shifts bank 1's boundaries to their post-removal
    levels.  Probabilistically identical to simulate_paths for two banks
    (asserted in the test suite); the shared drivers make a 5x5 grid cost
    one ensemble instead of 25.
    """
    if net.n != 2:
        raise ValueError("the grid evaluator is specific to two banks")
    if net.jumps is not None:
        raise ValueError("the scaled grid evaluator covers diffusion dynamics only")
    ctx = nondim_context(net)
    t_bar = ctx.scaled_time(horizon)
    n_steps = int(round(t_bar / dt_scaled))
    sq = math.sqrt(dt_scaled)
    stream = stream or RngStream(0)
    x1_grid = np.asarray(x1_grid if x1_grid is not None else np.linspace(1.0, 4.0, 5))
    x2_grid = np.asarray(x2_grid if x2_grid is not None else np.linspace(1.0, 4.0, 5))

    m1_eq, m2_eq = ctx.m_terminal
    (m1_shift_lt,), (m1_shift_eq,) = shifted_levels(net, 1)
    rho = float(net.corr.rho[0, 1])
    if abs(rho) > 1e-14:
        corr_chol = net.corr.cholesky
    else:
        corr_chol = None

    n1, n2 = len(x1_grid), len(x2_grid)
    joint_hits = np.zeros((n1, n2), dtype=np.int64)
    marg_hits = np.zeros((n1, n2), dtype=np.int64)

    theta1 = _theta_curve_factory(net, ctx)

    for start in range(0, paths, chunk):
        width = min(chunk, paths - start)
        noise = PathNoise(stream, width, first_path=start)
        # driver increments: unit-variance correlated Brownian steps + drift
        y1 = np.empty((width, n_steps + 1))
        y2 = np.empty((width, n_steps + 1))
        y1[:, 0] = 0.0
        y2[:, 0] = 0.0
        block = 2048
        pos = 0
        while pos < n_steps:
            b = min(block, n_steps - pos)
            z = noise.normals(b, 2)            # (b, 2, width)
            if corr_chol is not None:
                zc = np.einsum("ij,sjw->siw", corr_chol, z)
            else:
                zc = z
            y1[:, pos + 1:pos + b + 1] = np.cumsum(zc[:, 0, :].T * sq, axis=1) \
                + y1[:, pos:pos + 1] + ctx.xi[0] * dt_scaled * np.arange(1, b + 1)
            y2[:, pos + 1:pos + b + 1] = np.cumsum(zc[:, 1, :].T * sq, axis=1) \
                + y2[:, pos:pos + 1] + ctx.xi[1] * dt_scaled * np.arange(1, b + 1)
            pos += b
        p1 = np.minimum.accumulate(y1, axis=1)     # prefix minima
        p2 = np.minimum.accumulate(y2, axis=1)
        s1 = np.minimum.accumulate(y1[:, ::-1], axis=1)[:, ::-1]   # suffix minima
        y1_t = y1[:, -1]
        y2_t = y2[:, -1]
        p1_tot = p1[:, -1]
        p2_tot = p2[:, -1]

        for i2, x20 in enumerate(x2_grid):
            # first step index at which bank 2 breaches level 0: y2 <= -x20
            crossed2 = p2_tot <= -x20
            k2 = np.argmax(p2 <= -x20, axis=1)
            rowidx = np.arange(width)
            p1_at_k2 = p1[rowidx, k2]
            s1_at_k2 = s1[rowidx, k2]
            for i1, x10 in enumerate(x1_grid):
                alive1_no2 = p1_tot > -x10
                # branch A: bank 2 never crossed; classify both at T
                okA = (~crossed2) & alive1_no2
                x1t = x10 + y1_t
                x2t = x20 + y2_t
                in_d11 = (x1t > m1_eq) & (x2t > m2_eq)
                in_d10 = (x2t > 0) & (x2t <= m2_eq) & (x1t > theta1(x2t))
                joint_hits[i1, i2] += int(np.count_nonzero(okA & in_d11 & (p2_tot > -x20)))
                margA = okA & (in_d11 | in_d10)
                # branch B: bank 2 crossed at k2; bank 1 must be clean up to
                # k2, clear the shifted boundary afterwards, and finish above
                # the shifted terminal level
                okB = (crossed2
                       & (p1_at_k2 > -x10)
                       & (s1_at_k2 > m1_shift_lt - x10)
                       & (x1t >= m1_shift_eq))
                marg_hits[i1, i2] += int(np.count_nonzero(margA)) \
                    + int(np.count_nonzero(okB))

    joint = joint_hits / paths
    marg = marg_hits / paths
    return GridSurvival(
        x1=x1_grid, x2=x2_grid,
        joint=joint, joint_stderr=np.sqrt(joint * (1 - joint) / paths),
        marginal1=marg, marginal1_stderr=np.sqrt(marg * (1 - marg) / paths),
        n_paths=paths,
    )


def _theta_curve_factory(net: BankNetwork, ctx: NondimContext):
    """Curvilinear terminal boundary Theta_1(X_2) of the bank-1-survives,
    bank-2-defaults domain, in scaled coordinates."""
    l1, l2 = net.external_liabilities
    l12 = net.mutual[0, 1]
    l21 = net.mutual[1, 0]
    delta = l1 * l2 + l1 * l21 + l2 * l12
    lam1_lt, lam2_lt = ctx.interior_levels

    def theta1(x2):
        a2 = lam2_lt * np.exp(np.asarray(x2, float) / ctx.zeta[1])
        arg = (delta - l21 * a2) / (lam1_lt * (l2 + l21))
        return ctx.zeta[0] * np.log(np.maximum(arg, 1e-300))

    return theta1
