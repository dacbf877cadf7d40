"""Deterministic random drivers and time stepping shared by all simulators.

Streams are counter-based (Philox) and keyed by (master_seed, stream_index),
so results never depend on scheduling or worker count: path k always draws
from stream k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RngStream",
    "CorrelationMatrix",
    "JumpSpec",
    "PathNoise",
    "gaussian_increments",
    "marshall_olkin_arrivals",
    "sample_jump_amplitudes",
    "euler_step",
]


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by (master_seed, stream_index)."""

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.master_seed & 0xFFFFFFFFFFFFFFFF, self.stream_index & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RngStream":
        """Stream for path/scenario `index`, independent of this one for index != stream_index."""
        return RngStream(self.master_seed, index)


class CorrelationError(ValueError):
    """Correlation matrix is not symmetric PSD with unit diagonal."""


@dataclass
class CorrelationMatrix:
    """Symmetric PSD matrix of pairwise Brownian correlations with unit diagonal."""

    rho: np.ndarray
    _chol: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        rho = np.atleast_2d(np.asarray(self.rho, dtype=float))
        if rho.shape[0] != rho.shape[1]:
            raise CorrelationError(f"correlation matrix must be square, got {rho.shape}")
        if not np.allclose(rho, rho.T, atol=1e-12):
            raise CorrelationError("correlation matrix must be symmetric")
        if not np.allclose(np.diag(rho), 1.0, atol=1e-12):
            raise CorrelationError("correlation matrix must have unit diagonal")
        self.rho = rho
        self._chol = _psd_cholesky(rho)

    @classmethod
    def from_scalar(cls, rho: float, n: int = 2) -> "CorrelationMatrix":
        m = np.full((n, n), float(rho))
        np.fill_diagonal(m, 1.0)
        return cls(m)

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @property
    def cholesky(self) -> np.ndarray:
        return self._chol


def _psd_cholesky(a: np.ndarray, pivot_tol: float = 1e-10) -> np.ndarray:
    """Lower Cholesky factor allowing zero pivots; reports the offending pivot."""
    n = a.shape[0]
    l = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - np.dot(l[j, :j], l[j, :j])
        if d < -pivot_tol:
            raise CorrelationError(
                f"correlation matrix is not positive semi-definite: pivot {j} = {d:.3e}"
            )
        if d <= pivot_tol:
            # semi-definite direction: column contributes nothing
            l[j, j] = 0.0
            continue
        l[j, j] = math.sqrt(d)
        for i in range(j + 1, n):
            l[i, j] = (a[i, j] - np.dot(l[i, :j], l[j, :j])) / l[j, j]
    return l


def gaussian_increments(
    stream: RngStream | np.random.Generator,
    corr: CorrelationMatrix,
    dt: float,
    size: int | None = None,
) -> np.ndarray:
    """Correlated normal increments with covariance corr * dt.

    Returns shape (n,) for size=None, else (size, n).
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    gen = stream.generator() if isinstance(stream, RngStream) else stream
    shape = (corr.n,) if size is None else (size, corr.n)
    z = gen.standard_normal(shape)
    return math.sqrt(dt) * (z @ corr.cholesky.T)


@dataclass
class JumpSpec:
    """Marshall-Olkin common-shock jump specification.

    subset_intensities maps frozen subsets of bank indices to Poisson
    intensities; each bank's arrival process is the superposition of the
    subsets containing it.  Amplitudes are negative-exponential with
    per-bank decay theta[i] > 0, so the compensator is -1/(theta[i]+1).
    """

    n_banks: int
    subset_intensities: dict[frozenset[int], float]
    theta: np.ndarray

    def __post_init__(self) -> None:
        self.theta = np.asarray(self.theta, dtype=float)
        if self.theta.shape != (self.n_banks,):
            raise ValueError(f"theta must have shape ({self.n_banks},)")
        if np.any(self.theta <= 0):
            raise ValueError("jump decay theta must be positive for every bank")
        clean: dict[frozenset[int], float] = {}
        for subset, lam in self.subset_intensities.items():
            s = frozenset(subset)
            if not s or any(i < 0 or i >= self.n_banks for i in s):
                raise ValueError(f"subset {set(subset)} out of range for {self.n_banks} banks")
            if lam < 0:
                raise ValueError(f"intensity for subset {set(subset)} is negative: {lam}")
            if lam > 0:
                clean[s] = float(lam)
        self.subset_intensities = clean

    @property
    def compensators(self) -> np.ndarray:
        """kappa[i] = E[exp(J_i) - 1] = -1/(theta[i] + 1)."""
        return -1.0 / (self.theta + 1.0)

    def bank_intensities(self) -> np.ndarray:
        """Per-bank arrival intensity: sum of intensities of subsets containing the bank."""
        lam = np.zeros(self.n_banks)
        for subset, rate in self.subset_intensities.items():
            for i in subset:
                lam[i] += rate
        return lam

    @classmethod
    def systemic_idiosyncratic(
        cls, lam_all: float, lam_single: np.ndarray, theta: np.ndarray
    ) -> "JumpSpec":
        """Common shock hitting all banks plus one singleton subset per bank."""
        lam_single = np.asarray(lam_single, dtype=float)
        n = lam_single.shape[0]
        subsets: dict[frozenset[int], float] = {frozenset(range(n)): float(lam_all)}
        for i in range(n):
            subsets[frozenset([i])] = float(lam_single[i])
        return cls(n, subsets, theta)


class PathNoise:
    """Per-path noise drawn from streams keyed by (master_seed, path_index).

    Path j's draws depend only on (master_seed, first_path + j), never on the
    total path count or scheduling, so chunked or parallel execution cannot
    change results.  Draws can be taken in time blocks; generator state
    persists between blocks.
    """

    def __init__(self, stream: RngStream, n_paths: int, first_path: int = 0):
        self._gens = [
            stream.substream(first_path + j).generator() for j in range(n_paths)
        ]

    def normals(self, n_steps: int, dims: int) -> np.ndarray:
        """Standard normals with shape (n_steps, dims, n_paths)."""
        out = np.empty((len(self._gens), n_steps, dims))
        for j, g in enumerate(self._gens):
            out[j] = g.standard_normal((n_steps, dims))
        return out.transpose(1, 2, 0)

    def generator(self, j: int) -> np.random.Generator:
        return self._gens[j]


def sample_jump_amplitudes(
    gen: np.random.Generator, theta: float, size: int
) -> np.ndarray:
    """Draw negative-exponential jump sizes J <= 0 with density theta*exp(theta*j)."""
    return -gen.exponential(scale=1.0 / theta, size=size)


def marshall_olkin_arrivals(
    stream: RngStream | np.random.Generator,
    spec: JumpSpec,
    dt: float,
) -> tuple[np.ndarray, np.ndarray]:
    """One step of common-shock jump arrivals.

    Returns (counts, log_jumps): per-bank arrival counts over dt and the
    summed log amplitudes sum(J) to apply multiplicatively as exp(sum J).
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    gen = stream.generator() if isinstance(stream, RngStream) else stream
    counts = np.zeros(spec.n_banks, dtype=np.int64)
    log_jumps = np.zeros(spec.n_banks)
    for subset, lam in sorted(
        spec.subset_intensities.items(), key=lambda kv: sorted(kv[0])
    ):
        k = gen.poisson(lam * dt)
        if k == 0:
            continue
        for i in sorted(subset):
            counts[i] += k
            log_jumps[i] += sample_jump_amplitudes(gen, spec.theta[i], k).sum()
    return counts, log_jumps


def euler_step(
    state: np.ndarray,
    drift: np.ndarray,
    diffusion: np.ndarray | None,
    dw: np.ndarray | None,
    dt: float,
    jumps: np.ndarray | None = None,
) -> np.ndarray:
    """Euler-Maruyama update: state + drift*dt + diffusion @ dW + jumps.

    No clamping is applied here; boundary policy belongs to the caller.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    state = np.asarray(state, dtype=float)
    drift = np.asarray(drift, dtype=float)
    _require_finite("state", state)
    _require_finite("drift", drift)
    out = state + drift * dt
    if diffusion is not None and dw is not None:
        diffusion = np.asarray(diffusion, dtype=float)
        _require_finite("diffusion", diffusion)
        if diffusion.ndim == 1:
            out = out + diffusion * dw
        else:
            out = out + diffusion @ dw
    if jumps is not None:
        jumps = np.asarray(jumps, dtype=float)
        _require_finite("jumps", jumps)
        out = out + jumps
    return out


def _require_finite(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        bad = np.argwhere(~np.isfinite(np.atleast_1d(arr)))
        raise FloatingPointError(f"non-finite {name} at component {bad[0].tolist()}")
