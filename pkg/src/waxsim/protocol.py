"""Monte-Carlo simulation of the release-expand-measure experimental cycle.

A campaign repeats the cycle N times per grid time: prepare the trapped state,
release, let the packet expand for t, record the position along the
measurement axis, retrap. Each recorded position is a draw from a zero-mean
normal whose variance is the model position variance at t plus two optional
instrumental terms,

    var_total(t) = x_var(t) + (drift_velocity_std * t)^2 + measurement_noise^2,

covering run-to-run center-of-mass velocity scatter and readout noise. Runs
are independent (fresh preparation each cycle).

Randomness contract: the stream for grid index i is a Philox counter-based
generator keyed by (seed, i); run r consumes the r-th uniform of that stream,
mapped through the inverse normal CDF. Results are therefore reproducible
bit-for-bit for a given seed and independent of how work is scheduled across
grid times (``workers`` only changes wall time, never output).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import ndtri

from .decoherence import ChannelToggles, CSLParams, total_budget
from .dynamics import _x_var_free, initial_state
from .errors import DomainError
from .materials import DEFAULT_TRAP_FREQUENCY, Environment, Particle


@dataclass(frozen=True)
class CampaignConfig:
    """Measurement plan for one campaign.

    Attributes
    ----------
    time_grid : tuple of float
        Expansion times [s]; non-empty, non-negative, strictly increasing.
    runs_per_time : int
        Repetitions N per grid time, >= 2 so a variance is estimable.
    measurement_noise : float
        Position-readout standard deviation [m], >= 0.
    drift_velocity_std : float
        Run-to-run center-of-mass velocity spread [m/s], >= 0.
    occupancy : float
        Mean phonon number of the prepared trap state, >= 0.
    rng_seed : int
        64-bit campaign seed.
    """

    time_grid: tuple[float, ...]
    runs_per_time: int
    measurement_noise: float = 0.0
    drift_velocity_std: float = 0.0
    occupancy: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "time_grid", tuple(float(t) for t in self.time_grid))
        grid = np.asarray(self.time_grid)
        if grid.size == 0:
            raise DomainError("time_grid must be non-empty")
        if np.any(grid < 0.0):
            raise DomainError("time_grid must be non-negative")
        if grid.size > 1 and not np.all(np.diff(grid) > 0.0):
            raise DomainError("time_grid must be strictly increasing")
        if self.runs_per_time < 2:
            raise DomainError(
                f"runs_per_time must be >= 2, got {self.runs_per_time}"
            )
        if self.measurement_noise < 0.0:
            raise DomainError("measurement_noise must be >= 0")
        if self.drift_velocity_std < 0.0:
            raise DomainError("drift_velocity_std must be >= 0")
        if self.occupancy < 0.0:
            raise DomainError("occupancy must be >= 0")


@dataclass(frozen=True)
class PositionSamples:
    """Synthetic position records, one row of ``samples`` per grid time.

    ``true_sigmas`` holds the total standard deviation each row was drawn
    with (model width plus drift and readout terms).
    """

    times: np.ndarray
    samples: np.ndarray  # shape (len(times), runs_per_time)
    true_sigmas: np.ndarray

    def to_csv(self) -> str:
        """Raw-sample CSV: header ``t_s,run_index,x_m``."""
        lines = ["t_s,run_index,x_m"]
        for t, row in zip(self.times, self.samples):
            t_repr = repr(float(t))
            for r, x in enumerate(row):
                lines.append(f"{t_repr},{r},{float(x)!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WidthEstimate:
    """Estimated wave-packet width at one grid time."""

    t: float
    sigma_hat: float
    standard_error: float
    sample_count: int

    def __post_init__(self) -> None:
        if self.sample_count < 2:
            raise DomainError("sample_count must be >= 2")
        if self.sigma_hat < 0.0 or self.standard_error < 0.0:
            raise DomainError("sigma_hat and standard_error must be >= 0")


def _stream_uniforms(seed: int, grid_index: int, count: int) -> np.ndarray:
    """Uniforms (0,1] for one grid time; run r is the r-th value of the stream."""
    key = np.random.SeedSequence(entropy=seed, spawn_key=(grid_index,))
    u = np.random.Generator(np.random.Philox(key)).random(count)
    # random() is [0, 1); shift the measure-zero 0.0 away from ndtri's pole
    return np.maximum(u, 2.0**-54)


def sampling_sigma(
    config: CampaignConfig,
    particle: Particle,
    env: Environment,
    csl: CSLParams | None = None,
    toggles: ChannelToggles = ChannelToggles(),
    trap_frequency: float = DEFAULT_TRAP_FREQUENCY,
) -> np.ndarray:
    """Total per-draw standard deviation at each grid time [m]."""
    times = np.asarray(config.time_grid)
    budget = total_budget(particle, env, csl, toggles)
    state0 = initial_state(particle, trap_frequency, config.occupancy)
    x_var = _x_var_free(state0, particle.mass, budget.total, times)
    return np.sqrt(
        x_var
        + (config.drift_velocity_std * times) ** 2
        + config.measurement_noise**2
    )


def run_campaign(
    config: CampaignConfig,
    particle: Particle,
    env: Environment,
    csl: CSLParams | None = None,
    toggles: ChannelToggles = ChannelToggles(),
    trap_frequency: float = DEFAULT_TRAP_FREQUENCY,
    workers: int | None = None,
) -> PositionSamples:
    """Generate the synthetic position dataset for one campaign.

    Parameters
    ----------
    config : CampaignConfig
    particle, env, csl, toggles, trap_frequency
        Model inputs, as for :func:`waxsim.dynamics.expansion_curve`.
    workers : int, optional
        Thread count for generating grid times concurrently; output is
        byte-identical to the serial path.

    Returns
    -------
    PositionSamples
    """
    times = np.asarray(config.time_grid)
    sigmas = sampling_sigma(config, particle, env, csl, toggles, trap_frequency)
    n = config.runs_per_time
    samples = np.empty((times.size, n))

    def fill(i: int) -> None:
        u = _stream_uniforms(config.rng_seed, i, n)
        samples[i] = ndtri(u) * sigmas[i]

    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(times.size)))
    else:
        for i in range(times.size):
            fill(i)
    return PositionSamples(times, samples, sigmas)


def estimate_width(t: float, samples: Sequence[float]) -> WidthEstimate:
    """Width estimate from the positions recorded at one grid time.

    sigma_hat is the square root of the unbiased (ddof=1) sample variance.
    The standard error of the variance estimate is sigma_hat^2 sqrt(2/(N-1))
    (normal sampling theory); propagating to sigma gives
    sigma_hat sqrt(1/(2(N-1))).
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("need at least 2 samples at one grid time")
    n = x.size
    sigma_hat = float(np.std(x, ddof=1))
    return WidthEstimate(
        t=float(t),
        sigma_hat=sigma_hat,
        standard_error=sigma_hat * math.sqrt(1.0 / (2.0 * (n - 1))),
        sample_count=n,
    )


def campaign_curve(
    config: CampaignConfig,
    particle: Particle,
    env: Environment,
    csl: CSLParams | None = None,
    toggles: ChannelToggles = ChannelToggles(),
    trap_frequency: float = DEFAULT_TRAP_FREQUENCY,
    workers: int | None = None,
) -> tuple[WidthEstimate, ...]:
    """Run a campaign and estimate the width at every grid time."""
    data = run_campaign(config, particle, env, csl, toggles, trap_frequency, workers)
    return tuple(
        estimate_width(t, row) for t, row in zip(data.times, data.samples)
    )


def campaign_to_csv(estimates: Sequence[WidthEstimate]) -> str:
    """CSV text: header ``t_s,sigma_hat_m,sigma_err_m,n_samples``."""
    lines = ["t_s,sigma_hat_m,sigma_err_m,n_samples"]
    for e in estimates:
        lines.append(
            f"{e.t!r},{e.sigma_hat!r},{e.standard_error!r},{e.sample_count}"
        )
    return "\n".join(lines) + "\n"
