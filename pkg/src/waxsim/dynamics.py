"""Second-moment evolution of the center-of-mass state through free expansion.

The state is Gaussian and one-dimensional (the measurement axis), so three
moments suffice: the position variance <x^2>, the symmetrized covariance
<xp+px>/2 and the momentum variance <p^2>. Free flight with a localization
rate Lambda (the -Lambda [x,[x,rho]] master-equation term) evolves them as

    d<p^2>/dt      = 2 hbar^2 Lambda
    d(<xp+px>/2)/dt = <p^2>/m
    d<x^2>/dt      = <xp+px>/m

whose closed-form solution is polynomial in t; the t^3 term in <x^2> is the
decoherence signature the measurement protocol targets. ``evolve_numeric``
integrates the same system with a generic fixed-step 4th-order Runge-Kutta
scheme as an independent check on the closed form.

The quadratic localization form holds for wave-packet spreads small against
the collapse correlation length; curves that leave that regime are flagged,
not rejected (the quadratic form overestimates localization there, so the
flagged results are conservative).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .constants import hbar
from .decoherence import ChannelToggles, CSLParams, DecoherenceBudget, total_budget
from .errors import DomainError, NumericalError
from .materials import DEFAULT_TRAP_FREQUENCY, Environment, Particle

#: Relative slack on the Heisenberg product at construction.
_PURITY_TOLERANCE = 1e-9
#: float64 machine epsilon; scales the evaluation allowance below.
_EPS = 2.220446049250313e-16


def heisenberg_allowance(x_var: float, xp_cov: float, p_var: float) -> float:
    """Float64 resolution of the Heisenberg determinant at these moments.

    For an expanded state the determinant x_var p_var - xp_cov^2 sits many
    orders of magnitude below the products themselves, so rounding of the
    stored moments perturbs it at the scale eps * (x_var p_var + xp_cov^2).
    Purity checks must grant this allowance or they reject exact physics.
    """
    return 32.0 * _EPS * (x_var * p_var + xp_cov * xp_cov)


@dataclass(frozen=True)
class GaussianState:
    """Centered second moments of the 1-D center-of-mass state.

    Attributes
    ----------
    x_var : float
        Position variance <x^2> [m^2], > 0.
    xp_cov : float
        Symmetrized covariance <xp+px>/2 [kg m^2/s].
    p_var : float
        Momentum variance <p^2> [kg^2 m^2/s^2], > 0.

    The Heisenberg bound x_var p_var - xp_cov^2 >= hbar^2/4 is enforced at
    construction with 1e-9 relative slack plus the floating-point allowance
    of :func:`heisenberg_allowance`.
    """

    x_var: float
    xp_cov: float
    p_var: float

    def __post_init__(self) -> None:
        if self.x_var <= 0.0:
            raise DomainError(f"x_var must be > 0, got {self.x_var}")
        if self.p_var <= 0.0:
            raise DomainError(f"p_var must be > 0, got {self.p_var}")
        bound = 0.25 * hbar * hbar * (1.0 - _PURITY_TOLERANCE)
        allowance = heisenberg_allowance(self.x_var, self.xp_cov, self.p_var)
        if self.x_var * self.p_var - self.xp_cov**2 < bound - allowance:
            raise DomainError(
                "moments violate the Heisenberg bound: "
                f"x_var*p_var - xp_cov^2 = {self.heisenberg_product:.6e} < hbar^2/4"
            )

    @property
    def sigma(self) -> float:
        """Wave-packet width sqrt(<x^2>) [m]."""
        return math.sqrt(self.x_var)

    @property
    def heisenberg_product(self) -> float:
        """x_var * p_var - xp_cov^2, bounded below by hbar^2/4."""
        return self.x_var * self.p_var - self.xp_cov**2


def initial_state(
    particle: Particle,
    trap_frequency: float = DEFAULT_TRAP_FREQUENCY,
    occupancy: float = 0.0,
) -> GaussianState:
    """Thermal trap state at mean phonon number ``occupancy``.

    x_var = (2 nbar + 1) hbar / (2 m omega), p_var = (2 nbar + 1) hbar m
    omega / 2, xp_cov = 0. ``occupancy`` = 0 is the motional ground state,
    which saturates the Heisenberg bound.
    """
    if trap_frequency <= 0.0:
        raise DomainError(f"trap_frequency must be > 0, got {trap_frequency}")
    if occupancy < 0.0:
        raise DomainError(f"occupancy must be >= 0, got {occupancy}")
    width = (2.0 * occupancy + 1.0)
    m_omega = particle.mass * trap_frequency
    return GaussianState(
        x_var=width * hbar / (2.0 * m_omega),
        xp_cov=0.0,
        p_var=width * hbar * m_omega / 2.0,
    )


def evolve_free(
    state: GaussianState, mass: float, localization_rate: float, t: float
) -> GaussianState:
    """Closed-form free evolution with momentum diffusion.

    Parameters
    ----------
    state : GaussianState
        Moments at release.
    mass : float
        Particle mass [kg], > 0.
    localization_rate : float
        Total localization rate Lambda [m^-2 s^-1], >= 0.
    t : float
        Evolution time [s], >= 0.

    Returns
    -------
    GaussianState
        p_var(t)  = p_var0 + 2 hbar^2 Lambda t
        xp_cov(t) = xp_cov0 + p_var0 t/m + hbar^2 Lambda t^2/m
        x_var(t)  = x_var0 + 2 xp_cov0 t/m + p_var0 t^2/m^2
                    + (2/3) hbar^2 Lambda t^3/m^2
    """
    if mass <= 0.0:
        raise DomainError(f"mass must be > 0, got {mass}")
    if localization_rate < 0.0:
        raise DomainError(
            f"localization_rate must be >= 0, got {localization_rate}"
        )
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t}")
    h2L = hbar * hbar * localization_rate
    return GaussianState(
        x_var=state.x_var
        + 2.0 * state.xp_cov * t / mass
        + state.p_var * t * t / (mass * mass)
        + (2.0 / 3.0) * h2L * t**3 / (mass * mass),
        xp_cov=state.xp_cov + state.p_var * t / mass + h2L * t * t / mass,
        p_var=state.p_var + 2.0 * h2L * t,
    )


def rk4_integrate(
    deriv: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """Generic fixed-step classical Runge-Kutta (order 4) integrator.

    Returns the state at ``t1`` after ``steps`` equal steps from ``t0``.
    """
    if steps < 1:
        raise DomainError(f"steps must be >= 1, got {steps}")
    h = (t1 - t0) / steps
    y = np.asarray(y0, dtype=float)
    t = t0
    for _ in range(steps):
        k1 = deriv(t, y)
        k2 = deriv(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = deriv(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = deriv(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return y


def evolve_numeric(
    state: GaussianState,
    mass: float,
    localization_rate: float,
    t: float,
    steps: int = 10_000,
    tolerance: float | None = None,
) -> GaussianState:
    """Integrate the moment ODEs with fixed-step RK4 (verification path).

    Parameters
    ----------
    state, mass, localization_rate, t
        As in :func:`evolve_free`.
    steps : int
        Number of RK4 steps, >= 1.
    tolerance : float, optional
        If given, the integration is repeated with 2x the steps; a relative
        change in sigma above ``tolerance`` raises NumericalError. The
        finer result is returned.

    Returns
    -------
    GaussianState
    """
    if mass <= 0.0:
        raise DomainError(f"mass must be > 0, got {mass}")
    if localization_rate < 0.0:
        raise DomainError(
            f"localization_rate must be >= 0, got {localization_rate}"
        )
    if t < 0.0:
        raise DomainError(f"t must be >= 0, got {t}")

    h2L2 = 2.0 * hbar * hbar * localization_rate

    def deriv(_t: float, y: np.ndarray) -> np.ndarray:
        x_var, xp_cov, p_var = y
        return np.array([2.0 * xp_cov / mass, p_var / mass, h2L2])

    y0 = np.array([state.x_var, state.xp_cov, state.p_var])
    if t == 0.0:
        return state
    y = rk4_integrate(deriv, y0, 0.0, t, steps)
    if tolerance is not None:
        y_fine = rk4_integrate(deriv, y0, 0.0, t, 2 * steps)
        sigma, sigma_fine = math.sqrt(y[0]), math.sqrt(y_fine[0])
        if abs(sigma - sigma_fine) > tolerance * sigma_fine:
            raise NumericalError(
                "moment integration not converged: halving the step changes "
                f"sigma by {abs(sigma - sigma_fine) / sigma_fine:.3e} relative"
            )
        y = y_fine
    return GaussianState(x_var=y[0], xp_cov=y[1], p_var=y[2])


@dataclass(frozen=True)
class ExpansionCurve:
    """Sampled wave-packet width sigma(t) and the budget that produced it."""

    times: np.ndarray
    sigmas: np.ndarray
    budget: DecoherenceBudget
    warnings: tuple[str, ...] = ()

    def to_csv(self) -> str:
        """CSV text: header ``t_s,sigma_m,lambda_total_m2s``, one row per sample."""
        total = repr(float(self.budget.total))
        lines = ["t_s,sigma_m,lambda_total_m2s"]
        for t, s in zip(self.times, self.sigmas):
            lines.append(f"{float(t)!r},{float(s)!r},{total}")
        return "\n".join(lines) + "\n"


def _x_var_free(
    state: GaussianState, mass: float, localization_rate: float, times: np.ndarray
) -> np.ndarray:
    """Vectorized closed-form x_var(t) over a time array."""
    h2L = hbar * hbar * localization_rate
    return (
        state.x_var
        + 2.0 * state.xp_cov * times / mass
        + state.p_var * times**2 / mass**2
        + (2.0 / 3.0) * h2L * times**3 / mass**2
    )


def expansion_curve(
    particle: Particle,
    env: Environment,
    csl: CSLParams | None = None,
    toggles: ChannelToggles = ChannelToggles(),
    trap_frequency: float = DEFAULT_TRAP_FREQUENCY,
    occupancy: float = 0.0,
    time_grid: Sequence[float] = (),
) -> ExpansionCurve:
    """Wave-packet width sigma(t) over a time grid for the selected channels.

    The grid must be non-empty, non-negative and strictly increasing. Any
    channel validity warnings are propagated; if the collapse channel is
    active, an additional flag is raised once sigma exceeds a/3, where the
    small-separation quadratic form stops being quantitatively reliable.
    """
    times = np.asarray(list(time_grid), dtype=float)
    if times.size == 0:
        raise DomainError("time_grid must be non-empty")
    if np.any(times < 0.0):
        raise DomainError("time_grid must be non-negative")
    if times.size > 1 and not np.all(np.diff(times) > 0.0):
        raise DomainError("time_grid must be strictly increasing")

    budget = total_budget(particle, env, csl, toggles)
    state0 = initial_state(particle, trap_frequency, occupancy)
    x_var = _x_var_free(state0, particle.mass, budget.total, times)
    sigmas = np.sqrt(x_var)

    warnings = list(budget.warnings)
    if toggles.csl and csl is not None and csl.collapse_rate > 0.0:
        limit = csl.correlation_length / 3.0
        if np.any(sigmas > limit):
            warnings.append(
                "collapse localization outside quadratic validity: sigma exceeds "
                "a/3, reported widths are conservative"
            )
    return ExpansionCurve(times, sigmas, budget, tuple(warnings))
