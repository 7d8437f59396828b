"""Brute-force cross-checks for the collapse-rate convention.

The closed-form sphere factor in :func:`waxsim.decoherence.sphere_geometry_factor`
is re-derived here from first principles, with no reference to that formula.
The collapse decoherence function for center-of-mass displacement s is, in
the adopted normalization,

    Gamma(s) = (lambda/m0^2) [ I(0) - I(s) ],
    I(s) = integral rho(x) rho(y) exp(-(x - y + s)^2 / 4 a^2) d^3x d^3y,

and the localization rate is the quadratic coefficient Gamma(s) ~ Lambda s^2
at small s. Writing the Gaussian kernel as an overlap of smearing functions
g(r) = (pi a^2)^(-3/4) exp(-r^2 / 2 a^2) turns I(s) into the autocorrelation
of the smeared mass density mu = g * rho,

    I(s) = integral mu(z) mu(z + s) d^3z,

which this module evaluates by radial quadrature for a homogeneous sphere:
mu from a 1-D Gauss-Legendre integral, I(s) from a 2-D reduction, and the
quadratic coefficient from a Richardson-extrapolated finite difference in s.
Everything is numeric; no series or closed form for the sphere factor enters.
"""
from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DomainError

#: Grid extent beyond the sphere edge, in correlation lengths; the smeared
#: density is Gaussian-small there.
_TAIL = 9.0


def _smeared_density(ratio: float, n_grid: int = 4000, n_quad: int = 200):
    """Spline of mu(r) for a unit-mass sphere of radius ``ratio`` (lengths in a).

    mu(r) = (pi)^(-3/4) rho0 * 2 pi / r * int_0^R x
            [exp(-(r-x)^2/2) - exp(-(r+x)^2/2)] dx
    """
    rmax = ratio + _TAIL
    r = np.linspace(0.0, rmax, n_grid)
    nodes, weights = np.polynomial.legendre.leggauss(n_quad)
    x = 0.5 * ratio * (nodes + 1.0)
    w = 0.5 * ratio * weights
    rho0 = 1.0 / (4.0 / 3.0 * np.pi * ratio**3)

    rr = r[:, None]
    xx = x[None, :]
    core = np.exp(-0.5 * (rr - xx) ** 2) - np.exp(-0.5 * (rr + xx) ** 2)
    radial = 2.0 * np.pi * rho0 * (core * xx * w[None, :]).sum(axis=1)
    mu = np.empty_like(r)
    mu[1:] = radial[1:] / r[1:]
    mu[0] = 4.0 * np.pi * rho0 * (w * x**2 * np.exp(-0.5 * x**2)).sum()
    return CubicSpline(r, np.pi ** (-0.75) * mu), rmax


def csl_sphere_factor_bruteforce(
    ratio: float,
    probe_separation: float = 0.02,
    n_outer: int = 1200,
) -> float:
    """Sphere geometry factor from the smeared-density double integral.

    Parameters
    ----------
    ratio : float
        Sphere radius over correlation length, R/a, > 0.
    probe_separation : float
        Smallest displacement s (units of a) used for the finite-difference
        extraction; s and 2s are combined by Richardson extrapolation to
        cancel the O(s^2) contamination.
    n_outer : int
        Gauss-Legendre order of the outer radial integral.

    Returns
    -------
    float
        The factor normalized so a point particle gives exactly 1, i.e. the
        quadratic coefficient of Gamma divided by 1/(4 a^2) at unit mass and
        unit rate.
    """
    if ratio <= 0.0:
        raise DomainError(f"ratio must be > 0, got {ratio}")
    mu, rmax = _smeared_density(ratio)

    # Antiderivative W(y) = int_0^y w mu(w) dw for the angular reduction
    # I(s) = (2 pi / s) int r mu(r) [W(r+s) - W(|r-s|)] dr.
    r_dense = np.linspace(0.0, rmax, 6000)
    w_mu = CubicSpline(r_dense, r_dense * mu(r_dense))
    W = w_mu.antiderivative()

    nodes, weights = np.polynomial.legendre.leggauss(n_outer)
    rg = 0.5 * rmax * (nodes + 1.0)
    wg = 0.5 * rmax * weights
    r_mu = rg * mu(rg)

    def deficit(s: float) -> float:
        # I(0) - I(s); the bracket is O(s^2) pointwise, so the difference is
        # formed before integrating and no large-term cancellation occurs.
        bracket = 2.0 * r_mu - (W(rg + s) - W(np.abs(rg - s))) / s
        return 2.0 * np.pi * float((wg * r_mu * bracket).sum())

    s = probe_separation
    coeff_s = deficit(s) / s**2
    coeff_2s = deficit(2.0 * s) / (4.0 * s**2)
    coeff = (4.0 * coeff_s - coeff_2s) / 3.0
    return coeff / 0.25
