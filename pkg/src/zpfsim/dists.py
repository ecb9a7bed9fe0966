"""Analytic target distributions, generating functions, and their inversion.

These are the oracles every Monte Carlo result is tested against: the
Gaussian single-mode and total-field laws of the quantized ground state,
the arcsine law of a fixed-amplitude random-phase mode, the Hermite-
oscillator densities, the Bessel-product and Gaussian generating
(characteristic) functions, and the numerical inverse transform

    pdf(x) = (1/2 pi) * integral g(s) exp(i s x) ds

that turns a generating function back into a density.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import j0, ndtr

from .constants import PhysicalConstants
from .lattice import ModeGrid

HERMITE_MAX_LEVEL = 170  # 2^n n! overflows double precision beyond this


class InsufficientRangeError(ValueError):
    """Generating function has not decayed at the edge of the s-range."""


# ------------------------------------------------------------ closed forms

def classical_oscillator_pdf(x, amplitude: float):
    """Position density 1/(pi*sqrt(A^2 - x^2)) of a fixed-amplitude sinusoid.

    The density is unbounded at the endpoints; x = +-A evaluates to inf and
    statistical tests should use the cdf.
    """
    if not amplitude > 0.0:
        raise ValueError("amplitude must be strictly positive")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) <= amplitude
    with np.errstate(divide="ignore"):
        out[inside] = 1.0 / (np.pi * np.sqrt(amplitude**2 - x[inside] ** 2))
    return float(out) if out.ndim == 0 else out


def arcsine_cdf(x, amplitude: float):
    """Antiderivative of the classical-oscillator density:
    (1/pi) arcsin(x/A) + 1/2, clamped to [0, 1] outside the support."""
    if not amplitude > 0.0:
        raise ValueError("amplitude must be strictly positive")
    x = np.asarray(x, dtype=float)
    z = np.clip(x / amplitude, -1.0, 1.0)
    out = np.arcsin(z) / np.pi + 0.5
    return float(out) if out.ndim == 0 else out


def hermite_function(n: int, xi):
    """Orthonormal Hermite function h_n(xi) by the stable normalized
    recurrence h_{m+1} = sqrt(2/(m+1)) xi h_m - sqrt(m/(m+1)) h_{m-1}
    (the closed form with 2^n n! overflows long before n = 170)."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 0:
        raise ValueError("level n must be a non-negative integer")
    if n > HERMITE_MAX_LEVEL:
        raise ValueError(f"level n = {n} exceeds double-precision cap {HERMITE_MAX_LEVEL}")
    xi = np.asarray(xi, dtype=float)
    h_prev = np.pi**-0.25 * np.exp(-0.5 * xi**2)
    if n == 0:
        return h_prev
    h = np.sqrt(2.0) * xi * h_prev
    for m in range(1, n):
        h_prev, h = h, np.sqrt(2.0 / (m + 1)) * xi * h - np.sqrt(m / (m + 1)) * h_prev
    return h


def quantum_oscillator_pdf(n: int, x, alpha: float):
    """|psi_n|^2 for the harmonic oscillator, alpha = sqrt(m*omega/hbar)."""
    if not alpha > 0.0:
        raise ValueError("alpha must be strictly positive")
    x = np.asarray(x, dtype=float)
    out = alpha * hermite_function(n, alpha * x) ** 2
    return float(out) if out.ndim == 0 else out


def gaussian_mode_pdf(e, sigma: float):
    """Normal density with standard deviation sigma (single-mode law)."""
    if not sigma > 0.0:
        raise ValueError("sigma must be strictly positive")
    e = np.asarray(e, dtype=float)
    out = np.exp(-(e**2) / (2.0 * sigma**2)) / np.sqrt(2.0 * np.pi * sigma**2)
    return float(out) if out.ndim == 0 else out


def gaussian_cdf(x, sigma: float):
    if not sigma > 0.0:
        raise ValueError("sigma must be strictly positive")
    x = np.asarray(x, dtype=float)
    out = ndtr(x / sigma)
    return float(out) if out.ndim == 0 else out


def total_field_sigma(omega_cutoff: float, constants: PhysicalConstants) -> float:
    """Total-field per-component scale: sigma_E^2 = hbar*w_c^4/(24 pi^2 eps0 c^3)."""
    if not omega_cutoff > 0.0:
        raise ValueError("omega_cutoff must be strictly positive")
    return float(np.sqrt(
        constants.hbar * omega_cutoff**4
        / (24.0 * np.pi**2 * constants.eps0 * constants.c**3)
    ))


def zero_point_energy_density(omega, constants: PhysicalConstants):
    """Spectral energy density hbar*w^3/(2 pi^2 c^3) per unit volume."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0.0):
        raise ValueError("omega must be non-negative")
    out = constants.hbar * omega**3 / (2.0 * np.pi**2 * constants.c**3)
    return float(out) if out.ndim == 0 else out


def mode_energy(sigma: float, constants: PhysicalConstants, volume: float) -> float:
    """Average field energy per mode, eps0*V*sigma^2 (= hbar*w/2 when sigma
    comes from the periodic-box scale; sigma = 0 is the zero-frequency limit)."""
    if sigma < 0.0 or not volume > 0.0:
        raise ValueError("sigma must be non-negative and volume strictly positive")
    return float(constants.eps0 * volume * sigma**2)


def binned_energy_density(grid: ModeGrid, bin_edges):
    """Lattice energy density per omega bin: sum of hbar*w/2 over modes in
    each bin, divided by V and the bin width."""
    if grid.volume is None:
        raise ValueError("binned energy density needs a grid with a volume")
    edges = np.asarray(bin_edges, dtype=float)
    hbar = grid.constants.hbar
    idx = np.digitize(grid.omega, edges)
    widths = np.diff(edges)
    out = np.zeros(len(edges) - 1)
    for b in range(1, len(edges)):
        sel = idx == b
        out[b - 1] = 0.5 * hbar * np.sum(grid.omega[sel]) / (grid.volume * widths[b - 1])
    return out


def energy_density_bin_average(bin_edges, constants: PhysicalConstants):
    """Exact bin averages of the spectral energy density hbar*w^3/(2 pi^2 c^3)."""
    edges = np.asarray(bin_edges, dtype=float)
    w1, w2 = edges[:-1], edges[1:]
    return constants.hbar * (w2**4 - w1**4) / (8.0 * np.pi**2 * constants.c**3) / (w2 - w1)


# ---------------------------------------------------- generating functions

def gaussian_generating(s, sigma: float):
    """Characteristic function exp(-s^2 sigma^2 / 2) of a centered normal."""
    s = np.asarray(s, dtype=float)
    out = np.exp(-(s**2) * sigma**2 / 2.0)
    return float(out) if out.ndim == 0 else out


def boyer_generating(s, s_direction, grid: ModeGrid, chunk: int = 4096):
    """Bessel-product generating function of the random-phase field:
    prod_k J0(sqrt(2) sigma_k s (shat . eps_k))."""
    d = np.asarray(s_direction, dtype=float)
    d = d / np.linalg.norm(d)
    s_in = np.asarray(s, dtype=float)
    s = np.atleast_1d(s_in)
    proj = grid.eps @ d
    scale = np.sqrt(2.0) * grid.sigma * proj
    out = np.ones_like(s)
    for lo in range(0, len(grid), chunk):
        out *= np.prod(j0(np.outer(s, scale[lo:lo + chunk])), axis=1)
    return float(out[0]) if s_in.ndim == 0 else out


def lattice_gaussian_generating(s, s_direction, grid: ModeGrid):
    """Gaussian generating function with the variance summed over the same
    grid, exp(-s^2/2 * sum_k sigma_k^2 (shat.eps_k)^2). This is the
    retained-quadratic-terms limit of the Bessel product on that grid."""
    var = grid.component_variance(s_direction)
    s = np.asarray(s, dtype=float)
    out = np.exp(-(s**2) * var / 2.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GaussianGF:
    sigma: float

    def __call__(self, s):
        return gaussian_generating(s, self.sigma)


@dataclass(frozen=True)
class BesselProductGF:
    grid: ModeGrid
    s_direction: tuple = (0.0, 0.0, 1.0)

    def __call__(self, s):
        return boyer_generating(s, self.s_direction, self.grid)


def invert_characteristic(gf, x_grid, s_max: float, n_s: int = 8193,
                          decay_tol: float = 1e-10, chunk: int = 256) -> np.ndarray:
    """Recover a density from its generating function by discretized
    quadrature of the inverse transform over s in [-s_max, s_max].

    The caller supplies the range; if |g| at the range edge exceeds
    ``decay_tol`` the transform is untrustworthy and an
    InsufficientRangeError is raised. The result is renormalized to unit
    mass on x_grid. A symmetric s-grid maps a symmetric gf to a symmetric
    density.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    s = np.linspace(-s_max, s_max, n_s)
    g = np.asarray(gf(s), dtype=complex)
    edge = max(abs(g[0]), abs(g[-1]))
    if edge > decay_tol:
        raise InsufficientRangeError(
            f"insufficient s-range: |g| = {edge:.3g} at s = +-{s_max:g} "
            f"exceeds decay tolerance {decay_tol:g}"
        )
    pdf = np.empty_like(x_grid)
    for lo in range(0, x_grid.size, chunk):
        xs = x_grid[lo:lo + chunk]
        vals = np.trapezoid(g[None, :] * np.exp(1j * np.outer(xs, s)), s, axis=1)
        pdf[lo:lo + chunk] = vals.real / (2.0 * np.pi)
    mass = np.trapezoid(pdf, x_grid)
    if not mass > 0.0:
        raise InsufficientRangeError("inverted density has non-positive mass")
    return pdf / mass


# ------------------------------------------------- distribution catalogue

@dataclass(frozen=True)
class GaussianMode:
    sigma: float

    def pdf(self, x):
        return gaussian_mode_pdf(x, self.sigma)

    def cdf(self, x):
        return gaussian_cdf(x, self.sigma)


@dataclass(frozen=True)
class Arcsine:
    """Law of A*cos(theta) with theta uniform; support [-A, A]."""

    amplitude: float

    def pdf(self, x):
        return classical_oscillator_pdf(x, self.amplitude)

    def cdf(self, x):
        return arcsine_cdf(x, self.amplitude)


ClassicalOscillator = Arcsine


@dataclass(frozen=True)
class GaussianTotal3D:
    """Isotropic centered normal field vector; sigma_e per component."""

    sigma_e: float

    def pdf(self, e_vec):
        e_vec = np.asarray(e_vec, dtype=float)
        sq = np.sum(np.atleast_2d(e_vec) ** 2, axis=-1)
        out = (2.0 * np.pi * self.sigma_e**2) ** -1.5 * np.exp(-sq / (2.0 * self.sigma_e**2))
        return float(out[0]) if e_vec.ndim == 1 else out

    def component(self) -> GaussianMode:
        return GaussianMode(self.sigma_e)


@dataclass(frozen=True)
class QuantumOscillator:
    n: int
    alpha: float

    def pdf(self, x):
        return quantum_oscillator_pdf(self.n, x, self.alpha)

    def cdf(self, x):
        # dense cumulative trapezoid out to the classical turning point plus
        # a wide Gaussian tail margin
        span = (np.sqrt(2.0 * self.n + 1.0) + 8.0) / self.alpha
        xs = np.linspace(-span, span, 20001)
        dens = self.pdf(xs)
        cum = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) * np.diff(xs) / 2.0)])
        cum /= cum[-1]
        x = np.asarray(x, dtype=float)
        out = np.interp(x, xs, cum, left=0.0, right=1.0)
        return float(out) if out.ndim == 0 else out
