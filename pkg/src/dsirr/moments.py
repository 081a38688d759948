"""Second moments of the screen state and their numerical oracle.

All values are in natural units (ħ = m = σ₀ = 1), so the
Robertson-Schrödinger bound reads dC >= 1/4.

Two variants of the closed form are kept.  ``"printed"`` evaluates the
momentum variance exactly as it is usually quoted, whose last term is

    [D²/B⁴ + 2Δ(Δ + D/R)] / (1 + exp(-D²/4B² + Δ²B²)).

Direct integration of the two-branch superposition gives instead

    E [D²/(4B⁴) + ΔD/R + Δ²B⁴/R²] / (1 + E),   E = exp(-D²/4B² - Δ²B²),

which is the ``"derived"`` variant and the default.  The two agree whenever
the branch overlap E is negligible (the neutron configuration), and part
ways as soon as the branches overlap appreciably; the oracle
:func:`covariance_numeric` decides between them.  The position variance and
the correlation need no such correction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import QuadratureError
from .packet import ExperimentConfig, PacketParams
from .screen import ScreenState, momentum_density, position_density, superposition

VARIANTS = ("derived", "printed")


@dataclass(frozen=True)
class CovarianceTriple:
    sxx2: float
    spp2: float
    sxp: float

    @property
    def dC(self) -> float:
        return self.sxx2 * self.spp2 - self.sxp**2


def covariance_closed_form(params: PacketParams, variant: str = "derived") -> CovarianceTriple:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    B2 = params.B**2
    D, Dl, inv_R = params.D, params.Delta, params.inv_R
    E = params.overlap

    sxx2 = B2 / 2.0 + (D * D - 4.0 * Dl * Dl * B2 * B2 * E) / (4.0 + 4.0 * E)

    spp2 = 1.0 / (2.0 * B2) + B2 * inv_R**2 / 2.0 + (D * inv_R - 2.0 * Dl) ** 2 / (4.0 + 4.0 * E)
    if variant == "derived":
        spp2 -= E * (D * D / (4.0 * B2 * B2) + Dl * D * inv_R + Dl * Dl * B2 * B2 * inv_R**2) / (1.0 + E)
    else:
        spp2 -= (D * D / (B2 * B2) + 2.0 * Dl * (Dl + D * inv_R)) / (
            1.0 + math.exp(-D * D / (4.0 * B2) + Dl * Dl * B2)
        )

    # E/(1+E) written as 1/(1 + 1/E) in the usual presentation
    sxp = B2 * inv_R / 2.0 + D * D * inv_R / (4.0 + 4.0 * E) - Dl * D / 2.0 - Dl * Dl * B2 * B2 * inv_R * E / (1.0 + E)
    return CovarianceTriple(sxx2, spp2, sxp)


def _integrate(fn, lo, hi, what):
    val, err = quad(fn, lo, hi, epsabs=0.0, epsrel=1e-12, limit=2000)
    if not np.isfinite(val) or err > 1e-9 * max(abs(val), 1e-300):
        raise QuadratureError(f"{what} did not converge (error estimate {err:.3e})", err)
    return val


def _momentum_extent(state: ScreenState) -> float:
    centre, width, _ = state.momentum_terms.envelope()
    return float(np.max(np.abs(centre) + 12.0 * width))


def first_moments(state: ScreenState) -> tuple[float, float]:
    """<x> and <k> by quadrature; both vanish by symmetry."""
    L = state.extent
    K = _momentum_extent(state)
    # the integrals vanish, so quad's relative round-off warning is moot
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        mx = quad(lambda x: x * position_density(state, x), -L, L, limit=2000, epsabs=1e-14)[0]
        mk = quad(lambda k: k * momentum_density(state, k), -K, K, limit=2000, epsabs=1e-14)[0]
    return mx, mk


def covariance_numeric(state: ScreenState) -> CovarianceTriple:
    """Moments by adaptive quadrature of the pointwise densities.

    <x²> from ρ(x), <p²> from ρ̃(k) (p = k in natural units) and
    σ_xp = ∫ x Im(ψ* ψ') dx with the analytic derivative of ψ.  First
    moments are taken as zero; see :func:`first_moments`.
    """
    L = state.extent
    K = _momentum_extent(state)
    sxx2 = _integrate(lambda x: x * x * position_density(state, x), -L, L, "<x^2>")
    spp2 = _integrate(lambda k: k * k * momentum_density(state, k), -K, K, "<p^2>")

    def corr(x):
        return x * float(np.imag(np.conj(state.amplitude(x)) * state.derivative(x)))

    sxp = _integrate(corr, -L, L, "sigma_xp")
    return CovarianceTriple(sxx2, spp2, sxp)


def squeezing_ratios(config: ExperimentConfig, t: float, tau: float, variant: str = "derived") -> tuple[float, float]:
    """σ_xx and σ_pp relative to the uncorrelated (γ = 0) superposition."""
    mine = covariance_closed_form(superposition(config, t, tau).params, variant)
    ref = covariance_closed_form(superposition(config.with_gamma(0.0), t, tau).params, variant)
    return math.sqrt(mine.sxx2 / ref.sxx2), math.sqrt(mine.spp2 / ref.spp2)
