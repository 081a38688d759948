"""Single-branch wavepacket parameters and branch wavefunctions.

Units
-----
``ExperimentConfig`` stores SI values.  Everything else in the package works
in natural units of the initial packet: ħ = m = σ₀ = 1, so lengths are in
σ₀, times in τ₀ = mσ₀²/ħ and wavenumbers in 1/σ₀.  Curvature radii r and R
are then times (in τ₀); the chirp phase of a branch reads ``x**2 / (2 R)``.
Reciprocal curvatures ``inv_r`` and ``inv_R`` are the stored quantities since
r diverges at ``t = -γ/(1+γ²)`` for γ < 0 while 1/r stays finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# CODATA 2018
HBAR = 1.054571817e-34
NEUTRON_MASS = 1.67e-27


class Slit(str, Enum):
    UPPER = "upper"
    LOWER = "lower"

    @property
    def sign(self) -> int:
        return 1 if self is Slit.UPPER else -1


@dataclass(frozen=True)
class ExperimentConfig:
    """Physical constants and slit geometry, in SI units."""

    mass: float = NEUTRON_MASS
    sigma0: float = 7.8e-6
    beta: float = 7.8e-6
    d: float = 125e-6
    wavelength: float = 2e-9
    gamma: float = -1.0
    hbar: float = HBAR

    def __post_init__(self):
        for name in ("mass", "sigma0", "beta", "d", "wavelength", "hbar"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive number, got {value!r}")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma!r}")

    @property
    def tau0(self) -> float:
        return self.mass * self.sigma0**2 / self.hbar

    @property
    def v_z(self) -> float:
        return 2.0 * math.pi * self.hbar / (self.mass * self.wavelength)

    @property
    def beta_nd(self) -> float:
        return self.beta / self.sigma0

    @property
    def d_nd(self) -> float:
        return self.d / self.sigma0

    def with_gamma(self, gamma: float) -> ExperimentConfig:
        return ExperimentConfig(self.mass, self.sigma0, self.beta, self.d, self.wavelength, gamma, self.hbar)

    def with_d(self, d: float) -> ExperimentConfig:
        return ExperimentConfig(self.mass, self.sigma0, self.beta, d, self.wavelength, self.gamma, self.hbar)


@dataclass(frozen=True)
class PacketParams:
    """Evolved parameters of the upper-slit branch at the screen (natural units).

    The lower branch follows from d -> -d, i.e. D -> -D and Delta -> -Delta.
    """

    b: float
    inv_r: float
    B: float
    inv_R: float
    Delta: float
    D: float
    mu: float
    theta: float
    t: float
    tau: float

    @property
    def r(self) -> float:
        return _reciprocal(self.inv_r)

    @property
    def R(self) -> float:
        return _reciprocal(self.inv_R)

    @property
    def overlap(self) -> float:
        """<ψ₊|ψ₋> = exp(-D²/(4B²) - Δ²B²); real for equal slits."""
        return math.exp(-self.D**2 / (4.0 * self.B**2) - self.Delta**2 * self.B**2)


def _reciprocal(inv: float) -> float:
    # signed-infinity sentinel where the curvature radius diverges
    if inv == 0.0:
        return math.copysign(math.inf, inv)
    return 1.0 / inv


def derived_scales(config: ExperimentConfig) -> tuple[float, float]:
    """Return ``(tau0, v_z)`` in seconds and metres per second."""
    return config.tau0, config.v_z


def _radicand(t: float, gamma: float) -> float:
    return t * t + 1.0 + 2.0 * t * gamma + t * t * gamma * gamma


def free_curvature(config: ExperimentConfig, t: float) -> float:
    """Reciprocal free-propagation curvature 1/r at time t (τ₀ units)."""
    g = config.gamma
    return (t * (1.0 + g * g) + g) / _radicand(t, g)


def free_params(config: ExperimentConfig, t: float) -> tuple[float, float]:
    """Free-propagation width b and curvature radius r at time ``t``.

    ``b`` is in σ₀ and ``r`` in τ₀.  ``r`` is ``±inf`` where its denominator
    vanishes (γ < 0, t = -γ/(1+γ²)).
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    b = math.sqrt(_radicand(t, config.gamma))
    return b, _reciprocal(free_curvature(config, t))


def gouy_phase(config: ExperimentConfig, t: float, tau: float) -> float:
    """Gouy phase of one branch, continuous in t.

    The arc-tangent argument is the ratio Im/Re of a product of two factors
    whose phases each lie in [0, π) for t, τ >= 0, so the continuous phase
    is the two-argument arc-tangent taken in [0, 2π).
    """
    g = config.gamma
    beta2 = config.beta_nd**2
    num = t + tau * (1.0 + 1.0 / beta2 + t * g / beta2)
    den = (1.0 - t * tau / beta2) + g * (t + tau)
    return -0.5 * (math.atan2(num, den) % (2.0 * math.pi))


def slit_params(config: ExperimentConfig, t: float, tau: float) -> PacketParams:
    """All eight packet parameters after the source-slit time ``t`` and the
    slit-screen time ``tau`` (both in τ₀)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if tau <= 0:
        raise ValueError("tau must be > 0")
    g = config.gamma
    beta2 = config.beta_nd**2
    d = config.d_nd

    P = _radicand(t, g)
    b2 = P
    inv_r = free_curvature(config, t)
    a_r = 1.0 / beta2 + 1.0 / b2
    k = 1.0 / tau + inv_r
    common = a_r * a_r + k * k

    B2 = common / (a_r / tau**2)
    C = 1.0 + t / tau + g * g + g / tau + t * g * g / tau + 2.0 / beta2
    inv_R = (1.0 / beta2**2 + C / P) / (tau * common)
    Delta = tau * d / (2.0 * beta2 * B2)
    D = d * (1.0 + tau * inv_r) / (1.0 + beta2 / b2)
    theta = d * d * k / (8.0 * beta2**2 * common)

    return PacketParams(
        b=math.sqrt(b2),
        inv_r=inv_r,
        B=math.sqrt(B2),
        inv_R=inv_R,
        Delta=Delta,
        D=D,
        mu=gouy_phase(config, t, tau),
        theta=theta,
        t=t,
        tau=tau,
    )


def initial_moments(config: ExperimentConfig, si: bool = False) -> tuple[float, float, float]:
    """``(σ_xx, σ_pp, σ_xp)`` of the initial correlated Gaussian.

    Natural units by default; with ``si`` in m, kg·m/s and J·s.
    """
    g = config.gamma
    sxx, spp, sxp = 1.0 / math.sqrt(2.0), math.sqrt(1.0 + g * g) / math.sqrt(2.0), g / 2.0
    if si:
        return sxx * config.sigma0, spp * config.hbar / config.sigma0, sxp * config.hbar
    return sxx, spp, sxp


def _branch_exponent(params: PacketParams, slit: Slit | str, x):
    s = Slit(slit).sign
    B2 = params.B**2
    x = np.asarray(x, dtype=float)
    return (
        -((x - s * params.D / 2.0) ** 2) / (2.0 * B2)
        - 0.5 * math.log(params.B * math.sqrt(math.pi))
        + 1j * (0.5 * params.inv_R * x * x - s * params.Delta * x + params.theta + params.mu)
    )


def branch_amplitude(params: PacketParams, slit: Slit | str, x):
    """Normalised complex amplitude of one slit branch at screen position x."""
    return np.exp(_branch_exponent(params, slit, x))


def branch_derivative(params: PacketParams, slit: Slit | str, x):
    """Analytic d/dx of :func:`branch_amplitude`."""
    s = Slit(slit).sign
    x = np.asarray(x, dtype=float)
    slope = -(x - s * params.D / 2.0) / params.B**2 + 1j * (params.inv_R * x - s * params.Delta)
    return branch_amplitude(params, slit, x) * slope
