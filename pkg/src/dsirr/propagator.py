"""Independent evaluation of a slit branch from the propagator integral.

The branch at the screen is

    ψ±(x) = ∫dx_j ∫dx_i G₂(x, x_j; τ) F(x_j ∓ d/2) G₁(x_j, x_i; t) ψ₀(x_i)

with free-particle kernels G₁, G₂, a real Gaussian slit transmission F and
the correlated initial Gaussian ψ₀.  The x_i integral is a complex Gaussian
integral and is done in closed form; the x_j integral is done by adaptive
quadrature.  Nothing here uses the packet parameters of
:mod:`dsirr.packet`, which is what makes it usable as an oracle for them.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad, quad_vec

from ._gaussian import complex_gaussian_integral
from .errors import QuadratureError
from .packet import ExperimentConfig, Slit


def _kernel_prefactor(time: float) -> complex:
    return np.sqrt(1.0 / (2j * math.pi * time))


def initial_state(config: ExperimentConfig, x):
    x = np.asarray(x, dtype=float)
    return math.pi ** -0.25 * np.exp(-(1.0 - 1j * config.gamma) * x * x / 2.0)


def free_kernel(time: float, x_to, x_from):
    """Free propagator G(x_to, time; x_from, 0) in natural units."""
    return _kernel_prefactor(time) * np.exp(1j * (x_to - x_from) ** 2 / (2.0 * time))


def slit_transmission(config: ExperimentConfig, slit: Slit | str, x):
    beta = config.beta_nd
    centre = Slit(slit).sign * config.d_nd / 2.0
    x = np.asarray(x, dtype=float)
    return (beta * math.sqrt(math.pi)) ** -0.5 * np.exp(-((x - centre) ** 2) / (2.0 * beta * beta))


def evolved_initial(config: ExperimentConfig, t: float, xj):
    """∫dx_i G₁(x_j, x_i; t) ψ₀(x_i), done as a complex Gaussian integral."""
    xj = np.asarray(xj, dtype=float)
    a = (1.0 - 1j * config.gamma) / 2.0 - 1j / (2.0 * t)
    b = -1j * xj / t
    c = 1j * xj * xj / (2.0 * t)
    return math.pi ** -0.25 * _kernel_prefactor(t) * complex_gaussian_integral(a, b, c)


def evolved_initial_numeric(config: ExperimentConfig, t: float, xj: float, epsabs: float = 1e-14):
    """Same integral as :func:`evolved_initial` by direct quadrature over x_i."""
    half = 10.0 * math.sqrt(1.0 + t * t * (1.0 + config.gamma**2))

    def part(fn):
        # quad flags round-off at this tolerance; the returned estimate is kept
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            return quad(
                lambda xi: fn(free_kernel(t, xj, xi) * initial_state(config, xi)),
                -half,
                half,
                epsabs=epsabs,
                epsrel=1e-13,
                limit=5000,
            )

    re, e1 = part(np.real)
    im, e2 = part(np.imag)
    return complex(re, im), math.hypot(e1, e2)


def _slit_window(config: ExperimentConfig, t: float, slit: Slit | str):
    # |F ψ₁| is a real Gaussian in x_j; integrate its centre ± 10 amplitude widths
    beta2 = config.beta_nd**2
    b2 = t * t + 1.0 + 2.0 * t * config.gamma + t * t * config.gamma**2
    a_r = 1.0 / beta2 + 1.0 / b2
    centre = Slit(slit).sign * config.d_nd / (2.0 * beta2 * a_r)
    half = 10.0 / math.sqrt(a_r)
    return centre - half, centre + half


def oracle_branch_amplitude(
    config: ExperimentConfig,
    t: float,
    tau: float,
    slit: Slit | str,
    x,
    *,
    epsrel: float = 1e-10,
    normalize: bool = True,
):
    """Branch amplitude at screen positions ``x`` from the propagator integral.

    With ``normalize`` (default) the result is divided by the square root of
    the probability transmitted by the slit, so it is comparable with the
    unit-norm closed form.  Raises :class:`QuadratureError` if the requested
    relative accuracy is not reached.
    """
    if t <= 0 or tau <= 0:
        raise ValueError("oracle needs t > 0 and tau > 0")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = _slit_window(config, t, slit)

    def integrand(xj):
        amp = free_kernel(tau, x, xj) * slit_transmission(config, slit, xj) * evolved_initial(config, t, xj)
        return np.concatenate([amp.real, amp.imag])

    val, err = quad_vec(integrand, lo, hi, epsabs=0.0, epsrel=epsrel, norm="2", limit=2000)
    scale = np.linalg.norm(val)
    if not np.isfinite(err) or err > 10.0 * epsrel * scale:
        raise QuadratureError(f"propagator integral did not converge (error estimate {err:.3e})", err)
    amp = val[: x.size] + 1j * val[x.size :]

    if normalize:
        amp = amp / math.sqrt(transmitted_probability(config, t, slit))
    return amp


def transmitted_probability(config: ExperimentConfig, t: float, slit: Slit | str) -> float:
    """∫|F ψ₁|² dx_j, the norm a branch carries past its slit."""
    lo, hi = _slit_window(config, t, slit)
    val, err = quad(
        lambda xj: abs(slit_transmission(config, slit, xj) * evolved_initial(config, t, xj)) ** 2,
        lo,
        hi,
        epsabs=0.0,
        epsrel=1e-13,
        limit=500,
    )
    if err > 1e-10 * abs(val):
        raise QuadratureError(f"transmission integral did not converge (error estimate {err:.3e})", err)
    return val
