"""Normalised two-branch superposition at the detection screen.

Position and wavenumber densities are exposed both pointwise and as
:class:`~dsirr._gaussian.GaussianTerms`, whose exact segment integrals feed
the binned distributions in :mod:`dsirr.irrealism`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._gaussian import GaussianTerms
from .packet import ExperimentConfig, PacketParams, Slit, branch_amplitude, branch_derivative, slit_params


@dataclass(frozen=True)
class ScreenState:
    params: PacketParams
    norm: float
    config: ExperimentConfig

    def amplitude(self, x):
        return (branch_amplitude(self.params, Slit.UPPER, x) + branch_amplitude(self.params, Slit.LOWER, x)) / self.norm

    def derivative(self, x):
        return (branch_derivative(self.params, Slit.UPPER, x) + branch_derivative(self.params, Slit.LOWER, x)) / self.norm

    @property
    def extent(self) -> float:
        """Half-width of the region holding all but a negligible tail."""
        return 12.0 * max(self.params.B, abs(self.params.D))

    @cached_property
    def _branch_gaussian(self):
        # upper branch as exp(-a x² + c x + g0)
        p = self.params
        a = 1.0 / (2.0 * p.B**2) - 0.5j * p.inv_R
        c = p.D / (2.0 * p.B**2) - 1j * p.Delta
        g0 = -(p.D**2) / (8.0 * p.B**2) - 0.5 * math.log(p.B * math.sqrt(math.pi)) + 1j * (p.theta + p.mu)
        return a, c, g0

    @cached_property
    def position_terms(self) -> GaussianTerms:
        p = self.params
        B2 = p.B**2
        log_n2 = math.log(self.norm**2)
        base = -math.log(p.B * math.sqrt(math.pi)) - log_n2
        return GaussianTerms(
            p=[1.0 / B2, 1.0 / B2, 1.0 / B2],
            q=[p.D / B2, -p.D / B2, 2j * p.Delta],
            r=[
                base - p.D**2 / (4.0 * B2),
                base - p.D**2 / (4.0 * B2),
                base + math.log(2.0) - p.D**2 / (4.0 * B2),
            ],
        )

    @cached_property
    def momentum_terms(self) -> GaussianTerms:
        a, c, g0 = self._branch_gaussian
        alpha = 1.0 / (4.0 * a)
        # log of each transformed branch: L ∓ 2iαc k - αk², with L shared
        L = g0 + 0.5 * np.log(np.pi / a) - 0.5 * math.log(2.0 * math.pi) + alpha * c * c
        log_n2 = math.log(self.norm**2)
        p = 2.0 * alpha.real
        same = 2.0 * L.real - log_n2
        return GaussianTerms(
            p=[p, p, p],
            q=[4.0 * (alpha * c).imag, -4.0 * (alpha * c).imag, 4j * (alpha * c).real],
            r=[same, same, same + math.log(2.0)],
        )


def superposition(config: ExperimentConfig, t: float, tau: float) -> ScreenState:
    params = slit_params(config, t, tau)
    return ScreenState(params=params, norm=math.sqrt(2.0 + 2.0 * params.overlap), config=config)


def position_density(state: ScreenState, x):
    return np.abs(state.amplitude(x)) ** 2


def momentum_amplitude(state: ScreenState, k):
    """ψ̃(k) = (2π)^(-1/2) ∫ψ(x) e^(-ikx) dx, evaluated in closed form."""
    a, c, g0 = state._branch_gaussian
    k = np.asarray(k, dtype=float)
    pref = np.sqrt(np.pi / a) / math.sqrt(2.0 * math.pi)
    upper = np.exp((c - 1j * k) ** 2 / (4.0 * a) + g0)
    lower = np.exp((-c - 1j * k) ** 2 / (4.0 * a) + g0)
    return pref * (upper + lower) / state.norm


def momentum_density(state: ScreenState, k):
    return np.abs(momentum_amplitude(state, k)) ** 2
