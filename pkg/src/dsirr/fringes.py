"""Interference pattern on the screen: intensity, visibility, predictability.

All functions take :class:`~dsirr.packet.PacketParams` and positions in
natural units.  The intensity is the unnormalised ``|ψ₊ + ψ₋|²``, so
``intensity = N² · position_density``.  The ratio ``κ = D/B²`` sets the
distance over which which-slit information builds up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .packet import PacketParams

SCAN_POINTS = 10_000


@dataclass(frozen=True)
class PatternSample:
    x: np.ndarray
    intensity: np.ndarray
    envelope: np.ndarray
    relative: np.ndarray
    visibility: np.ndarray
    predictability: np.ndarray


def _kappa(params: PacketParams) -> float:
    return params.D / params.B**2


def envelope(params: PacketParams, x):
    """Sum of the two single-slit intensities."""
    x = np.asarray(x, dtype=float)
    B, D = params.B, params.D
    pref = 1.0 / (B * math.sqrt(math.pi))
    return pref * (np.exp(-((x - D / 2) ** 2) / B**2) + np.exp(-((x + D / 2) ** 2) / B**2))


def intensity(params: PacketParams, x):
    x = np.asarray(x, dtype=float)
    B, D = params.B, params.D
    # F·cos/cosh written without the cosh, which overflows far out
    cross = 2.0 / (B * math.sqrt(math.pi)) * np.exp(-(x * x + D * D / 4) / B**2) * np.cos(2 * params.Delta * x)
    return envelope(params, x) + cross


def visibility(params: PacketParams, x):
    """1/cosh(κx), evaluated as 2e^{-|κx|}/(1 + e^{-2|κx|})."""
    u = np.exp(-np.abs(_kappa(params) * np.asarray(x, dtype=float)))
    return 2.0 * u / (1.0 + u * u)


def predictability(params: PacketParams, x):
    return np.abs(np.tanh(_kappa(params) * np.asarray(x, dtype=float)))


def relative_intensity(params: PacketParams, x):
    x = np.asarray(x, dtype=float)
    return 1.0 + np.cos(2 * params.Delta * x) * visibility(params, x)


def pattern(params: PacketParams, x) -> PatternSample:
    x = np.asarray(x, dtype=float)
    return PatternSample(
        x=x,
        intensity=intensity(params, x),
        envelope=envelope(params, x),
        relative=relative_intensity(params, x),
        visibility=visibility(params, x),
        predictability=predictability(params, x),
    )


def _slope_sign(params: PacketParams, x):
    # d/dx of the relative intensity times cosh²(κx), which has the same sign
    k, w = _kappa(params), 2 * params.Delta
    return -w * np.sin(w * x) - k * np.cos(w * x) * np.tanh(k * x)


def fringe_maxima(params: PacketParams) -> np.ndarray:
    """Positions x > 0 of the local maxima of the relative intensity.

    Sign changes of the slope are located on a grid of ``SCAN_POINTS``
    points over (0, 12B] and refined by Brent's method.  The central
    maximum at x = 0 is not included.
    """
    x = np.linspace(0.0, 12.0 * params.B, SCAN_POINTS + 1)[1:]
    g = _slope_sign(params, x)
    falls = np.nonzero((g[:-1] > 0) & (g[1:] <= 0))[0]
    roots = []
    for i in falls:
        if g[i + 1] == 0.0:
            roots.append(x[i + 1])
        else:
            roots.append(brentq(lambda y: _slope_sign(params, y), x[i], x[i + 1], xtol=1e-12))
    return np.array(roots)


def count_fringes(params: PacketParams, threshold: float = 0.1) -> int:
    """Number of side maxima whose visibility exceeds ``threshold``."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    peaks = fringe_maxima(params)
    if peaks.size == 0:
        return 0
    return int(np.count_nonzero(visibility(params, peaks) > threshold))
