"""Closed-form integrals of complex Gaussians.

Everything in the model reduces to sums of terms ``exp(-p x**2 + q x + r)``
with real ``p > 0`` and complex ``q``, ``r``.  This module evaluates such
sums, their full-line integrals and their integrals over arbitrary
segments.  Segment integrals are written through the Faddeeva function so
that only bounded quantities are ever subtracted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, erfcx, wofz

_SQRT_PI = np.sqrt(np.pi)


def complex_gaussian_integral(a, b, c=0.0):
    """Return ``∫ exp(-a y**2 + b y + c) dy`` over the real line.

    ``a`` may be complex but must have a positive real part; the principal
    square root is then the correct branch.
    """
    a = np.asarray(a, dtype=complex)
    if np.any(a.real <= 0):
        raise ValueError("complex Gaussian integral needs Re(a) > 0")
    return np.sqrt(np.pi / a) * np.exp(b * b / (4.0 * a) + c)


@dataclass(frozen=True)
class GaussianTerms:
    """A real density written as ``sum_j Re exp(-p_j x**2 + q_j x + r_j)``."""

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        p = np.atleast_1d(np.asarray(self.p, dtype=float))
        q = np.atleast_1d(np.asarray(self.q, dtype=complex))
        r = np.atleast_1d(np.asarray(self.r, dtype=complex))
        if not (p.shape == q.shape == r.shape):
            raise ValueError("p, q, r must have matching shapes")
        if np.any(p <= 0):
            raise ValueError("every term needs p > 0")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p, q, r in zip(self.p, self.q, self.r):
            out += np.exp(-p * x * x + q * x + r).real
        return out

    def total(self) -> float:
        vals = np.sqrt(np.pi / self.p) * np.exp(self.r + self.q**2 / (4.0 * self.p))
        return float(np.sum(vals.real))

    def envelope(self):
        """Per-term real Gaussian envelopes as ``(centre, 1/sqrt(p), peak)``."""
        centre = self.q.real / (2.0 * self.p)
        peak = np.exp(self.r.real + self.q.real**2 / (4.0 * self.p))
        return centre, 1.0 / np.sqrt(self.p), peak

    def tail_bound(self, x: float) -> float:
        """Upper bound on ``∫_{|y|>x}`` of the density, from the envelopes."""
        centre, width, peak = self.envelope()
        norm = peak * _SQRT_PI * width / 2.0
        right = norm * erfc((x - centre) / width)
        left = norm * erfc((x + centre) / width)
        return float(np.sum(right + left))

    def tail_masses(self, x: float) -> tuple[float, float]:
        """Exact ``(∫_{-∞}^{-x}, ∫_{x}^{∞})`` of the density."""
        left = right = 0.0
        for p, q, r in zip(self.p, self.q, self.r):
            lo, hi = _tails_one(p, q, r, np.array([-x, x]))
            left += float(np.real(lo[0]))
            right += float(np.real(hi[1]))
        return left, right

    def segment_masses(self, edges) -> np.ndarray:
        """Integrals of the density between consecutive ``edges`` (ascending)."""
        edges = np.asarray(edges, dtype=float)
        out = np.zeros(edges.size - 1)
        for p, q, r in zip(self.p, self.q, self.r):
            out += np.real(_segments_one(p, q, r, edges))
        return out


def _stable_tails(p: float, q: complex, r: complex, edges: np.ndarray):
    """Tail integral at each edge, taken on the side away from the centre.

    Returns ``(tail, right, full)``: ``tail`` is ``∫_e^∞`` where ``right``
    (edge at or beyond the centre) and ``∫_{-∞}^e`` elsewhere, and ``full``
    is the integral over the whole line.
    """
    sp = np.sqrt(p)
    x0 = q / (2.0 * p)
    right = edges >= x0.real
    sign = np.where(right, 1.0, -1.0)
    full = np.sqrt(np.pi / p) * np.exp(r + q * q / (4.0 * p))
    if q.imag == 0.0 and r.imag == 0.0:
        # purely real term: stay in float arithmetic
        q, r, x0 = q.real, r.real, x0.real
        value = np.exp(-p * edges * edges + q * edges + r)
        w = erfcx(sign * sp * (edges - x0))
        full = full.real
    else:
        value = np.exp(-p * edges * edges + q * edges + r)
        w = wofz(1j * sign * sp * (edges - x0))
    return _SQRT_PI / (2.0 * sp) * value * w, right, full


def _tails_one(p: float, q: complex, r: complex, edges: np.ndarray):
    """Lower and upper tail integrals at each edge."""
    stable, right, full = _stable_tails(p, q, r, edges)
    lower = np.where(right, full - stable, stable)
    upper = np.where(right, stable, full - stable)
    return lower, upper


def _segments_one(p: float, q: complex, r: complex, edges: np.ndarray) -> np.ndarray:
    # upper tails right of the centre, lower tails left of it, so that only
    # bounded quantities of like size are subtracted
    tails, right, full = _stable_tails(p, q, r, edges)
    lo, hi = tails[:-1], tails[1:]
    r_lo, r_hi = right[:-1], right[1:]
    return np.where(
        r_lo,
        lo - hi,
        np.where(r_hi, full - lo - hi, hi - lo),
    )
