"""Coarse-grained distributions, Shannon entropy and irrealism.

For a pure single-particle state the irrealism of position (momentum) is
the Shannon entropy of the position (wavenumber) density binned at the
apparatus resolution.  Bins are centred on the origin: bin m covers
[(m - 1/2)δ, (m + 1/2)δ].

Three ways of filling the bins are offered:

``"analytic"``
    exact bin integrals of the screen densities (sums of complex
    Gaussians), the default for :func:`irrealism_Q` / :func:`irrealism_P`;
``"quadrature"``
    vectorised adaptive Gauss-Kronrod per bin, usable for any density;
``"midpoint"``
    p_m ≈ ρ(mδ)δ, a fast approximation valid for bins much narrower than
    every structure of the density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._gaussian import GaussianTerms
from .errors import ExtentError, QuadratureError
from .screen import ScreenState, momentum_density, position_density

TAIL_TARGET = 1e-12
METHODS = ("analytic", "quadrature", "midpoint")

# Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_GWEIGHTS = np.zeros(15)
_GWEIGHTS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class Resolution:
    """Apparatus resolutions and their references, SI units.

    dq, dq_ref in metres; dk, dk_ref in 1/m.
    """

    dq: float = 2.5e-6
    dk: float = 1400.0
    dq_ref: float = 1.7e-4
    dk_ref: float = 1.58e5

    def __post_init__(self):
        for name in ("dq", "dk", "dq_ref", "dk_ref"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class BinnedDistribution:
    """Probabilities of bins m = -N..N of width ``bin_width``.

    ``tail_mass`` is the probability outside the outermost bins; the
    probabilities are not renormalised to absorb it.
    """

    bin_width: float
    probs: np.ndarray
    tail_mass: float

    @property
    def n(self) -> int:
        return (self.probs.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)


def _edges(n: int, width: float) -> np.ndarray:
    return (np.arange(-n, n + 2) - 0.5) * width


def _trim(probs: np.ndarray, outer_tail: float, target: float):
    """Smallest symmetric support whose discarded mass stays below target."""
    n = (probs.size - 1) // 2
    # mass dropped when keeping |m| <= k, for k = n, n-1, ..., 0
    outer = probs[:n][::-1] + probs[n + 1 :]
    dropped = outer_tail + np.concatenate([[0.0], np.cumsum(outer[::-1])])
    # dropped[j] is the tail when keeping |m| <= n - j
    ok = np.nonzero(dropped < target)[0]
    j = int(ok[-1])
    k = n - j
    return probs[n - k : n + k + 1].copy(), float(dropped[j])


def _gk_bins(density, lo: np.ndarray, hi: np.ndarray, abs_tol: float, max_depth: int = 30):
    """Adaptive Gauss-Kronrod on many intervals at once; returns per-interval integrals."""
    owner = np.arange(lo.size)
    result = np.zeros(lo.size)
    share = np.ones(lo.size)
    for _ in range(max_depth):
        half = 0.5 * (hi - lo)
        mid = 0.5 * (hi + lo)
        f = density((mid[:, None] + half[:, None] * _NODES[None, :]).ravel()).reshape(lo.size, 15)
        kron = half * (f @ _KWEIGHTS)
        gauss = half * (f @ _GWEIGHTS)
        done = np.abs(kron - gauss) <= abs_tol * share
        np.add.at(result, owner[done], kron[done])
        if done.all():
            return result
        keep = ~done
        lo, hi, owner, share = lo[keep], hi[keep], owner[keep], share[keep]
        mid = mid[keep]
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        owner = np.concatenate([owner, owner])
        share = np.concatenate([share, share]) / 2.0
    raise QuadratureError(f"per-bin quadrature did not converge on {lo.size} sub-intervals")


def bin_distribution(
    density,
    bin_width: float,
    extent_hint: float,
    *,
    method: str = "quadrature",
    tail_target: float = TAIL_TARGET,
    abs_tol: float = 1e-14,
    even: bool = False,
) -> BinnedDistribution:
    """Bin a normalised density centred on the origin.

    ``density`` is a vectorised callable, or a :class:`GaussianTerms` for the
    ``"analytic"`` method.  Bins are laid out to cover ``±extent_hint``;
    the outermost ones are then dropped for as long as the discarded mass
    stays below ``tail_target``.  Raises :class:`ExtentError` if the mass
    beyond ``±extent_hint`` already exceeds the target.

    With ``even`` the density is taken to satisfy ρ(-x) = ρ(x); only bins
    m >= 0 are integrated and the rest are mirrored, which halves the cost.
    """
    if bin_width <= 0:
        raise ValueError("bin_width must be > 0")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    n = max(0, math.ceil(extent_hint / bin_width - 0.5))
    edges = _edges(n, bin_width)
    x_out = edges[-1]

    # integrate bins m >= 0 only and mirror them when the density is even
    first = n if even else 0
    lo_edges = edges[first:]

    if method == "analytic":
        if not isinstance(density, GaussianTerms):
            raise TypeError("analytic binning needs a GaussianTerms density")
        probs = density.segment_masses(lo_edges)
        tail = float(sum(density.tail_masses(x_out)))
    else:
        if method == "quadrature":
            probs = _gk_bins(density, lo_edges[:-1], lo_edges[1:], abs_tol)
        else:
            probs = density(lo_edges[:-1] + 0.5 * bin_width) * bin_width
        tail = 0.0
        for a, b in ((x_out, np.inf), (-np.inf, -x_out)):
            val, err = quad(density, a, b, epsabs=1e-16, limit=200)
            tail += val
    if even:
        probs = np.concatenate([probs[:0:-1], probs])
    # cancellation in the exact bin integrals can leave -1e-17-sized values
    probs = np.clip(probs, 0.0, None)
    tail = max(tail, 0.0)
    if tail >= tail_target:
        raise ExtentError(f"extent ±{extent_hint:g} leaves tail mass {tail:.3e} >= {tail_target:g}", tail)
    probs, tail = _trim(probs, tail, tail_target)
    return BinnedDistribution(bin_width=bin_width, probs=probs, tail_mass=tail)


def shannon_entropy(dist: BinnedDistribution) -> float:
    """-Σ p ln p in nats, with 0 ln 0 = 0.

    A distribution with a single occupied bin has entropy exactly 0.
    """
    p = dist.probs[dist.probs > 0]
    if p.size <= 1:
        return 0.0
    return float(-np.sum(p * np.log(p)))


def _symmetric_extent(terms: GaussianTerms, target: float) -> float:
    centre, width, _ = terms.envelope()
    x = float(np.max(np.abs(centre) + 6.0 * width))
    while terms.tail_bound(x) >= target / 10.0:
        x *= 1.25
    return x


def _screen_distribution(terms: GaussianTerms, pointwise, width: float, method: str) -> BinnedDistribution:
    extent = _symmetric_extent(terms, TAIL_TARGET)
    density = terms if method == "analytic" else pointwise
    return bin_distribution(density, width, extent, method=method, even=True)


def position_distribution(state: ScreenState, dq: float, method: str = "analytic") -> BinnedDistribution:
    """Position probabilities for bin width ``dq`` in metres."""
    return _screen_distribution(
        state.position_terms, lambda x: position_density(state, x), dq / state.config.sigma0, method
    )


def momentum_distribution(state: ScreenState, dk: float, method: str = "analytic") -> BinnedDistribution:
    """Wavenumber probabilities for bin width ``dk`` in 1/m."""
    return _screen_distribution(
        state.momentum_terms, lambda k: momentum_density(state, k), dk * state.config.sigma0, method
    )


def irrealism_Q(state: ScreenState, res: Resolution, method: str = "analytic") -> float:
    return shannon_entropy(position_distribution(state, res.dq, method))


def irrealism_P(state: ScreenState, res: Resolution, method: str = "analytic") -> float:
    return shannon_entropy(momentum_distribution(state, res.dk, method))


def rescaled_irrealism(raw: float, res: Resolution, axis: str) -> float:
    """Shift raw irrealism by ln(reference/resolution), axis ``"Q"`` or ``"P"``."""
    if axis == "Q":
        width, ref = res.dq, res.dq_ref
    elif axis == "P":
        width, ref = res.dk, res.dk_ref
    else:
        raise ValueError("axis must be 'Q' or 'P'")
    if width > ref:
        raise ValueError(f"resolution {width:g} is coarser than its reference {ref:g}")
    return raw - math.log(ref / width)
