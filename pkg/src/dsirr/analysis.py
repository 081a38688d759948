"""Extremum search along the time axis, curve sweeps and the visibility fit.

Times are in units of τ₀ throughout.  A *curve* is any callable t -> value;
:func:`quantity_curve` builds the ones used by the CLI.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import spearmanr

from .errors import DegenerateFitError, NonUnimodalError
from .fringes import visibility
from .irrealism import Resolution, irrealism_P, irrealism_Q, rescaled_irrealism
from .moments import covariance_closed_form
from .packet import ExperimentConfig, slit_params
from .screen import superposition

QUANTITIES = ("sxx", "spp", "sxp", "dC", "irrQ", "irrP", "irrQ_rescaled", "irrP_rescaled")
KINDS = ("min", "max")
PRESCAN_POINTS = 64


@dataclass(frozen=True)
class ExtremumReport:
    quantity: str
    kind: str
    t_star: float
    value: float
    bracket: tuple[float, float]
    tol: float


@dataclass(frozen=True)
class FitResult:
    c1: float
    c2: float
    residual_rms: float
    samples: list[tuple[float, float, float]] = field(repr=False)
    window: tuple[float, float]


@dataclass(frozen=True)
class MonotonicityReport:
    verdict: str
    rank_correlation: float
    offending: tuple[int, ...]


def quantity_curve(
    quantity: str,
    config: ExperimentConfig,
    tau: float,
    resolution: Resolution | None = None,
    variant: str = "derived",
) -> Callable[[float], float]:
    """Return t -> quantity(t) for the screen state at distance ``tau``."""
    if quantity not in QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}; choose from {QUANTITIES}")
    res = resolution or Resolution()

    if quantity in ("sxx", "spp", "sxp", "dC"):
        attr = {"sxx": "sxx2", "spp": "spp2", "sxp": "sxp", "dC": "dC"}[quantity]

        def curve(t):
            return float(getattr(covariance_closed_form(slit_params(config, t, tau), variant), attr))

        return curve

    axis = quantity[3]
    raw = irrealism_Q if axis == "Q" else irrealism_P
    rescale = quantity.endswith("_rescaled")

    def curve(t):
        value = raw(superposition(config, t, tau), res)
        return rescaled_irrealism(value, res, axis) if rescale else value

    return curve


def _thread_count(n_tasks: int) -> int:
    cap = os.environ.get("DSIRR_THREADS")
    workers = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(workers, n_tasks))


def evaluate_grid(curve: Callable[[float], float], t_grid: Sequence[float]) -> list[float]:
    """Evaluate ``curve`` on every point, possibly in parallel, in grid order."""
    t_grid = [float(t) for t in t_grid]
    workers = _thread_count(len(t_grid))
    if workers == 1:
        return [curve(t) for t in t_grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(curve, t_grid))


def sweep(
    quantity: str,
    config: ExperimentConfig,
    tau: float,
    t_grid: Sequence[float],
    resolution: Resolution | None = None,
) -> list[tuple[float, float]]:
    """Rows ``(t, value)`` in grid order; ``t_grid`` must be ascending."""
    t_grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
        raise ValueError("t_grid must be strictly ascending")
    values = evaluate_grid(quantity_curve(quantity, config, tau, resolution), t_grid)
    return list(zip(t_grid, values))


def find_extremum(
    curve: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-4,
    kind: str = "min",
    *,
    quantity: str = "",
    prescan: int = PRESCAN_POINTS,
) -> ExtremumReport:
    """Locate the single interior minimum or maximum of ``curve`` in ``bracket``.

    A uniform pre-scan of ``prescan`` points checks that the requested
    extremum is interior and unique.  The grid neighbourhood of the best
    scan point is then refined with bounded Brent minimisation.

    Raises
    ------
    NonUnimodalError
        if the scan finds two or more interior extrema of the requested kind,
        or the best value sits on a bracket endpoint.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    if prescan < 3:
        raise ValueError("prescan needs at least 3 points")
    sign = 1.0 if kind == "min" else -1.0

    ts = np.linspace(lo, hi, prescan)
    ys = sign * np.array(evaluate_grid(curve, ts))
    interior = [i for i in range(1, prescan - 1) if ys[i] < ys[i - 1] and ys[i] <= ys[i + 1]]
    best = int(np.argmin(ys))
    if best in (0, prescan - 1):
        raise NonUnimodalError(f"{kind} of {quantity or 'curve'} lies on the bracket endpoint t={ts[best]:g}")
    if len(interior) > 1:
        where = ", ".join(f"{ts[i]:.4g}" for i in interior)
        raise NonUnimodalError(f"{len(interior)} interior {kind}ima of {quantity or 'curve'} near t = {where}")

    res = minimize_scalar(
        lambda t: sign * curve(t),
        bounds=(ts[best - 1], ts[best + 1]),
        method="bounded",
        options={"xatol": tol / 3.0},
    )
    t_star = float(res.x)
    return ExtremumReport(
        quantity=quantity,
        kind=kind,
        t_star=t_star,
        value=float(curve(t_star)),
        bracket=(lo, hi),
        tol=tol,
    )


def linear_fit(v: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares ``y ≈ c1 + c2 v``; returns ``(c1, c2, rms residual)``.

    Solved in centred form, which is the normal-equation solution without
    forming the ill-conditioned 2x2 system.
    """
    v = np.asarray(v, dtype=float)
    y = np.asarray(y, dtype=float)
    if v.size != y.size or v.size < 2:
        raise ValueError("need at least two (v, y) pairs of equal length")
    vbar, ybar = v.mean(), y.mean()
    dv = v - vbar
    svv = float(dv @ dv)
    if svv <= (1e-14 * max(1.0, abs(vbar))) ** 2 * v.size:
        raise DegenerateFitError("all visibilities are equal; slope undetermined")
    c2 = float(dv @ (y - ybar)) / svv
    c1 = float(ybar - c2 * vbar)
    resid = y - (c1 + c2 * v)
    return c1, c2, float(math.sqrt(np.mean(resid**2)))


def visibility_fit(
    config: ExperimentConfig,
    tau: float,
    window: tuple[float, float] = (0.3, 0.7),
    n_samples: int = 21,
    resolution: Resolution | None = None,
    rescaled: bool = True,
) -> FitResult:
    """Fit irrealism against fringe visibility at x = D(t) across ``window``.

    The irrealism is the position irrealism, rescaled unless ``rescaled``
    is false.  Samples are uniform in t, endpoints included.
    """
    lo, hi = map(float, window)
    if not 0.0 < lo < hi:
        raise ValueError("window must satisfy 0 < t_lo < t_hi")
    if n_samples < 5:
        raise ValueError("n_samples must be at least 5")
    ts = np.linspace(lo, hi, n_samples)
    quantity = "irrQ_rescaled" if rescaled else "irrQ"
    irr = evaluate_grid(quantity_curve(quantity, config, tau, resolution), ts)
    vis = []
    for t in ts:
        params = slit_params(config, float(t), tau)
        vis.append(float(visibility(params, params.D)))
    c1, c2, rms = linear_fit(vis, irr)
    samples = [(float(t), v, y) for t, v, y in zip(ts, vis, irr)]
    return FitResult(c1=c1, c2=c2, residual_rms=rms, samples=samples, window=(lo, hi))


def monotonicity_check(samples: Sequence[tuple[float, float]]) -> MonotonicityReport:
    """Classify irrealism as a function of visibility from ``(v, y)`` pairs.

    The verdict is strict: every pair with distinct visibilities must be
    ordered the same way.  Equal visibilities with different irrealism make
    the relation non-monotone, and those indices are reported.  The rank
    correlation is Spearman's; it is 0.0 when undefined (constant input).
    """
    pts = np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
        raise ValueError("need at least three (visibility, irrealism) pairs")
    v, y = pts[:, 0], pts[:, 1]
    dv = np.sign(v[None, :] - v[:, None])
    dy = np.sign(y[None, :] - y[:, None])
    upper = np.triu(np.ones_like(dv, dtype=bool), 1)

    if np.ptp(v) == 0.0 or np.ptp(y) == 0.0:
        rho = 0.0
    else:
        rho = float(spearmanr(v, y).statistic)

    ties = upper & (dv == 0) & (dy != 0)
    if ties.any():
        idx = sorted(set(np.nonzero(ties)[0]) | set(np.nonzero(ties)[1]))
        return MonotonicityReport("non_monotone", rho, tuple(int(i) for i in idx))

    ordered = upper & (dv != 0)
    if ordered.any():
        if np.all(dy[ordered] == -dv[ordered]):
            return MonotonicityReport("monotone_decreasing", rho, ())
        if np.all(dy[ordered] == dv[ordered]):
            return MonotonicityReport("monotone_increasing", rho, ())
    expected = -1.0 if rho <= 0 else 1.0
    bad = ordered & (dy != expected * dv)
    idx = sorted(set(np.nonzero(bad)[0]) | set(np.nonzero(bad)[1]))
    return MonotonicityReport("non_monotone", rho, tuple(int(i) for i in idx))
