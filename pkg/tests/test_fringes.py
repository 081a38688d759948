import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from dsirr.fringes import (
    count_fringes,
    envelope,
    fringe_maxima,
    intensity,
    pattern,
    predictability,
    relative_intensity,
    visibility,
)
from dsirr.packet import ExperimentConfig, PacketParams, slit_params
from dsirr.screen import position_density, superposition

from .conftest import GRID


def _params(t=0.49, tau=18.0, gamma=-1.0):
    return slit_params(ExperimentConfig(gamma=gamma), t, tau)


def test_centre_values():
    p = _params()
    assert intensity(p, 0.0) / envelope(p, 0.0) == pytest.approx(2.0, rel=1e-14)
    assert relative_intensity(p, 0.0) == 2.0
    assert visibility(p, 0.0) == 1.0
    assert predictability(p, 0.0) == 0.0


def test_far_field_limits():
    p = _params(t=1.36)
    assert relative_intensity(p, 1e4) == pytest.approx(1.0, abs=1e-12)
    assert predictability(p, 1e4) == pytest.approx(1.0, abs=1e-12)
    # no overflow far out
    assert visibility(p, 1e8) == 0.0


@pytest.mark.parametrize("gamma,t,tau", GRID + [(-1.0, 0.49, 18.0)])
def test_pattern_invariants(gamma, t, tau):
    p = _params(t, tau, gamma)
    x = np.linspace(-12 * max(p.B, abs(p.D)), 12 * max(p.B, abs(p.D)), 1000)
    s = pattern(p, x)
    np.testing.assert_allclose(s.predictability**2 + s.visibility**2, 1.0, atol=1e-10)
    assert np.all(s.intensity >= 0)
    assert np.all(np.abs(s.intensity - s.envelope) <= s.envelope * (1 + 1e-12))
    assert np.all((s.relative >= 0) & (s.relative <= 2))
    np.testing.assert_array_equal(visibility(p, x), visibility(p, -x))
    xs = np.linspace(0, x[-1], 500)
    assert np.all(np.diff(visibility(p, xs)) <= 0)


@pytest.mark.parametrize("gamma,t,tau", GRID)
def test_intensity_is_unnormalised_density(gamma, t, tau):
    s = superposition(ExperimentConfig(gamma=gamma), t, tau)
    x = np.linspace(-s.extent / 3, s.extent / 3, 501)
    i = intensity(s.params, x)
    np.testing.assert_allclose(i, s.norm**2 * position_density(s, x), rtol=1e-8, atol=1e-10 * i.max())


def test_first_zero_of_relative_intensity():
    # well inside the packet κx ≪ 1; the zero is a tangency, so locate it
    # as the minimum of the relative intensity
    p = PacketParams(b=1, inv_r=0, B=1e4, inv_R=0, Delta=0.3, D=1.0, mu=0, theta=0, t=1, tau=1)
    x0 = math.pi / (2 * p.Delta)
    res = minimize_scalar(lambda x: relative_intensity(p, x), bounds=(0.5 * x0, 1.5 * x0), method="bounded",
                          options={"xatol": 1e-10})
    assert res.x == pytest.approx(x0, rel=1e-6)
    assert res.fun == pytest.approx(0.0, abs=1e-12)


def test_fringe_spacing():
    p = _params()
    peaks = fringe_maxima(p)
    assert peaks.size > 5
    np.testing.assert_allclose(np.diff(peaks), math.pi / p.Delta, rtol=0.01)


def test_no_fringes_without_separation():
    p = PacketParams(b=1, inv_r=0, B=5.0, inv_R=0.1, Delta=0.0, D=0.0, mu=0, theta=0, t=1, tau=1)
    assert count_fringes(p) == 0


def test_fringe_ordering_neutron():
    counts = [count_fringes(_params(t), 0.1) for t in (0.49, 0.83, 1.36)]
    assert counts[0] > counts[1] > counts[2]


@pytest.mark.parametrize("t", [0.3, 0.49, 0.83, 1.36])
def test_fringe_count_monotone_in_threshold(t):
    p = _params(t)
    counts = [count_fringes(p, th) for th in (0.05, 0.1, 0.5, 0.9, 0.999)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_threshold_validation():
    with pytest.raises(ValueError):
        count_fringes(_params(), 1.0)
    with pytest.raises(ValueError):
        count_fringes(_params(), 0.0)
