import math

import numpy as np
import pytest

from dsirr.packet import ExperimentConfig, branch_amplitude, slit_params
from dsirr.screen import momentum_amplitude, momentum_density, position_density, superposition

from .conftest import GRID


def _momentum_range(state, n=40001):
    centre, width, _ = state.momentum_terms.envelope()
    K = float(np.max(np.abs(centre) + 12 * width))
    return np.linspace(-K, K, n)


def test_norm_no_overlap(neutron):
    s = superposition(neutron, 1.36, 18.0)
    assert s.norm == pytest.approx(math.sqrt(2), rel=1e-12)


def test_norm_full_overlap():
    # d -> 0: both branches coincide
    s = superposition(ExperimentConfig(d=1e-15), 0.5, 5.0)
    assert s.norm == pytest.approx(2.0, rel=1e-12)
    p = s.params
    assert position_density(s, 0.0) == pytest.approx(4 * abs(branch_amplitude(p, "upper", 0.0)) ** 2 / s.norm**2)


@pytest.mark.parametrize("gamma,t,tau", GRID + [(-1.0, 0.49, 18.0)])
def test_position_normalisation(gamma, t, tau):
    s = superposition(ExperimentConfig(gamma=gamma), t, tau)
    L = s.extent
    x = np.linspace(-L, L, 200001)
    rho = position_density(s, x)
    assert np.trapezoid(rho, x) == pytest.approx(1.0, abs=1e-9)
    assert s.position_terms.total() == pytest.approx(1.0, abs=1e-12)
    assert np.all(rho >= 0)


@pytest.mark.parametrize("gamma,t,tau", GRID + [(-1.0, 0.49, 18.0)])
def test_parseval(gamma, t, tau):
    s = superposition(ExperimentConfig(gamma=gamma), t, tau)
    k = _momentum_range(s)
    rho = momentum_density(s, k)
    assert np.trapezoid(rho, k) == pytest.approx(1.0, abs=1e-9)
    assert s.momentum_terms.total() == pytest.approx(1.0, abs=1e-12)
    assert np.all(rho >= 0)


@pytest.mark.parametrize("gamma,t,tau", GRID)
def test_densities_even(gamma, t, tau):
    s = superposition(ExperimentConfig(gamma=gamma), t, tau)
    x = np.linspace(0, s.extent, 501)
    np.testing.assert_allclose(position_density(s, x), position_density(s, -x), rtol=1e-12, atol=1e-300)
    k = _momentum_range(s, 501)
    np.testing.assert_allclose(momentum_density(s, k), momentum_density(s, -k), rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("gamma,t,tau", GRID)
def test_gaussian_terms_match_pointwise(gamma, t, tau):
    s = superposition(ExperimentConfig(gamma=gamma), t, tau)
    x = np.linspace(-s.extent, s.extent, 777)
    np.testing.assert_allclose(s.position_terms(x), position_density(s, x), rtol=1e-10, atol=1e-14)
    k = _momentum_range(s, 777)
    np.testing.assert_allclose(s.momentum_terms(k), momentum_density(s, k), rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("gamma,t,tau", [(-1.0, 0.49, 18.0), (0.0, 1.0, 5.0), (1.0, 0.3, 18.0)])
def test_momentum_amplitude_vs_dft(gamma, t, tau):
    s = superposition(ExperimentConfig(gamma=gamma), t, tau)
    n = 2**14
    L = s.extent
    dx = 2 * L / n
    x = -L + dx * np.arange(n)
    k = 2 * np.pi * np.fft.fftfreq(n, dx)
    # ψ̃(k) = (2π)^(-1/2) Σ ψ(x) e^{-ikx} dx, with x starting at -L
    dft = np.fft.fft(s.amplitude(x)) * dx * np.exp(1j * k * L) / math.sqrt(2 * math.pi)
    exact = momentum_amplitude(s, k)
    assert np.linalg.norm(dft - exact) / np.linalg.norm(exact) < 1e-6


def test_single_gaussian_momentum_spread():
    # γ = 0, d -> 0, short times: the initial Gaussian with σ_k = 1/(√2 σ₀)
    s = superposition(ExperimentConfig(gamma=0.0, d=1e-15, beta=7.8e-6 * 1e4), 1e-9, 1e-9)
    k = np.linspace(-12, 12, 20001)
    rho = momentum_density(s, k)
    var = np.trapezoid(k * k * rho, k)
    assert math.sqrt(var) == pytest.approx(1 / math.sqrt(2), rel=1e-6)


def test_fringe_wavenumber(neutron):
    # zeros of the interference term N²ρ - |ψ₊|² - |ψ₋|² are π/(2Δ) apart
    s = superposition(neutron, 0.49, 18.0)
    p = s.params
    x = np.linspace(-100, 100, 200001)
    cross = s.norm**2 * position_density(s, x) - np.abs(branch_amplitude(p, "upper", x)) ** 2
    cross -= np.abs(branch_amplitude(p, "lower", x)) ** 2
    zeros = x[:-1][np.sign(cross[:-1]) != np.sign(cross[1:])]
    spacing = 2 * np.mean(np.diff(zeros))
    assert spacing == pytest.approx(math.pi / p.Delta, rel=0.01)


def test_extent_covers_mass(neutron):
    s = superposition(neutron, 1.0, 18.0)
    left, right = s.position_terms.tail_masses(s.extent)
    assert left + right < 1e-30
