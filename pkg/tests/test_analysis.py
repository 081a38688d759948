import math

import numpy as np
import pytest

from dsirr.analysis import (
    find_extremum,
    linear_fit,
    monotonicity_check,
    quantity_curve,
    sweep,
    visibility_fit,
)
from dsirr.errors import DegenerateFitError, NonUnimodalError
from dsirr.irrealism import Resolution
from dsirr.packet import ExperimentConfig


def test_quadratic_minimum():
    rep = find_extremum(lambda t: (t - 0.3) ** 2, (0.0, 1.0))
    assert rep.t_star == pytest.approx(0.3, abs=1e-4)
    assert rep.kind == "min" and rep.bracket == (0.0, 1.0)
    assert rep.value == (rep.t_star - 0.3) ** 2


def test_maximum():
    rep = find_extremum(lambda t: math.sin(t), (0.0, 3.0), kind="max")
    assert rep.t_star == pytest.approx(math.pi / 2, abs=1e-4)


def test_non_unimodal_rejected():
    with pytest.raises(NonUnimodalError, match="3 interior minima"):
        find_extremum(lambda t: math.cos(4 * math.pi * t), (0.1, 1.4))


def test_endpoint_extremum_rejected():
    with pytest.raises(NonUnimodalError, match="endpoint"):
        find_extremum(lambda t: t, (0.0, 1.0))


def test_argument_validation():
    with pytest.raises(ValueError):
        find_extremum(lambda t: t, (1.0, 0.0))
    with pytest.raises(ValueError):
        find_extremum(lambda t: t, (0.0, 1.0), kind="saddle")


def test_extremum_stable_under_bracket_perturbation(neutron):
    curve = quantity_curve("sxx", neutron, 18.0)
    ref = find_extremum(curve, (0.2, 0.8)).t_star
    for lo, hi in ((0.18, 0.88), (0.22, 0.72), (0.2, 0.8)):
        assert find_extremum(curve, (lo, hi)).t_star == pytest.approx(ref, abs=1e-4)


def test_rescaled_and_raw_share_extremum(neutron):
    raw = find_extremum(quantity_curve("irrQ", neutron, 18.0), (0.3, 0.7)).t_star
    res = find_extremum(quantity_curve("irrQ_rescaled", neutron, 18.0), (0.3, 0.7)).t_star
    assert raw == pytest.approx(res, abs=1e-4)


def test_common_minimum_across_quantities(neutron):
    ts = [find_extremum(quantity_curve(q, neutron, 18.0), (0.3, 0.7), quantity=q).t_star
          for q in ("sxx", "spp", "sxp", "dC", "irrQ", "irrP")]
    assert max(ts) - min(ts) < 2e-2


def test_unknown_quantity(neutron):
    with pytest.raises(ValueError):
        quantity_curve("entropy", neutron, 18.0)


def test_sweep_rows(neutron):
    assert sweep("sxx", neutron, 18.0, [0.5]) == [(0.5, quantity_curve("sxx", neutron, 18.0)(0.5))]
    with pytest.raises(ValueError):
        sweep("sxx", neutron, 18.0, [0.5, 0.4])


def test_sweep_threads_do_not_change_result(neutron, monkeypatch):
    grid = list(np.linspace(0.1, 1.5, 15))
    monkeypatch.setenv("DSIRR_THREADS", "1")
    serial = sweep("irrQ", neutron, 18.0, grid)
    monkeypatch.setenv("DSIRR_THREADS", "4")
    assert sweep("irrQ", neutron, 18.0, grid) == serial


def test_sweep_dc_minimum_without_maximum(neutron):
    rows = sweep("dC", neutron, 18.0, list(np.linspace(0.01, 3.0, 300)))
    values = np.array([v for _, v in rows])
    inner = values[1:-1]
    minima = np.nonzero((inner < values[:-2]) & (inner < values[2:]))[0]
    maxima = np.nonzero((inner > values[:-2]) & (inner > values[2:]))[0]
    assert len(minima) == 1 and len(maxima) == 0
    assert rows[minima[0] + 1][0] == pytest.approx(0.49, abs=0.02)


def test_sweep_matches_refined_grid(neutron):
    coarse = dict(sweep("spp", neutron, 18.0, [0.5, 1.0, 1.5]))
    fine = dict(sweep("spp", neutron, 18.0, list(np.linspace(0.5, 1.5, 11))))
    for t, v in coarse.items():
        assert fine[min(fine, key=lambda s: abs(s - t))] == pytest.approx(v, rel=1e-14)


def test_linear_fit_exact_line():
    v = np.linspace(0.0, 1.0, 9)
    c1, c2, rms = linear_fit(v, 2.05 - 0.91 * v)
    assert c1 == pytest.approx(2.05, abs=1e-12)
    assert c2 == pytest.approx(-0.91, abs=1e-12)
    assert rms < 1e-12


def test_linear_fit_properties():
    rng = np.random.default_rng(7)
    v = rng.uniform(0, 1, 21)
    y = 1.5 - 0.7 * v + rng.normal(0, 0.05, v.size)
    c1, c2, rms = linear_fit(v, y)
    perm = rng.permutation(v.size)
    assert linear_fit(v[perm], y[perm]) == pytest.approx((c1, c2, rms), rel=1e-12)
    # the fitted line passes through the sample mean
    assert c1 + c2 * v.mean() == pytest.approx(y.mean(), rel=1e-14)
    ref = np.polyfit(v, y, 1)
    assert (c2, c1) == pytest.approx(tuple(ref), rel=1e-10)


def test_linear_fit_degenerate():
    with pytest.raises(DegenerateFitError):
        linear_fit([0.4] * 6, [1, 2, 3, 4, 5, 6])


def test_visibility_fit_neutron(neutron):
    fit = visibility_fit(neutron, 18.0)
    assert len(fit.samples) == 21 and fit.window == (0.3, 0.7)
    assert fit.c2 < 0
    assert fit.residual_rms < 0.05
    # regression values for this window and δq = 2.5 μm
    assert fit.c1 == pytest.approx(1.8843, abs=1e-3)
    assert fit.c2 == pytest.approx(-0.7094, abs=1e-3)


@pytest.mark.parametrize("window", [(0.3, 0.5), (0.4, 0.6), (0.45, 0.7), (0.3, 0.7)])
def test_fit_slope_negative_in_subwindows(neutron, window):
    assert visibility_fit(neutron, 18.0, window, 11).c2 < 0


def test_fit_constants_resolution_insensitive(neutron):
    a = visibility_fit(neutron, 18.0, n_samples=9)
    b = visibility_fit(neutron, 18.0, n_samples=9, resolution=Resolution(dq=2.5e-8))
    assert a.c1 == pytest.approx(b.c1, abs=2e-3)
    assert a.c2 == pytest.approx(b.c2, abs=2e-3)


def test_fit_validation(neutron):
    with pytest.raises(ValueError):
        visibility_fit(neutron, 18.0, n_samples=4)
    with pytest.raises(ValueError):
        visibility_fit(neutron, 18.0, window=(0.7, 0.3))


def test_monotonicity_examples():
    rep = monotonicity_check([(0, 2), (0.5, 1.5), (1, 1)])
    assert rep.verdict == "monotone_decreasing" and rep.rank_correlation == pytest.approx(-1.0)
    rep = monotonicity_check([(0, 1), (0.5, 1.5), (1, 2)])
    assert rep.verdict == "monotone_increasing" and rep.rank_correlation == pytest.approx(1.0)
    rep = monotonicity_check([(0, 1), (0.5, 2), (1, 0)])
    assert rep.verdict == "non_monotone" and rep.offending


def test_monotonicity_repeated_values():
    rep = monotonicity_check([(0.5, 1.0), (0.5, 2.0), (0.7, 0.5)])
    assert rep.verdict == "non_monotone" and rep.offending == (0, 1)
    rep = monotonicity_check([(0.5, 1.0)] * 3)
    assert rep.verdict == "non_monotone" and rep.rank_correlation == 0.0
    with pytest.raises(ValueError):
        monotonicity_check([(0, 1), (1, 0)])


def test_monotonicity_neutron_window(neutron):
    fit = visibility_fit(neutron, 18.0)
    rep = monotonicity_check([(v, y) for _, v, y in fit.samples])
    assert rep.verdict == "monotone_decreasing"
    assert rep.rank_correlation == pytest.approx(-1.0)


def test_no_interior_minimum_gamma_positive():
    cfg = ExperimentConfig(gamma=1.0)
    with pytest.raises(NonUnimodalError):
        find_extremum(quantity_curve("dC", cfg, 18.0), (0.01, 3.0))
