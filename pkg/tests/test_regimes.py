import math

import numpy as np
import pytest
from scipy.optimize import brentq

from pointerbasis.correlations import XState, classical_correlation, quantum_discord
from pointerbasis.dynamics import evolve
from pointerbasis.geometry import DEFAULT_GEOMETRY
from pointerbasis.kernel import default_time_grid
from pointerbasis.regimes import (
    BasisLabel,
    CoarseGridError,
    NoAbruptTransition,
    NoSignChangeError,
    classify_basis,
    crossover_temperature,
    pointer_temperature_estimate,
    scan_regimes,
    temperature_sweep,
)


@pytest.fixture(scope="module")
def fig3():
    return evolve(0.8, 0.0388)


def test_classify_basis():
    assert classify_basis(XState(0.5, 0.2, 0.1)) == BasisLabel.SIGMA_X
    assert classify_basis(XState(0.8, 0.8, 0.2)) == BasisLabel.SIGMA_X
    assert classify_basis(XState(1.0, 1e-3, 0.0)) == BasisLabel.SIGMA_Z
    assert classify_basis(XState(0.8, 0.5, 0.1)) == BasisLabel.DEGENERATE


def test_pointer_temperature_estimate():
    assert pointer_temperature_estimate(0.8) == pytest.approx(-math.log(0.6) / (16 * math.pi), rel=1e-15)
    assert pointer_temperature_estimate(0.8) == pytest.approx(0.0101625528850, abs=1e-12)
    assert pointer_temperature_estimate(1.0) == 0.0
    with pytest.raises(NoAbruptTransition):
        pointer_temperature_estimate(0.5)


@pytest.mark.parametrize("tau", [0.0, 0.01, 0.0384, 0.2])
def test_half_mixture_never_crosses(tau):
    r = scan_regimes(evolve(0.5, tau))
    assert r.crossings == () and r.plateaus == ()
    assert r.asymptotic_basis == BasisLabel.SIGMA_X


def test_low_temperature_no_plateau():
    r = scan_regimes(evolve(0.8, 0.01))
    assert r.crossings == () and r.asymptotic_basis == BasisLabel.SIGMA_X


def test_high_temperature_stable_sigma_z():
    r = scan_regimes(evolve(0.8, 0.05))
    assert len(r.crossings) % 2 == 1
    assert r.asymptotic_basis == BasisLabel.SIGMA_Z
    assert r.metastable_count == 0


def test_crossings_refined_to_the_margin_zero(fig3):
    r = scan_regimes(fig3)
    assert len(r.crossings) == 4
    for tc in r.crossings:
        assert abs(fig3.margin_at(tc)) < 1e-6
        assert abs(fig3.margin_at(tc - 1e-3)) > 0
    assert list(r.crossings) == sorted(r.crossings)


def test_classical_correlation_continuous_at_crossings(fig3):
    r = scan_regimes(fig3)
    for t0 in r.crossings:
        tc = brentq(fig3.margin_at, t0 - 1e-5, t0 + 1e-5, xtol=1e-13)
        vals = []
        for t in (tc - 1e-9, tc + 1e-9):
            b, c = fig3.coherences_at(t)
            vals.append(classical_correlation(XState(0.8, b, c)))
        assert abs(vals[0] - vals[1]) < 1e-8


def test_plateau_properties(fig3):
    r = scan_regimes(fig3)
    assert len(r.plateaus) == 2 and r.metastable_count == 2
    assert r.asymptotic_basis == BasisLabel.SIGMA_X
    s = fig3.series()
    t = fig3.t
    for lo, hi in r.plateaus:
        sel = (t > lo) & (t < hi)
        assert np.ptp(s["C"][sel]) < 1e-9
        assert np.ptp(s["D"][sel]) > 1e-4  # discord keeps moving
        assert r.maxima_in(lo, hi)
    (a0, a1), (b0, b1) = r.plateaus
    assert a1 < b0


def test_sigma_x_intervals_strictly_decreasing_C(fig3):
    r = scan_regimes(fig3)
    s = fig3.series()
    bc = fig3.b + fig3.c
    for lo, hi, lab in r.segments:
        if lab != BasisLabel.SIGMA_X:
            continue
        idx = np.flatnonzero((fig3.t > lo) & (fig3.t < hi))
        for i, j in zip(idx[:-1], idx[1:]):
            if bc[j] < bc[i] - 1e-12:
                assert s["C"][j] < s["C"][i]


def test_entropy_maxima_refined_between_samples(fig3):
    r = scan_regimes(fig3)
    S = fig3.series()["S"]
    for tm in r.entropy_maxima:
        i = int(np.argmin(np.abs(fig3.t - tm)))
        assert abs(tm - fig3.t[i]) <= fig3.t[1] - fig3.t[0]
        assert S[i] >= S[i - 1] and S[i] >= S[i + 1]


def test_short_plateau_not_counted():
    # the second sigma_z interval at 0.0384 lasts ~1.4 time units, under 1% of 400
    r = scan_regimes(evolve(0.8, 0.0384))
    assert len(r.crossings) == 4
    assert len(r.plateaus) == 1


def test_coarse_grid_detected():
    coarse = default_time_grid(400, 41)  # dt = 10 hides the 0.0388 sigma_z windows
    with pytest.raises(CoarseGridError):
        scan_regimes(evolve(0.8, 0.0388, t_grid=coarse))


def test_crossover_temperature():
    ts = crossover_temperature(DEFAULT_GEOMETRY, 0.8)
    assert 0.035 < ts < 0.043
    # sigma_x below, sigma_z above
    assert scan_regimes(evolve(0.8, ts - 2e-4)).asymptotic_basis == BasisLabel.SIGMA_X
    assert scan_regimes(evolve(0.8, ts + 2e-4)).asymptotic_basis == BasisLabel.SIGMA_Z


def test_crossover_decreases_with_mixture_imbalance():
    # a larger |a| is reached by b + c at a lower temperature
    vals = [crossover_temperature(DEFAULT_GEOMETRY, p, bracket=(1e-4, 1.0)) for p in (0.6, 0.8, 0.95)]
    assert vals[0] > vals[1] > vals[2]


def test_crossover_no_sign_change():
    with pytest.raises(NoSignChangeError):
        crossover_temperature(DEFAULT_GEOMETRY, 0.5)
    with pytest.raises(NoSignChangeError):
        crossover_temperature(DEFAULT_GEOMETRY, 0.8, bracket=(0.05, 0.1))


def test_crossover_requires_stationarity():
    with pytest.raises(ValueError, match="t_stationary"):
        crossover_temperature(DEFAULT_GEOMETRY, 0.8, t_stationary=20.0, n_points=200)


def test_sweep_taxonomy_and_order():
    entries = temperature_sweep(0.8, [0.05, 0.01, 0.035, 0.035])
    assert [e.tau for e in entries] == [0.01, 0.035, 0.035, 0.05]
    low, mid, mid2, high = (e.report for e in entries)
    assert low.plateaus == () and low.asymptotic_basis == BasisLabel.SIGMA_X
    assert mid.metastable_count == 1 and mid.asymptotic_basis == BasisLabel.SIGMA_X
    assert high.asymptotic_basis == BasisLabel.SIGMA_Z and high.metastable_count == 0
    assert mid.to_dict() == mid2.to_dict()


def test_sweep_records_failures():
    entries = temperature_sweep(0.8, [0.0388, 0.01], t_grid=default_time_grid(400, 41))
    assert entries[0].report is not None
    assert entries[1].error and "CoarseGridError" in entries[1].error


def test_low_temperature_correlations_dominate():
    s = evolve(0.8, 0.01).series()
    assert s["C"].min() > s["D"].max()
