import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointerbasis.correlations import XState, classical_correlation, k_function
from pointerbasis.oracle import (
    G_closed_form,
    MeasurementBasis,
    check_density_matrix,
    classical_info_at,
    conditional_decomposition,
    densify,
    entropy2,
    g_closed_form,
    maximize_classical,
)


@st.composite
def xstates(draw):
    p = draw(st.floats(0, 1))
    return XState(p, draw(st.floats(0, 1)) * p, draw(st.floats(0, 1)) * (1 - p))


angles = st.tuples(st.floats(0, np.pi), st.floats(0, 2 * np.pi))


def test_densify_bell_states():
    phi_plus = np.zeros((4, 4))
    phi_plus[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(densify(XState(1, 1, 0)), phi_plus)
    psi_plus = np.zeros((4, 4))
    psi_plus[np.ix_([1, 2], [1, 2])] = 0.5
    np.testing.assert_allclose(densify(XState(0, 0, 1)), psi_plus)


@settings(max_examples=50, deadline=None)
@given(xstates())
def test_densify_valid(s):
    check_density_matrix(densify(s))


def test_check_density_matrix_rejects():
    with pytest.raises(ValueError):
        check_density_matrix(np.eye(4))
    bad = np.diag([0.6, 0.6, -0.2, 0.0])
    with pytest.raises(ValueError):
        check_density_matrix(bad)


@settings(max_examples=50, deadline=None)
@given(angles)
def test_basis_orthonormal(ang):
    v1, v2 = MeasurementBasis(*ang).vectors()
    assert abs(np.vdot(v1, v2)) < 1e-14
    assert abs(np.vdot(v1, v1) - 1) < 1e-14 and abs(np.vdot(v2, v2) - 1) < 1e-14


def test_product_state_decomposition():
    rho = np.eye(4) / 4
    for out in conditional_decomposition(rho, MeasurementBasis(0.7, 1.9)):
        assert out.probability == pytest.approx(0.5)
        np.testing.assert_allclose(out.state, np.eye(2) / 2, atol=1e-15)


def test_bell_state_z_measurement():
    outs = conditional_decomposition(densify(XState(1, 1, 0)), MeasurementBasis(0, 0))
    for out in outs:
        assert out.probability == pytest.approx(0.5)
        assert entropy2(out.state) == pytest.approx(0, abs=1e-12)


def test_degenerate_outcome_flagged():
    # |1/2, 1/2><1/2, 1/2|: measuring B along z never yields |-1/2>
    rho = np.zeros((4, 4))
    rho[0, 0] = 1
    outs = conditional_decomposition(rho, MeasurementBasis(0, 0))
    assert [o.degenerate for o in outs] == [True, False]
    np.testing.assert_allclose(outs[0].state, np.eye(2) / 2)


def test_x_measurement_conditional_entropy():
    s = XState(0.8, 0.48, 0.12)
    outs = conditional_decomposition(densify(s), MeasurementBasis(np.pi / 2, 0))
    cond = sum(o.probability * entropy2(o.state) for o in outs)
    assert cond == pytest.approx(k_function(0.6), abs=1e-13)


@settings(max_examples=50, deadline=None)
@given(xstates(), angles)
def test_outcomes_normalized(s, ang):
    outs = conditional_decomposition(densify(s), MeasurementBasis(*ang))
    assert sum(o.probability for o in outs) == pytest.approx(1, abs=1e-14)
    for o in outs:
        assert np.trace(o.state).real == pytest.approx(1, abs=1e-12)
        np.testing.assert_allclose(o.state, o.state.conj().T, atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(xstates(), angles)
def test_dense_matches_closed_form(s, ang):
    assert classical_info_at(s, MeasurementBasis(*ang)) == pytest.approx(G_closed_form(s, *ang), abs=1e-10)


@settings(max_examples=50, deadline=None)
@given(xstates(), angles)
def test_antipodal_basis_same_information(s, ang):
    th, ph = ang
    a = classical_info_at(s, MeasurementBasis(th, ph))
    b = classical_info_at(s, MeasurementBasis(np.pi - th, ph + np.pi))
    assert a == pytest.approx(b, abs=1e-13)


def test_uncorrelated_state_zero_information():
    for th, ph in [(0, 0), (1, 2), (np.pi / 2, 5)]:
        assert classical_info_at(XState(0.5, 0, 0), MeasurementBasis(th, ph)) == pytest.approx(0, abs=1e-15)


def test_g_special_angles():
    s = XState(0.7, 0.5, 0.2)
    assert g_closed_form(s, 0, 1.1) == pytest.approx(abs(s.a))
    assert g_closed_form(s, np.pi / 2, 0) == pytest.approx(0.7)
    assert g_closed_form(s, np.pi / 2, np.pi / 2) == pytest.approx(0.3)


@settings(max_examples=100, deadline=None)
@given(xstates(), st.floats(0.05, np.pi - 0.05))
def test_g_maximal_only_at_phi_zero_or_pi(s, th):
    if s.b * s.c < 1e-6:
        return
    phis = np.linspace(0, 2 * np.pi, 721)
    vals = g_closed_form(s, th, phis)
    best = phis[vals >= vals.max() - 1e-15]
    assert np.all(np.minimum(np.abs(best - np.pi), np.minimum(best, 2 * np.pi - best)) < 1e-9)


def test_maximize_sigma_z_regime():
    s = XState(0.9, 0.3, 0.05)  # |a| = 0.8 > b + c
    cmax, basis = maximize_classical(s)
    assert cmax == pytest.approx(classical_correlation(s), abs=1e-9)
    assert basis.theta == pytest.approx(0, abs=1e-3)


def test_maximize_sigma_x_regime():
    s = XState(0.7, 0.6, 0.2)  # |a| = 0.4 < 0.8
    cmax, basis = maximize_classical(s)
    assert cmax == pytest.approx(classical_correlation(s), abs=1e-9)
    assert basis.theta == pytest.approx(np.pi / 2, abs=1e-3)
    assert basis.phi == pytest.approx(0, abs=1e-3)


def test_maximize_accepts_dense_and_refines_off_grid():
    # an off-lattice optimum: rotate the state's B qubit about z so the best phi is 0.3
    s = XState(0.7, 0.6, 0.2)
    u = np.diag([np.exp(-0.15j), np.exp(0.15j)])
    U = np.kron(np.eye(2), u)
    rho = U @ densify(s) @ U.conj().T
    cmax, basis = maximize_classical(rho, grid=(61, 121))
    assert cmax == pytest.approx(classical_correlation(s), abs=1e-9)
    assert basis.theta == pytest.approx(np.pi / 2, abs=1e-3)


def test_maximize_grid_minimum():
    with pytest.raises(ValueError):
        maximize_classical(XState(0.5, 0, 0), grid=(30, 121))


def test_oracle_sweep_small():
    rng = np.random.default_rng(42)
    for _ in range(40):
        p = rng.uniform()
        s = XState(p, rng.uniform() * p, rng.uniform() * (1 - p))
        cmax, _ = maximize_classical(s)
        assert cmax == pytest.approx(classical_correlation(s), abs=1e-6)
        assert cmax <= classical_correlation(s) + 1e-6
