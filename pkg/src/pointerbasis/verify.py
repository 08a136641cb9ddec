"""Self-checks: the oracle, quadrature, identity, positivity and
closed-form-vs-dense suites behind ``pointerbasis verify``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import (
    XState,
    classical_correlation,
    mutual_information,
    quantum_discord,
)
from .dynamics import evolve
from .geometry import DEFAULT_GEOMETRY
from .kernel import default_time_grid, gamma_point, gamma_time_integral
from .oracle import G_closed_form, MeasurementBasis, classical_info_at, maximize_classical
from .quadrature import integrate
from .regimes import BasisLabel, classify_basis

ORACLE_TOL = 1e-6
ARGMAX_TOL = 1e-3
QUAD_ORACLE_TOL = 1e-8
IDENTITY_TOL = 1e-12
EIG_TOL = 1e-12
G_TOL = 1e-10
POSITIVITY_TAUS = (0.01, 0.035, 0.0384, 0.05)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<22} worst={self.worst:.3g}  {self.detail}"


def random_xstates(rng, n):
    """``n`` valid X states: ``p ~ U[0,1]``, ``b ~ U[0,p]``, ``c ~ U[0,1-p]``."""
    p = rng.uniform(0.0, 1.0, n)
    b = rng.uniform(0.0, 1.0, n) * p
    c = rng.uniform(0.0, 1.0, n) * (1 - p)
    return p, b, c


def argmax_ok(state: XState, basis: MeasurementBasis) -> bool:
    label = classify_basis(state)
    pole = min(abs(basis.theta), abs(basis.theta - np.pi)) <= ARGMAX_TOL
    equator = abs(basis.theta - np.pi / 2) <= ARGMAX_TOL
    if label == BasisLabel.SIGMA_Z:
        return pole
    if label == BasisLabel.SIGMA_X:
        return equator
    return pole or equator


def oracle_suite(n_states=1000, seed=0, grid=(181, 361), refine_tol=1e-9, inject_fault=False):
    rng = np.random.default_rng(seed)
    worst, offender, bad_argmax = 0.0, None, 0
    for p, b, c in zip(*random_xstates(rng, n_states)):
        st = XState(p, b, c)
        cmax, basis = maximize_classical(st, grid=grid, refine_tol=refine_tol)
        analytic = classical_correlation(st) + (1e-3 if inject_fault else 0.0)
        err = abs(cmax - analytic)
        if err > worst:
            worst, offender = err, (p, b, c)
        if not argmax_ok(st, basis):
            bad_argmax += 1
            offender = offender or (p, b, c)
    passed = worst <= ORACLE_TOL and bad_argmax == 0
    detail = f"n={n_states} argmax_misplaced={bad_argmax}"
    if not passed and offender is not None:
        detail += " offender(p,b,c)=(%.6g, %.6g, %.6g)" % offender
    return SuiteResult("oracle-vs-analytic", passed, worst, detail)


def quadrature_suite(distances=(5.0, 10.0, 20.0), taus=(0.01, 0.05), margin=40.0):
    worst, offender = 0.0, None
    for l in distances:
        for tau in taus:
            num = integrate(lambda t: gamma_point(t, l, tau), 0.0, l + margin, breakpoints=[l])
            err = abs(num - gamma_time_integral(l, tau))
            if err > worst:
                worst, offender = err, (l, tau)
    passed = worst <= QUAD_ORACLE_TOL
    detail = f"cases={len(distances) * len(taus)}"
    if not passed:
        detail += f" offender(l,tau)={offender}"
    return SuiteResult("quadrature-vs-closed", passed, worst, detail)


def identity_suite(n_states=10000, seed=0):
    rng = np.random.default_rng(seed + 1)
    worst, offender = 0.0, None
    for p, b, c in zip(*random_xstates(rng, n_states)):
        st = XState(p, b, c)
        err = abs(mutual_information(st) - classical_correlation(st) - quantum_discord(st))
        if err > worst:
            worst, offender = err, (p, b, c)
    passed = worst <= IDENTITY_TOL
    detail = f"n={n_states}"
    if not passed:
        detail += " offender(p,b,c)=(%.6g, %.6g, %.6g)" % offender
    return SuiteResult("I=C+D identity", passed, worst, detail)


def positivity_suite(p=0.8, taus=POSITIVITY_TAUS, geom=None, t_grid=None):
    geom = geom or DEFAULT_GEOMETRY
    t_grid = default_time_grid() if t_grid is None else t_grid
    worst, offender = 0.0, None
    for tau in taus:
        traj = evolve(p, tau, geom, t_grid)
        lam = XState(traj.p, traj.b, traj.c).eigenvalues()
        neg = max(0.0, -float(lam.min()))
        trace_err = float(np.max(np.abs(lam.sum(axis=0) - 1)))
        f_excess = max(0.0, float(np.max(-traj.exponents.E_b)), float(np.max(-traj.exponents.E_c)))
        bad = max(neg, trace_err, f_excess)
        if bad > worst:
            worst, offender = bad, tau
    passed = worst <= EIG_TOL
    detail = f"p={p:g} taus={list(taus)}"
    if not passed:
        detail += f" offender tau={offender}"
    return SuiteResult("positivity", passed, worst, detail)


def g_dense_suite(n_states=1000, seed=0):
    rng = np.random.default_rng(seed + 2)
    worst, offender = 0.0, None
    for p, b, c in zip(*random_xstates(rng, n_states)):
        theta, phi = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
        st = XState(p, b, c)
        err = abs(classical_info_at(st, MeasurementBasis(theta, phi)) - G_closed_form(st, theta, phi))
        if err > worst:
            worst, offender = err, (p, b, c, theta, phi)
    passed = worst <= G_TOL
    detail = f"n={n_states}"
    if not passed:
        detail += " offender(p,b,c,theta,phi)=(%.6g, %.6g, %.6g, %.6g, %.6g)" % offender
    return SuiteResult("G-vs-dense", passed, worst, detail)


def run_all(config, inject_fault=False):
    return [
        oracle_suite(config.n_states, config.seed, (config.n_theta, config.n_phi),
                     config.refine_tol, inject_fault=inject_fault),
        quadrature_suite(),
        identity_suite(config.n_identity, config.seed),
        positivity_suite(config.p, geom=config.geometry,
                         t_grid=default_time_grid(config.t_max, config.n_points)),
        g_dense_suite(config.n_states, config.seed),
    ]
