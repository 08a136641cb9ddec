"""Pointer-basis regimes: sudden transitions, plateaus and crossover temperature."""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import bisect, minimize_scalar

from .correlations import XState, classical_correlation
from .dynamics import Trajectory, evolve
from .geometry import DEFAULT_GEOMETRY, QubitGeometry
from .kernel import default_time_grid, exponents_on_grid

LABEL_TOL = 1e-10
CROSSING_XTOL = 1e-6
TAU_XTOL = 1e-5
PLATEAU_FRACTION = 0.01
PLATEAU_C_TOL = 1e-9
ENTROPY_PEAK_TOL = 1e-10
STATIONARY_TOL = 1e-6


class BasisLabel(str, enum.Enum):
    SIGMA_Z = "Z"
    SIGMA_X = "X"
    DEGENERATE = "DEG"


class CoarseGridError(RuntimeError):
    """A pair of sign changes appears to hide between two grid points."""


class NoSignChangeError(ValueError):
    pass


class NoAbruptTransition(ValueError):
    """``p = 1/2``: |a| vanishes so the sigma_x basis is never displaced."""


def classify_basis(state: XState) -> BasisLabel:
    """sigma_z when ``|a| > b + c``, sigma_x when ``|a| < b + c``."""
    margin = abs(state.a) - (float(state.b) + float(state.c))
    if margin > LABEL_TOL:
        return BasisLabel.SIGMA_Z
    if margin < -LABEL_TOL:
        return BasisLabel.SIGMA_X
    return BasisLabel.DEGENERATE


def _signs(margin):
    return np.where(margin > LABEL_TOL, 1, np.where(margin < -LABEL_TOL, -1, 0))


@dataclass(frozen=True)
class RegimeReport:
    tau: float
    p: float
    crossings: tuple = ()
    segments: tuple = ()  # (start, end, label)
    plateaus: tuple = ()  # (start, end) of sigma_z plateaus
    metastable_count: int = 0
    asymptotic_basis: BasisLabel = BasisLabel.SIGMA_X
    entropy_maxima: tuple = ()

    def to_dict(self):
        d = asdict(self)
        d["asymptotic_basis"] = self.asymptotic_basis.value
        d["segments"] = [[s, e, BasisLabel(l).value] for s, e, l in self.segments]
        d["plateaus"] = [list(x) for x in self.plateaus]
        d["crossings"] = list(self.crossings)
        d["entropy_maxima"] = list(self.entropy_maxima)
        return d

    def maxima_in(self, start, end):
        return [t for t in self.entropy_maxima if start <= t <= end]

    def metastable_plateaus(self):
        """Plateaus that are later replaced by a sigma_x segment."""
        return _metastable(self.plateaus, self.segments)


def _metastable(plateaus, segments):
    last_x = max((lo for lo, _, lab in segments if lab == BasisLabel.SIGMA_X), default=-np.inf)
    return [(lo, hi) for lo, hi in plateaus if hi <= last_x]


def _check_hidden_crossings(traj: Trajectory, margin, sign):
    """Look for a sign change between grid points near discrete minima of |margin|."""
    t = traj.t
    s = sign * margin
    for i in range(1, t.size - 1):
        if sign[i] == 0 or sign[i - 1] != sign[i] or sign[i + 1] != sign[i]:
            continue
        if not (s[i] <= s[i - 1] and s[i] <= s[i + 1]):
            continue
        reach = 2 * max(abs(margin[i - 1] - margin[i]), abs(margin[i + 1] - margin[i]))
        if s[i] > reach:
            continue
        r = minimize_scalar(
            lambda x: sign[i] * traj.margin_at(x),
            bounds=(t[i - 1], t[i + 1]), method="bounded", options={"xatol": 1e-9},
        )
        if r.fun < -LABEL_TOL:
            raise CoarseGridError(
                f"margin |a|-(b+c) changes sign twice near t={t[i]:.6g}; "
                "use a denser time grid"
            )


def _entropy_maxima(t, S):
    """3-point local maxima of S, refined by a parabola through the neighbours."""
    out = []
    for i in range(1, t.size - 1):
        left, mid, right = S[i - 1], S[i], S[i + 1]
        if not (mid > left and mid >= right and mid - min(left, right) > ENTROPY_PEAK_TOL):
            continue
        h0, h1 = t[i] - t[i - 1], t[i + 1] - t[i]
        # vertex of the interpolating parabola
        d1 = (mid - left) / h0
        d2 = (right - mid) / h1
        curv = (d2 - d1) / (0.5 * (h0 + h1))
        shift = 0.0
        if curv < 0:
            shift = -(0.5 * (d1 + d2) + 0.5 * curv * (h1 - h0) / 2) / curv
            shift = float(np.clip(shift, -h0, h1))
        out.append(float(t[i] + shift))
    return tuple(out)


def scan_regimes(traj: Trajectory, check_coarse=True) -> RegimeReport:
    """Crossing times, basis segments, plateaus and entropy maxima of a trajectory.

    Sign changes of ``|a| - (b + c)`` between grid points are refined by
    bisection to 1e-6 in time.  A sigma_z segment longer than 1% of the time
    span is a plateau; the classical correlation is asserted constant there.
    """
    t = traj.t
    a_abs = abs(2 * traj.p - 1)
    margin = a_abs - (traj.b + traj.c)
    sign = _signs(margin)
    if check_coarse:
        _check_hidden_crossings(traj, margin, sign)

    crossings = []
    nz = np.flatnonzero(sign)
    for i, j in zip(nz[:-1], nz[1:]):
        if sign[i] != sign[j]:
            crossings.append(float(bisect(traj.margin_at, t[i], t[j], xtol=CROSSING_XTOL)))

    bounds = [float(t[0])] + crossings + [float(t[-1])]
    segments = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        inside = sign[(t >= lo) & (t <= hi) & (sign != 0)]
        if inside.size == 0:
            lab = BasisLabel.DEGENERATE
        else:
            # majority of interior samples; endpoints may carry the neighbour's sign
            lab = BasisLabel.SIGMA_Z if np.sum(inside > 0) > np.sum(inside < 0) else BasisLabel.SIGMA_X
        segments.append((lo, hi, lab))

    span = float(t[-1] - t[0])
    plateaus = tuple(
        (lo, hi) for lo, hi, lab in segments
        if lab == BasisLabel.SIGMA_Z and hi - lo > PLATEAU_FRACTION * span
    )
    C = classical_correlation(traj.state)
    for lo, hi in plateaus:
        sel = (t > lo) & (t < hi) & (sign > 0)
        if np.any(sel) and np.ptp(C[sel]) > PLATEAU_C_TOL:
            raise RuntimeError(f"classical correlation not constant on plateau [{lo}, {hi}]")

    metastable = len(_metastable(plateaus, segments))

    final = XState(traj.p, float(traj.b[-1]), float(traj.c[-1]))
    S = traj.series()["S"]
    return RegimeReport(
        tau=traj.tau,
        p=traj.p,
        crossings=tuple(crossings),
        segments=tuple(segments),
        plateaus=plateaus,
        metastable_count=metastable,
        asymptotic_basis=classify_basis(final),
        entropy_maxima=_entropy_maxima(t, np.atleast_1d(S)),
    )


def pointer_temperature_estimate(p) -> float:
    """Order-of-magnitude transition temperature ``-ln|2p - 1| / (16 pi)``."""
    a = abs(2 * float(p) - 1)
    if a < 1e-15:
        raise NoAbruptTransition("no abrupt transition for p = 1/2")
    return -np.log(a) / (16 * np.pi)


def stationary_exponents(geom: QubitGeometry, t_stationary=400.0, n_points=4000):
    """Unit-temperature exponents at ``t_stationary``; verifies convergence."""
    grid = default_time_grid(t_stationary, n_points)
    e = exponents_on_grid(geom, 1.0, grid)
    half = int(np.searchsorted(grid, t_stationary / 2))
    drift = max(abs(e.E_b[-1] - e.E_b[half]), abs(e.E_c[-1] - e.E_c[half]))
    if drift > STATIONARY_TOL:
        raise ValueError(
            f"exponents still drift by {drift:.3g} between t={grid[half]:g} and "
            f"t={t_stationary:g}; increase t_stationary"
        )
    return float(e.E_b[-1]), float(e.E_c[-1])


def crossover_temperature(
    geom: QubitGeometry = DEFAULT_GEOMETRY, p=0.8, t_stationary=400.0,
    bracket=(0.005, 0.2), n_points=4000,
) -> float:
    """Temperature where the stationary state satisfies ``|a| = b + c``.

    Below it the final pointer basis is sigma_x, above it sigma_z.  Found by
    bisection in ``tau`` to 1e-5.
    """
    e_b, e_c = stationary_exponents(geom, t_stationary, n_points)
    p = float(p)
    a_abs = abs(2 * p - 1)

    def margin(tau):
        return a_abs - (p * np.exp(-tau * e_b) + (1 - p) * np.exp(-tau * e_c))

    lo, hi = bracket
    if np.sign(margin(lo)) == np.sign(margin(hi)) or margin(lo) == 0 or margin(hi) == 0:
        raise NoSignChangeError(
            f"|a| - (b + c) at t={t_stationary:g} has no sign change in tau bracket "
            f"[{lo:g}, {hi:g}]"
        )
    return float(bisect(margin, lo, hi, xtol=TAU_XTOL))


@dataclass
class SweepEntry:
    tau: float
    report: RegimeReport | None = None
    error: str | None = None


def temperature_sweep(p, tau_list, geom: QubitGeometry = DEFAULT_GEOMETRY, t_grid=None):
    """One independent trajectory per temperature, ordered by ``tau``.

    A failing temperature is recorded in its entry and the sweep continues.
    """
    t_grid = default_time_grid() if t_grid is None else t_grid
    out = []
    for tau in sorted(float(x) for x in tau_list):
        try:
            out.append(SweepEntry(tau, scan_regimes(evolve(p, tau, geom, t_grid))))
        except (ValueError, RuntimeError) as exc:
            out.append(SweepEntry(tau, error=f"{type(exc).__name__}: {exc}"))
    return out
