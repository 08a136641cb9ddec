"""Phonon-induced dephasing kernel for two donor-based charge qubits.

The inter-donor rate ``gamma(t; l)`` is combined over donor sites into the
inter-qubit rates ``gamma_bb'(t)``, those into the rate ``Gamma`` of each
density-matrix element, and ``Gamma`` is integrated in time to give the
decoherence exponents.  Everything here is linear in ``tau``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .geometry import DEFAULT_GEOMETRY, SPIN_LABELS, QubitGeometry, distance_set
from .quadrature import integrate, integrate_panels

SMALL_DISTANCE = 1e-8
QUAD_TOL = 1e-10
DEFAULT_T_MAX = 400.0
DEFAULT_N_POINTS = 4000

# (m_labels, s_labels) of the two coherences carried by the X state
B_COHERENCE = ((0.5, 0.5), (-0.5, -0.5))
C_COHERENCE = ((0.5, -0.5), (-0.5, 0.5))


def default_time_grid(t_max=DEFAULT_T_MAX, n_points=DEFAULT_N_POINTS):
    return np.linspace(0.0, float(t_max), int(n_points))


def damped_cubic(x):
    """``(x^3/6 + x^2/2 + 5x/8 + 5/16) exp(-2x)``."""
    x = np.asarray(x, dtype=float)
    return (((x / 6.0 + 0.5) * x + 0.625) * x + 0.3125) * np.exp(-2.0 * x)


def damped_cubic_integral(l):
    """Closed-form integral of :func:`damped_cubic` over ``[0, l]``.

    Antiderivative is ``Q(x) exp(-2x)`` with
    ``Q = -(x^3/12 + 3x^2/8 + 11x/16 + 1/2)``.
    """
    l = np.asarray(l, dtype=float)
    q = ((l / 12.0 + 0.375) * l + 0.6875) * l + 0.5
    return 0.5 - q * np.exp(-2.0 * l)


def gamma_time_integral(l, tau):
    """Closed form of ``int_0^inf gamma(t; l) dt`` (``4 pi tau / l`` times the
    damped-cubic integral; ``5 pi tau / 4`` at ``l = 0``)."""
    if l < SMALL_DISTANCE:
        return 4.0 * np.pi * tau * 0.3125
    return 4.0 * np.pi * tau / l * float(damped_cubic_integral(l))


def _check_nonneg(name, value):
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0):
        raise ValueError(f"{name} must be finite and >= 0")
    return arr


def gamma_point(t, l, tau):
    """Inter-donor decoherence rate ``gamma(t; l)`` in reduced units.

    Vectorized in ``t`` and ``l``.  For ``l < 1e-8`` the removable ``1/l``
    singularity is replaced by its limit ``4 pi tau (t^3/3 + t^2/2 + t/4) e^{-2t}``.
    """
    t = _check_nonneg("t", t)
    l = _check_nonneg("l", l)
    tau = float(_check_nonneg("tau", tau))
    t, l = np.broadcast_arrays(t, l)
    small = l < SMALL_DISTANCE
    safe_l = np.where(small, 1.0, l)
    regular = 2.0 * np.pi / safe_l * (damped_cubic(np.abs(l - t)) - damped_cubic(l + t))
    limit = 4.0 * np.pi * ((t / 3.0 + 0.5) * t + 0.25) * t * np.exp(-2.0 * t)
    out = tau * np.where(small, limit, regular)
    return out if out.ndim else float(out)


def gamma_interqubit(t, b, b_prime, geom: QubitGeometry, tau):
    """Inter-qubit decorrelation rate ``gamma_bb'(t)``.

    ``4 sum_{m, s} m s gamma(t; |site(b, m) - site(b', s)|)``, a signed
    four-term sum since ``4 m s = +-1``.
    """
    if b not in (1, 2) or b_prime not in (1, 2):
        raise ValueError(f"qubit indices must be 1 or 2, got {(b, b_prime)!r}")
    total = 0.0
    for m, s in product(SPIN_LABELS, SPIN_LABELS):
        l = geom.site_distance(b, m, b_prime, s)
        total = total + 4.0 * m * s * gamma_point(t, l, tau)
    return total


def big_gamma(t, m_labels, s_labels, geom: QubitGeometry, tau):
    """Decoherence rate of the element ``|m1 m2><s1 s2|`` of the qubit state."""
    for lab in (*m_labels, *s_labels):
        if lab not in SPIN_LABELS:
            raise ValueError(f"spin labels must be +-1/2, got {lab!r}")
    diff = [m - s for m, s in zip(m_labels, s_labels)]
    total = 0.0 * np.asarray(t, dtype=float)
    for (b, db), (bp, dbp) in product(enumerate(diff, 1), repeat=2):
        if db * dbp != 0:
            total = total + db * dbp * gamma_interqubit(t, b, bp, geom, tau)
    return total


def rate_coefficients(geom: QubitGeometry, m_labels, s_labels):
    """Expand ``big_gamma`` at unit ``tau`` as ``sum_l coef_l gamma(t; l)``.

    Returns parallel arrays of distances and coefficients with equal
    distances merged, which is how the integrand is evaluated cheaply.
    """
    diff = [m - s for m, s in zip(m_labels, s_labels)]
    acc: dict[float, float] = {}
    for (b, db), (bp, dbp) in product(enumerate(diff, 1), repeat=2):
        if db * dbp == 0:
            continue
        for m, s in product(SPIN_LABELS, SPIN_LABELS):
            l = round(geom.site_distance(b, m, bp, s), 9)
            acc[l] = acc.get(l, 0.0) + db * dbp * 4.0 * m * s
    ls = np.array(sorted(acc))
    coef = np.array([acc[l] for l in ls])
    keep = coef != 0
    return ls[keep], coef[keep]


def _unit_rate_function(geom):
    """Vectorized ``t -> [Gamma_b(t), Gamma_c(t)]`` at ``tau = 1``."""
    lb, cb = rate_coefficients(geom, *B_COHERENCE)
    lc, cc = rate_coefficients(geom, *C_COHERENCE)
    ls = np.union1d(lb, lc)
    wb = np.zeros(ls.size)
    wc = np.zeros(ls.size)
    wb[np.searchsorted(ls, lb)] = cb
    wc[np.searchsorted(ls, lc)] = cc
    weights = np.vstack([wb, wc])

    def rates(t):
        g = gamma_point(np.asarray(t)[None, :], ls[:, None], 1.0)
        return weights @ g

    return rates


@dataclass(frozen=True)
class DecoherenceExponents:
    """Accumulated exponents ``E_b(t), E_c(t)`` on a time grid.

    ``exp(-E_b)`` multiplies the outer coherence ``|1/2,1/2><-1/2,-1/2|`` and
    ``exp(-E_c)`` the inner one ``|1/2,-1/2><-1/2,1/2|``.
    """

    t: np.ndarray
    E_b: np.ndarray
    E_c: np.ndarray
    tau: float
    geometry: QubitGeometry = field(default=DEFAULT_GEOMETRY)

    def at(self, t):
        """Exponents at an arbitrary time, integrating from the nearest
        grid node at or below ``t``."""
        t = float(t)
        if t < 0:
            raise ValueError("t must be >= 0")
        i = int(np.clip(np.searchsorted(self.t, t, side="right") - 1, 0, self.t.size - 1))
        t0 = float(self.t[i])
        base = np.array([self.E_b[i], self.E_c[i]])
        if t == t0:
            return base
        inc = integrate(
            _unit_rate_function(self.geometry), t0, t,
            breakpoints=distance_set(self.geometry), tol=QUAD_TOL,
        )
        return base + self.tau * np.asarray(inc)


_UNIT_CACHE: dict = {}


def _unit_exponents(geom, t_grid):
    key = (geom, t_grid.tobytes())
    hit = _UNIT_CACHE.get(key)
    if hit is not None:
        return hit
    increments = integrate_panels(
        _unit_rate_function(geom), t_grid,
        breakpoints=distance_set(geom), tol=QUAD_TOL,
    )
    cum = np.zeros((2, t_grid.size))
    np.cumsum(increments, axis=1, out=cum[:, 1:])
    cum.setflags(write=False)
    if len(_UNIT_CACHE) > 32:
        _UNIT_CACHE.clear()
    _UNIT_CACHE[key] = cum
    return cum


def exponents_on_grid(geom: QubitGeometry, tau, t_grid=None) -> DecoherenceExponents:
    """Integrate the element rates over ``t_grid`` (must start at 0).

    Panels between consecutive grid times are integrated adaptively with
    forced breakpoints at every donor distance and accumulated.  The
    integral is done once at unit temperature per geometry and grid and
    scaled by ``tau``.
    """
    tau = float(_check_nonneg("tau", tau))
    t_grid = default_time_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 1 or t_grid[0] != 0.0:
        raise ValueError("time grid must be 1-D and start at t = 0")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("time grid must be strictly ascending")
    if t_grid.size == 1:
        unit = np.zeros((2, 1))
    else:
        unit = _unit_exponents(geom, t_grid)
    return DecoherenceExponents(
        t=t_grid, E_b=tau * unit[0], E_c=tau * unit[1], tau=tau, geometry=geom
    )


def coherences(p, exponents: DecoherenceExponents):
    """``b(t) = p exp(-E_b)``, ``c(t) = (1 - p) exp(-E_c)``."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p must lie in [0, 1], got {p!r}")
    return p * np.exp(-exponents.E_b), (1.0 - p) * np.exp(-exponents.E_c)
