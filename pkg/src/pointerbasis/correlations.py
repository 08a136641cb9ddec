"""Correlations of the dephasing Bell-mixture X state, in bits.

The state is carried as ``(p, b, c)``; in the basis
``|1/2,1/2>, |1/2,-1/2>, |-1/2,1/2>, |-1/2,-1/2>`` its matrix is::

    1/2 * [[p, 0, 0, b],
           [0, 1-p, c, 0],
           [0, c, 1-p, 0],
           [b, 0, 0, p]]

``b`` and ``c`` may be arrays (one entry per time), ``p`` is a scalar.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BOUNDARY_TOL = 1e-12


class StateError(ValueError):
    """Raised when ``(p, b, c)`` does not describe a valid X state."""


def _clamp_unit(x, name, lo=0.0, hi=1.0):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < lo - BOUNDARY_TOL) or np.any(x > hi + BOUNDARY_TOL):
        raise StateError(f"{name} outside [{lo:g}, {hi:g}]")
    return np.clip(x, lo, hi)


@dataclass(frozen=True)
class XState:
    """Bell-mixture X state with mixing ``p`` and coherences ``b``, ``c``.

    Valid iff ``0 <= b <= p`` and ``0 <= c <= 1 - p``, which is exactly
    positivity of the eigenvalues ``(p +- b)/2`` and ``((1-p) +- c)/2``.
    Values within 1e-12 of a bound are clamped onto it.
    """

    p: float
    b: object
    c: object

    def __post_init__(self):
        p = float(_clamp_unit(self.p, "p"))
        b = _clamp_unit(self.b, "b", 0.0, p)
        c = _clamp_unit(self.c, "c", 0.0, 1.0 - p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "b", b if b.ndim else float(b))
        object.__setattr__(self, "c", c if c.ndim else float(c))

    @property
    def a(self):
        return 2.0 * self.p - 1.0

    @classmethod
    def bell_mixture(cls, p):
        """The undecohered state ``p |Psi+><Psi+| + (1-p) |Phi+><Phi+|``."""
        return cls(p, p, 1.0 - p)

    def eigenvalues(self):
        """The four eigenvalues, stacked along the first axis."""
        p, b, c = self.p, np.asarray(self.b), np.asarray(self.c)
        return np.stack([(p + b) / 2, (p - b) / 2, (1 - p + c) / 2, (1 - p - c) / 2])


def xlogx(x):
    """``x lg x`` with ``0 lg 0 = 0``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out if out.ndim else float(out)


def k_function(x):
    """Binary entropy of ``(1 + x) / 2`` in bits, for ``x`` in ``[0, 1]``."""
    x = _clamp_unit(x, "K argument")
    out = -xlogx((1 + x) / 2) - xlogx((1 - x) / 2)
    return out if np.ndim(out) else float(out)


def coherence_weight(state: XState):
    """``w = max(|a|, b + c)``, the length of the optimal Bloch direction."""
    return np.maximum(abs(state.a), np.asarray(state.b) + np.asarray(state.c))


def classical_correlation(state: XState):
    """``C = 1 - K(max(|a|, b + c))``."""
    out = 1.0 - k_function(np.minimum(coherence_weight(state), 1.0))
    return out if np.ndim(out) else float(out)


def _ratio(num, den):
    num = np.asarray(num, dtype=float)
    return num / den if den > 0 else np.zeros_like(num)


def quantum_discord(state: XState):
    """Closed-form discord
    ``1 + p lg p + (1-p) lg(1-p) + K(w) - p K(b/p) - (1-p) K(c/(1-p))``.

    A vanishing weight ``p`` or ``1 - p`` drops its ``K`` term.
    """
    p = state.p
    q = 1.0 - p
    out = (
        1.0 + xlogx(p) + xlogx(q)
        + k_function(np.minimum(coherence_weight(state), 1.0))
        - p * k_function(np.minimum(_ratio(state.b, p), 1.0))
        - q * k_function(np.minimum(_ratio(state.c, q), 1.0))
    )
    return out if np.ndim(out) else float(out)


def joint_entropy(state: XState):
    """Von Neumann entropy of the two-qubit state from its closed-form spectrum."""
    lam = np.clip(state.eigenvalues(), 0.0, None)
    out = -np.sum(xlogx(lam), axis=0)
    return out if np.ndim(out) else float(out)


def mutual_information(state: XState):
    """``S(A) + S(B) - S(AB) = 2 - S(AB)``: both marginals are ``I/2``."""
    return 2.0 - joint_entropy(state)


@dataclass(frozen=True)
class CorrelationPoint:
    t: float
    b: float
    c: float
    C: float
    D: float
    I: float
    S: float


def correlation_point(t, state: XState) -> CorrelationPoint:
    return CorrelationPoint(
        t=float(t), b=float(state.b), c=float(state.c),
        C=classical_correlation(state), D=quantum_discord(state),
        I=mutual_information(state), S=joint_entropy(state),
    )
