"""Time evolution of the Bell-mixture state under phonon dephasing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlations import (
    XState,
    classical_correlation,
    joint_entropy,
    mutual_information,
    quantum_discord,
)
from .geometry import DEFAULT_GEOMETRY, QubitGeometry
from .kernel import DecoherenceExponents, coherences, exponents_on_grid


@dataclass(frozen=True)
class Trajectory:
    p: float
    exponents: DecoherenceExponents
    b: np.ndarray
    c: np.ndarray

    @property
    def t(self):
        return self.exponents.t

    @property
    def tau(self):
        return self.exponents.tau

    @property
    def state(self) -> XState:
        return XState(self.p, self.b, self.c)

    def coherences_at(self, t):
        e_b, e_c = self.exponents.at(t)
        return self.p * np.exp(-e_b), (1.0 - self.p) * np.exp(-e_c)

    def margin_at(self, t):
        """``|a| - (b + c)`` at an arbitrary time."""
        b, c = self.coherences_at(t)
        return abs(2 * self.p - 1) - (b + c)

    def series(self):
        """Dict of ``C, D, I, S`` arrays on the grid."""
        st = self.state
        return {
            "C": classical_correlation(st),
            "D": quantum_discord(st),
            "I": mutual_information(st),
            "S": joint_entropy(st),
        }


def evolve(p, tau, geom: QubitGeometry = DEFAULT_GEOMETRY, t_grid=None) -> Trajectory:
    """Evolve ``p |Psi+><Psi+| + (1-p) |Phi+><Phi+|`` at temperature ``tau``."""
    exps = exponents_on_grid(geom, tau, t_grid)
    b, c = coherences(p, exps)
    return Trajectory(p=float(p), exponents=exps, b=b, c=c)
