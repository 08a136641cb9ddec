"""Reduced units and the two-qubit donor geometry.

Lengths are in Bohr radii, times in Bohr radii over the sound speed, and the
substrate temperature enters only as ``tau = T / T_s``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

DISTANCE_DEDUP_TOL = 1e-9
SPIN_LABELS = (-0.5, 0.5)


class GeometryError(ValueError):
    """Raised for an invalid qubit configuration or temperature."""


def _vec3(v, name):
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise GeometryError(f"{name} must be a finite 3-vector, got {v!r}")
    return tuple(float(x) for x in arr)


@dataclass(frozen=True)
class SubstrateContext:
    """Dimensionless substrate temperature ``tau = T / T_s``."""

    tau: float

    def __post_init__(self):
        if not np.isfinite(self.tau) or self.tau < 0:
            raise GeometryError(f"tau must be >= 0, got {self.tau!r}")


@dataclass(frozen=True)
class QubitGeometry:
    """Centers ``r1, r2`` and inter-donor vectors ``d1, d2`` of the two qubits.

    Each ``d_b`` points from the ``m = -1/2`` site to the ``m = +1/2`` site.
    """

    r1: tuple = (0.0, 0.0, 0.0)
    r2: tuple = (20.0, 0.0, 0.0)
    d1: tuple = (10.0, 0.0, 0.0)
    d2: tuple = field(
        default=(10.0 * np.cos(np.pi / 4), 10.0 * np.sin(np.pi / 4), 0.0)
    )

    def __post_init__(self):
        for name in ("r1", "r2", "d1", "d2"):
            object.__setattr__(self, name, _vec3(getattr(self, name), name))
        n1 = np.linalg.norm(self.d1)
        n2 = np.linalg.norm(self.d2)
        if n1 <= 0 or n2 <= 0:
            raise GeometryError("inter-donor vectors d1, d2 must be nonzero")
        sep = np.linalg.norm(np.subtract(self.r1, self.r2))
        if not sep > max(n1, n2):
            raise GeometryError(
                f"qubit separation |r1 - r2| = {sep:g} must exceed the "
                f"inter-donor distance max(|d1|, |d2|) = {max(n1, n2):g}"
            )

    @classmethod
    def from_angle(cls, d_len=10.0, separation=20.0, angle_deg=45.0):
        """Build the default orientation: ``d1`` along the qubit axis,
        ``d2`` rotated by ``angle_deg`` in the xy-plane."""
        ang = np.deg2rad(angle_deg)
        return cls(
            r1=(0.0, 0.0, 0.0),
            r2=(separation, 0.0, 0.0),
            d1=(d_len, 0.0, 0.0),
            d2=(d_len * np.cos(ang), d_len * np.sin(ang), 0.0),
        )

    def center(self, b):
        return np.array(self.r1 if b == 1 else self.r2)

    def dipole(self, b):
        return np.array(self.d1 if b == 1 else self.d2)

    def site(self, b, m):
        """Position ``r_b + m d_b`` of the site with spin label ``m``."""
        if b not in (1, 2):
            raise GeometryError(f"qubit index must be 1 or 2, got {b!r}")
        return self.center(b) + m * self.dipole(b)

    def site_distance(self, b, m, b_prime, s):
        return float(np.linalg.norm(self.site(b, m) - self.site(b_prime, s)))

    def to_dict(self):
        return {k: list(getattr(self, k)) for k in ("r1", "r2", "d1", "d2")}


DEFAULT_GEOMETRY = QubitGeometry()


def donor_positions(geom: QubitGeometry) -> list[np.ndarray]:
    """The four donor sites: qubit 1 minus/plus, then qubit 2 minus/plus."""
    return [geom.site(b, m) for b in (1, 2) for m in SPIN_LABELS]


def _dedup_sorted(values, tol=DISTANCE_DEDUP_TOL):
    out = []
    for v in sorted(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return tuple(out)


def distance_set(geom: QubitGeometry, qubits=(1, 2)) -> tuple[float, ...]:
    """Sorted, deduplicated pairwise distances among the donor sites.

    Zero (the self-distance) is always the first entry.  These are the
    kink locations of the decoherence integrand.  ``qubits=(1,)`` restricts
    the set to the sites of a single qubit.
    """
    sites = [geom.site(b, m) for b in qubits for m in SPIN_LABELS]
    dists = [0.0]
    for i, j in product(range(len(sites)), repeat=2):
        if i < j:
            dists.append(float(np.linalg.norm(sites[i] - sites[j])))
    out = _dedup_sorted(dists)
    # tiny rounding must not produce a spurious near-zero entry
    return (0.0,) + tuple(d for d in out[1:] if d > DISTANCE_DEDUP_TOL)
