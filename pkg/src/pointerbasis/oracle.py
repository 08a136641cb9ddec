"""Brute-force classical correlation via projective measurements on qubit B.

This path never uses the X-state formulas: it builds the dense 4x4 matrix,
applies rank-1 projectors on B, and maximizes the extracted information
over the Bloch sphere by a grid scan followed by 1-D refinements.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .correlations import XState, k_function

DEGENERATE_PROB = 1e-14
TIE_TOL = 1e-12


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal pair on B parametrized by Bloch angles.

    In the local order ``(|1/2>, |-1/2>)``::

        psi1 = cos(theta/2) |-1/2> + e^{i phi} sin(theta/2) |1/2>
        psi2 = cos(theta/2) |1/2>  - e^{-i phi} sin(theta/2) |-1/2>
    """

    theta: float
    phi: float

    def vectors(self):
        ct, st = np.cos(self.theta / 2), np.sin(self.theta / 2)
        psi1 = np.array([np.exp(1j * self.phi) * st, ct])
        psi2 = np.array([ct, -np.exp(-1j * self.phi) * st])
        return psi1, psi2

    def projectors(self):
        return [np.outer(v, v.conj()) for v in self.vectors()]


class Outcome(NamedTuple):
    probability: float
    state: np.ndarray
    degenerate: bool


def densify(state: XState) -> np.ndarray:
    """4x4 matrix of an X state (basis ``|1/2,1/2>, |1/2,-1/2>, |-1/2,1/2>, |-1/2,-1/2>``)."""
    p, b, c = state.p, float(state.b), float(state.c)
    rho = np.zeros((4, 4), dtype=complex)
    rho[[0, 3], [0, 3]] = p / 2
    rho[[1, 2], [1, 2]] = (1 - p) / 2
    rho[0, 3] = rho[3, 0] = b / 2
    rho[1, 2] = rho[2, 1] = c / 2
    return rho


def check_density_matrix(rho, herm_tol=1e-14, trace_tol=1e-12, eig_tol=1e-10):
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > trace_tol:
        raise ValueError("density matrix trace differs from 1")
    if np.min(np.linalg.eigvalsh(rho)) < -eig_tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def partial_trace_b(rho):
    return np.einsum("ibjb->ij", np.asarray(rho).reshape(2, 2, 2, 2))


def partial_trace_a(rho):
    return np.einsum("aiaj->ij", np.asarray(rho).reshape(2, 2, 2, 2))


def _eig2(m):
    """Eigenvalues of (stacks of) 2x2 Hermitian matrices, ascending."""
    tr = np.real(m[..., 0, 0] + m[..., 1, 1])
    disc = np.sqrt(np.real(m[..., 0, 0] - m[..., 1, 1]) ** 2 + 4 * np.abs(m[..., 0, 1]) ** 2)
    return np.stack([(tr - disc) / 2, (tr + disc) / 2], axis=-1)


def _neg_xlogx(x):
    x = np.clip(x, 0.0, None)
    safe = np.where(x > 0, x, 1.0)
    return -np.where(x > 0, x * np.log2(safe), 0.0)


def entropy2(m):
    """Von Neumann entropy (bits) of 2x2 density matrices."""
    return np.sum(_neg_xlogx(_eig2(m)), axis=-1)


def _post_measurement(rho, proj):
    """Unnormalized A states ``Tr_B[(1 x P) rho (1 x P)]`` for a stack of projectors."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    # rows (i, j), columns (c, b): a single (n, 4) @ (4, 4) product
    r2 = r.transpose(0, 2, 3, 1).reshape(4, 4)
    return (proj.reshape(-1, 4) @ r2.T).reshape(-1, 2, 2)


def conditional_decomposition(rho, basis: MeasurementBasis) -> list[Outcome]:
    """Outcome probabilities and normalized A states for a measurement on B.

    A branch with probability below 1e-14 is returned as ``I/2`` and flagged.
    """
    out = []
    for proj in basis.projectors():
        m = _post_measurement(rho, proj[None])[0]
        pk = float(np.real(np.trace(m)))
        if pk < DEGENERATE_PROB:
            out.append(Outcome(max(pk, 0.0), np.eye(2) / 2, True))
        else:
            out.append(Outcome(pk, m / pk, False))
    return out


def _info_from_projectors(rho, proj1):
    """Classical information for a stack of first projectors (second = 1 - P)."""
    s_a = entropy2(partial_trace_b(rho))
    m1 = _post_measurement(rho, proj1)
    m2 = partial_trace_b(rho)[None] - m1
    cond = 0.0
    for m in (m1, m2):
        pk = np.clip(np.real(m[:, 0, 0] + m[:, 1, 1]), 0.0, None)
        # p_k S(rho_k) = -sum lam lg lam + p_k lg p_k for unnormalized eigenvalues lam
        cond = cond + np.sum(_neg_xlogx(_eig2(m)), axis=-1) - _neg_xlogx(pk)
    return s_a - cond


def _projector_stack(theta, phi):
    theta, phi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(phi, float))
    v = np.stack([np.exp(1j * phi) * np.sin(theta / 2), np.cos(theta / 2) + 0j], axis=-1)
    return np.einsum("...i,...j->...ij", v, v.conj()).reshape(-1, 2, 2)


def classical_info_at(rho, basis: MeasurementBasis) -> float:
    """``S(rho_A) - sum_k p_k S(rho_k)`` for the measurement ``basis`` on B."""
    rho = densify(rho) if isinstance(rho, XState) else np.asarray(rho)
    return float(_info_from_projectors(rho, _projector_stack(basis.theta, basis.phi))[0])


def g_closed_form(state: XState, theta, phi):
    """``sqrt(a^2 cos^2 theta + sin^2 theta (b^2 + c^2 + 2 b c cos 2 phi))``."""
    b, c = float(state.b), float(state.c)
    inner = b * b + c * c + 2 * b * c * np.cos(2 * phi)
    val = state.a ** 2 * np.cos(theta) ** 2 + np.sin(theta) ** 2 * inner
    return np.sqrt(np.clip(val, 0.0, None))


def G_closed_form(state: XState, theta, phi):
    """Extracted information ``1 - K(g)`` for the basis ``(theta, phi)``."""
    return 1.0 - k_function(np.minimum(g_closed_form(state, theta, phi), 1.0))


@lru_cache(maxsize=4)
def _grid(n_theta, n_phi):
    theta = np.linspace(0.0, np.pi, n_theta)
    phi = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    proj = _projector_stack(tt, pp)
    proj.setflags(write=False)
    return theta, phi, proj


def maximize_classical(rho, grid=(181, 361), refine_tol=1e-9, max_rounds=50):
    """Maximize the extracted information over projective bases on B.

    Coarse scan on a ``grid = (n_theta, n_phi)`` lattice (theta in ``[0, pi]``,
    phi in ``[0, 2 pi)``), ties resolved toward smaller theta then smaller
    phi, followed by alternating bounded 1-D searches in theta and phi
    within one grid cell until the gain drops below ``refine_tol``.

    :return: ``(C_max, MeasurementBasis)``.
    """
    n_theta, n_phi = grid
    if n_theta < 61 or n_phi < 121:
        raise ValueError("grid must be at least 61 x 121")
    rho = densify(rho) if isinstance(rho, XState) else np.asarray(rho)
    theta, phi, proj = _grid(n_theta, n_phi)
    vals = _info_from_projectors(rho, proj)
    best = int(np.flatnonzero(vals >= vals.max() - TIE_TOL)[0])
    i, j = divmod(best, n_phi)
    th, ph, cur = float(theta[i]), float(phi[j]), float(vals[best])

    dth, dph = theta[1] - theta[0], phi[1] - phi[0]

    def info(t, f):
        return float(_info_from_projectors(rho, _projector_stack(t, f))[0])

    for _ in range(max_rounds):
        start = cur
        r = minimize_scalar(
            lambda t: -info(t, ph), bounds=(max(th - dth, 0.0), min(th + dth, np.pi)),
            method="bounded", options={"xatol": 1e-10},
        )
        if -r.fun > cur + TIE_TOL:
            th, cur = float(r.x), -float(r.fun)
        r = minimize_scalar(
            lambda f: -info(th, f), bounds=(ph - dph, ph + dph),
            method="bounded", options={"xatol": 1e-10},
        )
        if -r.fun > cur + TIE_TOL:
            ph, cur = float(r.x) % (2 * np.pi), -float(r.fun)
        if cur - start < refine_tol:
            break
    return cur, MeasurementBasis(th, ph)
