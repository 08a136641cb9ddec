"""Adaptive panel quadrature for piecewise-smooth integrands.

Every panel is split at the supplied breakpoints first, then each piece is
bisected until an order-``n`` Gauss-Legendre estimate agrees with the sum of
its two halves.  All pieces are processed together, so the integrand is
called with large arrays rather than scalars.
"""
from __future__ import annotations

import numpy as np


class QuadratureError(RuntimeError):
    """Raised when a panel fails to converge; carries the offending interval."""

    def __init__(self, message, panel=None, interval=None):
        super().__init__(message)
        self.panel = panel
        self.interval = interval


def _gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _rule(func, lo, hi, x, w):
    # returns shape (k, m) for m intervals
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.atleast_2d(np.asarray(func(nodes.ravel()), dtype=float))
    vals = vals.reshape(vals.shape[0], lo.size, x.size)
    return (vals @ w) * half[None, :]


def integrate_panels(func, edges, breakpoints=(), tol=1e-10, order=10, max_depth=50):
    """Integrate ``func`` over each consecutive panel ``[edges[i], edges[i+1]]``.

    :param func: vectorized callable; maps a 1-D array of times to an array of
        shape ``(n,)`` or ``(k, n)`` for ``k`` simultaneous integrands.
    :param edges: strictly ascending panel edges.
    :param breakpoints: locations where the integrand is not smooth; every
        panel containing one is split there before any adaptive refinement.
    :param tol: absolute error tolerance per panel, shared among its pieces in
        proportion to their width.
    :return: array of shape ``(k, len(edges) - 1)`` (``k`` dropped if the
        integrand is scalar).
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2:
        raise ValueError("need at least two panel edges")
    if np.any(np.diff(edges) <= 0):
        raise ValueError("panel edges must be strictly ascending")
    bps = np.asarray([b for b in breakpoints if edges[0] < b < edges[-1]], dtype=float)
    cuts = np.union1d(edges, bps)
    lo, hi = cuts[:-1], cuts[1:]
    owner = np.searchsorted(edges, lo, side="right") - 1
    panel_width = np.diff(edges)
    piece_tol = tol * (hi - lo) / panel_width[owner]

    x, w = _gauss_legendre(order)
    probe = np.asarray(func(np.array([edges[0]])), dtype=float)
    scalar = probe.ndim == 1
    out = np.zeros((np.atleast_2d(probe).shape[0], edges.size - 1))

    coarse = _rule(func, lo, hi, x, w)
    for _ in range(max_depth):
        mid = 0.5 * (lo + hi)
        left = _rule(func, lo, mid, x, w)
        right = _rule(func, mid, hi, x, w)
        fine = left + right
        err = np.max(np.abs(fine - coarse), axis=0)
        done = err <= piece_tol
        for k in range(out.shape[0]):
            np.add.at(out[k], owner[done], fine[k, done])
        todo = ~done
        if not np.any(todo):
            break
        failed = (owner[todo], err[todo])
        lo = np.concatenate([lo[todo], mid[todo]])
        hi = np.concatenate([mid[todo], hi[todo]])
        owner = np.concatenate([owner[todo], owner[todo]])
        piece_tol = np.concatenate([piece_tol[todo], piece_tol[todo]]) / 2
        coarse = np.concatenate([left[:, todo], right[:, todo]], axis=1)
    else:
        worst = int(np.argmax(failed[1]))
        p = int(failed[0][worst])
        raise QuadratureError(
            f"quadrature did not converge on panel {p} "
            f"[{edges[p]:.6g}, {edges[p + 1]:.6g}] (error estimate "
            f"{failed[1][worst]:.3g})",
            panel=p,
            interval=(float(edges[p]), float(edges[p + 1])),
        )
    return out[0] if scalar else out


def integrate(func, a, b, breakpoints=(), tol=1e-10, order=10):
    """Integral of ``func`` over ``[a, b]`` (``a <= b``)."""
    if b == a:
        return 0.0
    if b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    res = integrate_panels(func, [a, b], breakpoints, tol=tol, order=order)
    return res[..., 0] if np.ndim(res) > 1 else float(res[0])
