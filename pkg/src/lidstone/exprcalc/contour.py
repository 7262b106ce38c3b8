"""Mixed partial derivatives of analytic functions by Cauchy integrals.

For f analytic on a closed polydisc around z0,

    D^t f(z0) = t! / r^|t| * mean over the torus of f(z0 + r e^{i theta}) e^{-i t.theta},

and the trapezoid rule on a uniform grid of ``nodes`` angles per variable
converges geometrically. Variables with t_j = 0 are not integrated over: the
mean value property makes their circle average equal to the centre value.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

__all__ = ["contour_derivative", "contour_derivatives", "ContourError"]


class ContourError(ArithmeticError):
    pass


def _torus_mean(f, t, z0, radius, nodes):
    n = len(z0)
    active = [j for j in range(n) if t[j] > 0]
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    if not active:
        pts = np.asarray(z0, dtype=complex)[None, :]
        vals = np.asarray(f(pts), dtype=complex).reshape(-1)
        return complex(vals[0])
    grids = np.meshgrid(*([theta] * len(active)), indexing="ij")
    shape = grids[0].shape
    pts = np.empty(shape + (n,), dtype=complex)
    for j in range(n):
        pts[..., j] = z0[j]
    phase = np.zeros(shape)
    for g, j in zip(grids, active):
        pts[..., j] = z0[j] + radius * np.exp(1j * g)
        phase = phase + t[j] * g
    vals = np.asarray(f(pts), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ContourError("oracle returned non-finite values on the contour")
    return complex(np.mean(vals * np.exp(-1j * phase)))


def contour_derivative(
    f: Callable[[np.ndarray], np.ndarray],
    t: Sequence[int],
    z0: Sequence[complex],
    radius: float = 1.0,
    nodes: int = 64,
    return_error: bool = False,
):
    """Approximate (D^t f)(z0) by trapezoid quadrature of the Cauchy integral.

    Parameters
    ----------
    f : callable
        Vectorized oracle mapping an array of points of shape (..., n) to
        complex values of shape (...).
    t : sequence of int
        Derivative order.
    z0 : sequence of complex
        Expansion point.
    radius : float
        Radius of every circle of the integration torus.
    nodes : int
        Quadrature nodes per integrated variable (>= 8).
    return_error : bool
        If True also return an error estimate: the difference from the same
        rule with ``nodes // 2`` nodes.

    Returns
    -------
    complex, or (complex, float) when ``return_error``.
    """
    t = [int(k) for k in t]
    z0 = [complex(z) for z in z0]
    if len(t) != len(z0):
        raise ValueError("dimension mismatch between t and z0")
    if nodes < 8:
        raise ValueError("nodes must be >= 8")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if max(t, default=0) >= nodes:
        raise ValueError("nodes must exceed every derivative order")
    scale = math.prod(math.factorial(k) for k in t) / radius ** sum(t)
    value = scale * _torus_mean(f, t, z0, radius, nodes)
    if not return_error:
        return value
    half = max(nodes // 2, max(t, default=0) + 1, 8)
    coarse = scale * _torus_mean(f, t, z0, radius, half)
    return value, abs(value - coarse)


def _torus_fft(f, active, z0, radius, nodes):
    n = len(z0)
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    grids = np.meshgrid(*([theta] * len(active)), indexing="ij")
    pts = np.empty(grids[0].shape + (n,), dtype=complex)
    for j in range(n):
        pts[..., j] = z0[j]
    for g, j in zip(grids, active):
        pts[..., j] = z0[j] + radius * np.exp(1j * g)
    vals = np.asarray(f(pts), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ContourError("oracle returned non-finite values on the contour")
    return np.fft.fftn(vals) / nodes ** len(active)


def contour_derivatives(f, ts, z0, radius: float = 1.0, nodes: int = 64) -> list[complex]:
    """Batched :func:`contour_derivative` for many orders at one point.

    Orders sharing the same set of differentiated variables reuse a single
    torus evaluation; the trapezoid sums for all of them are read off one
    FFT. Results equal the one-at-a-time rule up to roundoff.
    """
    z0 = [complex(z) for z in z0]
    ts = [tuple(int(k) for k in t) for t in ts]
    out: list = [None] * len(ts)
    groups: dict = {}
    for k, t in enumerate(ts):
        if len(t) != len(z0):
            raise ValueError("dimension mismatch between t and z0")
        if max(t, default=0) >= nodes:
            raise ValueError("nodes must exceed every derivative order")
        groups.setdefault(tuple(j for j, e in enumerate(t) if e > 0), []).append(k)
    for active, members in groups.items():
        if not active:
            val = complex(np.asarray(f(np.asarray(z0, dtype=complex)[None, :])).reshape(-1)[0])
            for k in members:
                out[k] = val
            continue
        coeffs = _torus_fft(f, list(active), z0, radius, nodes)
        for k in members:
            t = ts[k]
            scale = math.prod(math.factorial(e) for e in t) / radius ** sum(t)
            out[k] = complex(scale * coeffs[tuple(t[j] for j in active)])
    return out
