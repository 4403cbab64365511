"""Path-ordered exponentials and companion quadratures along the flow time.

The group path solves g' = g gamma_t pointwise with g_0 = id, integrated by
the classical fourth-order one-step method with re-unitarization; companion
integrals (the dual-sector path, Simpson accumulators) ride along on the same
time grid.
"""

from __future__ import annotations

from typing import Callable, List, Optional

import numpy as np

from .fields import EYE2, dagger, unitarize
from .grid import simpson_weights


def pexp(gamma: Callable[[float], np.ndarray], T: int, collect: Optional[Callable] = None,
         shape_like: Optional[np.ndarray] = None) -> np.ndarray:
    """Integrate g' = g gamma(t) on [0,1] with T fourth-order steps; g(0) = id.

    ``collect(step_index, t, g)`` is invoked at every node (0..T) and can be
    used to record boundary histories or accumulate quadratures without
    storing the full path.
    """
    if T < 8:
        raise ValueError("need at least 8 flow steps")
    g0_shape = gamma(0.0).shape if shape_like is None else shape_like.shape
    g = np.broadcast_to(EYE2, g0_shape).copy()
    dt = 1.0 / T
    if collect is not None:
        collect(0, 0.0, g)
    for step in range(T):
        t = step * dt
        k1 = g @ gamma(t)
        k2 = (g + 0.5 * dt * k1) @ gamma(t + 0.5 * dt)
        k3 = (g + 0.5 * dt * k2) @ gamma(t + 0.5 * dt)
        k4 = (g + dt * k3) @ gamma(t + dt)
        g = g + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        g = unitarize(g)
        if collect is not None:
            collect(step + 1, t + dt, g)
    return g


def pexp_path(gamma: Callable[[float], np.ndarray], T: int) -> List[np.ndarray]:
    """Full node history g_0..g_T (2d grids only; memory scales with T)."""
    hist: List[np.ndarray] = []

    def keep(step, t, g):
        hist.append(g.copy())

    pexp(gamma, T, collect=keep)
    return hist


def tau_path_endpoint(gamma: Callable, beta: Callable, T: int) -> tuple:
    """Endpoint (g_1, tau_1) of the semidirect path.

    tau_t = g_t^{-1} (int_0^t g_s beta_s g_s^{-1} ds) g_t; the integral is
    accumulated with Simpson weights on the flow nodes.
    """
    w = simpson_weights(T + 1, 1.0 / T)
    acc = {}

    def collect(step, t, g):
        integrand = g @ beta(t) @ dagger(g)
        if "sum" not in acc:
            acc["sum"] = w[step] * integrand
        else:
            acc["sum"] = acc["sum"] + w[step] * integrand

    g1 = pexp(gamma, T, collect=collect)
    tau1 = dagger(g1) @ acc["sum"] @ g1
    return g1, tau1


def flow_gauge_field(A0: dict, gamma: Callable, grid, T: int) -> dict:
    """Evolve A by dA/dt = d_{A} gamma_t (fourth-order steps, same time grid)."""
    A = {k: v.copy() for k, v in A0.items()}
    dt = 1.0 / T
    axes = {"x": 0, "y": 1, "z": 2}

    def rhs(Acur, t):
        g = gamma(t)
        return {
            k: grid.d(g, axes[k]) + Acur[k] @ g - g @ Acur[k]
            for k in Acur
        }

    for step in range(T):
        t = step * dt
        k1 = rhs(A, t)
        k2 = rhs({k: A[k] + 0.5 * dt * k1[k] for k in A}, t + 0.5 * dt)
        k3 = rhs({k: A[k] + 0.5 * dt * k2[k] for k in A}, t + 0.5 * dt)
        k4 = rhs({k: A[k] + dt * k3[k] for k in A}, t + dt)
        A = {k: A[k] + (dt / 6.0) * (k1[k] + 2 * k2[k] + 2 * k3[k] + k4[k]) for k in A}
    return A
