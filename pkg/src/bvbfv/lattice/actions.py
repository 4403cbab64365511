"""Discrete action functionals: bulk topological terms and their edge partners.

Conventions (validated jointly by the failure identities):

* one-forms and two-forms are dicts of matrix-valued component arrays;
* (P wedge Q)_{xyz} = P_x Q_{yz} - P_y Q_{xz} + P_z Q_{xy} for a one-form P
  and two-form Q, with matrix products inside and the trace at the end;
* the graded self-bracket of a one-form has components [A,A]_{ij} = 2[A_i,A_j];
* the slab boundary is the top torus minus the bottom torus.
"""

from __future__ import annotations

from typing import Callable, Dict

import numpy as np

from .fields import dagger
from .grid import Grid2, Grid3, simpson_weights


def tr(m: np.ndarray) -> np.ndarray:
    return np.trace(m, axis1=-2, axis2=-1)


def comm(a, b):
    return a @ b - b @ a


# ---------------------------------------------------------------------------
# Differential helpers


def curvature_2d(A: Dict[str, np.ndarray], grid: Grid2) -> np.ndarray:
    return grid.dx(A["y"]) - grid.dy(A["x"]) + comm(A["x"], A["y"])


def curvature_3d(A: Dict[str, np.ndarray], grid: Grid3) -> Dict[str, np.ndarray]:
    return {
        "xy": grid.dx(A["y"]) - grid.dy(A["x"]) + comm(A["x"], A["y"]),
        "xz": grid.dx(A["z"]) - grid.dz(A["x"]) + comm(A["x"], A["z"]),
        "yz": grid.dy(A["z"]) - grid.dz(A["y"]) + comm(A["y"], A["z"]),
    }


def one_form_d(A: Dict[str, np.ndarray], grid: Grid3) -> Dict[str, np.ndarray]:
    return {
        "xy": grid.dx(A["y"]) - grid.dy(A["x"]),
        "xz": grid.dx(A["z"]) - grid.dz(A["x"]),
        "yz": grid.dy(A["z"]) - grid.dz(A["y"]),
    }


def wedge_12_trace(P: Dict[str, np.ndarray], Q: Dict[str, np.ndarray]) -> np.ndarray:
    """tr of the top-form (P wedge Q) for one-form P and two-form Q on a slab."""
    return tr(P["x"] @ Q["yz"] - P["y"] @ Q["xz"] + P["z"] @ Q["xy"])


def gauge_transform_cs(A: Dict[str, np.ndarray], g: np.ndarray, grid) -> Dict[str, np.ndarray]:
    gi = dagger(g)
    axes = {"x": 0, "y": 1, "z": 2}
    return {k: gi @ v @ g + gi @ grid.d(g, axes[k]) for k, v in A.items()}


def gauge_transform_bf(A, B, g, tau, grid):
    """(A, B) acted by the semidirect pair (g, tau)."""
    gi = dagger(g)
    Ag = gauge_transform_cs(A, g, grid)
    axes = {"x": 0, "y": 1, "z": 2}
    Bg = {k: gi @ B[k] @ g + grid.d(tau, axes[k]) + comm(Ag[k], tau) for k in B}
    return Ag, Bg


def group_compose(h, chi, g, tau):
    """(h, chi) . (g, tau) = (h g, g^-1 chi g + tau)."""
    return h @ g, dagger(g) @ chi @ g + tau


def group_inverse(g, tau):
    return dagger(g), -(g @ tau @ dagger(g))


# ---------------------------------------------------------------------------
# Bulk actions


def cs_action(A: Dict[str, np.ndarray], grid: Grid3) -> complex:
    dA = one_form_d(A, grid)
    FF = {k: 2 * v for k, v in {
        "xy": comm(A["x"], A["y"]),
        "xz": comm(A["x"], A["z"]),
        "yz": comm(A["y"], A["z"]),
    }.items()}
    dens = 0.5 * wedge_12_trace(A, dA) + (1.0 / 6.0) * wedge_12_trace(A, FF)
    return grid.integrate(dens)


def bf_action(A: Dict[str, np.ndarray], B: Dict[str, np.ndarray], grid: Grid3) -> complex:
    F = curvature_3d(A, grid)
    return grid.integrate(wedge_12_trace(B, F))


# ---------------------------------------------------------------------------
# Boundary functionals (single torus; slab assembly subtracts the bottom)


def two_form_pair_11(P: Dict[str, np.ndarray], Q: Dict[str, np.ndarray]) -> np.ndarray:
    """tr (P wedge Q)_{xy} for two boundary one-forms."""
    return tr(P["x"] @ Q["y"] - P["y"] @ Q["x"])


def maurer_cartan(g: np.ndarray, grid: Grid2) -> Dict[str, np.ndarray]:
    gi = dagger(g)
    return {"x": gi @ grid.dx(g), "y": gi @ grid.dy(g)}


def right_log_derivative(g: np.ndarray, grid: Grid2) -> Dict[str, np.ndarray]:
    gi = dagger(g)
    return {"x": grid.dx(g) @ gi, "y": grid.dy(g) @ gi}


def wz_action(gamma: Callable[[float], np.ndarray], g_hist, grid: Grid2, T: int) -> complex:
    """Path formula for the bulk three-form term:

    S = - int_0^1 dt (1/2) int <g^-1 dg, d gamma_t>  (Simpson in t).
    """
    w = simpson_weights(T + 1, 1.0 / T)
    total = 0.0
    for step in range(T + 1):
        t = step / T
        phi = maurer_cartan(g_hist[step], grid)
        gam = gamma(t)
        dgam = {"x": grid.dx(gam), "y": grid.dy(gam)}
        total = total + w[step] * grid.integrate(two_form_pair_11(phi, dgam))
    return -0.5 * total


def gwz_action(A: Dict[str, np.ndarray], g: np.ndarray, wz_term: complex, grid: Grid2) -> complex:
    """(1/2) int <A, dg g^-1> - (WZ term supplied by the path formula)."""
    V = right_log_derivative(g, grid)
    return 0.5 * grid.integrate(two_form_pair_11(A, V)) - wz_term


def dolbeault_components(P: Dict[str, np.ndarray]):
    """dz and dzbar coefficients of a boundary one-form, z = x + i y."""
    return 0.5 * (P["x"] - 1j * P["y"]), 0.5 * (P["x"] + 1j * P["y"])


def dolbeault_scalar(f: np.ndarray, grid: Grid2):
    """(d/dz f, d/dzbar f)."""
    return 0.5 * (grid.dx(f) - 1j * grid.dy(f)), 0.5 * (grid.dx(f) + 1j * grid.dy(f))


DZ_DZBAR = -2j  # dz wedge dzbar = -2i dx wedge dy


def pair_10_01(P10: np.ndarray, Q01: np.ndarray, grid: Grid2) -> complex:
    """int <P^{1,0} wedge Q^{0,1}> over the torus."""
    return DZ_DZBAR * grid.integrate(tr(P10 @ Q01))


def gwzw10_action(A: Dict[str, np.ndarray], g: np.ndarray, wz_term: complex, grid: Grid2) -> complex:
    """int <A^{1,0}, dbar(g) g^-1> + (1/2) <g^-1 dg(1,0), g^-1 dg(0,1)> - WZ."""
    A10, _ = dolbeault_components(A)
    V = right_log_derivative(g, grid)
    _, V01 = dolbeault_components(V)
    phi = maurer_cartan(g, grid)
    p10, p01 = dolbeault_components(phi)
    return pair_10_01(A10, V01, grid) + 0.5 * pair_10_01(p10, p01, grid) - wz_term


def s_tau_f(g: np.ndarray, tau: np.ndarray, A: Dict[str, np.ndarray], grid: Grid2) -> complex:
    """int <g tau g^-1, F_A> over the boundary torus."""
    F = curvature_2d(A, grid)
    return grid.integrate(tr((g @ tau @ dagger(g)) @ F))


def s_tau_f_10(g, tau, A, B, grid: Grid2) -> complex:
    """int <(A^{1,0})^g, dbar tau> + <g^-1 B^{1,0} g, (A^{0,1})^g> - <B^{1,0}, A^{0,1}>.

    The subtraction makes the functional vanish at the identity pair; it is
    the untransformed value of the polarising cross-term, which the failure
    of the polarised action produces as a difference.
    """
    Ag = gauge_transform_cs(A, g, grid)
    Ag10, Ag01 = dolbeault_components(Ag)
    _, dbar_tau = dolbeault_scalar(tau, grid)
    B10, A01 = dolbeault_components(B)[0], dolbeault_components(A)[1]
    gBg10 = dagger(g) @ B10 @ g
    return (
        DZ_DZBAR * grid.integrate(tr(Ag10 @ dbar_tau))
        + pair_10_01(gBg10, Ag01, grid)
        - pair_10_01(B10, A01, grid)
    )


# ---------------------------------------------------------------------------
# Abelian light-cone edge (coordinates: axis 0 = t, axis 1 = x)

LC_MEASURE = 2.0  # dx_+ wedge dx_- = 2 dt wedge dx


def lc_components(A: Dict[str, np.ndarray]):
    """A_+ and A_- with x_+- = x +- t (axis order: t = 'x' slot, x = 'y' slot)."""
    At, Ax = A["x"], A["y"]
    return 0.5 * (Ax + At), 0.5 * (Ax - At)


def lc_derivatives(f: np.ndarray, grid: Grid2):
    """(d_+ f, d_- f) = ((d_x +- d_t)/2) f."""
    dt, dx = grid.dx(f), grid.dy(f)
    return 0.5 * (dx + dt), 0.5 * (dx - dt)


def pair_k(x: np.ndarray, y: np.ndarray, kmat: np.ndarray) -> np.ndarray:
    return np.einsum("...a,ab,...b->...", x, kmat, y)


def edge_chiral_action(A: Dict[str, np.ndarray], phi: np.ndarray, kmat, grid: Grid2) -> float:
    """int (A_+ d_- phi + (1/2) A_+ A_- + (1/2) d_+ phi d_- phi)."""
    Ap, Am = lc_components(A)
    dp, dm = lc_derivatives(phi, grid)
    dens = pair_k(Ap, dm, kmat) + 0.5 * pair_k(Ap, Am, kmat) + 0.5 * pair_k(dp, dm, kmat)
    return float(np.real(LC_MEASURE * grid.integrate(dens)))


def edge_gwzw_plus(A: Dict[str, np.ndarray], phi: np.ndarray, kmat, grid: Grid2) -> float:
    Ap, _ = lc_components(A)
    dp, dm = lc_derivatives(phi, grid)
    dens = pair_k(Ap, dm, kmat) + 0.5 * pair_k(dp, dm, kmat)
    return float(np.real(LC_MEASURE * grid.integrate(dens)))


def edge_polarising_term(A: Dict[str, np.ndarray], kmat, grid: Grid2) -> float:
    Ap, Am = lc_components(A)
    return float(np.real(LC_MEASURE * grid.integrate(0.5 * pair_k(Ap, Am, kmat))))


def abelian_cs_action(A: Dict[str, np.ndarray], kmat, grid: Grid3) -> float:
    """(1/2) int <A, dA> for R^K-valued A on the slab."""
    dA = {
        "xy": grid.dx(A["y"]) - grid.dy(A["x"]),
        "xz": grid.dx(A["z"]) - grid.dz(A["x"]),
        "yz": grid.dy(A["z"]) - grid.dz(A["y"]),
    }
    dens = (
        pair_k(A["x"], dA["yz"], kmat)
        - pair_k(A["y"], dA["xz"], kmat)
        + pair_k(A["z"], dA["xy"], kmat)
    )
    return float(np.real(0.5 * grid.integrate(dens)))
