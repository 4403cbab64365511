"""Lattice building blocks: flows, grids, actions."""

import numpy as np
import pytest

from bvbfv.lattice import actions as act
from bvbfv.lattice.fields import (
    SIGMA,
    dagger,
    mexp_su2,
    su2_one_form_recipe,
    su2_path_recipe,
    su2_recipe,
    eval_one_form,
    unitarity_drift,
    unitarize,
)
from bvbfv.lattice.flows import flow_gauge_field, pexp, pexp_path, tau_path_endpoint
from bvbfv.lattice.grid import Grid2, Grid3, simpson_weights


def test_pexp_constant_generator_closed_form():
    g2 = Grid2(8)
    rng = np.random.default_rng(0)
    gamma0 = su2_recipe(rng, 1, 0.3, slab=False).eval(g2)

    g = pexp(lambda t: gamma0, 64)
    exact = mexp_su2(gamma0)
    assert np.abs(g - exact).max() <= 1e-10


def test_pexp_zero_is_identity():
    g2 = Grid2(8)
    zero = np.zeros(g2.x.shape + (2, 2), dtype=complex)
    g = pexp(lambda t: zero, 16)
    assert np.abs(g - np.eye(2)).max() == 0.0


def test_pexp_fourth_order():
    g2 = Grid2(6)
    rng = np.random.default_rng(1)
    rec = su2_path_recipe(rng, 1, 0.3, slab=False)
    gam = rec.on_grid(g2)
    ref = pexp(gam, 512)
    errs = []
    for T in (8, 16, 32, 64):
        errs.append(np.abs(pexp(gam, T) - ref).max())
    orders = [np.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert all(abs(o - 4) <= 0.3 for o in orders)


def test_unitarity_drift_bounded():
    g2 = Grid2(8)
    rng = np.random.default_rng(2)
    gam = su2_path_recipe(rng, 1, 0.3, slab=False).on_grid(g2)
    g = pexp(gam, 64)
    assert unitarity_drift(g) <= 1e-12


def test_grid_derivative_orders():
    N = 32
    for mode, expected in (("fd2", 2), ("fd4", 4)):
        errs = []
        for n in (N, 2 * N):
            g = Grid2(n, deriv=mode)
            f = np.sin(2 * np.pi * g.x) * np.cos(4 * np.pi * g.y)
            df = 2 * np.pi * np.cos(2 * np.pi * g.x) * np.cos(4 * np.pi * g.y)
            errs.append(np.abs(g.dx(f) - df).max())
        order = np.log2(errs[0] / errs[1])
        assert abs(order - expected) < 0.3
    g = Grid2(N, deriv="spectral")
    f = np.sin(2 * np.pi * g.x) * np.cos(4 * np.pi * g.y)
    df = 2 * np.pi * np.cos(2 * np.pi * g.x) * np.cos(4 * np.pi * g.y)
    assert np.abs(g.dx(f) - df).max() < 1e-12


def test_simpson_weights_integrate_cubics():
    w = simpson_weights(9, 1.0 / 8)
    z = np.linspace(0, 1, 9)
    assert abs(np.sum(w * z**3) - 0.25) < 1e-14


def test_slab_stokes_with_identity_gauge():
    # with g = id, tau arbitrary: the bulk action difference is the integral of
    # an exact form, matching the boundary functional to second order
    errs = []
    rng = np.random.default_rng(3)
    gamma_zero_rec = None
    from bvbfv.lattice.fields import SU2Recipe, su2_one_form_recipe, su2_recipe

    tau_rec = su2_recipe(rng, 1, 0.3, slab=True)
    A_rec = su2_one_form_recipe(rng, 1, 0.3, slab=True)
    B_rec = su2_one_form_recipe(rng, 1, 0.3, slab=True)
    for N in (8, 16):
        g3 = Grid3(N, deriv="fd2")
        g2 = Grid2(N, deriv="fd2")
        tau = tau_rec.eval(g3)
        A = eval_one_form(A_rec, g3)
        B = eval_one_form(B_rec, g3)
        gid = np.broadcast_to(np.eye(2, dtype=complex), tau.shape).copy()
        Ag, Bg = act.gauge_transform_bf(A, B, gid, tau, g3)
        lhs = act.bf_action(Ag, Bg, g3) - act.bf_action(A, B, g3)
        rhs = act.s_tau_f(gid[:, :, -1], tau[:, :, -1], {k: A[k][:, :, -1] for k in ("x", "y")}, g2) - act.s_tau_f(
            gid[:, :, 0], tau[:, :, 0], {k: A[k][:, :, 0] for k in ("x", "y")}, g2
        )
        errs.append(abs(complex(lhs) - complex(rhs)))
    assert errs[1] < errs[0] / 2.5


def test_gauge_group_law():
    # the law involves lattice derivatives of products, so it holds to the
    # derivative kernel's accuracy: near machine for trig kernels on smooth
    # fields, second order for stencils
    g2 = Grid2(16, deriv="spectral")
    rng = np.random.default_rng(4)
    A = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=False), g2)
    B = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=False), g2)
    g = mexp_su2(su2_recipe(rng, 1, 0.3, slab=False).eval(g2))
    tau = su2_recipe(rng, 1, 0.3, slab=False).eval(g2)
    h = mexp_su2(su2_recipe(rng, 1, 0.3, slab=False).eval(g2))
    chi = su2_recipe(rng, 1, 0.3, slab=False).eval(g2)
    cg, ctau = act.group_compose(h, chi, g, tau)
    A1, B1 = act.gauge_transform_bf(A, B, h, chi, g2)
    A2, B2 = act.gauge_transform_bf(A1, B1, g, tau, g2)
    A12, B12 = act.gauge_transform_bf(A, B, cg, ctau, g2)
    err = max(np.abs(A2[k] - A12[k]).max() for k in A) + max(np.abs(B2[k] - B12[k]).max() for k in B)
    assert err <= 1e-6

    errs = []
    for N in (8, 16):
        gfd = Grid2(N, deriv="fd2")
        rng = np.random.default_rng(4)
        Af = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=False), gfd)
        Bf = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=False), gfd)
        gf = mexp_su2(su2_recipe(rng, 1, 0.3, slab=False).eval(gfd))
        tf = su2_recipe(rng, 1, 0.3, slab=False).eval(gfd)
        hf = mexp_su2(su2_recipe(rng, 1, 0.3, slab=False).eval(gfd))
        cf = su2_recipe(rng, 1, 0.3, slab=False).eval(gfd)
        cgf, ctf = act.group_compose(hf, cf, gf, tf)
        A1f, B1f = act.gauge_transform_bf(Af, Bf, hf, cf, gfd)
        A2f, B2f = act.gauge_transform_bf(A1f, B1f, gf, tf, gfd)
        A12f, B12f = act.gauge_transform_bf(Af, Bf, cgf, ctf, gfd)
        errs.append(max(np.abs(A2f[k] - A12f[k]).max() for k in Af))
    assert errs[1] < errs[0] / 2.5


def test_group_inverse():
    rng = np.random.default_rng(5)
    g2 = Grid2(6)
    g = mexp_su2(su2_recipe(rng, 1, 0.3, slab=False).eval(g2))
    tau = su2_recipe(rng, 1, 0.3, slab=False).eval(g2)
    gi, taui = act.group_inverse(g, tau)
    cg, ctau = act.group_compose(gi, taui, g, tau)
    assert np.abs(cg - np.eye(2)).max() < 1e-12
    assert np.abs(ctau).max() < 1e-12


def test_wz_vanishes_for_identity_path():
    g2 = Grid2(8)
    zero = np.zeros(g2.x.shape + (2, 2), dtype=complex)
    hist = pexp_path(lambda t: zero, 16)
    val = act.wz_action(lambda t: zero, hist, g2, 16)
    assert abs(val) == 0.0


def test_orientation_flip_changes_sign():
    # reflecting the slab along its free direction swaps the two boundary
    # tori, so every boundary functional assembled as (top - bottom) flips
    rng = np.random.default_rng(6)
    g3 = Grid3(8)
    g2 = Grid2(8)
    A = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=True), g3)
    g = mexp_su2(su2_recipe(rng, 1, 0.3, slab=True).eval(g3))
    tau = su2_recipe(rng, 1, 0.3, slab=True).eval(g3)

    def boundary_sum(Af, gf, tf):
        top = act.s_tau_f(gf[:, :, -1], tf[:, :, -1], {k: Af[k][:, :, -1] for k in ("x", "y")}, g2)
        bot = act.s_tau_f(gf[:, :, 0], tf[:, :, 0], {k: Af[k][:, :, 0] for k in ("x", "y")}, g2)
        return complex(top - bot)

    v = boundary_sum(A, g, tau)
    flipped = boundary_sum({k: A[k][:, :, ::-1] for k in A}, g[:, :, ::-1], tau[:, :, ::-1])
    assert abs(v + flipped) <= 1e-12 * max(1.0, abs(v))


def test_flow_matches_algebraic_transport():
    g2 = Grid2(12, deriv="spectral")
    rng = np.random.default_rng(7)
    gam = su2_path_recipe(rng, 1, 0.25, slab=False).on_grid(g2)
    A0 = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=False), g2)
    g1 = pexp(gam, 128)
    A_alg = act.gauge_transform_cs(A0, g1, g2)
    A_ode = flow_gauge_field(A0, gam, g2, 128)
    err = max(np.abs(A_alg[k] - A_ode[k]).max() for k in A_alg)
    assert err <= 1e-6


def test_tau_path_endpoint_zero_current():
    g2 = Grid2(6)
    rng = np.random.default_rng(8)
    gam = su2_path_recipe(rng, 1, 0.25, slab=False).on_grid(g2)
    zero = np.zeros(g2.x.shape + (2, 2), dtype=complex)
    g1, tau1 = tau_path_endpoint(gam, lambda t: zero, 32)
    assert np.abs(tau1).max() == 0.0


def test_lightcone_component_roundtrip():
    g2 = Grid2(8)
    rng = np.random.default_rng(9)
    At = rng.normal(size=(8, 8, 1))
    Ax = rng.normal(size=(8, 8, 1))
    Ap, Am = act.lc_components({"x": At, "y": Ax})
    assert np.allclose(Ap + Am, Ax) and np.allclose(Ap - Am, At)


def test_wz_abelian_degeneration():
    # fields in a commuting subalgebra: the cubic bulk term vanishes, and the
    # path formula reproduces that to machine precision
    g2 = Grid2(16, deriv="spectral")
    scalars = [np.cos(2 * np.pi * (g2.x + 2 * g2.y)), np.sin(2 * np.pi * g2.y)]
    def gam(t):
        f = 0.1 * (scalars[0] + t * scalars[1])
        return 1j * f[..., None, None] * SIGMA[2]
    T = 64
    hist = pexp_path(gam, T)
    val = act.wz_action(gam, hist, g2, T)
    # residue is the aliasing of the group element's harmonics, far below the
    # generic scale of the functional
    assert abs(val) <= 1e-9


def test_cs_failure_constant_gauge_transformation():
    # dg = 0: both the action difference and the boundary functional vanish
    rng = np.random.default_rng(12)
    g3 = Grid3(8)
    g2 = Grid2(8)
    A = eval_one_form(su2_one_form_recipe(rng, 1, 0.3, slab=True), g3)
    const_alg = 1j * (0.2 * SIGMA[0] + 0.1 * SIGMA[1])
    g = np.broadcast_to(mexp_su2(const_alg), A["x"].shape).copy()
    Ag = act.gauge_transform_cs(A, g, g3)
    lhs = act.cs_action(Ag, g3) - act.cs_action(A, g3)
    V = act.right_log_derivative(g[:, :, -1], g2)
    rhs = 0.5 * g2.integrate(act.two_form_pair_11({k: A[k][:, :, -1] for k in ("x", "y")}, V))
    assert abs(complex(lhs)) <= 1e-12 and abs(complex(rhs)) <= 1e-12
