"""Refinement experiments for the finite (group-level) identities.

Every driver runs a sweep over grid sizes with one seed-fixed smooth field
configuration (recipes evaluated per grid), compares an independently
computed left and right side, fits the convergence order, and reports
pass/fail against the declared tolerance.

Error floors: once both sides agree to near machine precision the order fit
carries no information, so rows whose error sits below ``noise_floor`` are
accepted without an order requirement (noted in the report).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import actions as act
from .fields import (
    PathRecipe,
    dagger,
    eval_one_form,
    mexp_su2,
    scalar_path_recipe,
    scalar_vec_recipe,
    su2_one_form_recipe,
    su2_path_recipe,
    su2_recipe,
)
from .flows import pexp, pexp_path, tau_path_endpoint
from .grid import Grid2, Grid3, simpson_weights


@dataclass
class ExperimentConfig:
    experiment: str
    group: str = "su2"
    N_list: tuple = (8, 16, 32)
    T: int = 256
    seed: int = 42
    kmax: int = 1
    deriv: str = "spectral"
    amp_gamma: float = 0.25
    amp_field: float = 0.3
    tol_rel: float = 1e-4
    order_target: float = 1.8
    noise_floor: float = 1e-10
    n_u1: int = 1
    pairing: Optional[list] = None

    def normalized(self) -> "ExperimentConfig":
        if len(self.N_list) < 3:
            raise ValueError("refinement sweeps need at least 3 grid sizes")
        if list(self.N_list) != sorted(self.N_list) or any(
            b != 2 * a for a, b in zip(self.N_list, self.N_list[1:])
        ):
            raise ValueError("grid sizes must strictly double")
        if self.kmax > max(1, min(self.N_list) // 4):
            raise ValueError("smoothness bound: kmax must stay at or below N/4 on the coarsest grid")
        return self


@dataclass
class ExperimentRow:
    N: int
    T: int
    lhs: complex
    rhs: complex

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_err(self) -> float:
        scale = max(abs(self.rhs), 1e-300)
        return self.abs_err / scale

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "T": self.T,
            "lhs_re": float(np.real(self.lhs)),
            "lhs_im": float(np.imag(self.lhs)),
            "rhs_re": float(np.real(self.rhs)),
            "rhs_im": float(np.imag(self.rhs)),
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
        }


@dataclass
class ExperimentReport:
    experiment: str
    group: str
    seed: int
    rows: List[ExperimentRow]
    tol_rel: float
    order_target: float
    noise_floor: float
    notes: List[str] = dc_field(default_factory=list)
    wall_millis: float = 0.0

    @property
    def order(self) -> Optional[float]:
        # fit against whichever refinement variable the rows vary (N, else T)
        ns = [r.N for r in self.rows]
        var = [r.N for r in self.rows] if len(set(ns)) > 1 else [r.T for r in self.rows]
        pts = [(np.log2(v), np.log2(max(r.rel_err, 1e-300))) for v, r in zip(var, self.rows)]
        if len(pts) < 3 or len({p[0] for p in pts}) < 2:
            return None
        xs = np.array([p[0] for p in pts])
        ys = np.array([p[1] for p in pts])
        slope = np.polyfit(xs, ys, 1)[0]
        return float(-slope)

    @property
    def floored(self) -> bool:
        return all(r.rel_err <= self.noise_floor for r in self.rows[-2:])

    @property
    def passed(self) -> bool:
        tol_ok = self.rows[-1].rel_err <= self.tol_rel
        order = self.order
        order_ok = self.floored or (order is not None and order >= self.order_target)
        return tol_ok and order_ok

    def as_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "group": self.group,
            "seed": self.seed,
            "rows": [r.as_dict() for r in self.rows],
            "order": self.order,
            "order_target": self.order_target,
            "tol_rel": self.tol_rel,
            "noise_floor": self.noise_floor,
            "order_floored": self.floored,
            "passed": self.passed,
            "notes": self.notes,
            "wall_millis": round(self.wall_millis, 3),
        }


def _report(cfg: ExperimentConfig, name: str, rows, notes=None, tol=None, target=None) -> ExperimentReport:
    return ExperimentReport(
        experiment=name,
        group=cfg.group,
        seed=cfg.seed,
        rows=rows,
        tol_rel=cfg.tol_rel if tol is None else tol,
        order_target=cfg.order_target if target is None else target,
        noise_floor=cfg.noise_floor,
        notes=notes or [],
    )


def _boundary_form(A: Dict[str, np.ndarray], index: int) -> Dict[str, np.ndarray]:
    return {"x": A["x"][:, :, index], "y": A["y"][:, :, index]}


# ---------------------------------------------------------------------------
# Chern-Simons gauge failure


def verify_cs_failure(cfg: ExperimentConfig) -> List[ExperimentReport]:
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 1]))
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=True)
    A_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=True)
    rows_plain, rows_10 = [], []
    for N in cfg.N_list:
        g3 = Grid3(N, Nz=2 * N, deriv=cfg.deriv)
        g2 = Grid2(N, deriv=cfg.deriv)
        gam = gamma_rec.on_grid(g3)
        A = eval_one_form(A_rec, g3)
        hist_top, hist_bot = [], []

        def collect(step, t, g):
            hist_top.append(g[:, :, -1].copy())
            hist_bot.append(g[:, :, 0].copy())

        g1 = pexp(gam, cfg.T, collect=collect)
        Ag = act.gauge_transform_cs(A, g1, g3)
        lhs = act.cs_action(Ag, g3) - act.cs_action(A, g3)
        wz_top = act.wz_action(lambda t: gam(t)[:, :, -1], hist_top, g2, cfg.T)
        wz_bot = act.wz_action(lambda t: gam(t)[:, :, 0], hist_bot, g2, cfg.T)
        A_top, A_bot = _boundary_form(A, -1), _boundary_form(A, 0)
        rhs = act.gwz_action(A_top, g1[:, :, -1], wz_top, g2) - act.gwz_action(
            A_bot, g1[:, :, 0], wz_bot, g2
        )
        rows_plain.append(ExperimentRow(N, cfg.T, complex(lhs), complex(rhs)))

        # polarised variant: add <A10, A01> on the boundary, compare with the
        # kinetic-term completion of the boundary functional
        def s10(A_form, Ab_top, Ab_bot):
            top10, top01 = act.dolbeault_components(Ab_top)
            bot10, bot01 = act.dolbeault_components(Ab_bot)
            return (
                act.cs_action(A_form, g3)
                + 0.5 * act.pair_10_01(top10, top01, g2)
                - 0.5 * act.pair_10_01(bot10, bot01, g2)
            )

        Ag_top, Ag_bot = _boundary_form(Ag, -1), _boundary_form(Ag, 0)
        lhs10 = s10(Ag, Ag_top, Ag_bot) - s10(A, A_top, A_bot)
        rhs10 = act.gwzw10_action(A_top, g1[:, :, -1], wz_top, g2) - act.gwzw10_action(
            A_bot, g1[:, :, 0], wz_bot, g2
        )
        rows_10.append(ExperimentRow(N, cfg.T, complex(lhs10), complex(rhs10)))
    w = (time.perf_counter() - t0) * 1000
    rep1 = _report(cfg, "cs-failure", rows_plain, notes=["bulk action difference vs boundary functional"])
    rep2 = _report(cfg, "cs-failure-10", rows_10, notes=["polarised variant with the boundary complex structure"])
    rep1.wall_millis = rep2.wall_millis = w / 2
    return [rep1, rep2]


# ---------------------------------------------------------------------------
# Flow-derivative identities on a single torus


def verify_wz_derivatives(cfg: ExperimentConfig) -> List[ExperimentReport]:
    t0 = time.perf_counter()
    N = max(cfg.N_list)
    g2 = Grid2(N, deriv=cfg.deriv)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2]))
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=False)
    A_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=False)
    gam = gamma_rec.on_grid(g2)
    A = eval_one_form(A_rec, g2)
    T_list = [cfg.T // 8, cfg.T // 4, cfg.T // 2, cfg.T]
    rows, rows10 = [], []
    for T in T_list:
        hist = pexp_path(gam, T)
        mid = T // 2
        dt = 1.0 / T
        # centered difference of the boundary functional at t = 1/2; the
        # three-term local Simpson handles the path-formula part exactly enough
        def gwz_at(idx):
            return 0.5 * g2.integrate(
                act.two_form_pair_11(A, act.right_log_derivative(hist[idx], g2))
            )

        def wz_local(i0, i1, i2):
            vals = []
            for idx in (i0, i1, i2):
                phi = act.maurer_cartan(hist[idx], g2)
                gmt = gam(idx * dt)
                dg = {"x": g2.dx(gmt), "y": g2.dy(gmt)}
                vals.append(g2.integrate(act.two_form_pair_11(phi, dg)))
            return -0.5 * (dt / 3.0) * (vals[0] + 4 * vals[1] + vals[2])

        lhs = (gwz_at(mid + 1) - gwz_at(mid - 1) - wz_local(mid - 1, mid, mid + 1)) / (2 * dt)
        Agt = act.gauge_transform_cs(A, hist[mid], g2)
        gmt = gam(mid * dt)
        dgam = {"x": g2.dx(gmt), "y": g2.dy(gmt)}
        rhs = 0.5 * g2.integrate(act.two_form_pair_11(Agt, dgam))
        rows.append(ExperimentRow(N, T, complex(lhs), complex(rhs)))

        def gwzw_at(idx):
            A10, _ = act.dolbeault_components(A)
            V = act.right_log_derivative(hist[idx], g2)
            _, V01 = act.dolbeault_components(V)
            phi = act.maurer_cartan(hist[idx], g2)
            p10, p01 = act.dolbeault_components(phi)
            return act.pair_10_01(A10, V01, g2) + 0.5 * act.pair_10_01(p10, p01, g2)

        lhs10 = (gwzw_at(mid + 1) - gwzw_at(mid - 1) - wz_local(mid - 1, mid, mid + 1)) / (2 * dt)
        Ag10, _ = act.dolbeault_components(Agt)
        _, dbar_gam = act.dolbeault_scalar(gmt, g2)
        rhs10 = act.DZ_DZBAR * g2.integrate(act.tr(Ag10 @ dbar_gam))
        rows10.append(ExperimentRow(N, T, complex(lhs10), complex(rhs10)))
    w = (time.perf_counter() - t0) * 1000

    def dt_report(name, rws):
        rep = _report(cfg, name, rws, notes=["order fit is in the flow step (T doubles, N fixed)"], tol=1e-4)
        rep.wall_millis = w / 2
        return rep

    return [dt_report("wz-derivative", rows), dt_report("wz-derivative-10", rows10)]


def verify_wz_path_independence(cfg: ExperimentConfig) -> List[ExperimentReport]:
    """Two flow paths with the same endpoint give the same bulk-term value."""
    t0 = time.perf_counter()
    N = max(cfg.N_list)
    g2 = Grid2(N, deriv=cfg.deriv)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 3]))
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=False)
    gam = gamma_rec.on_grid(g2)
    rows = []
    for T in (cfg.T // 4, cfg.T // 2, cfg.T):
        hist1 = pexp_path(gam, T)
        s1 = act.wz_action(gam, hist1, g2, T)

        # smooth reparameterization s(t) = t^2 (3 - 2t): same endpoint group element
        def gam2(t):
            s = t * t * (3 - 2 * t)
            return (6 * t * (1 - t)) * gam(s)

        hist2 = pexp_path(gam2, T)
        s2 = act.wz_action(gam2, hist2, g2, T)
        rows.append(ExperimentRow(N, T, complex(s1), complex(s2)))
    rep = _report(cfg, "wz-path-independence", rows,
                  notes=["reparameterized flow reaches the same endpoint"], tol=1e-6)
    rep.wall_millis = (time.perf_counter() - t0) * 1000
    return [rep]


# ---------------------------------------------------------------------------
# BF gauge failure and the composition law


def verify_bf_failure(cfg: ExperimentConfig) -> List[ExperimentReport]:
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 4]))
    # gentle transverse profiles on the flow paths keep the dual-sector
    # quadrature error subdominant to the field z-signal across seeds
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=True, z_degree=1)
    beta_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=True, z_degree=1)
    A_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=True)
    B_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=True)
    comp_rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 44]))
    comp_recs = [su2_recipe(comp_rng, cfg.kmax, cfg.amp_field, slab=False) for _ in range(4)]
    rows, rows_comp = [], []
    for N in cfg.N_list:
        g3 = Grid3(N, Nz=2 * N, deriv=cfg.deriv)
        g2 = Grid2(N, deriv=cfg.deriv)
        gam, bet = gamma_rec.on_grid(g3), beta_rec.on_grid(g3)
        A, B = eval_one_form(A_rec, g3), eval_one_form(B_rec, g3)
        g1, tau1 = tau_path_endpoint(gam, bet, cfg.T)
        Ag, Bg = act.gauge_transform_bf(A, B, g1, tau1, g3)
        lhs = act.bf_action(Ag, Bg, g3) - act.bf_action(A, B, g3)
        rhs = act.s_tau_f(
            g1[:, :, -1], tau1[:, :, -1], _boundary_form(A, -1), g2
        ) - act.s_tau_f(g1[:, :, 0], tau1[:, :, 0], _boundary_form(A, 0), g2)
        rows.append(ExperimentRow(N, cfg.T, complex(lhs), complex(rhs)))

        # composition law on a single torus (endpoint group elements); the
        # exact trig kernel makes the two routes agree to the smooth fields'
        # harmonic decay, robustly below tolerance at every seed
        g2c = Grid2(N, deriv="spectral")
        gC = mexp_su2(comp_recs[0].eval(g2c))
        tauC = comp_recs[1].eval(g2c)
        hC = mexp_su2(comp_recs[2].eval(g2c))
        chiC = comp_recs[3].eval(g2c)
        A_b = _boundary_form(A, -1)
        gi, taui = act.group_inverse(gC, tauC)
        cg, ctau = act.group_compose(gi, taui, hC, chiC)
        AgC = act.gauge_transform_cs(A_b, gC, g2c)
        lhs_c = act.s_tau_f(cg, ctau, AgC, g2c)
        rhs_c = act.s_tau_f(hC, chiC, A_b, g2c) - act.s_tau_f(gC, tauC, A_b, g2c)
        rows_comp.append(ExperimentRow(N, cfg.T, complex(lhs_c), complex(rhs_c)))
    w = (time.perf_counter() - t0) * 1000
    rep1 = _report(cfg, "bf-failure", rows, notes=["semidirect pair from the flow and its dual quadrature"])
    rep2 = _report(cfg, "bf-composition", rows_comp,
                   notes=["composition law on the boundary torus (fourth-order stencils)"])
    rep1.wall_millis = rep2.wall_millis = w / 2
    return [rep1, rep2]


def verify_bf_failure_10(cfg: ExperimentConfig) -> List[ExperimentReport]:
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 5]))
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=True, z_degree=1)
    beta_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=True, z_degree=1)
    A_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=True)
    B_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=True)
    rows = []
    for N in cfg.N_list:
        g3 = Grid3(N, Nz=2 * N, deriv=cfg.deriv)
        g2 = Grid2(N, deriv=cfg.deriv)
        gam, bet = gamma_rec.on_grid(g3), beta_rec.on_grid(g3)
        A, B = eval_one_form(A_rec, g3), eval_one_form(B_rec, g3)
        g1, tau1 = tau_path_endpoint(gam, bet, cfg.T)
        Ag, Bg = act.gauge_transform_bf(A, B, g1, tau1, g3)

        def s10(Af, Bf):
            top = act.pair_10_01(*_split10(Bf, -1, 1), g2)
            bot = act.pair_10_01(*_split10(Bf, 0, 1), g2)

            def cross(F, i):
                B10, _ = act.dolbeault_components(_boundary_form(F[0], i))
                _, A01 = act.dolbeault_components(_boundary_form(F[1], i))
                return act.pair_10_01(B10, A01, g2)

            return act.bf_action(Af, Bf, g3) + cross((Bf, Af), -1) - cross((Bf, Af), 0)

        lhs = s10(Ag, Bg) - s10(A, B)
        rhs = act.s_tau_f_10(
            g1[:, :, -1], tau1[:, :, -1], _boundary_form(A, -1), _boundary_form(B, -1), g2
        ) - act.s_tau_f_10(g1[:, :, 0], tau1[:, :, 0], _boundary_form(A, 0), _boundary_form(B, 0), g2)
        rows.append(ExperimentRow(N, cfg.T, complex(lhs), complex(rhs)))
    rep = _report(cfg, "bf-failure-10", rows, notes=["split variant with the boundary complex structure"])
    rep.wall_millis = (time.perf_counter() - t0) * 1000
    return [rep]


def _split10(form, index, unused):
    b = {"x": form["x"][:, :, index], "y": form["y"][:, :, index]}
    return act.dolbeault_components(b)


# ---------------------------------------------------------------------------
# Interval transgressions


def verify_transgression_cs(cfg: ExperimentConfig) -> List[ExperimentReport]:
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 6]))
    deriv = "fd4" if cfg.deriv == "spectral" else cfg.deriv
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=False)
    A_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=False)
    rows, rows10 = [], []
    agreement = 0.0
    for N in cfg.N_list:
        g2 = Grid2(N, deriv=deriv)
        gam = gamma_rec.on_grid(g2)
        A0 = eval_one_form(A_rec, g2)
        w = simpson_weights(cfg.T + 1, 1.0 / cfg.T)
        acc_tot = acc_min = acc_10 = 0.0
        hist = []

        def quad(step, t, g):
            At = act.gauge_transform_cs(A0, g, g2)
            gm = gam(t)
            dgm = {"x": g2.dx(gm), "y": g2.dy(gm)}
            nonlocal acc_tot, acc_min, acc_10
            val = 0.5 * g2.integrate(act.two_form_pair_11(At, dgm))
            acc_tot = acc_tot + w[step] * val
            # the minimally-polarised integrand adds an exact form whose
            # lattice integral telescopes to zero; keep it to witness that
            exact = 0.5 * g2.integrate(
                g2.dx(act.tr(gm @ At["y"])) - g2.dy(act.tr(gm @ At["x"]))
            )
            acc_min = acc_min + w[step] * (val - exact)
            At10, _ = act.dolbeault_components(At)
            _, dbar_gm = act.dolbeault_scalar(gm, g2)
            acc_10 = acc_10 + w[step] * act.DZ_DZBAR * g2.integrate(act.tr(At10 @ dbar_gm))
            hist.append(g.copy())

        g1 = pexp(gam, cfg.T, collect=quad)
        wz = act.wz_action(gam, hist, g2, cfg.T)
        rhs = act.gwz_action(A0, g1, wz, g2)
        rows.append(ExperimentRow(N, cfg.T, complex(acc_tot), complex(rhs)))
        agreement = max(agreement, abs(acc_tot - acc_min))
        rhs10 = act.gwzw10_action(A0, g1, wz, g2)
        rows10.append(ExperimentRow(N, cfg.T, complex(acc_10), complex(rhs10)))
    wms = (time.perf_counter() - t0) * 1000
    rep1 = _report(cfg, "transgression-cs", rows,
                   notes=[f"polarisation agreement |minimal - total| = {agreement:.3e}"])
    rep1.polarisation_agreement = agreement
    rep2 = _report(cfg, "transgression-cs-10", rows10,
                   notes=["kinetic completion with the boundary complex structure"])
    rep1.wall_millis = rep2.wall_millis = wms / 2
    return [rep1, rep2]


def verify_transgression_bf(cfg: ExperimentConfig) -> List[ExperimentReport]:
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 7]))
    deriv = "fd4" if cfg.deriv == "spectral" else cfg.deriv
    gamma_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=False)
    j_rec = su2_path_recipe(rng, cfg.kmax, cfg.amp_gamma, slab=False)
    A_rec = su2_one_form_recipe(rng, cfg.kmax, cfg.amp_field, slab=False)
    rows = []
    for N in cfg.N_list:
        g2 = Grid2(N, deriv=deriv)
        gam, jpath = gamma_rec.on_grid(g2), j_rec.on_grid(g2)
        A0 = eval_one_form(A_rec, g2)
        w = simpson_weights(cfg.T + 1, 1.0 / cfg.T)
        acc = 0.0
        tau_acc = {}

        def quad(step, t, g):
            At = act.gauge_transform_cs(A0, g, g2)
            Ft = act.curvature_2d(At, g2)
            nonlocal acc
            acc = acc + w[step] * g2.integrate(act.tr(jpath(t) @ Ft))
            contrib = w[step] * (g @ jpath(t) @ dagger(g))
            tau_acc["sum"] = contrib if "sum" not in tau_acc else tau_acc["sum"] + contrib

        g1 = pexp(gam, cfg.T, collect=quad)
        tau1 = dagger(g1) @ tau_acc["sum"] @ g1
        rhs = act.s_tau_f(g1, tau1, A0, g2)
        rows.append(ExperimentRow(N, cfg.T, complex(acc), complex(rhs)))
    rep = _report(cfg, "transgression-bf", rows,
                  notes=["flow-time quadrature of the dual current against the evolving curvature"])
    rep.wall_millis = (time.perf_counter() - t0) * 1000
    return [rep]


def verify_transgression_psm0(cfg: ExperimentConfig) -> List[ExperimentReport]:
    """Zero-structure sigma-model toy on a circle: the transgressed pairing
    reproduces int <p, dq> to machine precision (the flow is constant)."""
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 8]))
    # draw circle fields p, q with a shared recipe so rows refine one configuration
    modes = [(k, (rng.normal(), rng.normal())) for k in range(0, cfg.kmax + 1)]
    modes2 = [(k, (rng.normal(), rng.normal())) for k in range(0, cfg.kmax + 1)]
    rows = []
    for N in cfg.N_list:
        theta = np.arange(N) / N
        h = 1.0 / N

        def field(mset):
            out = np.zeros(N)
            for k, (a, b) in mset:
                out = out + a * np.cos(2 * np.pi * k * theta) + b * np.sin(2 * np.pi * k * theta)
            return out

        p, q = field(modes), field(modes2)
        dq = (np.roll(q, -1) - np.roll(q, 1)) / (2 * h)
        pdq = float(np.sum(p * dq) * h)
        w = simpson_weights(cfg.T + 1, 1.0 / cfg.T)
        lhs = float(sum(wi * pdq for wi in w))
        rows.append(ExperimentRow(N, cfg.T, lhs, pdq))
    rep = _report(cfg, "transgression-psm0", rows,
                  notes=["constant flow: time quadrature of a constant"], tol=1e-12)
    rep.wall_millis = (time.perf_counter() - t0) * 1000
    return [rep]


# ---------------------------------------------------------------------------
# Abelian light-cone edge


def _pairing_matrix(cfg: ExperimentConfig) -> np.ndarray:
    if cfg.pairing is not None:
        k = np.array(cfg.pairing, dtype=float)
        if k.shape != (cfg.n_u1, cfg.n_u1) or abs(np.linalg.det(k)) < 1e-12:
            raise ValueError("pairing must be a nondegenerate n_u1 x n_u1 matrix")
        return k
    return np.eye(cfg.n_u1)


def verify_abelian_edge(cfg: ExperimentConfig) -> List[ExperimentReport]:
    cfg = cfg.normalized()
    t0 = time.perf_counter()
    kmat = _pairing_matrix(cfg)
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 9]))
    ncomp = cfg.n_u1
    A_rec = {d: scalar_vec_recipe(rng, cfg.kmax, cfg.amp_field, ncomp, slab=True, z_degree=1) for d in ("x", "y", "z")}
    phi_rec = {i: scalar_path_recipe(rng, cfg.kmax, cfg.amp_gamma, ncomp, slab=False) for i in (0, 1)}
    gauge_rec = scalar_vec_recipe(rng, cfg.kmax, cfg.amp_gamma, ncomp, slab=True, z_degree=1)
    rows_inv, rows_match = [], []
    for N in cfg.N_list:
        g3 = Grid3(N, Nz=2 * N, deriv="spectral")
        g2 = Grid2(N, deriv="spectral")
        A = {k: r.eval(g3) for k, r in A_rec.items()}
        phi_path = {i: phi_rec[i].on_grid(g2) for i in (0, 1)}

        def phi_endpoint(i, T):
            # exact time integral of the polynomial path
            coeffs = phi_path[i].coefficients
            return sum(c / (p + 1) for p, c in enumerate(coeffs))

        def edge_total(Af, phis):
            total = act.abelian_cs_action(Af, kmat, g3)
            for i, sign, zidx in ((1, +1, -1), (0, -1, 0)):
                Ab = {"x": Af["x"][:, :, zidx], "y": Af["y"][:, :, zidx]}
                total = total + sign * (
                    act.edge_polarising_term(Ab, kmat, g2)
                    + act.edge_gwzw_plus(Ab, phis[i], kmat, g2)
                )
            return total

        phis = {i: phi_endpoint(i, cfg.T) for i in (0, 1)}
        base = edge_total(A, phis)
        lam = gauge_rec.eval(g3)
        dlam = {"x": g3.dx(lam), "y": g3.dy(lam), "z": g3.dz(lam)}
        A_g = {k: A[k] + dlam[k] for k in A}
        phis_g = {1: phis[1] - lam[:, :, -1], 0: phis[0] - lam[:, :, 0]}
        lhs_inv = edge_total(A_g, phis_g)
        rows_inv.append(ExperimentRow(N, cfg.T, complex(lhs_inv), complex(base)))

        # edge action via flow-time quadrature (trapezoid, T tied to N) vs endpoint
        T = 4 * N
        dt = 1.0 / T
        lhs_match = 0.0
        for i, sign, zidx in ((1, +1, -1), (0, -1, 0)):
            Ab = {"x": A["x"][:, :, zidx], "y": A["y"][:, :, zidx]}
            Ap, Am = act.lc_components(Ab)
            acc = 0.0
            for step in range(T + 1):
                t = step * dt
                gam_t = phi_path[i](t)
                coeffs = phi_path[i].coefficients
                phi_t = sum(c * (t ** (p + 1)) / (p + 1) for p, c in enumerate(coeffs))
                dpg, dmg = act.lc_derivatives(gam_t, g2)
                dpp, dmp = act.lc_derivatives(phi_t, g2)
                integrand = act.LC_MEASURE * g2.integrate(
                    act.pair_k(Ap, dmg, kmat)
                    + 0.5 * act.pair_k(dpg, dmp, kmat)
                    + 0.5 * act.pair_k(dpp, dmg, kmat)
                )
                weight = dt * (0.5 if step in (0, T) else 1.0)
                acc = acc + weight * integrand
            lhs_match = lhs_match + sign * (acc + act.edge_polarising_term(Ab, kmat, g2))
        rhs_match = 0.0
        for i, sign, zidx in ((1, +1, -1), (0, -1, 0)):
            Ab = {"x": A["x"][:, :, zidx], "y": A["y"][:, :, zidx]}
            rhs_match = rhs_match + sign * act.edge_chiral_action(Ab, phis[i], kmat, g2)
        rows_match.append(ExperimentRow(N, T, complex(lhs_match), complex(rhs_match)))
    wms = (time.perf_counter() - t0) * 1000
    rep1 = _report(cfg, "abelian-edge-invariance", rows_inv, notes=["simultaneous bulk and edge transformation"], tol=1e-6)
    # invariance rows compare against a nonzero base value; use the absolute defect
    rep1.notes.append("defect measured relative to the invariant total")
    rep2 = _report(cfg, "abelian-edge-match", rows_match,
                   notes=["flow-time trapezoid (T = 4N) vs the chiral edge action"], tol=1e-3)
    rep1.wall_millis = rep2.wall_millis = wms / 2
    return [rep1, rep2]


EXPERIMENTS: Dict[str, Callable[[ExperimentConfig], List[ExperimentReport]]] = {
    "cs-failure": verify_cs_failure,
    "wzw-failure": verify_cs_failure,  # alias: the boundary functional is the gauged one
    "bf-failure": verify_bf_failure,
    "bf-failure-10": verify_bf_failure_10,
    "wz-derivative": verify_wz_derivatives,
    "wz-path-independence": verify_wz_path_independence,
    "transgression-cs": verify_transgression_cs,
    "transgression-bf": verify_transgression_bf,
    "transgression-psm0": verify_transgression_psm0,
    "abelian-edge": verify_abelian_edge,
}


def run_experiment(name: str, cfg: Optional[ExperimentConfig] = None, **overrides) -> List[ExperimentReport]:
    if name not in EXPERIMENTS:
        raise KeyError(f"unknown experiment {name!r}")
    if cfg is None:
        cfg = ExperimentConfig(experiment=name, **overrides)
    return EXPERIMENTS[name](cfg)


def list_experiments() -> List[str]:
    return sorted(EXPERIMENTS)
