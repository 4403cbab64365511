"""Theorem-engine operations."""

from fractions import Fraction

import pytest

from bvbfv import br, d, gen, normalize, pair, vdel
from bvbfv.check import (
    check_cmr,
    check_descent,
    check_f_group_action,
    check_f_transform_laws,
    check_theorem_delta,
    difference,
    f_transform,
    is_brst_type,
    l_cmr,
    nf_sub,
    total_lagrangian,
)
from bvbfv.realize import is_zero
from bvbfv.theories import PolarisingFunctional, polarising_functional
from bvbfv.theory import Theory


def test_cmr_pass(cs):
    assert all(r.passed for r in check_cmr(cs, trials=3))


def test_cmr_detects_corruption(cs):
    # 1/5 instead of 1/6 in the cubic term: the structure equations fail
    broken = cs.with_data(
        Fraction(1, 2) * pair(gen("AA"), d(gen("AA")))
        + Fraction(1, 5) * pair(gen("AA"), br(gen("AA"), gen("AA"))),
        cs.theta_src,
        name="cs-broken",
    )
    reps = check_cmr(broken, trials=2)
    assert any(r.status == "fail" for r in reps)
    assert any(r.witness for r in reps if r.status == "fail")


def test_difference_vs_modified(cs):
    # L_CMR - Difference = L
    resid = nf_sub(nf_sub(l_cmr(cs), difference(cs)), cs.lagrangian)
    assert resid == {}


def test_difference_of_bf_vanishes(bf):
    assert difference(bf) == {}
    assert total_lagrangian(bf) == bf.lagrangian


def test_descent_negative_control(cs):
    rep = check_descent(cs, cs.lagrangian, trials=2, name="neg")
    assert rep.status == "fail" and rep.witness


def test_theorem_statements(cs):
    reps = check_theorem_delta(cs, trials=3)
    assert [r.status for r in reps] == ["pass"] * 4


def test_f_transform_identity(cs):
    zero_f = PolarisingFunctional("zero", cs.name, 0 * gen("A"))
    same = f_transform(cs, zero_f)
    assert same.lagrangian == cs.lagrangian and same.theta == cs.theta


def test_f_transform_laws(cs):
    f = polarising_functional("f_min", cs)
    reps = check_f_transform_laws(cs, f, trials=3)
    assert all(r.passed for r in reps)


def test_f_group_action(cs):
    f = polarising_functional("f_min", cs)
    g = polarising_functional("f_tot", cs)
    assert check_f_group_action(cs, f, g).passed


def test_brst_type_flags(cs):
    assert is_brst_type(cs).status == "fail"
    shifted = f_transform(cs, polarising_functional("f_tot", cs))
    assert is_brst_type(shifted).passed


def test_ym_manifestly_brst(ym2):
    assert is_brst_type(ym2).passed


def test_flow_invariants_all_core_theories(ws):
    # L_Q varpi = d varpi and L_Q L = d(L + Difference), exactly
    from bvbfv.calculus import lie
    from bvbfv.check import varpi
    from bvbfv.expr import nf_d, nf_sum
    from bvbfv.realize import is_zero as isz

    for tid in ("cs", "bf", "ym2", "psm-linear"):
        th = ws.theory(tid)
        w = varpi(th)
        assert isz(nf_sub(lie(th.q, w, th.ctx), nf_d(w, th.ctx)), th, trials=2, name="w").passed
        assert isz(
            nf_sub(lie(th.q, th.lagrangian, th.ctx), nf_d(nf_sum((th.lagrangian, difference(th))), th.ctx)),
            th, trials=2, name="l",
        ).passed
