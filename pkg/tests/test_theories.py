"""Catalogue constructors and polarising functionals."""

from fractions import Fraction

import pytest

from bvbfv import GradingError, br, d, gen, normalize, pair
from bvbfv.calculus import grade
from bvbfv.theories import (
    CATALOGUE,
    bf_to_cs_field_map,
    get_theory,
    make_bf,
    make_cs,
    make_psm_linear,
    functionals_for,
    polarising_functional,
)


def test_catalogue_builds_and_audits(ws):
    for tid in CATALOGUE:
        th = ws.theory(tid)
        th.degree_audit()


def test_cs_data_as_printed(cs):
    ctx = cs.ctx
    assert cs.lagrangian == normalize(
        Fraction(1, 2) * pair(gen("AA"), d(gen("AA")))
        + Fraction(1, 6) * pair(gen("AA"), br(gen("AA"), gen("AA"))),
        ctx,
    )
    # Q on the connection component is the covariant derivative of the ghost
    assert cs.q.assignments["A"] == normalize(d(gen("c")) + br(gen("A"), gen("c")), ctx)
    assert cs.q.assignments["c"] == normalize(Fraction(1, 2) * br(gen("c"), gen("c")), ctx)


def test_bf_roster_antifield_pairs(bf):
    pairs = {s.name: s.antifield_of for s in bf.roster if s.antifield_of}
    assert pairs == {"B_dag": "B", "tau_dag": "tau", "A_dag": "A", "c_dag": "c"}
    vals = {s.name: s.valuation for s in bf.roster}
    assert vals["B"] == "colie" and vals["A"] == "lie"


def test_bf_dual_assignment(bf):
    ctx = bf.ctx
    # Q of the dual superfield is the covariant derivative d(BB) + [AA, BB]
    got = {}
    from bvbfv.theory import _resolve_members
    from bvbfv.expr import nf_sum, to_nf, Gen

    members = _resolve_members("BB", bf.superfield_map)
    assembled = nf_sum([bf.q.assignments[n] for n in members])
    expected = normalize(d(gen("BB")) + br(gen("AA"), gen("BB")), ctx)
    assert assembled == expected


def test_bf4_roster_sizes():
    bf4 = make_bf(4)
    assert len(bf4.roster) == 10
    hs = sorted((s.h, s.gh) for s in bf4.roster)
    assert (0, 2) in hs and (4, -3) in hs


def test_psm_nonlinear_unsupported():
    with pytest.raises(GradingError):
        make_psm_linear("quadratic")


def test_psm_zero_structure_is_abelian():
    zero = make_psm_linear("zero")
    assert not zero.uses_brackets()


def test_polarising_functionals_audit(ws):
    for tid in CATALOGUE:
        th = ws.theory(tid)
        for name in functionals_for(th):
            f = polarising_functional(name, th)
            for g in grade(f.expr, th.ctx):
                assert g.total(th.m) == -1 and g.v == 0


def test_polarising_minimal_form(cs):
    f = polarising_functional("f_min", cs)
    assert normalize(f.expr, cs.ctx) == normalize(Fraction(1, 2) * pair(gen("c"), gen("A_dag")), cs.ctx)


def test_polarising_unknown_name(cs):
    with pytest.raises(GradingError):
        polarising_functional("f_bogus", cs)


def test_polarising_split_requires_split(cs):
    with pytest.raises(GradingError):
        polarising_functional("f_min_10", cs)


def test_bf_cs_field_map():
    m = bf_to_cs_field_map(3)
    assert m["At"] == ("c", "A", "B_dag", "tau_dag", "tau", "B", "A_dag", "c_dag")


def test_unknown_theory_id():
    with pytest.raises(GradingError):
        get_theory("nope")
