"""Gradings, parities and degree bookkeeping."""

import itertools

import pytest

from bvbfv import Grading, GradingError, br, d, gen, pair, vdel
from bvbfv.calculus import component, grade
from bvbfv.core import Algebra, FieldSymbol


def test_parity_and_total_degree():
    g = Grading(h=1, v=0, gh=0)
    assert g.parity == 1
    assert g.total(3) == -2
    assert Grading(2, 1, -1).parity == 0


def test_grade_connection_component(cs):
    gs = grade(gen("A"), cs.ctx)
    assert gs == {Grading(1, 0, 0)}


def test_grade_jet_vertical_leg(cs):
    gs = grade(d(vdel(gen("c"))), cs.ctx)
    assert gs == {Grading(1, 1, 1)}


def test_grade_cubic_superfield_components(cs):
    # independent oracle: enumerate degree triples of the inhomogeneous field
    hs = [0, 1, 2, 3]
    ghs = {0: 1, 1: 0, 2: -1, 3: -2}
    expected = set()
    for ha, hb, hc in itertools.product(hs, repeat=3):
        h = ha + hb + hc
        if h <= 3:
            expected.add((h, 0, ghs[ha] + ghs[hb] + ghs[hc]))
    got = {(g.h, g.v, g.gh) for g in grade(pair(gen("AA"), br(gen("AA"), gen("AA"))), cs.ctx)}
    assert got <= expected
    assert len(got) == 4
    assert all(g.gh + g.h == 3 for g in grade(pair(gen("AA"), br(gen("AA"), gen("AA"))), cs.ctx))
    assert {g.h for g in grade(pair(gen("AA"), br(gen("AA"), gen("AA"))), cs.ctx)} == {0, 1, 2, 3}


def test_component_range_errors(cs):
    with pytest.raises(GradingError):
        component(gen("A"), 4, cs.ctx)
    assert component(gen("A"), 0, cs.ctx) == {}


def test_degree_audit_runs_for_catalogue(ws):
    for tid in ("cs", "bf", "bf4", "ym2", "ym1", "psm-linear", "cs-split", "bf-split"):
        ws.theory(tid).degree_audit()


def test_malformed_pairing_is_typed_error(psm):
    # two dual-valued arguments cannot be paired
    with pytest.raises(GradingError):
        grade(pair(gen("X"), gen("X")), psm.ctx)


def test_antifield_consistency_rejects_bad_grading():
    roster = {
        "A": FieldSymbol("A", 1, 0),
        "A_dag": FieldSymbol("A_dag", 1, -1, antifield_of="A"),
    }
    alg = Algebra(3, roster)
    with pytest.raises(GradingError):
        alg.check_field_consistency()
