"""Contraction, Lie derivative, Euler operator."""

import random
from fractions import Fraction

import pytest

from bvbfv import UncoveredFieldError, br, d, gen, normalize, pair, vdel
from bvbfv.calculus import VectorFieldSpec, euler, iota, lie, lie_minus_d
from bvbfv.check import l_cmr, nf_sub
from bvbfv.expr import Const, nf_d, nf_scale, nf_sum
from bvbfv.realize import is_zero
from helpers import random_scalar_expr


def test_iota_replaces_vertical_leg(cs):
    lhs = iota(cs.q, normalize(vdel(gen("AA")), cs.ctx), cs.ctx)
    rhs = normalize(d(gen("AA")) + Fraction(1, 2) * br(gen("AA"), gen("AA")), cs.ctx)
    assert lhs == rhs


def test_iota_kills_constants_and_fields(cs):
    assert iota(cs.q, normalize(Const(Fraction(3)), cs.ctx), cs.ctx) == {}
    assert iota(cs.q, normalize(gen("A"), cs.ctx), cs.ctx) == {}


def test_iota_uncovered_field_error(cs):
    q = VectorFieldSpec({"c": Fraction(1, 2) * br(gen("c"), gen("c"))}, cs.ctx)
    with pytest.raises(UncoveredFieldError):
        iota(q, normalize(vdel(gen("A")), cs.ctx), cs.ctx)


def test_lie_is_q_on_generators(cs):
    for name, assigned in cs.q.assignments.items():
        got = lie(cs.q, normalize(gen(name), cs.ctx), cs.ctx)
        assert got == assigned


def test_modified_lagrangian_identity(cs):
    # L_Q L = d(2L - iota_Q theta)
    resid = nf_sub(lie(cs.q, cs.lagrangian, cs.ctx), nf_d(l_cmr(cs), cs.ctx))
    assert is_zero(resid, cs, trials=3, name="x").passed


def test_evolutionary_condition(cs):
    # L_Q and d are both odd derivations: the evolutionary condition is the
    # vanishing graded commutator, L_Q(d e) + d(L_Q e) = 0
    rng = random.Random(5)
    for _ in range(8):
        e = normalize(random_scalar_expr(rng, ["c", "A"], depth=1), cs.ctx)
        resid = nf_sum((lie(cs.q, nf_d(e, cs.ctx), cs.ctx), nf_d(lie(cs.q, e, cs.ctx), cs.ctx)))
        assert resid == {}

def test_descent_coboundary_squares_to_zero(cs):
    # the graded commutation makes (L_Q - d)^2 = 0 given Q^2 = 0
    rng = random.Random(15)
    for _ in range(4):
        e = normalize(random_scalar_expr(rng, ["c", "A"], depth=1), cs.ctx)
        resid = lie_minus_d(cs.q, lie_minus_d(cs.q, e, cs.ctx), cs.ctx)
        assert is_zero(resid, cs, trials=2, name="x").passed


def test_euler_weights(cs):
    assert euler(normalize(gen("c"), cs.ctx), cs.ctx) == normalize(gen("c"), cs.ctx)
    assert euler(normalize(gen("A"), cs.ctx), cs.ctx) == {}
    # ghost -1 weighs by -1
    a_dag = normalize(gen("A_dag"), cs.ctx)
    assert euler(a_dag, cs.ctx) == nf_scale(a_dag, Fraction(-1))


def test_euler_commutation(cs):
    # L_Q L_E = (L_E - 1) L_Q, i.e. lie(Q, euler e) - euler(lie(Q, e)) + lie(Q, e) = 0
    rng = random.Random(9)
    for _ in range(6):
        e = normalize(random_scalar_expr(rng, ["c", "A", "A_dag"], depth=1), cs.ctx)
        resid = nf_sum(
            (
                lie(cs.q, euler(e, cs.ctx), cs.ctx),
                nf_scale(euler(lie(cs.q, e, cs.ctx), cs.ctx), Fraction(-1)),
                lie(cs.q, e, cs.ctx),
            )
        )
        assert resid == {}


def test_iota_changes_degrees(cs):
    from bvbfv.calculus import grade

    e = normalize(pair(gen("A_dag"), vdel(gen("A"))), cs.ctx)
    before = next(iter(grade(e, cs.ctx)))
    after = next(iter(grade(iota(cs.q, e, cs.ctx), cs.ctx)))
    assert after.v == before.v - 1
    assert after.gh == before.gh + 1


def test_q_squared_on_samples(cs):
    for name in cs.q.assignments:
        e = normalize(gen(name), cs.ctx)
        resid = lie(cs.q, lie(cs.q, e, cs.ctx), cs.ctx)
        assert is_zero(resid, cs, trials=2, name="x").passed
