"""Normal form: Koszul signs, differentials, derivation laws."""

import random
from fractions import Fraction

import pytest

from bvbfv import br, d, gen, normalize, pair, vdel
from bvbfv.calculus import grade
from bvbfv.expr import nf_d, nf_del, nf_scale, nf_sum
from helpers import random_scalar_expr


def nf0(e, ctx):
    return normalize(e, ctx)


def test_odd_product_koszul(cs):
    # two parity-odd factors anticommute: Ac + cA = 0
    e = gen("A") * gen("c") + gen("c") * gen("A")
    assert nf0(e, cs.ctx) == {}


def test_bracket_graded_antisymmetry(bf):
    # [x, y] + (-1)^{|x||y|} [y, x] = 0 for odd x = A, odd y = c
    # odd-odd arguments: [x, y] = +[y, x], so the signed combination vanishes
    e = br(gen("A"), gen("c")) - br(gen("c"), gen("A"))
    assert nf0(e, bf.ctx) == {}
    # odd-even arguments anticommute under swap
    e2 = br(gen("A"), d(gen("c"))) + br(d(gen("c")), gen("A"))
    assert nf0(e2, bf.ctx) == {}


def test_like_term_collection(cs):
    e = 2 * (gen("A") + gen("A"))
    nf = nf0(e, cs.ctx)
    assert list(nf.values()) == [Fraction(4)]


def test_pairing_graded_symmetry(cs):
    # <x, y> = (-1)^{|x||y|} <y, x>: dc is even, A odd
    e = pair(gen("A"), d(gen("c"))) - pair(d(gen("c")), gen("A"))
    assert nf0(e, cs.ctx) == {}
    # odd-odd pair antisymmetrizes: <A, A> = 0
    assert nf0(pair(gen("A"), gen("A")), cs.ctx) == {}


def test_differentials_square_to_zero(cs):
    assert nf0(d(d(gen("c"))), cs.ctx) == {}
    assert nf0(vdel(vdel(gen("A"))), cs.ctx) == {}
    assert nf0(d(vdel(gen("A"))) + vdel(d(gen("A"))), cs.ctx) == {}


def test_differentials_on_random_asts(cs):
    rng = random.Random(7)
    names = ["c", "A", "A_dag", "c_dag"]
    for _ in range(25):
        e = random_scalar_expr(rng, names)
        nf = nf0(e, cs.ctx)
        assert nf_d(nf_d(nf, cs.ctx), cs.ctx) == {}
        assert nf_del(nf_del(nf, cs.ctx), cs.ctx) == {}
        anti = nf_sum((nf_d(nf_del(nf, cs.ctx), cs.ctx), nf_del(nf_d(nf, cs.ctx), cs.ctx)))
        assert anti == {}


def test_vertical_differential_of_the_one_form(cs):
    # delta theta = (1/2) <delta AA, delta AA>
    lhs = nf_del(cs.theta, cs.ctx)
    rhs = nf0(Fraction(1, 2) * pair(vdel(gen("AA")), vdel(gen("AA"))), cs.ctx)
    assert lhs == rhs


def test_derivation_law_product(cs):
    # d(e1 e2) = d(e1) e2 + (-1)^{|e1|} e1 d(e2) for parity-homogeneous e1
    rng = random.Random(11)
    names = ["c", "A"]
    for _ in range(20):
        e1 = random_scalar_expr(rng, names, depth=1)
        e2 = random_scalar_expr(rng, names, depth=1)
        gs = grade(e1, cs.ctx)
        if len({g.parity for g in gs}) != 1:
            continue
        parity = next(iter(gs)).parity if gs else 0
        lhs = nf0(e1 * e2, cs.ctx)
        lhs = nf_d(lhs, cs.ctx)
        sign = Fraction(-1) if parity else Fraction(1)
        from bvbfv.expr import nf_mul

        rhs = nf_sum(
            (
                nf_mul(nf_d(nf0(e1, cs.ctx), cs.ctx), nf0(e2, cs.ctx), cs.ctx),
                nf_scale(nf_mul(nf0(e1, cs.ctx), nf_d(nf0(e2, cs.ctx), cs.ctx), cs.ctx), sign),
            )
        )
        assert lhs == rhs


def test_normalize_idempotent(cs):
    rng = random.Random(3)
    for _ in range(10):
        e = random_scalar_expr(rng, ["c", "A", "A_dag"])
        nf = nf0(e, cs.ctx)
        assert normalize(nf, cs.ctx) == nf


def test_form_degree_cap(cs):
    # a five-fold product of one-forms vanishes in three dimensions
    A = gen("A")
    e = pair(A * A, A * A)
    assert nf0(e, cs.ctx) == {}
