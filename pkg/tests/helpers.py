"""Random expression generators for property tests."""

import random
from fractions import Fraction

from bvbfv import br, d, gen, pair, vdel
from bvbfv.expr import Const, Expr, Gen, Neg, Prod, Sum


def random_scalar_expr(rng: random.Random, names, depth: int = 3) -> Expr:
    """Random scalar-valued expression over pairings of the given generators."""
    if depth == 0 or rng.random() < 0.3:
        a, b = rng.choice(names), rng.choice(names)
        x: Expr = pair(_vector(rng, a), _vector(rng, b))
        return x
    kind = rng.randrange(4)
    if kind == 0:
        return random_scalar_expr(rng, names, depth - 1) + random_scalar_expr(rng, names, depth - 1)
    if kind == 1:
        return Const(Fraction(rng.randint(-3, 3))) * random_scalar_expr(rng, names, depth - 1)
    if kind == 2:
        return d(random_scalar_expr(rng, names, depth - 1))
    return vdel(random_scalar_expr(rng, names, depth - 1))


def _vector(rng: random.Random, name: str) -> Expr:
    e: Expr = gen(name)
    r = rng.random()
    if r < 0.25:
        e = d(e)
    elif r < 0.45:
        e = vdel(e)
    if rng.random() < 0.3:
        e = br(e, gen(name))
    return e


def random_product_pair(rng: random.Random, names):
    """Two scalar-valued factors with known parities (for derivation laws)."""
    from bvbfv.calculus import grade

    e1 = random_scalar_expr(rng, names, depth=1)
    e2 = random_scalar_expr(rng, names, depth=1)
    return e1, e2
