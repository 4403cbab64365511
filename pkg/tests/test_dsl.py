"""Theory text format: round-trips, error locations, fuzzing."""

import random
from pathlib import Path

import pytest

from bvbfv.dsl import ParseError, format_expr, parse_theory, serialize, theories_equal
from bvbfv.theories import get_theory

DATA = Path(__file__).resolve().parents[1] / "src" / "bvbfv" / "data"

CORPUS = {
    "cs.thy": "cs",
    "bf.thy": "bf",
    "ym1.thy": "ym1",
    "ym2.thy": "ym2",
    "psm_linear.thy": "psm-linear",
    "cs_abelian_lorentzian.thy": "cs-abelian-lorentzian",
}


@pytest.mark.parametrize("fname,tid", sorted(CORPUS.items()))
def test_corpus_matches_constructors(fname, tid):
    text = (DATA / fname).read_text()
    parsed = parse_theory(text)
    assert theories_equal(parsed, get_theory(tid))


@pytest.mark.parametrize("fname", sorted(CORPUS))
def test_serialize_idempotent(fname):
    text = (DATA / fname).read_text()
    once = serialize(parse_theory(text))
    twice = serialize(parse_theory(once))
    assert once == twice


@pytest.mark.parametrize("tid", ["cs", "bf", "ym1", "ym2", "psm-linear", "cs-split", "bf-split", "bf4"])
def test_roundtrip_catalogue(tid):
    th = get_theory(tid)
    assert theories_equal(parse_theory(serialize(th)), th)


def test_superfields_preserved_not_expanded():
    text = serialize(get_theory("cs"))
    assert "superfield AA = c + A + A_dag + c_dag" in text
    assert "<AA, d(AA)>" in text


def test_rationals_lowest_terms():
    from fractions import Fraction

    from bvbfv.expr import Const

    assert format_expr(Const(Fraction(2, 4))) == "1/2"


def test_undeclared_field_error_location():
    src = "theory t dim 3\nfield B form=1 ghost=0 val=lie\nL = <A, d(A)>\ntheta = <B, delta(B)>\nQ B = d(B)\n"
    with pytest.raises(Exception) as exc:
        parse_theory(src)
    assert "A" in str(exc.value)


def test_syntax_error_has_location():
    with pytest.raises(ParseError) as exc:
        parse_theory("theory t dim 3\nfield ] form=0\n")
    assert exc.value.line == 2


def test_zero_denominator():
    with pytest.raises(ParseError):
        parse_theory("theory t dim 2\nfield x form=0 ghost=0 val=lie\nL = 1/0 <x, x>\ntheta = <x, delta(x)>\nQ x = d(x)\n")


def test_missing_sections():
    with pytest.raises(ParseError):
        parse_theory("theory t dim 2\nfield x form=0 ghost=0 val=lie\n")


def test_keyword_cannot_name_field():
    with pytest.raises(ParseError):
        parse_theory("theory t dim 2\nfield delta form=0 ghost=0 val=lie\n")


def test_deep_nesting_is_an_error_not_a_crash():
    src = "theory t dim 2\nfield x form=0 ghost=0 val=lie\nL = " + "(" * 500 + "x" + ")" * 500
    with pytest.raises(ParseError):
        parse_theory(src)


ALPHABET = "abcdXY_ 0123456789=+-/()[]<>,\n#theorydimfieldsuperLQdelta"


def test_fuzz_smoke():
    rng = random.Random(1234)
    for _ in range(20000):
        s = "".join(rng.choice(ALPHABET) for _ in range(rng.randint(0, 40)))
        try:
            parse_theory(s)
        except ParseError:
            pass


def test_fuzz_bytes():
    rng = random.Random(99)
    for _ in range(2000):
        blob = bytes(rng.randrange(256) for _ in range(rng.randint(0, 60)))
        try:
            parse_theory(blob.decode("latin1"))
        except ParseError:
            pass
