"""Expression AST and exact normal form for local inhomogeneous forms.

Expressions are built from graded generators with products, Lie брackets,
invariant pairings and the differentials d (horizontal) and delta (vertical).
``normalize`` rewrites any expression into a canonical sum of monomials over
exact rational coefficients, with all Koszul signs resolved:

* products are graded-commutative, factors sorted canonically;
* brackets are graded-antisymmetric, arguments sorted canonically;
* pairings are graded-symmetric;
* d and delta are odd derivations with d^2 = delta^2 = d delta + delta d = 0;
* monomials whose total form degree exceeds the ambient dimension vanish.

No Jacobi or pairing-invariance rewriting happens here; identities that need
them are certified by exact evaluation (see :mod:`bvbfv.realize`).

Atoms in normal form are nested tuples:

    ("g", name, word, dl, qt)   derivative word applied to (delta phi if dl else phi)
    ("b", a1, a2)               graded Lie bracket of two atoms
    ("p", a1, a2)               invariant pairing of two atoms (scalar-valued)
    ("s", mono, word)           derivative word applied to the Hodge star of a monomial

Derivative words are canonically sorted tuples over {"h", "a", "D"} meaning
the Dolbeault pieces and the plain horizontal differential; delta is stored
innermost via the ``dl`` flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .core import Algebra, GradingError, Grading, as_fraction

# ---------------------------------------------------------------------------
# AST


class Expr:
    """Immutable expression tree; supports +, -, * and scalar multiplication."""

    __slots__ = ()

    def __add__(self, other):
        return Sum((self, _coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Sum((self, Neg(_coerce(other))))

    def __rsub__(self, other):
        return Sum((_coerce(other), Neg(self)))

    def __mul__(self, other):
        return Prod((self, _coerce(other)))

    def __rmul__(self, other):
        return Prod((_coerce(other), self))

    def __neg__(self):
        return Neg(self)


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Const(as_fraction(x))
    raise TypeError(f"cannot use {type(x).__name__} in an expression")


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction

    __slots__ = ("value",)


@dataclass(frozen=True)
class Gen(Expr):
    name: str

    __slots__ = ("name",)


@dataclass(frozen=True)
class Sum(Expr):
    terms: tuple

    __slots__ = ("terms",)


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr

    __slots__ = ("arg",)


@dataclass(frozen=True)
class Prod(Expr):
    factors: tuple

    __slots__ = ("factors",)


@dataclass(frozen=True)
class Bracket(Expr):
    a: Expr
    b: Expr

    __slots__ = ("a", "b")


@dataclass(frozen=True)
class Pair(Expr):
    a: Expr
    b: Expr

    __slots__ = ("a", "b")


@dataclass(frozen=True)
class D(Expr):
    arg: Expr

    __slots__ = ("arg",)


@dataclass(frozen=True)
class Del(Expr):
    arg: Expr

    __slots__ = ("arg",)


@dataclass(frozen=True)
class Hol(Expr):
    arg: Expr

    __slots__ = ("arg",)


@dataclass(frozen=True)
class AHol(Expr):
    arg: Expr

    __slots__ = ("arg",)


@dataclass(frozen=True)
class Star(Expr):
    arg: Expr

    __slots__ = ("arg",)


def gen(name: str) -> Gen:
    return Gen(name)


def const(x) -> Const:
    return Const(as_fraction(x))


def pair(a, b) -> Pair:
    return Pair(_coerce(a), _coerce(b))


def br(a, b) -> Bracket:
    return Bracket(_coerce(a), _coerce(b))


def d(a) -> D:
    return D(_coerce(a))


def vdel(a) -> Del:
    return Del(_coerce(a))


def hol(a) -> Hol:
    return Hol(_coerce(a))


def antihol(a) -> AHol:
    return AHol(_coerce(a))


def star(a) -> Star:
    return Star(_coerce(a))


# ---------------------------------------------------------------------------
# Atoms

_OP_RANK = {"h": 0, "a": 1, "D": 2}


def star_codim(ctx: Algebra) -> int:
    """Form-degree pivot of the star: the light-cone star is the 2d boundary star."""
    return 2 if ctx.metric == "lightcone" else ctx.m


def atom_grading(atom, ctx: Algebra) -> Grading:
    cached = ctx._grade_cache.get(atom)
    if cached is not None:
        return cached
    kind = atom[0]
    if kind == "g":
        s = ctx.sym(atom[1])
        g = Grading(s.h + len(atom[2]), atom[3], s.gh)
    elif kind in ("b", "p"):
        g1 = atom_grading(atom[1], ctx)
        g2 = atom_grading(atom[2], ctx)
        g = Grading(g1.h + g2.h, g1.v + g2.v, g1.gh + g2.gh)
    elif kind == "s":
        gm = mono_grading(atom[1], ctx)
        g = Grading(star_codim(ctx) - gm.h + len(atom[2]), gm.v, gm.gh)
    else:  # pragma: no cover
        raise GradingError(f"unknown atom kind {kind!r}")
    ctx._grade_cache[atom] = g
    return g


def atom_parity(atom, ctx: Algebra) -> int:
    return atom_grading(atom, ctx).parity


def atom_valuation(atom, ctx: Algebra) -> str:
    kind = atom[0]
    if kind == "g":
        return ctx.sym(atom[1]).valuation
    if kind == "p":
        return "scalar"
    if kind == "b":
        v1 = atom_valuation(atom[1], ctx)
        v2 = atom_valuation(atom[2], ctx)
        if v1 == "lie" and v2 == "lie":
            return "lie"
        return "colie"
    if kind == "s":
        return mono_valuation(atom[1], ctx)
    raise GradingError(f"unknown atom kind {kind!r}")  # pragma: no cover


def atom_key(atom, ctx: Algebra) -> str:
    k = ctx._key_cache.get(atom)
    if k is None:
        k = repr(atom)
        ctx._key_cache[atom] = k
    return k


def mono_grading(mono, ctx: Algebra) -> Grading:
    h = v = gh = 0
    for a in mono:
        g = atom_grading(a, ctx)
        h += g.h
        v += g.v
        gh += g.gh
    return Grading(h, v, gh)


def mono_valuation(mono, ctx: Algebra) -> str:
    val = "scalar"
    for a in mono:
        av = atom_valuation(a, ctx)
        if av != "scalar":
            if val != "scalar":
                return "mixed"
            val = av
    return val


# ---------------------------------------------------------------------------
# Normal form: dict {monomial tuple: Fraction}


def _nf_add(out: dict, mono, coeff: Fraction):
    if not coeff:
        return
    cur = out.get(mono)
    if cur is None:
        out[mono] = coeff
    else:
        cur += coeff
        if cur:
            out[mono] = cur
        else:
            del out[mono]


def nf_sum(nfs: Iterable[dict]) -> dict:
    out: dict = {}
    for nf in nfs:
        for mono, c in nf.items():
            _nf_add(out, mono, c)
    return out


def nf_scale(nf: dict, c: Fraction) -> dict:
    if not c:
        return {}
    return {mono: v * c for mono, v in nf.items()}


def mono_mul(m1, m2, ctx: Algebra):
    """Graded product of two canonical monomials. Returns (sign, monomial) or None."""
    h = mono_grading(m1, ctx).h + mono_grading(m2, ctx).h
    if h > ctx.m:
        return None
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    out = list(m1)
    sign = 1
    for atom in m2:
        key = atom_key(atom, ctx)
        par = atom_parity(atom, ctx)
        i = len(out)
        # insertion sort from the right, tracking Koszul signs
        while i > 0:
            prev = out[i - 1]
            pk = atom_key(prev, ctx)
            if pk < key:
                break
            if pk == key:
                if par & atom_parity(prev, ctx) & 1:
                    return None  # odd atom squared
                break
            if par and atom_parity(prev, ctx):
                sign = -sign
            i -= 1
        out.insert(i, atom)
    return sign, tuple(out)


def nf_mul(nf1: dict, nf2: dict, ctx: Algebra) -> dict:
    out: dict = {}
    for m1, c1 in nf1.items():
        for m2, c2 in nf2.items():
            r = mono_mul(m1, m2, ctx)
            if r is None:
                continue
            sign, mono = r
            _nf_add(out, mono, c1 * c2 * sign)
    return out


def _extract_vector(mono, ctx: Algebra, where: str):
    """Split a monomial into (sign, scalar_monomial, vector_atom).

    The sign moves the unique non-scalar atom past the factors to its right.
    """
    vec_idx = None
    for i, a in enumerate(mono):
        if atom_valuation(a, ctx) != "scalar":
            if vec_idx is not None:
                raise GradingError("malformed valuation mix (two algebra-valued factors)", where)
            vec_idx = i
    if vec_idx is None:
        raise GradingError("argument has no algebra-valued factor", where)
    v = mono[vec_idx]
    sign = 1
    if atom_parity(v, ctx):
        for a in mono[vec_idx + 1 :]:
            if atom_parity(a, ctx):
                sign = -sign
    rest = mono[:vec_idx] + mono[vec_idx + 1 :]
    return sign, rest, v


def _bracket_atom(v1, v2, ctx: Algebra):
    """Canonical bracket atom as an NF over singleton monomials (may be empty)."""
    if atom_grading(v1, ctx).h + atom_grading(v2, ctx).h > ctx.m:
        return {}
    val1 = atom_valuation(v1, ctx)
    val2 = atom_valuation(v2, ctx)
    p1 = atom_parity(v1, ctx)
    p2 = atom_parity(v2, ctx)
    swap_sign = -1 if (p1 & p2) == 0 else 1  # [x,y] = -(-1)^{|x||y|}[y,x]
    if val1 == "colie" and val2 == "colie":
        if ctx.double:
            return {}
        raise GradingError("bracket of two dual-valued arguments")
    if val1 == "colie" and val2 == "lie":
        return {(("b", v2, v1),): Fraction(swap_sign)}
    if val1 == "lie" and val2 == "lie":
        k1 = atom_key(v1, ctx)
        k2 = atom_key(v2, ctx)
        if k1 > k2:
            return {(("b", v2, v1),): Fraction(swap_sign)}
        if k1 == k2 and not (p1 & 1):
            return {}  # [x,x] = 0 for even x
    return {(("b", v1, v2),): Fraction(1)}


def _pair_atom(v1, v2, ctx: Algebra):
    if atom_grading(v1, ctx).h + atom_grading(v2, ctx).h > ctx.m:
        return {}
    val1 = atom_valuation(v1, ctx)
    val2 = atom_valuation(v2, ctx)
    p1 = atom_parity(v1, ctx)
    p2 = atom_parity(v2, ctx)
    swap_sign = -1 if (p1 & p2) else 1  # <x,y> = (-1)^{|x||y|}<y,x>
    if ctx.double and val1 == val2:
        return {}
    if val1 == "colie" and val2 == "colie":
        raise GradingError("pairing of two dual-valued arguments")
    if val1 == "colie" and val2 == "lie":
        return {(("p", v2, v1),): Fraction(swap_sign)}
    if val1 == val2:
        k1 = atom_key(v1, ctx)
        k2 = atom_key(v2, ctx)
        if k1 > k2:
            return {(("p", v2, v1),): Fraction(swap_sign)}
        if k1 == k2 and (p1 & 1):
            return {}  # <x,x> = 0 for odd x
    return {(("p", v1, v2),): Fraction(1)}


def _nf_bilinear(nf1: dict, nf2: dict, ctx: Algebra, make_atom, where: str) -> dict:
    out: dict = {}
    for m1, c1 in nf1.items():
        s1, rest1, v1 = _extract_vector(m1, ctx, where)
        pv1 = atom_parity(v1, ctx)
        for m2, c2 in nf2.items():
            s2, rest2, v2 = _extract_vector(m2, ctx, where)
            # move the scalar part of the second argument across the first vector atom
            cross = -1 if (pv1 and mono_grading(rest2, ctx).parity) else 1
            core = make_atom(v1, v2, ctx)
            if not core:
                continue
            r = mono_mul(rest1, rest2, ctx)
            if r is None:
                continue
            sr, rest = r
            coeff0 = c1 * c2 * s1 * s2 * cross * sr
            for catom_mono, cc in core.items():
                rr = mono_mul(rest, catom_mono, ctx)
                if rr is None:
                    continue
                s3, mono = rr
                _nf_add(out, mono, coeff0 * cc * s3)
    return out


# -- derivative words on atoms ------------------------------------------------


def _insert_op(word: tuple, op: str):
    """Insert an odd derivative op into a canonical word. Returns (sign, word) or None."""
    rank = _OP_RANK[op]
    i = 0
    for w in word:
        if w == op:
            return None
        if _OP_RANK[w] < rank:
            i += 1
        else:
            break
    sign = -1 if (i & 1) else 1
    return sign, word[:i] + (op,) + word[i:]


def _atom_apply_op(atom, op: str, ctx: Algebra) -> dict:
    """Apply one odd derivative (D, h, a, or del) to a single atom; returns an NF."""
    kind = atom[0]
    if kind == "g":
        name, word, dl, qt = atom[1], atom[2], atom[3], atom[4]
        if op == "del":
            if dl:
                return {}
            sign = -1 if (len(word) & 1) else 1
            return {(("g", name, word, 1, qt),): Fraction(sign)}
        r = _insert_op(word, op)
        if r is None:
            return {}
        sign, nw = r
        new_atom = ("g", name, nw, dl, qt)
        if not 0 <= atom_grading(new_atom, ctx).h <= ctx.m:
            return {}
        return {(new_atom,): Fraction(sign)}
    if kind in ("b", "p"):
        a1, a2 = atom[1], atom[2]
        out: dict = {}
        d1 = _atom_apply_op(a1, op, ctx)
        maker = _bracket_atom if kind == "b" else _pair_atom
        for mono, c in d1.items():
            # derivative of an atom is a sum of single atoms
            core = maker(mono[0], a2, ctx)
            for cm, cc in core.items():
                _nf_add(out, cm, c * cc)
        sign = -1 if atom_parity(a1, ctx) else 1
        d2 = _atom_apply_op(a2, op, ctx)
        for mono, c in d2.items():
            core = maker(a1, mono[0], ctx)
            for cm, cc in core.items():
                _nf_add(out, cm, c * cc * sign)
        return out
    if kind == "s":
        mono, word = atom[1], atom[2]
        if op == "del":
            # delta commutes with the star (even ambient dimension) and
            # anticommutes past the outer derivative word
            sign = -1 if (len(word) & 1) else 1
            inner = _derive_mono(mono, "del", ctx)
            out = {}
            for im, ic in inner.items():
                new_atom = ("s", im, word)
                if not 0 <= atom_grading(new_atom, ctx).h <= ctx.m:
                    continue
                _nf_add(out, (new_atom,), ic * sign)
            return out
        r = _insert_op(word, op)
        if r is None:
            return {}
        sign, nw = r
        new_atom = ("s", mono, nw)
        if not 0 <= atom_grading(new_atom, ctx).h <= ctx.m:
            return {}
        return {(new_atom,): Fraction(sign)}
    raise GradingError(f"unknown atom kind {kind!r}")  # pragma: no cover


def _derive_mono(mono, op: str, ctx: Algebra) -> dict:
    """Odd derivation across a monomial with Koszul prefix signs."""
    out: dict = {}
    prefix_sign = 1
    for i, atom in enumerate(mono):
        datom = _atom_apply_op(atom, op, ctx)
        if datom:
            left = mono[:i]
            right = mono[i + 1 :]
            for dm, dc in datom.items():
                r = mono_mul(left, dm, ctx)
                if r is None:
                    continue
                s1, m1 = r
                r2 = mono_mul(m1, right, ctx)
                if r2 is None:
                    continue
                s2, m2 = r2
                _nf_add(out, m2, dc * prefix_sign * s1 * s2)
        if atom_parity(atom, ctx):
            prefix_sign = -prefix_sign
    return out


def nf_derive(nf: dict, op: str, ctx: Algebra) -> dict:
    out: dict = {}
    for mono, c in nf.items():
        for dm, dc in _derive_mono(mono, op, ctx).items():
            _nf_add(out, dm, c * dc)
    return out


def nf_d(nf: dict, ctx: Algebra) -> dict:
    if ctx.split:
        return nf_sum((nf_derive(nf, "h", ctx), nf_derive(nf, "a", ctx)))
    return nf_derive(nf, "D", ctx)


def nf_del(nf: dict, ctx: Algebra) -> dict:
    return nf_derive(nf, "del", ctx)


def nf_star(nf: dict, ctx: Algebra) -> dict:
    out: dict = {}
    for mono, c in nf.items():
        atom = ("s", mono, ())
        if not 0 <= atom_grading(atom, ctx).h <= ctx.m:
            continue
        _nf_add(out, (atom,), c)
    return out


# ---------------------------------------------------------------------------
# AST -> normal form


def to_nf(e: Expr, ctx: Algebra, _path: str = "") -> dict:
    if isinstance(e, Const):
        return {(): e.value} if e.value else {}
    if isinstance(e, Gen):
        members = ctx.superfields.get(e.name)
        if members is not None:
            return nf_sum(to_nf(Gen(n), ctx) for n in members)
        ctx.sym(e.name)  # raises for undeclared fields
        return {(("g", e.name, (), 0, False),): Fraction(1)}
    if isinstance(e, Sum):
        return nf_sum(to_nf(t, ctx, _path) for t in e.terms)
    if isinstance(e, Neg):
        return nf_scale(to_nf(e.arg, ctx, _path), Fraction(-1))
    if isinstance(e, Prod):
        nf = {(): Fraction(1)}
        for f in e.factors:
            nf = nf_mul(nf, to_nf(f, ctx, _path), ctx)
        return nf
    if isinstance(e, Bracket):
        where = _path or "bracket"
        return _nf_bilinear(to_nf(e.a, ctx, _path), to_nf(e.b, ctx, _path), ctx, _bracket_atom, where)
    if isinstance(e, Pair):
        where = _path or "pairing"
        return _nf_bilinear(to_nf(e.a, ctx, _path), to_nf(e.b, ctx, _path), ctx, _pair_atom, where)
    if isinstance(e, D):
        return nf_d(to_nf(e.arg, ctx, _path), ctx)
    if isinstance(e, Del):
        return nf_del(to_nf(e.arg, ctx, _path), ctx)
    if isinstance(e, Hol):
        if not ctx.split:
            raise GradingError("Dolbeault piece used without a declared complex split", _path)
        return nf_derive(to_nf(e.arg, ctx, _path), "h", ctx)
    if isinstance(e, AHol):
        if not ctx.split:
            raise GradingError("Dolbeault piece used without a declared complex split", _path)
        return nf_derive(to_nf(e.arg, ctx, _path), "a", ctx)
    if isinstance(e, Star):
        return nf_star(to_nf(e.arg, ctx, _path), ctx)
    raise TypeError(f"not an expression: {e!r}")


def normalize(e: Union[Expr, dict], ctx: Algebra) -> dict:
    """Canonical normal form of an expression (idempotent on normal forms)."""
    if isinstance(e, dict):
        return e
    return to_nf(e, ctx)


def nf_is_syntactically_zero(nf: dict) -> bool:
    return not nf
