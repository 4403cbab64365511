"""Contraction, Lie derivative, Euler weighting and component extraction.

The contraction iota_Q along a ghost-degree +1 evolutionary assignment is an
*even* derivation (it trades one vertical leg for one unit of ghost number),
so it distributes over products with no Koszul signs.  The variational Lie
derivative is the graded commutator L_Q = iota_Q o delta - delta o iota_Q,
which acts as an odd, ghost-degree +1 derivation with L_Q(phi) = Q(phi).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Set, Union

from .core import Algebra, Grading, GradingError, UncoveredFieldError
from .expr import (
    Expr,
    _bracket_atom,
    _extract_vector,
    _nf_add,
    _nf_bilinear,
    _pair_atom,
    atom_grading,
    atom_parity,
    mono_grading,
    mono_mul,
    nf_d,
    nf_del,
    nf_derive,
    nf_mul,
    nf_scale,
    nf_star,
    nf_sum,
    normalize,
)

NF = dict
ExprLike = Union[Expr, dict]


def expand_superfields(e: ExprLike, ctx: Algebra) -> NF:
    """Resolve named superfield sums to generators (part of normalization)."""
    return normalize(e, ctx)


def grade(e: ExprLike, ctx: Algebra) -> Set[Grading]:
    """Exact multi-degrees of the homogeneous components of ``e``."""
    nf = normalize(e, ctx)
    return {mono_grading(mono, ctx) for mono in nf}


def component(e: ExprLike, h: int, ctx: Algebra) -> NF:
    """The h-form part of ``e``; zero when no term matches."""
    if not 0 <= h <= ctx.m:
        raise GradingError(f"form degree {h} outside 0..{ctx.m}")
    nf = normalize(e, ctx)
    return {mono: c for mono, c in nf.items() if mono_grading(mono, ctx).h == h}


def euler(e: ExprLike, ctx: Algebra) -> NF:
    """Graded Euler operator: each homogeneous term times its ghost number."""
    nf = normalize(e, ctx)
    out: NF = {}
    for mono, c in nf.items():
        gh = mono_grading(mono, ctx).gh
        if gh:
            out[mono] = c * gh
    return out


def _tag_atom(atom):
    kind = atom[0]
    if kind == "g":
        return ("g", atom[1], atom[2], atom[3], True)
    if kind in ("b", "p"):
        return (kind, _tag_atom(atom[1]), _tag_atom(atom[2]))
    if kind == "s":
        return ("s", tuple(_tag_atom(a) for a in atom[1]), atom[2])
    raise GradingError(f"unknown atom kind {kind!r}")  # pragma: no cover


def _tag_nf(nf: NF) -> NF:
    return {tuple(_tag_atom(a) for a in mono): c for mono, c in nf.items()}


def untag(e: ExprLike, ctx: Algebra) -> NF:
    nf = normalize(e, ctx)

    def untag_atom(atom):
        kind = atom[0]
        if kind == "g":
            return ("g", atom[1], atom[2], atom[3], False)
        if kind in ("b", "p"):
            return (kind, untag_atom(atom[1]), untag_atom(atom[2]))
        return ("s", tuple(untag_atom(a) for a in atom[1]), atom[2])

    out: NF = {}
    for mono, c in nf.items():
        atoms = [untag_atom(a) for a in mono]
        sign, m = _resort(atoms, ctx)
        if m is not None:
            _nf_add(out, m, c * sign)
    return out


def _resort(atoms, ctx: Algebra):
    sign = 1
    mono = ()
    for a in atoms:
        r = mono_mul(mono, (a,), ctx)
        if r is None:
            return 1, None
        s, mono = r
        sign *= s
    return sign, mono


def _word_apply(word: tuple, nf: NF, ctx: Algebra) -> NF:
    """Apply a canonical derivative word (outermost-first) to a normal form."""
    for op in reversed(word):
        nf = nf_derive(nf, op, ctx)
    return nf


class VectorFieldSpec:
    """Ghost-degree +1 evolutionary assignment phi -> Q(phi), prolonged through jets."""

    def __init__(self, assignments: Mapping[str, ExprLike], ctx: Algebra, tagged_pool: bool = True):
        self.ctx = ctx
        self.assignments: dict = {}
        self._tagged: dict = {}
        for name, e in assignments.items():
            sym = ctx.sym(name)
            nf = normalize(e, ctx)
            for mono in nf:
                g = mono_grading(mono, ctx)
                if (g.h, g.v, g.gh) != (sym.h, 0, sym.gh + 1):
                    raise GradingError(
                        f"Q({name}) must have degrees (h={sym.h}, v=0, gh={sym.gh + 1}); "
                        f"found component (h={g.h}, v={g.v}, gh={g.gh})"
                    )
            self.assignments[name] = nf
            if tagged_pool:
                self._tagged[name] = _tag_nf(nf)

    def covers(self, name: str) -> bool:
        return name in self.assignments

    def q_of(self, name: str, tag: bool) -> NF:
        try:
            return self._tagged[name] if tag else self.assignments[name]
        except KeyError:
            raise UncoveredFieldError(
                f"field {name!r} has a vertical leg but no vector-field assignment"
            ) from None


def _iota_atom(atom, q: VectorFieldSpec, ctx: Algebra, tag: bool) -> NF:
    kind = atom[0]
    if kind == "g":
        name, word, dl = atom[1], atom[2], atom[3]
        if not dl:
            return {}
        base = q.q_of(name, tag)
        # delta is stored innermost and the contraction is an even operator,
        # so the derivative word applies to Q(phi) with no crossing sign; the
        # jets are filled by prolongation through the word
        return _word_apply(word, base, ctx)
    if kind in ("b", "p"):
        a1, a2 = atom[1], atom[2]
        maker = _bracket_atom if kind == "b" else _pair_atom
        out: NF = {}
        for da, other, flip in ((_iota_atom(a1, q, ctx, tag), a2, False),
                                (_iota_atom(a2, q, ctx, tag), a1, True)):
            for mono, c in da.items():
                # iota of an atom may be a general normal form; rebuild the
                # bilinear node with each vector factor of each monomial
                s, rest, v = _extract_vector(mono, ctx, kind)
                if flip:
                    cross = -1 if (atom_parity(other, ctx) and mono_grading(rest, ctx).parity) else 1
                    core = maker(other, v, ctx)
                else:
                    cross = 1
                    core = maker(v, other, ctx)
                for cm, cc in core.items():
                    r = mono_mul(rest, cm, ctx)
                    if r is None:
                        continue
                    s2, m2 = r
                    _nf_add(out, m2, c * cc * s * s2 * cross)
        return out
    if kind == "s":
        mono, word = atom[1], atom[2]
        inner = _iota_mono(mono, q, ctx, tag)
        out: NF = {}
        for im, ic in inner.items():
            new_atom = ("s", im, word)
            if not 0 <= atom_grading(new_atom, ctx).h <= ctx.m:
                continue
            _nf_add(out, (new_atom,), ic)
        return out
    raise GradingError(f"unknown atom kind {kind!r}")  # pragma: no cover


def _iota_mono(mono, q: VectorFieldSpec, ctx: Algebra, tag: bool) -> NF:
    out: NF = {}
    for i, atom in enumerate(mono):
        datom = _iota_atom(atom, q, ctx, tag)
        if not datom:
            continue
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
            _nf_add(out, m2, dc * s1 * s2)
    return out


def iota(q: VectorFieldSpec, e: ExprLike, ctx: Algebra, tag: bool = False) -> NF:
    """Contraction: replaces each vertical leg delta(phi) by Q(phi).

    With ``tag=True`` every atom arising from a substituted Q(phi) is marked,
    which makes "every monomial contains a Q-factor" a decidable syntactic
    property of the result.
    """
    nf = normalize(e, ctx)
    out: NF = {}
    for mono, c in nf.items():
        for dm, dc in _iota_mono(mono, q, ctx, tag).items():
            _nf_add(out, dm, c * dc)
    return out


def lie(q: VectorFieldSpec, e: ExprLike, ctx: Algebra) -> NF:
    """Variational Lie derivative L_Q = iota_Q o delta - delta o iota_Q."""
    nf = normalize(e, ctx)
    return nf_sum((iota(q, nf_del(nf, ctx), ctx), nf_scale(nf_del(iota(q, nf, ctx), ctx), Fraction(-1))))


def lie_minus_d(q: VectorFieldSpec, e: ExprLike, ctx: Algebra) -> NF:
    """The combined coboundary (L_Q - d) of the descent complex."""
    nf = normalize(e, ctx)
    return nf_sum((lie(q, nf, ctx), nf_scale(nf_d(nf, ctx), Fraction(-1))))


def substitute(e: ExprLike, subs: Mapping[str, ExprLike], ctx: Algebra) -> NF:
    """Replace generators by expressions (0 allowed), e.g. to kill antifields."""
    nf = normalize(e, ctx)
    sub_nfs = {}
    for name, v in subs.items():
        sub_nfs[name] = {} if v == 0 else normalize(v, ctx)

    def expand_atom(atom) -> NF:
        kind = atom[0]
        if kind == "g":
            name, word, dl = atom[1], atom[2], atom[3]
            if name not in sub_nfs:
                return {(atom,): Fraction(1)}
            base = sub_nfs[name]
            if dl:
                # the stored atom is word(delta(phi)): delta already innermost
                base = nf_del(base, ctx)
            return _word_apply(word, base, ctx)
        if kind in ("b", "p"):
            maker = _bracket_atom if kind == "b" else _pair_atom
            return _nf_bilinear(expand_atom(atom[1]), expand_atom(atom[2]), ctx, maker, kind)
        if kind == "s":
            mono, word = atom[1], atom[2]
            inner: NF = {(): Fraction(1)}
            for a in mono:
                inner = nf_mul(inner, expand_atom(a), ctx)
            starred = nf_star(inner, ctx)
            return _word_apply(word, starred, ctx)
        raise GradingError(f"unknown atom kind {kind!r}")  # pragma: no cover

    out: NF = {}
    for mono, c in nf.items():
        cur: NF = {(): c}
        for atom in mono:
            cur = nf_mul(cur, expand_atom(atom), ctx)
            if not cur:
                break
        for m2, c2 in cur.items():
            _nf_add(out, m2, c2)
    return out


def atom_has_tag(atom) -> bool:
    kind = atom[0]
    if kind == "g":
        return atom[4]
    if kind in ("b", "p"):
        return atom_has_tag(atom[1]) or atom_has_tag(atom[2])
    if kind == "s":
        return any(atom_has_tag(a) for a in atom[1])
    return False


def every_monomial_tagged(nf: NF) -> bool:
    return all(any(atom_has_tag(a) for a in mono) for mono in nf)
