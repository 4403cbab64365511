"""Text format for theory definitions: parse, serialize, round-trip.

Grammar (one statement per line, ``#`` comments):

    theory NAME dim INT
    split complex on boundary
    metric (euclidean | lightcone)
    field NAME form=INT ghost=INT val=(lie|colie|scalar) [antifield_of=NAME] [leg=(hol|antihol)]
    superfield NAME = NAME (+ NAME)*
    L = EXPR
    theta = EXPR
    Q NAME = EXPR

Expressions: juxtaposition is the graded product; ``d(.)``, ``delta(.)``,
``hol(.)``, ``antihol(.)``, ``star(.)``; ``[a, b]`` brackets; ``<a, b>``
pairings; rational literals ``p/q``; parentheses.  The keywords are reserved
and cannot name fields.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .core import EngineError, FieldSymbol
from .expr import (
    AHol,
    Bracket,
    Const,
    D,
    Del,
    Expr,
    Gen,
    Hol,
    Neg,
    Pair,
    Prod,
    Star,
    Sum,
)
from .theory import Theory


class ParseError(EngineError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, column {col}: {message}")


KEYWORDS = {"d", "delta", "hol", "antihol", "star", "theory", "dim", "field",
            "superfield", "L", "theta", "Q", "split", "metric", "complex", "on", "boundary"}

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t]+)
      | (?P<comment>\#[^\n]*)
      | (?P<newline>\n)
      | (?P<int>\d+)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<punct>[=+\-/()\[\]<>,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "name" | punct literal | "newline" | "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "newline":
            tokens.append(Token("newline", "\n", line, col))
            line += 1
            col = 1
        else:
            if kind == "punct":
                tokens.append(Token(tok, tok, line, col))
            elif kind in ("int", "name"):
                tokens.append(Token(kind, tok, line, col))
            col += len(tok)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


_MAX_DEPTH = 200


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers -------------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: Optional[str] = None) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {what or kind}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def expect_keyword(self, word: str):
        t = self.peek()
        if t.kind != "name" or t.text != word:
            raise ParseError(f"expected {word!r}, found {t.text or 'end of input'!r}", t.line, t.col)
        return self.next()

    def skip_newlines(self):
        while self.peek().kind == "newline":
            self.next()

    def end_of_statement(self):
        t = self.peek()
        if t.kind not in ("newline", "eof"):
            raise ParseError(f"unexpected {t.text!r} after statement", t.line, t.col)
        self.skip_newlines()

    # -- expressions ----------------------------------------------------------

    _FACTOR_START = {"int", "name", "(", "[", "<"}

    def parse_expr(self, depth: int = 0) -> Expr:
        if depth > _MAX_DEPTH:
            t = self.peek()
            raise ParseError("expression nesting too deep", t.line, t.col)
        terms = [self.parse_term(depth + 1)]
        while self.peek().kind in ("+", "-"):
            op = self.next()
            term = self.parse_term(depth + 1)
            terms.append(Neg(term) if op.kind == "-" else term)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def parse_term(self, depth: int) -> Expr:
        negate = False
        while self.peek().kind == "-":
            self.next()
            negate = not negate
        factors = [self.parse_factor(depth)]
        while self.peek().kind in self._FACTOR_START:
            factors.append(self.parse_factor(depth))
        e: Expr = factors[0] if len(factors) == 1 else Prod(tuple(factors))
        return Neg(e) if negate else e

    def parse_factor(self, depth: int) -> Expr:
        if depth > _MAX_DEPTH:
            t = self.peek()
            raise ParseError("expression nesting too deep", t.line, t.col)
        t = self.peek()
        if t.kind == "int":
            self.next()
            num = int(t.text)
            if self.peek().kind == "/":
                self.next()
                dt = self.expect("int", "a denominator")
                den = int(dt.text)
                if den == 0:
                    raise ParseError("zero denominator", dt.line, dt.col)
                return Const(Fraction(num, den))
            return Const(Fraction(num))
        if t.kind == "(":
            self.next()
            e = self.parse_expr(depth + 1)
            self.expect(")")
            return e
        if t.kind == "[":
            self.next()
            a = self.parse_expr(depth + 1)
            self.expect(",")
            b = self.parse_expr(depth + 1)
            self.expect("]")
            return Bracket(a, b)
        if t.kind == "<":
            self.next()
            a = self.parse_expr(depth + 1)
            self.expect(",")
            b = self.parse_expr(depth + 1)
            self.expect(">")
            return Pair(a, b)
        if t.kind == "name":
            self.next()
            if t.text in ("d", "delta", "hol", "antihol", "star"):
                self.expect("(", f"'(' after {t.text}")
                e = self.parse_expr(depth + 1)
                self.expect(")")
                return {"d": D, "delta": Del, "hol": Hol, "antihol": AHol, "star": Star}[t.text](e)
            if t.text in KEYWORDS:
                raise ParseError(f"keyword {t.text!r} cannot be used as a field", t.line, t.col)
            return Gen(t.text)
        raise ParseError(f"expected an expression, found {t.text or 'end of input'!r}", t.line, t.col)

    # -- statements -----------------------------------------------------------

    def parse_theory(self) -> Theory:
        self.skip_newlines()
        self.expect_keyword("theory")
        name_tok = self.expect("name", "a theory name")
        self.expect_keyword("dim")
        m_tok = self.expect("int", "the ambient dimension")
        self.end_of_statement()

        split = False
        metric: Optional[str] = None
        roster: List[FieldSymbol] = []
        superfields: dict = {}
        lagrangian: Optional[Expr] = None
        theta: Optional[Expr] = None
        q_src: dict = {}
        declared: set = set()

        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind != "name":
                raise ParseError(f"expected a statement, found {t.text!r}", t.line, t.col)
            if t.text == "split":
                self.next()
                self.expect_keyword("complex")
                self.expect_keyword("on")
                self.expect_keyword("boundary")
                split = True
                self.end_of_statement()
            elif t.text == "metric":
                self.next()
                mt = self.expect("name", "a metric kind")
                if mt.text not in ("euclidean", "lightcone"):
                    raise ParseError(f"unknown metric {mt.text!r}", mt.line, mt.col)
                metric = mt.text
                self.end_of_statement()
            elif t.text == "field":
                self.next()
                roster.append(self._parse_field(declared))
                self.end_of_statement()
            elif t.text == "superfield":
                self.next()
                sname = self.expect("name", "a superfield name")
                if sname.text in declared or sname.text in superfields:
                    raise ParseError(f"name {sname.text!r} already declared", sname.line, sname.col)
                self.expect("=")
                members = [self.expect("name", "a member field").text]
                while self.peek().kind == "+":
                    self.next()
                    members.append(self.expect("name", "a member field").text)
                superfields[sname.text] = tuple(members)
                self.end_of_statement()
            elif t.text == "L":
                self.next()
                self.expect("=")
                lagrangian = self.parse_expr()
                self.end_of_statement()
            elif t.text == "theta":
                self.next()
                self.expect("=")
                theta = self.parse_expr()
                self.end_of_statement()
            elif t.text == "Q":
                self.next()
                target = self.expect("name", "a field or superfield name")
                self.expect("=")
                q_src[target.text] = self.parse_expr()
                self.end_of_statement()
            else:
                raise ParseError(f"unknown statement {t.text!r}", t.line, t.col)

        if lagrangian is None:
            raise ParseError("missing Lagrangian (L = ...)", name_tok.line, name_tok.col)
        if theta is None:
            raise ParseError("missing one-form (theta = ...)", name_tok.line, name_tok.col)
        if not q_src:
            raise ParseError("missing Q assignments", name_tok.line, name_tok.col)

        # validate member references before constructing
        known = {s.name for s in roster}
        for sname, members in superfields.items():
            for mmember in members:
                if mmember not in known and mmember not in superfields:
                    raise ParseError(f"superfield {sname} references undeclared field {mmember!r}",
                                     name_tok.line, name_tok.col)
        theory = Theory(
            name=name_tok.text,
            m=int(m_tok.text),
            roster=tuple(roster),
            superfield_map=superfields,
            lagrangian_src=lagrangian,
            theta_src=theta,
            q_src=q_src,
            split=split,
            metric=metric,
        )
        theory.abelian = not theory.uses_brackets()
        return theory

    def _parse_field(self, declared: set) -> FieldSymbol:
        name = self.expect("name", "a field name")
        if name.text in KEYWORDS:
            raise ParseError(f"keyword {name.text!r} cannot name a field", name.line, name.col)
        if name.text in declared:
            raise ParseError(f"field {name.text!r} declared twice", name.line, name.col)
        declared.add(name.text)
        attrs = {}
        while self.peek().kind == "name":
            key = self.next()
            if key.text not in ("form", "ghost", "val", "antifield_of", "leg"):
                raise ParseError(f"unknown field attribute {key.text!r}", key.line, key.col)
            self.expect("=")
            if key.text in ("form", "ghost"):
                negative = False
                if self.peek().kind == "-":
                    self.next()
                    negative = True
                v = self.expect("int", "an integer")
                attrs[key.text] = -int(v.text) if negative else int(v.text)
            else:
                v = self.expect("name", "a name")
                attrs[key.text] = v.text
        for req in ("form", "ghost", "val"):
            if req not in attrs:
                raise ParseError(f"field {name.text} is missing {req}=...", name.line, name.col)
        if attrs["val"] not in ("lie", "colie", "scalar"):
            raise ParseError(f"unknown valuation {attrs['val']!r}", name.line, name.col)
        if attrs.get("leg") not in (None, "hol", "antihol"):
            raise ParseError(f"unknown leg {attrs['leg']!r}", name.line, name.col)
        return FieldSymbol(
            name=name.text,
            h=attrs["form"],
            gh=attrs["ghost"],
            valuation=attrs["val"],
            antifield_of=attrs.get("antifield_of"),
            leg=attrs.get("leg"),
        )


def parse_theory(text: str) -> Theory:
    """Parse a theory source; grading audits run during construction."""
    return _Parser(text).parse_theory()


# ---------------------------------------------------------------------------
# Serialization


def _needs_parens_in_product(e: Expr) -> bool:
    return isinstance(e, (Sum, Neg))


def format_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Gen):
        return e.name
    if isinstance(e, Sum):
        parts = []
        for i, t in enumerate(e.terms):
            if isinstance(t, Neg):
                parts.append(("- " if i else "-") + _product_operand(t.arg))
            else:
                parts.append(("+ " if i else "") + _product_operand(t))
        return " ".join(p for p in parts if p)
    if isinstance(e, Neg):
        return "-" + _product_operand(e.arg)
    if isinstance(e, Prod):
        return " ".join(
            f"({format_expr(f)})" if _needs_parens_in_product(f) else format_expr(f) for f in e.factors
        )
    if isinstance(e, Bracket):
        return f"[{format_expr(e.a)}, {format_expr(e.b)}]"
    if isinstance(e, Pair):
        return f"<{format_expr(e.a)}, {format_expr(e.b)}>"
    if isinstance(e, D):
        return f"d({format_expr(e.arg)})"
    if isinstance(e, Del):
        return f"delta({format_expr(e.arg)})"
    if isinstance(e, Hol):
        return f"hol({format_expr(e.arg)})"
    if isinstance(e, AHol):
        return f"antihol({format_expr(e.arg)})"
    if isinstance(e, Star):
        return f"star({format_expr(e.arg)})"
    raise TypeError(f"cannot format {e!r}")


def _product_operand(e: Expr) -> str:
    return f"({format_expr(e)})" if isinstance(e, Sum) else format_expr(e)


def serialize(theory: Theory) -> str:
    """Canonical text form; `parse_theory` of the result reproduces the theory."""
    if theory.double:
        raise EngineError("theories over the semidirect double are an internal construction; "
                          "serialize the underlying dual-pair theory instead")
    lines = [f"theory {theory.name.replace('-', '_')} dim {theory.m}"]
    if theory.split:
        lines.append("split complex on boundary")
    if theory.metric:
        lines.append(f"metric {theory.metric}")
    for s in theory.roster:
        attrs = f"form={s.h} ghost={s.gh} val={s.valuation}"
        if s.antifield_of:
            attrs += f" antifield_of={s.antifield_of}"
        if s.leg:
            attrs += f" leg={s.leg}"
        lines.append(f"field {s.name} {attrs}")
    for name, members in theory.superfield_map.items():
        lines.append(f"superfield {name} = " + " + ".join(members))
    lines.append(f"L = {format_expr(theory.lagrangian_src)}")
    lines.append(f"theta = {format_expr(theory.theta_src)}")
    for target, rhs in theory.q_src.items():
        lines.append(f"Q {target} = {format_expr(rhs)}")
    return "\n".join(lines) + "\n"


def theories_equal(a: Theory, b: Theory) -> bool:
    """Structural equality: roster, superfields, flags and normal forms."""
    if (a.m, a.split, a.metric) != (b.m, b.split, b.metric):
        return False
    if a.roster != b.roster:
        return False
    if dict(a.superfield_map) != dict(b.superfield_map):
        return False
    if a.lagrangian != b.lagrangian or a.theta != b.theta:
        return False
    return a.q.assignments == b.q.assignments
