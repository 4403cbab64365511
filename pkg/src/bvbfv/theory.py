"""Theory container: roster, superfields, Lagrangian, one-form, cohomological assignment."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .core import Algebra, FieldSymbol, GradingError
from .calculus import VectorFieldSpec, grade
from .expr import Expr, mono_grading, mono_valuation, normalize


def _resolve_members(name: str, superfields: Mapping[str, tuple]) -> tuple:
    """Flatten nested superfield aliases down to generator names."""
    out = []
    for member in superfields[name]:
        if member in superfields:
            out.extend(_resolve_members(member, superfields))
        else:
            out.append(member)
    return tuple(out)


def _mono_hol_legs(mono, ctx: Algebra) -> Optional[int]:
    """Count of holomorphic legs in a monomial; None when undecidable."""
    count = 0
    for atom in mono:
        if atom[0] == "g":
            sym = ctx.sym(atom[1])
            if sym.leg == "hol":
                count += 1
            elif sym.leg is None and sym.h > 0:
                return None
            count += sum(1 for op in atom[2] if op == "h")
        elif atom[0] in ("b", "p"):
            inner = _mono_hol_legs((atom[1], atom[2]), ctx)
            if inner is None:
                return None
            count += inner
        else:
            return None
    return count


def extract_assignments(superfield: str, rhs, ctx: Algebra) -> dict:
    """Split a superfield-level assignment into per-generator assignments by degree.

    Components are matched on form degree; under a complex split two generators
    may share a degree and are disambiguated by their holomorphic leg count.
    """
    members = _resolve_members(superfield, ctx.superfields)
    by_h: dict = {}
    for name in members:
        by_h.setdefault(ctx.sym(name).h, []).append(name)
    out = {name: {} for name in members}
    nf = normalize(rhs, ctx)
    for mono, c in nf.items():
        g = mono_grading(mono, ctx)
        candidates = by_h.get(g.h)
        if not candidates:
            raise GradingError(
                f"assignment for {superfield} has a component of degree {g.h} "
                f"matching no member field"
            )
        if len(candidates) == 1:
            out[candidates[0]][mono] = c
            continue
        val = mono_valuation(mono, ctx)
        by_val = [n for n in candidates if ctx.sym(n).valuation == val]
        if len(by_val) == 1:
            out[by_val[0]][mono] = c
            continue
        narrowed = by_val or candidates
        hol = _mono_hol_legs(mono, ctx)
        if hol is None:
            raise GradingError(
                f"cannot split degree-{g.h} component of Q({superfield}) between "
                f"{narrowed} (ambiguous legs)"
            )
        legged = [n for n in narrowed if ctx.sym(n).leg == ("hol" if hol else "antihol")]
        if len(legged) != 1:
            raise GradingError(f"no unique split target among {narrowed}")
        out[legged[0]][mono] = c
    return out


@dataclass
class Theory:
    """A lax theory: roster with gradings, Lagrangian, one-form and Q-assignment.

    ``lagrangian_src``/``theta_src``/``q_src`` keep the constructor-level
    expressions (with superfields unexpanded) for serialization; the normal
    forms and the prolonged vector field are computed once and cached.
    """

    name: str
    m: int
    roster: tuple
    superfield_map: Mapping[str, tuple]
    lagrangian_src: Expr
    theta_src: Expr
    q_src: Mapping[str, Expr]
    split: bool = False
    metric: Optional[str] = None
    double: bool = False
    abelian: bool = False

    def __post_init__(self):
        # the parent-superfield back reference is derived, not declared
        parent = {}
        for sname, members in self.superfield_map.items():
            for member in members:
                parent[member] = sname
        self.roster = tuple(
            s if parent.get(s.name) == s.superfield
            else FieldSymbol(s.name, s.h, s.gh, s.valuation, s.antifield_of, parent.get(s.name), s.leg)
            for s in self.roster
        )
        self.ctx = Algebra(
            self.m,
            {s.name: s for s in self.roster},
            superfields=self.superfield_map,
            split=self.split,
            metric=self.metric,
            double=self.double,
        )
        self._check_roster()
        self.lagrangian = normalize(self.lagrangian_src, self.ctx)
        self.theta = normalize(self.theta_src, self.ctx)
        assignments: dict = {}
        for target, rhs in self.q_src.items():
            if target in self.superfield_map:
                assignments.update(extract_assignments(target, rhs, self.ctx))
            else:
                assignments[target] = normalize(rhs, self.ctx)
        self.q = VectorFieldSpec(assignments, self.ctx)

    def _check_roster(self):
        seen = set()
        for s in self.roster:
            if s.name in seen:
                raise GradingError(f"field {s.name} declared twice")
            seen.add(s.name)
        for s in self.roster:
            if s.antifield_of is not None:
                base = s.antifield_of
                if base in self.superfield_map:
                    base_syms = [self.ctx.sym(n) for n in _resolve_members(base, self.superfield_map)]
                    h0, gh0 = base_syms[0].h, base_syms[0].gh
                    if any((b.h, b.gh) != (h0, gh0) for b in base_syms):
                        raise GradingError(f"antifield {s.name} pairs an inhomogeneous alias {base}")
                elif base not in self.ctx.roster:
                    raise GradingError(f"antifield {s.name} pairs undeclared field {base}")
                else:
                    b = self.ctx.sym(base)
                    h0, gh0 = b.h, b.gh
                if (s.h, s.gh) != (self.m - h0, -1 - gh0):
                    raise GradingError(
                        f"antifield {s.name}: expected h={self.m - h0}, gh={-1 - gh0}, "
                        f"found h={s.h}, gh={s.gh}"
                    )

    # -- degree audit -------------------------------------------------------

    def degree_audit(self):
        """Check gh = m - h on the Lagrangian and gh = m - h - 1, v = 1 on theta."""
        for g in grade(self.lagrangian, self.ctx):
            if g.v != 0 or g.gh != self.m - g.h:
                raise GradingError(
                    f"{self.name}: Lagrangian component (h={g.h}, v={g.v}, gh={g.gh}) "
                    f"violates gh = m - h"
                )
        for g in grade(self.theta, self.ctx):
            if g.v != 1 or g.gh != self.m - g.h - 1:
                raise GradingError(
                    f"{self.name}: one-form component (h={g.h}, v={g.v}, gh={g.gh}) "
                    f"violates v = 1, gh = m - h - 1"
                )

    def generators(self) -> Sequence[FieldSymbol]:
        return self.roster

    def antifields(self) -> tuple:
        return tuple(s.name for s in self.roster if s.antifield_of is not None)

    def uses_brackets(self) -> bool:
        def mono_has_bracket(mono):
            for a in mono:
                if a[0] == "b":
                    return True
                if a[0] in ("p",):
                    if mono_has_bracket((a[1], a[2])):
                        return True
                if a[0] == "s" and mono_has_bracket(a[1]):
                    return True
            return False

        pools = [self.lagrangian, self.theta, *self.q.assignments.values()]
        return any(mono_has_bracket(m) for nf in pools for m in nf)

    def with_data(self, lagrangian_src, theta_src, name: Optional[str] = None) -> "Theory":
        """Same roster and Q, new Lagrangian and one-form (used by f-transformations)."""
        return Theory(
            name=name or self.name,
            m=self.m,
            roster=self.roster,
            superfield_map=self.superfield_map,
            lagrangian_src=lagrangian_src,
            theta_src=theta_src,
            q_src=dict(self.q_src),
            split=self.split,
            metric=self.metric,
            double=self.double,
            abelian=self.abelian,
        )
