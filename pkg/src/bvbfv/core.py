"""Shared types for the graded field calculus: gradings, field symbols, algebra context."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional


class EngineError(Exception):
    """Base class for all engine errors."""


class GradingError(EngineError):
    """Raised for malformed gradings or valuation mixes in pairings/brackets."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{message}" + (f" at {path}" if path else ""))


class UncoveredFieldError(EngineError):
    """A vertical leg of a generator with no vector-field assignment was contracted."""


class EvalError(EngineError):
    """Raised when an expression cannot be evaluated in a realization."""


VALUATIONS = ("lie", "colie", "scalar")


@dataclass(frozen=True)
class Grading:
    """Multi-degree of a homogeneous term: form degree h, vertical degree v, ghost number gh."""

    h: int
    v: int
    gh: int

    @property
    def parity(self) -> int:
        return (self.h + self.v + self.gh) & 1

    def total(self, m: int) -> int:
        """Total degree in the convention gh + h - m (so Lagrangians sit in degree 0)."""
        return self.gh + self.h - m


@dataclass(frozen=True)
class FieldSymbol:
    """A generator of the field algebra.

    ``leg`` restricts the horizontal legs a generator may carry under a declared
    complex split: "hol" means pure dz, "antihol" means the complementary legs.
    Antifield partners satisfy h(a) = m - h(phi) and gh(a) = -1 - gh(phi).
    """

    name: str
    h: int
    gh: int
    valuation: str = "lie"
    antifield_of: Optional[str] = None
    superfield: Optional[str] = None
    leg: Optional[str] = None

    def __post_init__(self):
        if self.valuation not in VALUATIONS:
            raise GradingError(f"unknown valuation {self.valuation!r} for field {self.name}")
        if self.h < 0:
            raise GradingError(f"negative form degree on field {self.name}")

    @property
    def grading(self) -> Grading:
        return Grading(self.h, 0, self.gh)

    @property
    def parity(self) -> int:
        return (self.h + self.gh) & 1


class Algebra:
    """Context for normalization and grading: ambient dimension, roster, split/metric flags.

    ``double`` switches on the semidirect-double rules used to rewrite one theory's
    superfield calculus over a paired (lie, colie) roster: same-valuation pairings
    vanish and colie-colie brackets vanish (abelian fiber).
    """

    def __init__(
        self,
        m: int,
        roster: Mapping[str, FieldSymbol],
        superfields: Optional[Mapping[str, tuple]] = None,
        split: bool = False,
        metric: Optional[str] = None,
        double: bool = False,
    ):
        if m < 1:
            raise GradingError("ambient dimension must be >= 1")
        self.m = m
        self.roster = dict(roster)
        self.superfields = dict(superfields or {})
        self.split = split
        self.metric = metric
        self.double = double
        # caches keyed by atom tuples; atoms are immutable
        self._grade_cache: dict = {}
        self._key_cache: dict = {}

    def sym(self, name: str) -> FieldSymbol:
        try:
            return self.roster[name]
        except KeyError:
            raise GradingError(f"undeclared field {name!r}") from None

    def check_field_consistency(self):
        for s in self.roster.values():
            if not 0 <= s.h <= self.m:
                raise GradingError(f"field {s.name} has form degree {s.h} outside 0..{self.m}")
            if s.leg is not None and not self.split:
                raise GradingError(f"field {s.name} carries a split leg but no split is declared")
            if s.antifield_of is not None:
                base = self.sym(s.antifield_of)
                if s.h != self.m - base.h or s.gh != -1 - base.gh:
                    raise GradingError(
                        f"antifield {s.name} of {base.name}: expected h={self.m - base.h}, "
                        f"gh={-1 - base.gh}, found h={s.h}, gh={s.gh}"
                    )


ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")
