"""Exact symbolic and lattice verification workbench for graded gauge-theory identities."""

from .core import Algebra, EngineError, EvalError, FieldSymbol, Grading, GradingError, UncoveredFieldError
from .expr import (
    AHol,
    Bracket,
    Const,
    D,
    Del,
    Expr,
    Gen,
    Hol,
    Pair,
    Prod,
    Star,
    Sum,
    antihol,
    br,
    const,
    d,
    gen,
    hol,
    normalize,
    pair,
    star,
    vdel,
)
from .calculus import (
    VectorFieldSpec,
    component,
    euler,
    expand_superfields,
    grade,
    iota,
    lie,
    lie_minus_d,
    substitute,
)
from .theory import Theory
from .realize import (
    CheckReport,
    Realization,
    equal_mod_d,
    is_zero,
    restricted_realization,
    sample_realization,
)
from .theories import (
    CATALOGUE,
    PolarisingFunctional,
    get_theory,
    make_bf,
    make_cs,
    make_cs_abelian_lorentzian,
    make_cs_double,
    make_psm_linear,
    make_ym1,
    make_ym2,
    polarising_functional,
)

__version__ = "0.1.0"
