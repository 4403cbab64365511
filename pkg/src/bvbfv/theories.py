"""Built-in theory constructors and polarising functionals.

Every constructor returns a :class:`~bvbfv.theory.Theory` whose Lagrangian,
one-form and cohomological assignment are entered exactly as printed in the
standard references for these models; the degree audit runs on construction.
Dual-valued (colie) generators realize the coefficient dual via the trace
form, so mixed brackets are coadjoint actions and need no extra data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict

from .core import FieldSymbol, GradingError
from .expr import Expr, Gen, br, d, gen, pair, star, vdel
from .theory import Theory

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)
TWELFTH = Fraction(1, 12)
QUARTER = Fraction(1, 4)


# ---------------------------------------------------------------------------
# Chern-Simons


def make_cs(m: int = 3, split: bool = False) -> Theory:
    """Lax Chern-Simons theory on a 3-torus; one superfield of total degree 1."""
    if m != 3:
        raise GradingError("the Chern-Simons construction needs ambient dimension 3")
    if split:
        roster = (
            FieldSymbol("c", 0, 1),
            FieldSymbol("A10", 1, 0, leg="hol", superfield="A"),
            FieldSymbol("A01", 1, 0, leg="antihol", superfield="A"),
            FieldSymbol("A_dag", 2, -1, antifield_of="A"),
            FieldSymbol("c_dag", 3, -2, antifield_of="c"),
        )
        superfields = {"A": ("A10", "A01"), "AA": ("c", "A", "A_dag", "c_dag")}
    else:
        roster = (
            FieldSymbol("c", 0, 1),
            FieldSymbol("A", 1, 0),
            FieldSymbol("A_dag", 2, -1, antifield_of="A"),
            FieldSymbol("c_dag", 3, -2, antifield_of="c"),
        )
        superfields = {"AA": ("c", "A", "A_dag", "c_dag")}
    AA = gen("AA")
    lagrangian = HALF * pair(AA, d(AA)) + SIXTH * pair(AA, br(AA, AA))
    theta = HALF * pair(AA, vdel(AA))
    q = {"AA": d(AA) + HALF * br(AA, AA)}
    t = Theory(
        name="cs-split" if split else "cs",
        m=3,
        roster=roster,
        superfield_map=superfields,
        lagrangian_src=lagrangian,
        theta_src=theta,
        q_src=q,
        split=split,
    )
    t.degree_audit()
    return t


def make_cs_abelian_lorentzian(m: int = 3) -> Theory:
    """Abelian Chern-Simons with a light-cone boundary star (u(1)^N realized at n=1)."""
    if m != 3:
        raise GradingError("the abelian Chern-Simons construction needs dimension 3")
    roster = (
        FieldSymbol("c", 0, 1),
        FieldSymbol("A", 1, 0),
        FieldSymbol("A_dag", 2, -1, antifield_of="A"),
        FieldSymbol("c_dag", 3, -2, antifield_of="c"),
    )
    AA = gen("AA")
    t = Theory(
        name="cs-abelian-lorentzian",
        m=3,
        roster=roster,
        superfield_map={"AA": ("c", "A", "A_dag", "c_dag")},
        lagrangian_src=HALF * pair(AA, d(AA)),
        theta_src=HALF * pair(AA, vdel(AA)),
        q_src={"AA": d(AA)},
        metric="lightcone",
        abelian=True,
    )
    t.degree_audit()
    return t


# ---------------------------------------------------------------------------
# BF


def _bf_names(m: int):
    """Rosters for BF in dimension m; degree-h slots of the two superfields."""
    a_side = []
    b_side = []
    for h in range(m + 1):
        gh = 1 - h
        if h == 0:
            a_side.append(("c", gh, None))
        elif h == 1:
            a_side.append(("A", gh, None))
        else:
            # antifield of the degree-(m-h) slot of the dual superfield
            hb = m - h
            partner = "B" if hb == m - 2 else ("tau" if m == 3 else f"tau{m - 2 - hb}")
            a_side.append((f"{partner}_dag", gh, partner))
    for h in range(m + 1):
        gh = m - 2 - h
        if h == m - 1:
            b_side.append(("A_dag", gh, "A"))
        elif h == m:
            b_side.append(("c_dag", gh, "c"))
        elif h == m - 2:
            b_side.append(("B", gh, None))
        else:
            b_side.append((("tau" if m == 3 else f"tau{m - 2 - h}"), gh, None))
    return a_side, b_side


def make_bf(m: int = 3, split: bool = False) -> Theory:
    """Lax BF theory in dimension m >= 2; dual superfield valued in the coefficient dual."""
    if m < 2:
        raise GradingError("BF needs ambient dimension >= 2")
    if split and m != 3:
        raise GradingError("the split BF construction is three-dimensional")
    a_side, b_side = _bf_names(m)
    roster = []
    a_members = []
    b_members = []
    for h, (name, gh, anti) in enumerate(a_side):
        if split and name == "A":
            roster.append(FieldSymbol("A10", 1, 0, leg="hol", superfield="A"))
            roster.append(FieldSymbol("A01", 1, 0, leg="antihol", superfield="A"))
            a_members.append("A")
            continue
        roster.append(FieldSymbol(name, h, gh, valuation="lie", antifield_of=anti, superfield="AA"))
        a_members.append(name)
    for h, (name, gh, anti) in enumerate(b_side):
        if split and name == "B":
            roster.append(FieldSymbol("B10", 1, 0, valuation="colie", leg="hol", superfield="B"))
            roster.append(FieldSymbol("B01", 1, 0, valuation="colie", leg="antihol", superfield="B"))
            b_members.append("B")
            continue
        roster.append(FieldSymbol(name, h, gh, valuation="colie", antifield_of=anti, superfield="BB"))
        b_members.append(name)
    superfields = {"AA": tuple(a_members), "BB": tuple(b_members)}
    if split:
        superfields["A"] = ("A10", "A01")
        superfields["B"] = ("B10", "B01")
    AA, BB = gen("AA"), gen("BB")
    curvature = d(AA) + HALF * br(AA, AA)
    t = Theory(
        name=("bf-split" if split else f"bf{m}" if m != 3 else "bf"),
        m=m,
        roster=tuple(roster),
        superfield_map=superfields,
        lagrangian_src=pair(BB, curvature),
        theta_src=pair(BB, vdel(AA)),
        q_src={"AA": curvature, "BB": d(BB) + br(AA, BB)},
        split=split,
    )
    t.degree_audit()
    return t


def make_cs_double(m: int = 3) -> Theory:
    """Chern-Simons calculus over the semidirect double, written on the BF roster.

    The structure algebra is the double (lie) x (its dual, abelian); pairings
    couple only dual pairs and the dual fiber brackets vanish, which the
    ``double`` normalization rules implement.  The roster, hence the exact
    evaluation model, is shared with :func:`make_bf`.
    """
    base = make_bf(m)
    superfields = dict(base.superfield_map)
    superfields["At"] = ("AA", "BB")
    At = gen("At")
    t = Theory(
        name="cs-double",
        m=m,
        roster=base.roster,
        superfield_map=superfields,
        lagrangian_src=HALF * pair(At, d(At)) + SIXTH * pair(At, br(At, At)),
        theta_src=HALF * pair(At, vdel(At)),
        q_src={"At": d(At) + HALF * br(At, At)},
        double=True,
    )
    t.degree_audit()
    return t


def bf_to_cs_field_map(m: int = 3) -> dict:
    """Generator re-bundling of the double: one inhomogeneous field of each parity slot."""
    a_side, b_side = _bf_names(m)
    return {
        "At": tuple(n for n, _, _ in a_side) + tuple(n for n, _, _ in b_side),
        "AA": tuple(n for n, _, _ in a_side),
        "BB": tuple(n for n, _, _ in b_side),
    }


# ---------------------------------------------------------------------------
# Yang-Mills


def make_ym2(m: int = 4) -> Theory:
    """Second-order Yang-Mills with a flat Euclidean star."""
    if m < 2:
        raise GradingError("Yang-Mills needs ambient dimension >= 2")
    roster = (
        FieldSymbol("c", 0, 1),
        FieldSymbol("A", 1, 0),
        FieldSymbol("A_dag", m - 1, -1, antifield_of="A"),
        FieldSymbol("c_dag", m, -2, antifield_of="c"),
    )
    A, c, A_dag, c_dag = gen("A"), gen("c"), gen("A_dag"), gen("c_dag")
    F = d(A) + HALF * br(A, A)
    dAc = d(c) + br(A, c)
    dAstarF = d(star(F)) + br(A, star(F))
    lagrangian = (
        HALF * pair(F, star(F))
        + pair(A_dag, dAc)
        + HALF * pair(c_dag, br(c, c))
        + pair(c, dAstarF)
        + HALF * pair(A_dag, br(c, c))
        + HALF * pair(br(c, c), star(F))
    )
    theta = (
        pair(A_dag, vdel(A))
        + pair(c_dag, vdel(c))
        + pair(vdel(A), star(F))
        + pair(A_dag, vdel(c))
        + pair(c, vdel(star(F)))
    )
    q = {
        "A": dAc,
        "c": HALF * br(c, c),
        "A_dag": dAstarF + br(c, A_dag),
        "c_dag": d(A_dag) + br(A, A_dag) + br(c, c_dag),
    }
    t = Theory(
        name="ym2",
        m=m,
        roster=roster,
        superfield_map={},
        lagrangian_src=lagrangian,
        theta_src=theta,
        q_src=q,
        metric="euclidean",
    )
    t.degree_audit()
    return t


def make_ym1(m: int = 4) -> Theory:
    """First-order Yang-Mills with the auxiliary (m-2)-form field."""
    if m < 3:
        raise GradingError("first-order Yang-Mills needs ambient dimension >= 3")
    roster = (
        FieldSymbol("c", 0, 1),
        FieldSymbol("A", 1, 0),
        FieldSymbol("B", m - 2, 0),
        FieldSymbol("B_dag", 2, -1, antifield_of="B"),
        FieldSymbol("A_dag", m - 1, -1, antifield_of="A"),
        FieldSymbol("c_dag", m, -2, antifield_of="c"),
    )
    A, B, c = gen("A"), gen("B"), gen("c")
    A_dag, B_dag, c_dag = gen("A_dag"), gen("B_dag"), gen("c_dag")
    F = d(A) + HALF * br(A, A)
    dAc = d(c) + br(A, c)
    lagrangian = (
        pair(B, F)
        + HALF * pair(B, star(B))
        + pair(A_dag, dAc)
        + pair(B_dag, br(c, B))
        + HALF * pair(c_dag, br(c, c))
        + pair(B, dAc)
        + HALF * pair(A_dag, br(c, c))
        + HALF * pair(B, br(c, c))
    )
    theta = (
        pair(A_dag, vdel(A))
        + pair(B_dag, vdel(B))
        + pair(c_dag, vdel(c))
        + pair(B, vdel(A))
        + pair(A_dag, vdel(c))
        + pair(B, vdel(c))
    )
    q = {
        "A": dAc,
        "B": br(c, B),
        "c": HALF * br(c, c),
        # the antifield sector is forced by the structure equations:
        # the covariant divergence of B drives A_dag, and c_dag picks up the
        # B/B_dag pairing term on top of the usual covariant derivative piece
        "A_dag": d(B) + br(A, B) + br(c, A_dag),
        "B_dag": F + star(B) + br(c, B_dag),
        "c_dag": d(A_dag) + br(A, A_dag) + br(c, c_dag) - br(B, B_dag),
    }
    t = Theory(
        name="ym1",
        m=m,
        roster=roster,
        superfield_map={},
        lagrangian_src=lagrangian,
        theta_src=theta,
        q_src=q,
        metric="euclidean",
    )
    t.degree_audit()
    return t


# ---------------------------------------------------------------------------
# Poisson sigma model (linear structure)


def make_psm_linear(structure: str = "matrix") -> Theory:
    """Poisson sigma model with a target Poisson structure linear in the coordinates.

    ``structure="matrix"`` realizes the linear structure through the Lie
    bracket of the matrix model (a Lie-Poisson target); ``structure="zero"``
    is the abelian degeneration, with no bracket terms at all.
    """
    if structure not in ("matrix", "zero"):
        raise GradingError(
            f"unsupported Poisson structure {structure!r}: only structures linear "
            "in the target coordinates are implemented"
        )
    m = 2
    roster = (
        FieldSymbol("X", 0, 0, valuation="colie", superfield="XX"),
        FieldSymbol("eta_dag", 1, -1, valuation="colie", antifield_of="eta", superfield="XX"),
        FieldSymbol("beta_dag", 2, -2, valuation="colie", antifield_of="beta", superfield="XX"),
        FieldSymbol("beta", 0, 1, valuation="lie", superfield="BB"),
        FieldSymbol("eta", 1, 0, valuation="lie", superfield="BB"),
        FieldSymbol("X_dag", 2, -1, valuation="lie", antifield_of="X", superfield="BB"),
    )
    superfields = {"XX": ("X", "eta_dag", "beta_dag"), "BB": ("beta", "eta", "X_dag")}
    XX, BB = gen("XX"), gen("BB")
    kinetic = pair(BB, d(XX))
    if structure == "matrix":
        lagrangian = kinetic + HALF * pair(XX, br(BB, BB))
        q = {"XX": d(XX) + br(BB, XX), "BB": d(BB) + HALF * br(BB, BB)}
    else:
        lagrangian = kinetic
        q = {"XX": d(XX), "BB": d(BB)}
    t = Theory(
        name="psm-linear" if structure == "matrix" else "psm-zero",
        m=m,
        roster=roster,
        superfield_map=superfields,
        lagrangian_src=lagrangian,
        theta_src=pair(BB, vdel(XX)),
        q_src=q,
        abelian=(structure == "zero"),
    )
    t.degree_audit()
    return t


def psm_pi_term(theory: Theory):
    """The quadratic structure term <Pi(X), beta beta> in the conventions of the catalogue."""
    return pair(gen("XX"), br(gen("BB"), gen("BB")))


# ---------------------------------------------------------------------------
# Polarising functionals


@dataclass(frozen=True)
class PolarisingFunctional:
    name: str
    theory: str
    expr: Expr


def _audit_polarising(f: PolarisingFunctional, theory: Theory):
    from .calculus import grade

    for g in grade(f.expr, theory.ctx):
        if g.v != 0 or g.total(theory.m) != -1:
            raise GradingError(
                f"polarising functional {f.name} for {theory.name} has a component "
                f"(h={g.h}, v={g.v}, gh={g.gh}) of total degree {g.total(theory.m)} != -1"
            )
    return f


def polarising_functional(name: str, theory: Theory) -> PolarisingFunctional:
    """Look up a catalogue polarising functional for a theory; degree audit included."""
    c, A, A_dag, c_dag = gen("c"), gen("A"), gen("A_dag"), gen("c_dag")
    table: Dict[tuple, Callable[[], Expr]] = {
        ("cs", "f_min"): lambda: HALF * pair(c, A_dag),
        ("cs", "f_tot"): lambda: HALF * (pair(A, A_dag) + pair(c, c_dag) + pair(c, A_dag) + pair(c, A)),
        ("cs", "f_min_10"): lambda: HALF * (pair(gen("A10"), gen("A01")) + pair(c, A_dag)),
        ("cs", "f_tot_10"): lambda: HALF
        * (pair(A, A_dag) + pair(c, c_dag) + pair(gen("A10"), gen("A01")) + pair(c, A_dag) + pair(c, A)),
        ("bf", "f_min"): lambda: pair(gen("tau"), gen("B_dag")),
        ("bf", "f_tot"): lambda: pair(gen("B"), gen("B_dag"))
        + pair(gen("tau"), gen("tau_dag"))
        + pair(gen("tau"), gen("B_dag")),
        ("bf", "f_10"): lambda: pair(gen("B10"), gen("A01")) + pair(gen("tau"), gen("B_dag")),
        ("bf", "f_bf_cs"): lambda: HALF * pair(gen("BB"), gen("AA")),
        ("psm", "f_lin"): lambda: pair(gen("BB"), gen("XX")),
        ("psm", "f_hol"): lambda: pair(gen("beta"), gen("eta_dag")),
        ("cs-abelian-lorentzian", "f_plus"): lambda: QUARTER * pair(c, A)
        - QUARTER * pair(c, star(A))
        + QUARTER * pair(A, star(A)),
    }
    key_theory = {
        "cs": "cs",
        "cs-split": "cs",
        "bf": "bf",
        "bf-split": "bf",
        "bf4": "bf",
        "psm-linear": "psm",
        "psm-zero": "psm",
        "cs-abelian-lorentzian": "cs-abelian-lorentzian",
    }.get(theory.name)
    if key_theory is None or (key_theory, name) not in table:
        raise GradingError(f"unknown polarising functional {name!r} for theory {theory.name!r}")
    if name.endswith("_10") or name == "f_10":
        if not theory.split:
            raise GradingError(f"functional {name!r} needs the theory's complex split")
    expr = table[(key_theory, name)]()
    return _audit_polarising(PolarisingFunctional(name=name, theory=theory.name, expr=expr), theory)


def functionals_for(theory: Theory) -> tuple:
    """Names of the catalogue functionals applicable to a theory."""
    if theory.name == "cs":
        return ("f_min", "f_tot")
    if theory.name == "cs-split":
        return ("f_min", "f_tot", "f_min_10", "f_tot_10")
    if theory.name in ("bf", "bf4"):
        return ("f_min", "f_tot", "f_bf_cs") if theory.name == "bf" else ()
    if theory.name == "bf-split":
        return ("f_min", "f_tot", "f_10")
    if theory.name in ("psm-linear", "psm-zero"):
        return ("f_lin", "f_hol")
    if theory.name == "cs-abelian-lorentzian":
        return ("f_plus",)
    return ()


# ---------------------------------------------------------------------------
# Catalogue


@dataclass(frozen=True)
class TheoryCatalogueEntry:
    id: str
    factory: Callable[[], Theory]
    description: str


CATALOGUE = {
    "cs": TheoryCatalogueEntry("cs", make_cs, "Chern-Simons, dimension 3"),
    "cs-split": TheoryCatalogueEntry(
        "cs-split", lambda: make_cs(split=True), "Chern-Simons with a complex boundary split"
    ),
    "cs-abelian-lorentzian": TheoryCatalogueEntry(
        "cs-abelian-lorentzian",
        make_cs_abelian_lorentzian,
        "abelian Chern-Simons with a light-cone boundary star",
    ),
    "bf": TheoryCatalogueEntry("bf", make_bf, "BF, dimension 3"),
    "bf4": TheoryCatalogueEntry("bf4", lambda: make_bf(4), "BF, dimension 4"),
    "bf-split": TheoryCatalogueEntry(
        "bf-split", lambda: make_bf(split=True), "BF with a complex boundary split"
    ),
    "cs-double": TheoryCatalogueEntry(
        "cs-double", make_cs_double, "Chern-Simons over the semidirect double, BF roster"
    ),
    "ym2": TheoryCatalogueEntry("ym2", make_ym2, "second-order Yang-Mills, dimension 4"),
    "ym1": TheoryCatalogueEntry("ym1", make_ym1, "first-order Yang-Mills, dimension 4"),
    "psm-linear": TheoryCatalogueEntry(
        "psm-linear", make_psm_linear, "Poisson sigma model, linear structure"
    ),
    "psm-zero": TheoryCatalogueEntry(
        "psm-zero", lambda: make_psm_linear("zero"), "Poisson sigma model, zero structure"
    ),
}


def get_theory(id_or_theory) -> Theory:
    if isinstance(id_or_theory, Theory):
        return id_or_theory
    try:
        return CATALOGUE[id_or_theory].factory()
    except KeyError:
        raise GradingError(f"unknown theory id {id_or_theory!r}") from None
