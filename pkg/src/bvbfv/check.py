"""The theorem engine: modified Lagrangian, difference, descent, f-transformations.

Every public check returns :class:`~bvbfv.realize.CheckReport`; an identity
passes only when the residual evaluates to the literal zero form on all
trials.  Syntactic checks (top one-form shape, locality of the contraction)
are decided on normal forms directly.
"""

from __future__ import annotations

import time
from fractions import Fraction
from typing import List, Optional

from .calculus import (
    VectorFieldSpec,
    component,
    euler,
    every_monomial_tagged,
    grade,
    iota,
    lie,
    lie_minus_d,
    substitute,
    untag,
)
from .core import GradingError
from .expr import d as d_op
from .expr import nf_del, nf_scale, nf_sum, normalize, vdel
from .realize import CheckReport, is_zero, sample_realization
from .theories import PolarisingFunctional
from .theory import Theory

NEG = Fraction(-1)


def nf_sub(a: dict, b: dict) -> dict:
    return nf_sum((a, nf_scale(b, NEG)))


def varpi(theory: Theory) -> dict:
    """The vertical two-form delta(theta)."""
    return nf_del(theory.theta, theory.ctx)


def l_cmr(theory: Theory) -> dict:
    """Modified Lagrangian 2L - iota_Q theta."""
    return nf_sub(nf_scale(theory.lagrangian, Fraction(2)), iota(theory.q, theory.theta, theory.ctx))


def difference(theory: Theory) -> dict:
    """The canonical descent cocycle L - iota_Q theta."""
    return nf_sub(theory.lagrangian, iota(theory.q, theory.theta, theory.ctx))


def total_lagrangian(theory: Theory) -> dict:
    """L plus the Euler-weighted difference: the inhomogeneous descent representative."""
    return nf_sum((theory.lagrangian, euler(difference(theory), theory.ctx)))


# ---------------------------------------------------------------------------
# Core checks


def check_cmr(theory: Theory, trials: int = 5, seed: int = 0, n_values=(2, 3)) -> List[CheckReport]:
    """Certify both structure equations of a lax theory exactly."""
    ctx = theory.ctx
    w = varpi(theory)
    e1 = nf_sum(
        (
            iota(theory.q, w, ctx),
            nf_scale(nf_del(theory.lagrangian, ctx), NEG),
            nf_scale(_nf_d(theory.theta, ctx), NEG),
        )
    )
    e2 = nf_sub(
        nf_scale(iota(theory.q, iota(theory.q, w, ctx), ctx), Fraction(1, 2)),
        _nf_d(theory.lagrangian, ctx),
    )
    return [
        is_zero(e1, theory, trials=trials, seed=seed, name="cmr-potential", n_values=n_values,
                anchor="iota_Q varpi = delta L + d theta"),
        is_zero(e2, theory, trials=trials, seed=seed + 1, name="cmr-bracket", n_values=n_values,
                anchor="(1/2) iota_Q iota_Q varpi = d L"),
    ]


def _nf_d(nf: dict, ctx) -> dict:
    from .expr import nf_d

    return nf_d(nf, ctx)


def check_cohomological(theory: Theory, trials: int = 3, seed: int = 11) -> CheckReport:
    """L_Q squared vanishes on every generator (not assumed, certified)."""
    ctx = theory.ctx
    residuals = []
    for name in sorted(theory.q.assignments):
        from .expr import Gen

        e = normalize(Gen(name), ctx)
        residuals.append(lie(theory.q, lie(theory.q, e, ctx), ctx))
    return is_zero(nf_sum(residuals), theory, trials=trials, seed=seed, name="q-squared",
                   anchor="[Q,Q] = 0 on generators")


def check_descent(theory: Theory, e, trials: int = 5, seed: int = 3, name: str = "descent") -> CheckReport:
    """Certify (L_Q - d) e = 0."""
    return is_zero(
        lie_minus_d(theory.q, e, theory.ctx),
        theory,
        trials=trials,
        seed=seed,
        name=name,
        anchor="(L_Q - d) cocycle condition",
    )


def check_el_locality(theory: Theory) -> CheckReport:
    """Every monomial of iota_Q(theta) carries a factor substituted from Q.

    This is the syntactic restatement of "the difference agrees with the
    Lagrangian on the critical locus": L - Delta = iota_Q theta vanishes after
    setting every Q(phi) to zero.
    """
    t0 = time.perf_counter()
    tagged = iota(theory.q, theory.theta, theory.ctx, tag=True)
    ok = every_monomial_tagged(tagged)
    # sanity: dropping tags must reproduce the untagged contraction
    consistent = untag(tagged, theory.ctx) == iota(theory.q, theory.theta, theory.ctx)
    status = "pass" if (ok and consistent) else "fail"
    return CheckReport(
        name="el-locality",
        theory=theory.name,
        status=status,
        trials=1,
        witness=None if status == "pass" else "monomial without a Q-substituted factor",
        millis=(time.perf_counter() - t0) * 1000,
        soundness="syntactic decision on the tagged normal form",
        anchor="difference restricted to the critical locus equals L",
    )


def check_theorem_delta(theory: Theory, trials: int = 4, seed: int = 5) -> List[CheckReport]:
    """The four statements attached to the difference cocycle."""
    ctx = theory.ctx
    delta = difference(theory)
    reports = [
        check_descent(theory, delta, trials=trials, seed=seed, name="difference-descent"),
        is_zero(
            nf_sub(lie_minus_d(theory.q, theory.theta, ctx), nf_del(delta, ctx)),
            theory,
            trials=trials,
            seed=seed + 1,
            name="theta-coboundary",
            anchor="(L_Q - d) theta = delta Difference",
        ),
        check_el_locality(theory),
        check_descent(theory, total_lagrangian(theory), trials=trials, seed=seed + 2,
                      name="total-lagrangian-descent"),
    ]
    return reports


# ---------------------------------------------------------------------------
# f-transformations


def f_transform(theory: Theory, f: PolarisingFunctional, name: Optional[str] = None) -> Theory:
    """Shift (L, theta) by (d f, delta f); the assignment Q is unchanged."""
    for g in grade(f.expr, theory.ctx):
        if g.v != 0 or g.total(theory.m) != -1:
            raise GradingError(f"polarising functional {f.name} must have total degree -1")
    return theory.with_data(
        theory.lagrangian_src + d_op(f.expr),
        theory.theta_src + vdel(f.expr),
        name=name or f"{theory.name}+{f.name}",
    )


def check_f_transform_laws(
    theory: Theory, f: PolarisingFunctional, trials: int = 4, seed: int = 7
) -> List[CheckReport]:
    """The transformation shifts the difference and the total representative by
    exact terms, and preserves the structure equations."""
    ctx = theory.ctx
    shifted = f_transform(theory, f)
    fnf = normalize(f.expr, ctx)
    delta = difference(theory)
    delta_shift = nf_sub(delta, lie_minus_d(theory.q, fnf, ctx))
    rep1 = is_zero(
        nf_sub(difference(shifted), delta_shift),
        theory,
        trials=trials,
        seed=seed,
        name=f"f-law-difference[{f.name}]",
        anchor="P_f Difference = Difference - (L_Q - d) f",
    )
    total = total_lagrangian(theory)
    total_shift = nf_sub(total, lie_minus_d(theory.q, nf_sum((fnf, euler(fnf, ctx))), ctx))
    rep2 = is_zero(
        nf_sub(total_lagrangian(shifted), total_shift),
        theory,
        trials=trials,
        seed=seed + 1,
        name=f"f-law-total[{f.name}]",
        anchor="P_f Total = Total - (L_Q - d)(1 + Euler) f",
    )
    reps = check_cmr(shifted, trials=trials, seed=seed + 2)
    for r in reps:
        r.name = f"f-law-{r.name}[{f.name}]"
    return [rep1, rep2, *reps]


def check_f_group_action(theory: Theory, f: PolarisingFunctional, g: PolarisingFunctional) -> CheckReport:
    """P_f after P_g equals P_{f+g} on (L, theta), syntactically."""
    t0 = time.perf_counter()
    ctx = theory.ctx
    both = f_transform(f_transform(theory, g), f)
    combined = PolarisingFunctional(name=f"{f.name}+{g.name}", theory=theory.name, expr=f.expr + g.expr)
    direct = f_transform(theory, combined)
    ok = both.lagrangian == direct.lagrangian and both.theta == direct.theta
    return CheckReport(
        name=f"f-group-action[{f.name},{g.name}]",
        theory=theory.name,
        status="pass" if ok else "fail",
        trials=1,
        millis=(time.perf_counter() - t0) * 1000,
        soundness="syntactic equality of normal forms",
        anchor="P_f P_g = P_{f+g}",
    )


# ---------------------------------------------------------------------------
# BRST-type structure


def classical_part(theory: Theory) -> dict:
    """Antifield-free monomials of the top Lagrangian component."""
    ctx = theory.ctx
    top = component(theory.lagrangian, theory.m, ctx)
    anti = set(theory.antifields())

    def mono_has_antifield(mono):
        def atom_has(atom):
            if atom[0] == "g":
                return atom[1] in anti
            if atom[0] in ("b", "p"):
                return atom_has(atom[1]) or atom_has(atom[2])
            if atom[0] == "s":
                return any(atom_has(a) for a in atom[1])
            return False

        return any(atom_has(a) for a in mono)

    return {m: c for m, c in top.items() if not mono_has_antifield(m)}


def _theta_top_is_canonical(theory: Theory) -> bool:
    """[theta]^top = sum of <antifield, delta(partner)> with unit coefficients."""
    ctx = theory.ctx
    top = component(theory.theta, theory.m, ctx)
    anti = {s.name: s.antifield_of for s in theory.roster if s.antifield_of is not None}
    members = theory.superfield_map
    for mono, c in top.items():
        if len(mono) != 1 or mono[0][0] != "p":
            return False
        a1, a2 = mono[0][1], mono[0][2]
        # one factor is a bare antifield, the other the vertical leg of its partner
        cand = [(a1, a2), (a2, a1)]
        ok = False
        for af, leg in cand:
            if af[0] != "g" or leg[0] != "g":
                continue
            af_name, af_word, af_dl = af[1], af[2], af[3]
            leg_name, leg_word, leg_dl = leg[1], leg[2], leg[3]
            if af_word or af_dl or leg_word or not leg_dl:
                continue
            partner = anti.get(af_name)
            if partner is None:
                continue
            targets = members.get(partner, (partner,))
            if leg_name in targets and abs(c) == 1:
                ok = True
                break
        if not ok:
            return False
    return bool(top)


def is_brst_type(theory: Theory, trials: int = 4, seed: int = 13) -> CheckReport:
    """Top one-form of the shape sum(antifield delta(field)) and
    [L]^top = L_cl + iota_Q [theta]^top."""
    t0 = time.perf_counter()
    ctx = theory.ctx
    shape_ok = _theta_top_is_canonical(theory)
    if not shape_ok:
        return CheckReport(
            name="brst-type",
            theory=theory.name,
            status="fail",
            trials=0,
            witness="top one-form is not of the canonical antifield shape",
            millis=(time.perf_counter() - t0) * 1000,
            soundness="syntactic decision on the normal form",
            anchor="theory of BRST type",
        )
    theta_top = component(theory.theta, theory.m, ctx)
    resid = nf_sub(
        component(theory.lagrangian, theory.m, ctx),
        nf_sum((classical_part(theory), iota(theory.q, theta_top, ctx))),
    )
    rep = is_zero(resid, theory, trials=trials, seed=seed, name="brst-type",
                  anchor="theory of BRST type")
    rep.millis = (time.perf_counter() - t0) * 1000
    return rep


def check_brst_consequences(theory: Theory, trials: int = 4, seed: int = 17) -> List[CheckReport]:
    """For a BRST-type theory: the top difference is the classical Lagrangian
    and the whole difference is independent of the antifields."""
    ctx = theory.ctx
    delta = difference(theory)
    rep1 = is_zero(
        nf_sub(component(delta, theory.m, ctx), classical_part(theory)),
        theory,
        trials=trials,
        seed=seed,
        name="difference-top-classical",
        anchor="[Difference]^top = classical Lagrangian",
    )
    t0 = time.perf_counter()
    status = "pass"
    witness = None
    tried = 0
    for t in range(max(2, trials // 2)):
        base = sample_realization(theory, seed=900 + t, n=2)
        redrawn = sample_realization(theory, seed=900 + t, n=2, antifield_seed=7000 + t)
        v1 = base.eval_nf(delta)
        v2 = redrawn.eval_nf(delta)
        tried += 1
        from .realize import cf_add, cf_scale

        diff = cf_add(v1, cf_scale(v2, NEG))
        if not diff.is_zero():
            status = "fail"
            witness = diff.first_witness(theory.m, base.V)
            break
    rep2 = CheckReport(
        name="difference-antifield-independent",
        theory=theory.name,
        status=status,
        trials=tried,
        witness=witness,
        millis=(time.perf_counter() - t0) * 1000,
        soundness="exact evaluation on paired draws differing only in the antifields",
        anchor="Difference does not depend on the antifields",
    )
    return [rep1, rep2]


def brst_restriction(theory: Theory, e) -> dict:
    """Restrict an expression to the zero section: all antifields set to zero."""
    subs = {name: 0 for name in theory.antifields()}
    return substitute(e, subs, theory.ctx)


def q_brst(theory: Theory) -> VectorFieldSpec:
    """The assignment restricted to the non-antifield generators."""
    keep = {s.name for s in theory.roster if s.antifield_of is None}
    sub = {name: nf for name, nf in theory.q.assignments.items() if name in keep}
    return VectorFieldSpec(sub, theory.ctx)
