"""Named check suites: ordered identity lists with anchors, run to reports.

Suites are data: each entry is (name, anchor, check thunk over the shared
workspace).  The workspace caches theories and derived quantities so that a
suite with many entries builds each theory once.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

from .calculus import component, lie, lie_minus_d
from .check import (
    brst_restriction,
    check_brst_consequences,
    check_cmr,
    check_cohomological,
    check_descent,
    check_el_locality,
    check_f_group_action,
    check_f_transform_laws,
    check_theorem_delta,
    difference,
    f_transform,
    is_brst_type,
    l_cmr,
    nf_sub,
    q_brst,
    total_lagrangian,
)
from .expr import antihol, br, d, gen, hol, nf_scale, nf_sum, normalize, pair, star, vdel
from .realize import CheckReport, equal_mod_d, is_zero
from .theories import get_theory, polarising_functional, psm_pi_term
from .theory import Theory

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)
TWELFTH = Fraction(1, 12)
QUARTER = Fraction(1, 4)


class Workspace:
    """Shared theory/functional cache for one suite run."""

    def __init__(self):
        self._theories: Dict[str, Theory] = {}
        self._transformed: Dict[tuple, Theory] = {}

    def theory(self, tid: str) -> Theory:
        if tid not in self._theories:
            self._theories[tid] = get_theory(tid)
        return self._theories[tid]

    def functional(self, tid: str, fname: str):
        return polarising_functional(fname, self.theory(tid))

    def transformed(self, tid: str, fname: str) -> Theory:
        key = (tid, fname)
        if key not in self._transformed:
            self._transformed[key] = f_transform(self.theory(tid), self.functional(tid, fname))
        return self._transformed[key]


@dataclass(frozen=True)
class SuiteEntry:
    name: str
    anchor: str
    run: Callable[[Workspace], CheckReport]


@dataclass
class NamedSuite:
    id: str
    entries: List[SuiteEntry]
    reports: List[CheckReport]
    wall_millis: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def as_dict(self) -> dict:
        return {
            "suite": self.id,
            "passed": self.passed,
            "wall_millis": round(self.wall_millis, 3),
            "entries": [
                {**r.as_dict(), "name": e.name, "anchor": e.anchor}
                for e, r in zip(self.entries, self.reports)
            ],
        }


def _renamed(rep: CheckReport, name: str, anchor: str) -> CheckReport:
    rep.name = name
    rep.anchor = anchor
    return rep


def _entry(name: str, anchor: str, fn) -> SuiteEntry:
    def run(ws: Workspace) -> CheckReport:
        rep = fn(ws)
        return _renamed(rep, name, anchor)

    return SuiteEntry(name, anchor, run)


def _zero(name, anchor, tid, build, trials=4, stratum=None, seed=None):
    def fn(ws):
        th = ws.theory(tid)
        return is_zero(
            build(ws, th),
            th,
            trials=trials,
            seed=zlib.crc32(name.encode()) % 100000 if seed is None else seed,
            stratum_dim=stratum,
            name=name,
        )

    return _entry(name, anchor, fn)


def _mod_d(name, anchor, tid, build_pair, stratum, trials=4):
    def fn(ws):
        th = ws.theory(tid)
        lhs, rhs = build_pair(ws, th)
        return equal_mod_d(lhs, rhs, th, trials=trials, stratum_dim=stratum, name=name)

    return _entry(name, anchor, fn)


# ---------------------------------------------------------------------------
# Reference expressions


def _cs_classical():
    A = gen("A")
    return HALF * pair(A, d(A)) + SIXTH * pair(A, br(A, A))


def _cs_brst_cocycle_I():
    A, c = gen("A"), gen("c")
    return (
        HALF * (pair(A, d(A)) + pair(d(c), A) + pair(c, d(c)))
        + SIXTH * pair(A, br(A, A))
        - TWELFTH * pair(c, br(c, c))
    )


def _cs_brst_cocycle_II():
    A, c = gen("A"), gen("c")
    return (
        HALF * (pair(A, d(A)) + pair(c, d(A)))
        + SIXTH * pair(A, br(A, A))
        - QUARTER * pair(A, br(c, c))
        - TWELFTH * pair(c, br(c, c))
    )


def _cs_bv_cocycle_aI():
    A, c, A_dag, c_dag = gen("A"), gen("c"), gen("A_dag"), gen("c_dag")
    return (
        HALF * (pair(A, d(A)) + pair(d(c), A) + pair(c, d(c)))
        + pair(d(A_dag), c)
        + pair(br(A, A_dag), c)
        + SIXTH * pair(A, br(A, A))
        + HALF * pair(c_dag, br(c, c))
        - TWELFTH * pair(c, br(c, c))
    )


def _cs_bv_cocycle_bI():
    A, c, A_dag, c_dag = gen("A"), gen("c"), gen("A_dag"), gen("c_dag")
    return (
        HALF * (pair(A, d(A)) + 3 * pair(A, d(c)) + 3 * pair(c, d(c)) + 2 * pair(A_dag, d(c)))
        + pair(br(A, A_dag), c)
        + SIXTH * pair(A, br(A, A))
        - TWELFTH * pair(c, br(c, c))
        + HALF * (pair(c_dag, br(c, c)) + pair(c, br(A, A)) + pair(A_dag, br(c, c)) + pair(A, br(c, c)))
    )


def _ym_curvature():
    A = gen("A")
    return d(A) + HALF * br(A, A)


# ---------------------------------------------------------------------------
# Suite definitions


def _cs_core() -> List[SuiteEntry]:
    def cmr_entry(idx):
        def fn(ws):
            return check_cmr(ws.theory("cs"), trials=4)[idx]

        return fn

    entries = [
        _entry("cmr-potential", "iota_Q varpi = delta L + d theta", cmr_entry(0)),
        _entry("cmr-bracket", "(1/2) iota_Q iota_Q varpi = d L", cmr_entry(1)),
        _zero(
            "modified-lagrangian",
            "2L - iota_Q theta = (1/2)<AA,dAA> + (1/12)<AA,[AA,AA]>",
            "cs",
            lambda ws, th: nf_sub(
                l_cmr(th),
                normalize(HALF * pair(gen("AA"), d(gen("AA"))) + TWELFTH * pair(gen("AA"), br(gen("AA"), gen("AA"))), th.ctx),
            ),
        ),
        _zero(
            "difference-closed-form",
            "Difference = -(1/12)<AA,[AA,AA]>",
            "cs",
            lambda ws, th: nf_sub(
                difference(th),
                nf_scale(normalize(pair(gen("AA"), br(gen("AA"), gen("AA"))), th.ctx), -TWELFTH),
            ),
        ),
        _zero(
            "lagrangian-top-expansion",
            "[L]^top = (1/2)(AdA + A+dc + cdA+) + (1/6)A[A,A] + (1/2)c+[c,c] + A+[A,c]",
            "cs",
            lambda ws, th: nf_sub(
                component(th.lagrangian, 3, th.ctx),
                normalize(
                    HALF * (pair(gen("A"), d(gen("A"))) + pair(gen("A_dag"), d(gen("c"))) + pair(gen("c"), d(gen("A_dag"))))
                    + SIXTH * pair(gen("A"), br(gen("A"), gen("A")))
                    + HALF * pair(gen("c_dag"), br(gen("c"), gen("c")))
                    + pair(gen("A_dag"), br(gen("A"), gen("c"))),
                    th.ctx,
                ),
            ),
        ),
        _entry(
            "difference-descent",
            "(L_Q - d) Difference = 0",
            lambda ws: check_descent(ws.theory("cs"), difference(ws.theory("cs")), trials=4, name="difference-descent"),
        ),
        _entry(
            "theta-coboundary",
            "(L_Q - d) theta = delta Difference",
            lambda ws: check_theorem_delta(ws.theory("cs"), trials=4)[1],
        ),
        _entry("el-locality", "difference equals L on the critical locus", lambda ws: check_el_locality(ws.theory("cs"))),
        _entry(
            "total-lagrangian-descent",
            "(L_Q - d) Total = 0",
            lambda ws: check_descent(ws.theory("cs"), total_lagrangian(ws.theory("cs")), trials=4, name="total-lagrangian-descent"),
        ),
    ]
    return entries


def _cs_brst() -> List[SuiteEntry]:
    def printed_brst_difference(th):
        c = gen("c")
        return normalize(
            _cs_classical() + HALF * pair(gen("A"), d(c)) + HALF * pair(c, d(c)) - TWELFTH * pair(c, br(c, c)),
            th.ctx,
        )

    def printed_brst_difference_10(th):
        c = gen("c")
        lcl10 = _cs_classical() + HALF * d(pair(gen("A10"), gen("A01")))
        return normalize(
            lcl10 + pair(gen("A10"), antihol(c)) + HALF * pair(c, d(c)) - TWELFTH * pair(c, br(c, c)),
            th.ctx,
        )

    return [
        _entry("raw-not-brst-type", "plain data is not of BRST type (negative control)", lambda ws: _expect_fail(is_brst_type(ws.theory("cs")), "raw-not-brst-type")),
        _entry("ftot-brst-type", "f_tot-transformed theory is of BRST type", lambda ws: is_brst_type(ws.transformed("cs", "f_tot"))),
        _zero(
            "ftot-difference-closed-form",
            "P_ftot Difference = L_cl + (1/2)Adc + (1/2)cdc - (1/12)c[c,c]",
            "cs",
            lambda ws, th: nf_sub(difference(ws.transformed("cs", "f_tot")), printed_brst_difference(th)),
        ),
        _entry("ftot-top-classical", "[P_ftot Difference]^top = classical Lagrangian", lambda ws: check_brst_consequences(ws.transformed("cs", "f_tot"), trials=4)[0]),
        _entry("ftot-antifield-independence", "P_ftot Difference free of antifields", lambda ws: check_brst_consequences(ws.transformed("cs", "f_tot"), trials=4)[1]),
        _entry("ftot10-brst-type", "f_tot(1,0)-transformed theory is of BRST type", lambda ws: is_brst_type(ws.transformed("cs-split", "f_tot_10"))),
        _entry(
            "ftot10-difference-components",
            "P_ftot(1,0) Difference components match the closed form exactly off the middle degree",
            lambda ws: _components_exact(
                ws.transformed("cs-split", "f_tot_10"),
                printed_brst_difference_10(ws.theory("cs-split")),
                exact_h=(0, 1, 3),
            ),
        ),
        _mod_d(
            "ftot10-difference-codim1",
            "middle-degree component of P_ftot(1,0) Difference integrates to the closed form",
            "cs-split",
            lambda ws, th: (
                component(difference(ws.transformed("cs-split", "f_tot_10")), 2, th.ctx),
                component(printed_brst_difference_10(th), 2, th.ctx),
            ),
            stratum=2,
        ),
        _zero(
            "split-lq-polarising-pair",
            "L_Q <A10,A01> = <hol c, A01> - <A10, antihol c>",
            "cs-split",
            lambda ws, th: nf_sub(
                lie(th.q, normalize(pair(gen("A10"), gen("A01")), th.ctx), th.ctx),
                normalize(pair(hol(gen("c")), gen("A01")) - pair(gen("A10"), antihol(gen("c"))), th.ctx),
            ),
        ),
    ]


def _components_exact(transformed: Theory, printed_nf, exact_h) -> CheckReport:
    th = transformed
    diff = nf_sub(difference(th), printed_nf)
    resid = nf_sum([component(diff, h, th.ctx) for h in exact_h])
    return is_zero(resid, th, trials=4, name="components-exact")


def _expect_fail(rep: CheckReport, name: str) -> CheckReport:
    flipped = CheckReport(
        name=name,
        theory=rep.theory,
        status="pass" if rep.status == "fail" else "fail",
        trials=rep.trials,
        witness=None if rep.status == "fail" else "check unexpectedly passed",
        millis=rep.millis,
        soundness="negative control: the underlying check must fail",
    )
    return flipped


def _cs_codim1() -> List[SuiteEntry]:
    return [
        _zero(
            "difference-codim1",
            "[Difference]^(top-1) = -(1/4)([c,c]A+ + c[A,A])",
            "cs",
            lambda ws, th: nf_sub(
                component(difference(th), 2, th.ctx),
                nf_scale(normalize(pair(br(gen("c"), gen("c")), gen("A_dag")) + pair(gen("c"), br(gen("A"), gen("A"))), th.ctx), -QUARTER),
            ),
        ),
        _zero(
            "codim1-fmin",
            "codim-1 f_min difference = (1/2)(Adc - d(cA))",
            "cs",
            lambda ws, th: nf_sub(
                component(difference(ws.transformed("cs", "f_min")), 2, th.ctx),
                normalize(HALF * (pair(gen("A"), d(gen("c"))) - d(pair(gen("c"), gen("A")))), th.ctx),
            ),
        ),
        _zero(
            "codim1-ftot",
            "codim-1 f_tot difference = (1/2)Adc",
            "cs",
            lambda ws, th: nf_sub(
                component(difference(ws.transformed("cs", "f_tot")), 2, th.ctx),
                normalize(HALF * pair(gen("A"), d(gen("c"))), th.ctx),
            ),
        ),
        _mod_d(
            "codim1-fmin-vs-ftot",
            "f_min and f_tot integrands agree on a closed stratum",
            "cs",
            lambda ws, th: (
                component(difference(ws.transformed("cs", "f_min")), 2, th.ctx),
                component(difference(ws.transformed("cs", "f_tot")), 2, th.ctx),
            ),
            stratum=2,
        ),
        _mod_d(
            "codim1-fmin10",
            "codim-1 f_min(1,0) difference integrates to A10 antihol(c) - (1/2)d(cA)",
            "cs-split",
            lambda ws, th: (
                component(difference(ws.transformed("cs-split", "f_min_10")), 2, th.ctx),
                normalize(pair(gen("A10"), antihol(gen("c"))) - HALF * d(pair(gen("c"), gen("A"))), th.ctx),
            ),
            stratum=2,
        ),
        _mod_d(
            "codim1-ftot10",
            "codim-1 f_tot(1,0) difference integrates to A10 antihol(c)",
            "cs-split",
            lambda ws, th: (
                component(difference(ws.transformed("cs-split", "f_tot_10")), 2, th.ctx),
                normalize(pair(gen("A10"), antihol(gen("c"))), th.ctx),
            ),
            stratum=2,
        ),
        _mod_d(
            "codim1-10-pair",
            "the two (1,0) integrands agree on a closed stratum",
            "cs-split",
            lambda ws, th: (
                component(difference(ws.transformed("cs-split", "f_min_10")), 2, th.ctx),
                component(difference(ws.transformed("cs-split", "f_tot_10")), 2, th.ctx),
            ),
            stratum=2,
        ),
    ]


def _cs_descent_cocycles() -> List[SuiteEntry]:
    def with_brst_q(fn):
        def run(ws):
            th = ws.theory("cs")
            return fn(ws, th, q_brst(th))

        return run

    return [
        _entry(
            "brst-cocycle-I",
            "(L_Q - d) of the first order-zero cocycle vanishes",
            with_brst_q(lambda ws, th, qb: is_zero(lie_minus_d(qb, normalize(_cs_brst_cocycle_I(), th.ctx), th.ctx), th, trials=4, name="brst-cocycle-I")),
        ),
        _entry(
            "brst-cocycle-II",
            "(L_Q - d) of the second order-zero cocycle vanishes",
            with_brst_q(lambda ws, th, qb: is_zero(lie_minus_d(qb, normalize(_cs_brst_cocycle_II(), th.ctx), th.ctx), th, trials=4, name="brst-cocycle-II")),
        ),
        _entry(
            "brst-cocycle-difference-exact",
            "cocycle I - cocycle II = (1/2)(L_Q - d)<A,c>",
            with_brst_q(
                lambda ws, th, qb: is_zero(
                    nf_sub(
                        nf_sub(normalize(_cs_brst_cocycle_I(), th.ctx), normalize(_cs_brst_cocycle_II(), th.ctx)),
                        nf_scale(lie_minus_d(qb, normalize(pair(gen("A"), gen("c")), th.ctx), th.ctx), HALF),
                    ),
                    th,
                    trials=4,
                    name="brst-cocycle-difference-exact",
                )
            ),
        ),
        _zero(
            "bv-cocycle-aI",
            "(L_Q - d) of the antifield completion vanishes with the full Q",
            "cs",
            lambda ws, th: lie_minus_d(th.q, normalize(_cs_bv_cocycle_aI(), th.ctx), th.ctx),
        ),
        _zero(
            "bv-cocycle-aI-restriction",
            "zero-section restriction of the completion is cocycle I",
            "cs",
            lambda ws, th: nf_sub(
                brst_restriction(th, normalize(_cs_bv_cocycle_aI(), th.ctx)),
                normalize(_cs_brst_cocycle_I(), th.ctx),
            ),
        ),
        _zero(
            "bv-cocycle-bI",
            "(L_Q - d) of the second antifield completion vanishes with the full Q",
            "cs",
            lambda ws, th: lie_minus_d(th.q, normalize(_cs_bv_cocycle_bI(), th.ctx), th.ctx),
        ),
        _entry(
            "bv-cocycle-bI-restriction",
            "zero-section restriction of completion b = cocycle I + cF_A + (d - L_Q)(cA)",
            lambda ws: _bv_bI_restriction(ws),
        ),
    ]


def _bv_bI_restriction(ws: Workspace) -> CheckReport:
    th = ws.theory("cs")
    qb = q_brst(th)
    c, A = gen("c"), gen("A")
    FA = d(A) + HALF * br(A, A)
    rhs = nf_sum(
        (
            normalize(_cs_brst_cocycle_I(), th.ctx),
            normalize(pair(c, FA), th.ctx),
            nf_scale(lie_minus_d(qb, normalize(pair(c, A), th.ctx), th.ctx), Fraction(-1)),
        )
    )
    resid = nf_sub(brst_restriction(th, normalize(_cs_bv_cocycle_bI(), th.ctx)), rhs)
    return is_zero(resid, th, trials=4, name="bv-cocycle-bI-restriction")


def _bf_core() -> List[SuiteEntry]:
    def cmr_entry(tid, idx):
        def fn(ws):
            return check_cmr(ws.theory(tid), trials=4)[idx]

        return fn

    return [
        _entry("cmr-potential", "iota_Q varpi = delta L + d theta", cmr_entry("bf", 0)),
        _entry("cmr-bracket", "(1/2) iota_Q iota_Q varpi = d L", cmr_entry("bf", 1)),
        _zero("difference-vanishes", "Difference = 0 in every codimension", "bf", lambda ws, th: difference(th)),
        _zero(
            "theta-cocycle",
            "(L_Q - d) theta = 0 exactly when the difference vanishes",
            "bf",
            lambda ws, th: lie_minus_d(th.q, th.theta, th.ctx),
        ),
        _entry(
            "lagrangian-descent",
            "(L_Q - d) L = 0 (total Lagrangian equals L)",
            lambda ws: check_descent(ws.theory("bf"), ws.theory("bf").lagrangian, trials=4, name="lagrangian-descent"),
        ),
        _entry("ftot-brst-type", "f_tot-transformed theory is of BRST type", lambda ws: is_brst_type(ws.transformed("bf", "f_tot"))),
        _zero(
            "ftot-difference-closed-form",
            "P_ftot Difference = B F_A + tau F_A",
            "bf",
            lambda ws, th: nf_sub(
                difference(ws.transformed("bf", "f_tot")),
                normalize(pair(gen("B"), _ym_curvature()) + pair(gen("tau"), _ym_curvature()), th.ctx),
            ),
        ),
        _entry("el-locality", "difference equals L on the critical locus", lambda ws: check_el_locality(ws.theory("bf"))),
        _entry("cmr-bf4", "structure equations in dimension four", lambda ws: _merge(check_cmr(ws.theory("bf4"), trials=3), "cmr-bf4")),
    ]


def _merge(reports: List[CheckReport], name: str) -> CheckReport:
    status = "pass" if all(r.passed for r in reports) else "fail"
    witness = next((r.witness for r in reports if r.witness), None)
    return CheckReport(
        name=name,
        theory=reports[0].theory,
        status=status,
        trials=sum(r.trials for r in reports),
        witness=witness,
        millis=sum(r.millis for r in reports),
    )


def _bf_to_cs() -> List[SuiteEntry]:
    return [
        _entry("double-cmr", "structure equations over the semidirect double", lambda ws: _merge(check_cmr(ws.theory("cs-double"), trials=4), "double-cmr")),
        _zero(
            "double-difference",
            "Difference over the double = -(1/4)<BB,[AA,AA]>",
            "cs-double",
            lambda ws, th: nf_sub(
                difference(th),
                nf_scale(normalize(pair(gen("BB"), br(gen("AA"), gen("AA"))), th.ctx), -QUARTER),
            ),
        ),
        _zero(
            "lagrangian-shift",
            "L over the double = L_BF + d f",
            "bf",
            lambda ws, th: nf_sub(
                ws.theory("cs-double").lagrangian,
                nf_sum((th.lagrangian, normalize(d(ws.functional("bf", "f_bf_cs").expr), th.ctx))),
            ),
        ),
        _zero(
            "theta-shift",
            "theta over the double = theta_BF + delta f",
            "bf",
            lambda ws, th: nf_sub(
                ws.theory("cs-double").theta,
                nf_sum((th.theta, normalize(vdel(ws.functional("bf", "f_bf_cs").expr), th.ctx))),
            ),
        ),
        _zero(
            "total-rebundling",
            "Total over the double = f-transformed total of BF",
            "bf",
            lambda ws, th: nf_sub(
                total_lagrangian(ws.theory("cs-double")),
                total_lagrangian(ws.transformed("bf", "f_bf_cs")),
            ),
        ),
        _entry("q-rebundling", "the double assignment restricts to the BF assignment", lambda ws: _q_match(ws)),
    ]


def _q_match(ws: Workspace) -> CheckReport:
    t0 = time.perf_counter()
    bf = ws.theory("bf")
    csd = ws.theory("cs-double")
    ok = all(csd.q.assignments.get(k) == v for k, v in bf.q.assignments.items())
    return CheckReport(
        name="q-rebundling",
        theory="cs-double",
        status="pass" if ok else "fail",
        trials=1,
        millis=(time.perf_counter() - t0) * 1000,
        soundness="syntactic equality of normal forms",
    )


def _ym2_core() -> List[SuiteEntry]:
    def cmr_entry(idx):
        return lambda ws: check_cmr(ws.theory("ym2"), trials=4)[idx]

    return [
        _entry("cmr-potential", "iota_Q varpi = delta L + d theta", cmr_entry(0)),
        _entry("cmr-bracket", "(1/2) iota_Q iota_Q varpi = d L", cmr_entry(1)),
        _zero(
            "difference-closed-form",
            "Difference = (1/2)F*F - d(c*F) - (1/2)[c,c]*F",
            "ym2",
            lambda ws, th: nf_sub(
                difference(th),
                normalize(
                    HALF * pair(_ym_curvature(), star(_ym_curvature()))
                    - d(pair(gen("c"), star(_ym_curvature())))
                    - HALF * pair(br(gen("c"), gen("c")), star(_ym_curvature())),
                    th.ctx,
                ),
            ),
        ),
        _zero(
            "difference-exact-form",
            "Difference = (1/2)F*F + (L_Q - d)(c*F)",
            "ym2",
            lambda ws, th: nf_sub(
                difference(th),
                nf_sum(
                    (
                        normalize(HALF * pair(_ym_curvature(), star(_ym_curvature())), th.ctx),
                        lie_minus_d(th.q, normalize(pair(gen("c"), star(_ym_curvature())), th.ctx), th.ctx),
                    )
                ),
            ),
        ),
        _entry("brst-type", "the data is manifestly of BRST type", lambda ws: is_brst_type(ws.theory("ym2"))),
        _entry("difference-top-classical", "[Difference]^top = classical Lagrangian", lambda ws: check_brst_consequences(ws.theory("ym2"), trials=4)[0]),
        _entry("difference-antifield-independence", "Difference free of antifields", lambda ws: check_brst_consequences(ws.theory("ym2"), trials=4)[1]),
        _zero(
            "codim1-edge-term",
            "[Difference]^(top-1) = -d Tr(c *F_A): the codim-1 edge term",
            "ym2",
            lambda ws, th: nf_sum(
                (
                    component(difference(th), 3, th.ctx),
                    normalize(d(pair(gen("c"), star(_ym_curvature()))), th.ctx),
                )
            ),
        ),
        _zero(
            "star-variation",
            "delta *F = -*d_A delta A",
            "ym2",
            lambda ws, th: nf_sum(
                (
                    normalize(vdel(star(_ym_curvature())), th.ctx),
                    normalize(star(d(vdel(gen("A"))) + br(gen("A"), vdel(gen("A")))), th.ctx),
                )
            ),
        ),
        _zero("curvature-star-bracket", "[F, *F] = 0", "ym2", lambda ws, th: normalize(br(_ym_curvature(), star(_ym_curvature())), th.ctx)),
    ]


def _ym1_core() -> List[SuiteEntry]:
    def cmr_entry(idx):
        return lambda ws: check_cmr(ws.theory("ym1"), trials=4)[idx]

    return [
        _entry("cmr-potential", "iota_Q varpi = delta L + d theta", cmr_entry(0)),
        _entry("cmr-bracket", "(1/2) iota_Q iota_Q varpi = d L", cmr_entry(1)),
        _zero(
            "difference-closed-form",
            "Difference = B F_A + (1/2) B *B",
            "ym1",
            lambda ws, th: nf_sub(
                difference(th),
                normalize(pair(gen("B"), _ym_curvature()) + HALF * pair(gen("B"), star(gen("B"))), th.ctx),
            ),
        ),
        _entry("brst-type", "the data is manifestly of BRST type", lambda ws: is_brst_type(ws.theory("ym1"))),
        _entry("difference-top-classical", "[Difference]^top = classical Lagrangian", lambda ws: check_brst_consequences(ws.theory("ym1"), trials=4)[0]),
        _entry("difference-antifield-independence", "Difference free of antifields", lambda ws: check_brst_consequences(ws.theory("ym1"), trials=4)[1]),
        _entry("q-squared", "[Q,Q] = 0 on generators", lambda ws: check_cohomological(ws.theory("ym1"))),
    ]


def _psm_core() -> List[SuiteEntry]:
    def cmr_entry(tid, idx):
        return lambda ws: check_cmr(ws.theory(tid), trials=4)[idx]

    return [
        _entry("cmr-potential", "iota_Q varpi = delta L + d theta", cmr_entry("psm-linear", 0)),
        _entry("cmr-bracket", "(1/2) iota_Q iota_Q varpi = d L", cmr_entry("psm-linear", 1)),
        _zero(
            "difference-closed-form",
            "Difference = -(1/2)<Pi(X), beta beta>",
            "psm-linear",
            lambda ws, th: nf_sub(difference(th), nf_scale(normalize(psm_pi_term(th), th.ctx), -HALF)),
        ),
        _entry(
            "difference-descent",
            "(L_Q - d) Difference = 0",
            lambda ws: check_descent(ws.theory("psm-linear"), difference(ws.theory("psm-linear")), trials=4, name="difference-descent"),
        ),
        _zero(
            "flin-kills-difference",
            "P_flin Difference = 0 for a linear structure",
            "psm-linear",
            lambda ws, th: difference(ws.transformed("psm-linear", "f_lin")),
        ),
        _zero(
            "fhol-codim1-exact",
            "codim-1 f_hol integrand = beta dX + exact term",
            "psm-linear",
            lambda ws, th: nf_sub(
                component(difference(ws.transformed("psm-linear", "f_hol")), 1, th.ctx),
                nf_sum(
                    (
                        normalize(pair(gen("beta"), d(gen("X"))), th.ctx),
                        component(normalize(d(pair(gen("beta"), gen("eta_dag"))), th.ctx), 1, th.ctx),
                    )
                ),
            ),
        ),
        _mod_d(
            "fhol-codim1-mod-d",
            "codim-1 f_hol integrand integrates to beta dX",
            "psm-linear",
            lambda ws, th: (
                component(difference(ws.transformed("psm-linear", "f_hol")), 1, th.ctx),
                normalize(pair(gen("beta"), d(gen("X"))), th.ctx),
            ),
            stratum=1,
        ),
        _entry("zero-structure-cmr", "structure equations in the abelian degeneration", lambda ws: _merge(check_cmr(ws.theory("psm-zero"), trials=3), "zero-structure-cmr")),
        _entry("zero-structure-q", "abelian degeneration has Q = d on both superfields", lambda ws: _psm_zero_q(ws)),
    ]


def _psm_zero_q(ws: Workspace) -> CheckReport:
    """Q of each superfield equals its horizontal differential, reassembled from components."""
    t0 = time.perf_counter()
    th = ws.theory("psm-zero")
    from .expr import Gen, nf_d, to_nf
    from .theory import _resolve_members

    ok = True
    for sf in ("XX", "BB"):
        members = _resolve_members(sf, th.superfield_map)
        assembled = nf_sum([th.q.assignments[name] for name in members])
        if assembled != nf_d(to_nf(Gen(sf), th.ctx), th.ctx):
            ok = False
            break
    return CheckReport(
        name="zero-structure-q",
        theory=th.name,
        status="pass" if ok else "fail",
        trials=1,
        millis=(time.perf_counter() - t0) * 1000,
        soundness="syntactic equality of normal forms",
    )


def _cs_lorentzian() -> List[SuiteEntry]:
    def P(sign, x):
        return HALF * (x + sign * star(x))

    return [
        _entry("cmr-abelian", "structure equations, abelian light-cone data", lambda ws: _merge(check_cmr(ws.theory("cs-abelian-lorentzian"), trials=3), "cmr-abelian")),
        _zero("difference-vanishes", "abelian difference vanishes", "cs-abelian-lorentzian", lambda ws, th: difference(th)),
        _zero(
            "star-squared",
            "the light-cone star squares to +1 on boundary one-forms",
            "cs-abelian-lorentzian",
            lambda ws, th: nf_sub(normalize(star(star(gen("A"))), th.ctx), normalize(gen("A"), th.ctx)),
            stratum=2,
        ),
        _zero(
            "plus-isotropic",
            "the +1 eigenspace wedges to zero against itself",
            "cs-abelian-lorentzian",
            lambda ws, th: normalize(pair(P(-1, gen("A")), P(-1, d(gen("c")))), th.ctx),
            stratum=2,
        ),
        _zero(
            "minus-isotropic",
            "the -1 eigenspace wedges to zero against itself",
            "cs-abelian-lorentzian",
            lambda ws, th: normalize(pair(P(+1, gen("A")), P(+1, d(gen("c")))), th.ctx),
            stratum=2,
        ),
        _entry(
            "fplus-laws",
            "f-transformation laws for the light-cone polarising functional",
            lambda ws: _merge(check_f_transform_laws(ws.theory("cs-abelian-lorentzian"), ws.functional("cs-abelian-lorentzian", "f_plus"), trials=3), "fplus-laws"),
        ),
    ]


F_MATRIX = [
    ("cs", "f_min"),
    ("cs", "f_tot"),
    ("cs-split", "f_min"),
    ("cs-split", "f_tot"),
    ("cs-split", "f_min_10"),
    ("cs-split", "f_tot_10"),
    ("bf", "f_min"),
    ("bf", "f_tot"),
    ("bf", "f_bf_cs"),
    ("bf-split", "f_min"),
    ("bf-split", "f_tot"),
    ("bf-split", "f_10"),
    ("psm-linear", "f_lin"),
    ("psm-linear", "f_hol"),
    ("psm-zero", "f_lin"),
    ("psm-zero", "f_hol"),
    ("cs-abelian-lorentzian", "f_plus"),
]


def _f_matrix() -> List[SuiteEntry]:
    entries = []
    for tid, fname in F_MATRIX:
        def fn(ws, tid=tid, fname=fname):
            reports = check_f_transform_laws(ws.theory(tid), ws.functional(tid, fname), trials=3)
            return _merge(reports, f"f-laws[{tid},{fname}]")

        entries.append(
            _entry(
                f"f-laws[{tid},{fname}]",
                "P_f shifts the difference and total by exact terms and preserves the structure equations",
                fn,
            )
        )
    entries.append(
        _entry(
            "f-group-action[cs]",
            "P_f P_g = P_{f+g}",
            lambda ws: check_f_group_action(ws.theory("cs"), ws.functional("cs", "f_min"), ws.functional("cs", "f_tot")),
        )
    )
    entries.append(
        _entry(
            "f-group-action[bf]",
            "P_f P_g = P_{f+g}",
            lambda ws: check_f_group_action(ws.theory("bf"), ws.functional("bf", "f_min"), ws.functional("bf", "f_bf_cs")),
        )
    )
    return entries


THEOREM_THEORIES = ["cs", "bf", "bf4", "ym2", "ym1", "psm-linear"]


def _theorem_all() -> List[SuiteEntry]:
    entries = []
    for tid in THEOREM_THEORIES:
        for idx, nm in enumerate(
            ["difference-descent", "theta-coboundary", "el-locality", "total-lagrangian-descent"]
        ):
            def fn(ws, tid=tid, idx=idx):
                return check_theorem_delta(ws.theory(tid), trials=3)[idx]

            entries.append(_entry(f"{nm}[{tid}]", "difference-cocycle theorem statement", fn))
    entries.append(
        _entry(
            "lagrangian-not-cocycle[cs]",
            "(L_Q - d) L != 0 (negative control)",
            lambda ws: _expect_fail(
                check_descent(ws.theory("cs"), ws.theory("cs").lagrangian, trials=2, name="x"),
                "lagrangian-not-cocycle[cs]",
            ),
        )
    )
    entries.append(
        _entry(
            "q-squared-all",
            "[Q,Q] = 0 on generators for every built-in theory",
            lambda ws: _merge([check_cohomological(ws.theory(t)) for t in THEOREM_THEORIES], "q-squared-all"),
        )
    )
    return entries


def _fixture_corrupt() -> List[SuiteEntry]:
    return [
        _zero(
            "corrupted-difference",
            "fixture: deliberately wrong closed form must fail with a witness",
            "cs",
            lambda ws, th: nf_sub(
                difference(th),
                nf_scale(normalize(pair(gen("AA"), br(gen("AA"), gen("AA"))), th.ctx), Fraction(-1, 5)),
            ),
            trials=2,
        ),
    ]


SUITES: Dict[str, Callable[[], List[SuiteEntry]]] = {
    "cs-core": _cs_core,
    "cs-brst": _cs_brst,
    "cs-codim1": _cs_codim1,
    "cs-descent-cocycles": _cs_descent_cocycles,
    "cs-lorentzian": _cs_lorentzian,
    "bf-core": _bf_core,
    "bf-to-cs": _bf_to_cs,
    "ym2-core": _ym2_core,
    "ym1-core": _ym1_core,
    "psm-core": _psm_core,
    "f-matrix": _f_matrix,
    "theorem-all": _theorem_all,
    "fixture-corrupt": _fixture_corrupt,
}

SUITES_FOR_THEORY = {
    "cs": ["cs-core", "cs-brst", "cs-codim1", "cs-descent-cocycles"],
    "cs-split": ["cs-brst", "cs-codim1"],
    "cs-abelian-lorentzian": ["cs-lorentzian"],
    "bf": ["bf-core", "bf-to-cs"],
    "bf4": ["bf-core"],
    "bf-split": ["f-matrix"],
    "cs-double": ["bf-to-cs"],
    "ym2": ["ym2-core"],
    "ym1": ["ym1-core"],
    "psm-linear": ["psm-core"],
    "psm-zero": ["psm-core"],
}


def run_suite(suite_id: str, workspace: Workspace | None = None) -> NamedSuite:
    """Run every entry of a named suite; reports keep the declared order."""
    if suite_id not in SUITES:
        raise KeyError(f"unknown suite {suite_id!r}")
    ws = workspace or Workspace()
    entries = SUITES[suite_id]()
    t0 = time.perf_counter()
    reports = [e.run(ws) for e in entries]
    return NamedSuite(
        id=suite_id,
        entries=entries,
        reports=reports,
        wall_millis=(time.perf_counter() - t0) * 1000,
    )


def list_suites() -> List[str]:
    return sorted(SUITES)
