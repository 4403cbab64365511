"""Acceptance gate: every criterion at its declared tolerance.

Each test prints one PASS/FAIL line; symbolic criteria are zero-tolerance
(exact residuals over independent realizations at matrix sizes 2 and 3),
lattice criteria are convergence-order and tolerance gates.
"""

import random
import time
from fractions import Fraction

import pytest

from bvbfv import br, d, gen, normalize, pair, star
from bvbfv.calculus import lie_minus_d
from bvbfv.check import check_cmr, difference, f_transform, nf_sub, total_lagrangian
from bvbfv.dsl import ParseError, parse_theory, serialize, theories_equal
from bvbfv.expr import nf_scale, nf_sum
from bvbfv.lattice.experiments import run_experiment
from bvbfv.realize import is_zero
from bvbfv.suites import Workspace, run_suite
from bvbfv.theories import get_theory, polarising_functional, psm_pi_term

HALF = Fraction(1, 2)


def _line(criterion: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{criterion}: {detail}"


@pytest.fixture(scope="module")
def aws():
    return Workspace()


# -- 1: structure equations ---------------------------------------------------


def test_criterion_1_structure_equations(aws):
    t0 = time.perf_counter()
    sizes_seen = set()
    all_pass = True
    for tid in ("cs", "bf", "bf4", "ym2", "ym1", "psm-linear"):
        reps = check_cmr(aws.theory(tid), trials=5)
        all_pass &= all(r.passed for r in reps)
        for rep in reps:
            sizes_seen |= {r["n"] for r in rep.realizations}
            assert rep.trials >= 5
    wall = time.perf_counter() - t0
    _line(
        "criterion 1: structure equations exact for CS(3), BF(3), BF(4), YM2(4), YM1(4), PSM(2)",
        all_pass and {2, 3} <= sizes_seen and wall <= 60.0,
        f"{wall:.1f}s, matrix sizes {sorted(sizes_seen)}",
    )


# -- 2: closed forms of the difference ---------------------------------------


def test_criterion_2_difference_closed_forms(aws):
    cs = aws.theory("cs")
    r1 = is_zero(
        nf_sum((difference(cs), nf_scale(normalize(Fraction(1, 12) * pair(gen("AA"), br(gen("AA"), gen("AA"))), cs.ctx), Fraction(1)))),
        cs, trials=5, name="cs-diff",
    )
    bf = aws.theory("bf")
    r2_ok = difference(bf) == {}
    ym2 = aws.theory("ym2")
    F = d(gen("A")) + HALF * br(gen("A"), gen("A"))
    alt = nf_sum(
        (
            normalize(HALF * pair(F, star(F)), ym2.ctx),
            lie_minus_d(ym2.q, normalize(pair(gen("c"), star(F)), ym2.ctx), ym2.ctx),
        )
    )
    r3 = is_zero(nf_sub(difference(ym2), alt), ym2, trials=5, name="ym2-diff")
    psm = aws.theory("psm-linear")
    r4 = is_zero(
        nf_sum((difference(psm), nf_scale(normalize(psm_pi_term(psm), psm.ctx), HALF))),
        psm, trials=5, name="psm-diff",
    )
    _line(
        "criterion 2: difference closed forms (CS, BF, YM2, PSM) exact",
        r1.passed and r2_ok and r3.passed and r4.passed,
    )


# -- 3: the difference-cocycle theorem ----------------------------------------


def test_criterion_3_theorem_suite(aws):
    suite = run_suite("theorem-all", aws)
    neg = next(r for e, r in zip(suite.entries, suite.reports) if "not-cocycle" in e.name)
    _line(
        "criterion 3: four theorem statements for all six theories + negative control",
        suite.passed and neg.passed,
        f"{len(suite.reports)} entries",
    )


# -- 4: f-transformation matrix -----------------------------------------------


def test_criterion_4_f_transformations(aws):
    matrix = run_suite("f-matrix", aws)
    brst = run_suite("cs-brst", aws)
    bf_core = run_suite("bf-core", aws)
    rebundle = run_suite("bf-to-cs", aws)
    ok = matrix.passed and brst.passed and bf_core.passed and rebundle.passed
    _line(
        "criterion 4: f-transformation laws across the catalogue, BRST forms, dual-pair rebundling",
        ok,
        f"{len(matrix.reports)} matrix entries",
    )


# -- 5: codimension-one suite ---------------------------------------------------


def test_criterion_5_codim1(aws):
    codim = run_suite("cs-codim1", aws)
    cocycles = run_suite("cs-descent-cocycles", aws)
    ym = run_suite("ym2-core", aws)
    edge = next(r for e, r in zip(ym.entries, ym.reports) if e.name == "codim1-edge-term")
    _line(
        "criterion 5: codim-1 formulas, integrand agreement, edge term, order-zero cocycles",
        codim.passed and cocycles.passed and edge.passed,
    )


# -- 6: text format -------------------------------------------------------------


def test_criterion_6_dsl_roundtrip_and_fuzz(aws):
    from pathlib import Path

    data = Path(__file__).resolve().parents[1] / "src" / "bvbfv" / "data"
    corpus = {
        "cs.thy": "cs",
        "bf.thy": "bf",
        "ym1.thy": "ym1",
        "ym2.thy": "ym2",
        "psm_linear.thy": "psm-linear",
        "cs_abelian_lorentzian.thy": "cs-abelian-lorentzian",
    }
    ok = True
    for fname, tid in corpus.items():
        text = (data / fname).read_text()
        parsed = parse_theory(text)
        ok &= theories_equal(parsed, get_theory(tid))
        ok &= serialize(parse_theory(serialize(parsed))) == serialize(parsed)
        # suite results agree between the file and the programmatic constructor
        got = {r.name: r.status for r in check_cmr(parsed, trials=3)}
        want = {r.name: r.status for r in check_cmr(get_theory(tid), trials=3)}
        ok &= got == want

    rng = random.Random(20240801)
    alphabet = "abcdXY_ 0123456789=+-/()[]<>,\n#theorydimfieldsuperLQdelta"
    t0 = time.perf_counter()
    n_inputs = 1_000_000
    for i in range(n_inputs):
        if i % 10 == 0:
            s = bytes(rng.randrange(256) for _ in range(rng.randint(0, 24))).decode("latin1")
        else:
            s = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 32)))
        try:
            parse_theory(s)
        except ParseError:
            pass
    wall = time.perf_counter() - t0
    _line(
        "criterion 6: corpus round-trip + identical suite results + 1e6-input fuzz without crashes",
        ok,
        f"fuzz {wall:.0f}s",
    )


# -- 7-11: lattice ---------------------------------------------------------------


@pytest.fixture(scope="module")
def cs_failure_reports():
    t0 = time.perf_counter()
    reps = run_experiment("cs-failure", N_list=(8, 16, 32), T=256, seed=42)
    return reps, time.perf_counter() - t0


def test_criterion_7_cs_failure(cs_failure_reports):
    reps, wall = cs_failure_reports
    ok = all(r.passed and (r.order or 0) >= 1.8 and r.rows[-1].rel_err <= 1e-4 for r in reps)
    _line(
        "criterion 7: bulk-vs-boundary gauge failure (plain and split), order >= 1.8, rel <= 1e-4",
        ok and wall <= 300.0,
        f"orders {[round(r.order, 2) for r in reps]}, rel {[f'{r.rows[-1].rel_err:.1e}' for r in reps]}, {wall:.0f}s",
    )


def test_criterion_8_bf_failure():
    t0 = time.perf_counter()
    reps = run_experiment("bf-failure", N_list=(8, 16, 32), T=256, seed=42)
    reps += run_experiment("bf-failure-10", N_list=(8, 16, 32), T=256, seed=42)
    wall = time.perf_counter() - t0
    ok = all(r.passed and (r.order or 0) >= 1.8 and r.rows[-1].rel_err <= 1e-4 for r in reps)
    _line(
        "criterion 8: dual-pair gauge failure + composition law, order >= 1.8, rel <= 1e-4",
        ok and wall <= 300.0,
        f"orders {[round(r.order, 2) for r in reps]}, {wall:.0f}s",
    )


def test_criterion_9_transgressions():
    reps_cs = run_experiment("transgression-cs", N_list=(8, 16, 32), T=256, seed=42)
    reps_bf = run_experiment("transgression-bf", N_list=(8, 16, 32), T=256, seed=42)
    reps_p = run_experiment("transgression-psm0", N_list=(8, 16, 32), T=256, seed=42)
    main_ok = all(
        r.passed and (r.order or 0) >= 1.8 and r.rows[-1].rel_err <= 1e-4
        for r in (reps_cs[0], reps_cs[1], reps_bf[0])
    )
    agreement = getattr(reps_cs[0], "polarisation_agreement", None)
    scale = abs(reps_cs[0].rows[-1].rhs) or 1.0
    agree_ok = agreement is not None and agreement <= 1e-10 * max(1.0, scale)
    psm_ok = all(r.rel_err <= 1e-12 for r in reps_p[0].rows)
    _line(
        "criterion 9: interval transgressions (order >= 1.8, rel <= 1e-4); integrand agreement; toy model <= 1e-12",
        main_ok and agree_ok and psm_ok,
        f"agreement {agreement:.1e}, toy {max(r.rel_err for r in reps_p[0].rows):.1e}",
    )


def test_criterion_10_path_independence():
    reps = run_experiment("wz-path-independence", N_list=(8, 16, 32), T=256, seed=42)
    rep = reps[0]
    finest = rep.rows[-1]
    ok = finest.N == 32 and finest.T == 256 and finest.abs_err <= 1e-6 and finest.rel_err <= 1e-6
    _line(
        "criterion 10: bulk-term path independence at N=32, T=256 within 1e-6",
        ok,
        f"abs {finest.abs_err:.2e}",
    )


def test_criterion_11_abelian_edge():
    reps = run_experiment("abelian-edge", N_list=(16, 32, 64), T=256, seed=42, group="u1")
    inv = next(r for r in reps if r.experiment == "abelian-edge-invariance")
    match = next(r for r in reps if r.experiment == "abelian-edge-match")
    inv_ok = inv.rows[-1].N == 64 and inv.rows[-1].rel_err <= 1e-6
    match_ok = (match.order or 0) >= 1.8 and match.passed
    _line(
        "criterion 11: light-cone edge invariance <= 1e-6 at N=64; chiral edge action matched at order >= 1.8",
        inv_ok and match_ok,
        f"defect {inv.rows[-1].rel_err:.1e}, match order {match.order:.2f}",
    )
