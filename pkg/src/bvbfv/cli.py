"""Batch command-line runner: symbolic suites, lattice sweeps, merged reports.

Exit codes: 0 all requested checks passed, 1 at least one check failed,
2 usage or configuration error.  Everything is flags and files; reports are
schema-validated JSON plus delimited tables, with figures rendered next to
them.  BVBFV_THREADS caps the process pool used for independent suites.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .core import EngineError
from .dsl import ParseError, parse_theory
from .lattice.experiments import ExperimentConfig, list_experiments, run_experiment
from .reports import (
    SchemaError,
    collect_report_files,
    merge_reports,
    write_experiment_report,
    write_suite_report,
    write_summary,
)
from .suites import SUITES_FOR_THEORY, Workspace, list_suites, run_suite
from .theories import CATALOGUE, functionals_for, get_theory

USAGE_ERROR = 2
CHECK_FAILED = 1


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BVBFV_THREADS", "1")))
    except ValueError:
        return 1


def _print_catalogue():
    print("theories:")
    for tid, entry in sorted(CATALOGUE.items()):
        print(f"  {tid:24s} {entry.description}")
    print("suites:")
    for sid in list_suites():
        print(f"  {sid}")
    print("polarising functionals:")
    for tid in sorted(CATALOGUE):
        try:
            names = functionals_for(get_theory(tid))
        except EngineError:
            names = ()
        if names:
            print(f"  {tid:24s} {', '.join(names)}")


def _run_suite_worker(suite_id: str) -> dict:
    return run_suite(suite_id).as_dict()


def cmd_verify(args) -> int:
    if args.list:
        _print_catalogue()
        return 0
    outdir = Path(args.out)

    if args.theory_file:
        try:
            text = Path(args.theory_file).read_text()
        except OSError as ex:
            print(f"error: cannot read {args.theory_file}: {ex}", file=sys.stderr)
            return USAGE_ERROR
        try:
            theory = parse_theory(text)
            theory.degree_audit()
        except (ParseError, EngineError) as ex:
            print(f"error: {ex}", file=sys.stderr)
            return USAGE_ERROR
        return _verify_file_theory(theory, args, outdir)

    # resolve everything before any work starts
    suite_ids = []
    if args.suite:
        for sid in args.suite.split(","):
            sid = sid.strip()
            if sid == "all":
                # the corrupt fixture fails by design; run it only by name
                suite_ids.extend(s for s in list_suites() if s != "fixture-corrupt")
            elif sid in list_suites():
                suite_ids.append(sid)
            else:
                print(f"error: unknown suite {sid!r}", file=sys.stderr)
                return USAGE_ERROR
    if args.theory:
        if args.theory not in CATALOGUE:
            print(f"error: unknown theory {args.theory!r}", file=sys.stderr)
            return USAGE_ERROR
        if not args.suite:
            suite_ids = SUITES_FOR_THEORY.get(args.theory, [])
    if not suite_ids:
        print("error: nothing to run (use --suite, --theory or --list)", file=sys.stderr)
        return USAGE_ERROR

    results = []
    nthreads = _threads()
    if nthreads > 1 and len(suite_ids) > 1:
        with ProcessPoolExecutor(max_workers=nthreads) as pool:
            for d in pool.map(_run_suite_worker, suite_ids):
                results.append(d)
    else:
        ws = Workspace()
        for sid in suite_ids:
            results.append(run_suite(sid, ws).as_dict())

    all_pass = True
    for d in results:
        npass = sum(1 for e in d["entries"] if e["status"] == "pass")
        total = len(d["entries"])
        all_pass &= d["passed"]
        print(f"{'PASS' if d['passed'] else 'FAIL'} {d['suite']:24s} {npass}/{total}")
        for e in d["entries"]:
            if e["status"] != "pass":
                print(f"     {e['name']}: {e.get('witness', '')}")
        from .reports import validate_suite_dict, write_atomic

        validate_suite_dict(d)
        write_atomic(outdir / f"suite-{d['suite']}.json", json.dumps(d, indent=2) + "\n")
    return 0 if all_pass else CHECK_FAILED


def _verify_file_theory(theory, args, outdir: Path) -> int:
    from .check import check_cmr, check_theorem_delta

    check = args.check or "cmr"
    if check == "cmr":
        reports = check_cmr(theory, trials=args.trials, seed=args.seed)
    elif check == "theorem":
        reports = check_theorem_delta(theory, trials=args.trials, seed=args.seed)
    elif check == "full":
        reports = check_cmr(theory, trials=args.trials, seed=args.seed) + check_theorem_delta(
            theory, trials=args.trials, seed=args.seed
        )
    else:
        print(f"error: unknown check {check!r} (cmr, theorem, full)", file=sys.stderr)
        return USAGE_ERROR
    payload = {
        "suite": f"file-{theory.name}-{check}",
        "passed": all(r.passed for r in reports),
        "wall_millis": sum(r.millis for r in reports),
        "entries": [{**r.as_dict(), "anchor": r.anchor or "structure equations"} for r in reports],
    }
    from .reports import validate_suite_dict, write_atomic

    validate_suite_dict(payload)
    write_atomic(outdir / f"suite-{payload['suite']}.json", json.dumps(payload, indent=2) + "\n")
    for r in reports:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag} {r.name}: {r.witness or ''}")
    return 0 if payload["passed"] else CHECK_FAILED


def cmd_lattice(args) -> int:
    if args.list:
        for name in list_experiments():
            print(name)
        return 0
    if not args.experiment:
        print("error: no experiment named (or use --list)", file=sys.stderr)
        return USAGE_ERROR
    if args.experiment not in list_experiments():
        print(f"error: unknown experiment {args.experiment!r}", file=sys.stderr)
        return USAGE_ERROR
    overrides = {}
    if args.config:
        try:
            overrides = json.loads(Path(args.config).read_text())
            if not isinstance(overrides, dict):
                raise ValueError("config must be a JSON object")
        except (OSError, ValueError) as ex:
            print(f"error: bad config: {ex}", file=sys.stderr)
            return USAGE_ERROR
    # accept spelled-out config keys alongside the dataclass names
    aliases = {"k_max": "kmax", "tolerance": "tol_rel", "N_list": "N_list", "experiment": None}
    mapped = {}
    for key, value in overrides.items():
        key = aliases.get(key, key)
        if key is None:
            continue
        mapped[key] = tuple(value) if key == "N_list" else value
    base = dict(
        experiment=args.experiment,
        N_list=tuple(int(x) for x in args.grid.split(",")),
        T=args.tsteps,
        seed=args.seed,
        group=args.group,
        kmax=args.kmax,
    )
    base.update({k: v for k, v in mapped.items() if k != "experiment"})
    try:
        cfg = ExperimentConfig(**base).normalized()
    except (ValueError, TypeError) as ex:
        print(f"error: bad configuration: {ex}", file=sys.stderr)
        return USAGE_ERROR

    t0 = time.perf_counter()
    reports = run_experiment(args.experiment, cfg)
    outdir = Path(args.out)
    ok = True
    for rep in reports:
        ok &= rep.passed
        write_experiment_report(rep, outdir)
        order = rep.order
        print(
            f"{'PASS' if rep.passed else 'FAIL'} {rep.experiment:26s} "
            f"order={order if order is None else round(order, 2)} "
            f"rel_err={rep.rows[-1].rel_err:.3e}"
        )
    print(f"wall time {time.perf_counter() - t0:.1f}s; reports in {outdir}")
    return 0 if ok else CHECK_FAILED


def cmd_report(args) -> int:
    try:
        files = collect_report_files(Path(p) for p in args.inputs)
        merged = merge_reports(files)
    except (EngineError, OSError, json.JSONDecodeError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return USAGE_ERROR
    outdir = Path(args.out)
    paths = write_summary(merged, outdir)
    for p in paths:
        print(f"wrote {p}")
    if merged["conflicts"]:
        print("error: conflicting duplicate ids: " + ", ".join(merged["conflicts"]), file=sys.stderr)
        return CHECK_FAILED
    if any(r["status"] != "pass" for r in merged["rows"]):
        return CHECK_FAILED
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bvbfv",
        description="exact symbolic and lattice verification of graded gauge-theory identities",
    )
    sub = parser.add_subparsers(dest="command")

    p_verify = sub.add_parser("verify", help="run symbolic identity suites")
    p_verify.add_argument("--theory", help="catalogue theory id")
    p_verify.add_argument("--theory-file", help="a .thy source file")
    p_verify.add_argument("--suite", help="suite id(s), comma separated, or 'all'")
    p_verify.add_argument("--check", help="check kind for file theories: cmr, theorem, full")
    p_verify.add_argument("--trials", type=int, default=5)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", default="reports")
    p_verify.add_argument("--list", action="store_true", help="list theories, suites, functionals")
    p_verify.set_defaults(fn=cmd_verify)

    p_lat = sub.add_parser("lattice", help="run a refinement experiment")
    p_lat.add_argument("experiment", nargs="?", help="experiment id")
    p_lat.add_argument("--grid", default="8,16,32", help="comma list of grid sizes (doubling)")
    p_lat.add_argument("--tsteps", type=int, default=256)
    p_lat.add_argument("--seed", type=int, default=42)
    p_lat.add_argument("--group", default="su2", choices=["su2", "u1"])
    p_lat.add_argument("--kmax", type=int, default=1)
    p_lat.add_argument("--config", help="JSON file with extra configuration overrides")
    p_lat.add_argument("--out", default="reports")
    p_lat.add_argument("--list", action="store_true")
    p_lat.set_defaults(fn=cmd_lattice)

    p_rep = sub.add_parser("report", help="merge reports into one summary")
    p_rep.add_argument("--inputs", nargs="+", required=True)
    p_rep.add_argument("--out", default="reports")
    p_rep.set_defaults(fn=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "fn", None):
        parser.print_help()
        return USAGE_ERROR
    try:
        return args.fn(args)
    except (EngineError, SchemaError) as ex:
        print(f"error: {ex}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
