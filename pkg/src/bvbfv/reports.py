"""Report files: schema-checked JSON, delimited tables, convergence figures.

Suite reports:      {suite, passed, wall_millis, entries: [{name, anchor,
                     status, trials, millis, witness?}]}
Experiment reports: {experiment, group, seed, rows: [...], order, order_target,
                     tol_rel, passed, notes, ...}

All files are written atomically; figures are rendered with the Agg backend
next to the delimited output.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Iterable, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .core import EngineError


class SchemaError(EngineError):
    pass


def _require(cond: bool, msg: str):
    if not cond:
        raise SchemaError(msg)


def validate_suite_dict(d: dict):
    _require(isinstance(d.get("suite"), str), "suite id missing")
    _require(isinstance(d.get("passed"), bool), "suite pass flag missing")
    _require(isinstance(d.get("entries"), list) and d["entries"], "suite entries missing")
    for e in d["entries"]:
        _require(isinstance(e.get("name"), str), "entry name missing")
        _require(isinstance(e.get("anchor"), str), "entry anchor missing")
        _require(e.get("status") in ("pass", "fail"), "entry status must be pass/fail")
        _require(isinstance(e.get("trials"), int), "entry trials missing")
        _require(isinstance(e.get("millis"), (int, float)), "entry millis missing")


def validate_experiment_dict(d: dict):
    _require(isinstance(d.get("experiment"), str), "experiment id missing")
    _require(isinstance(d.get("rows"), list) and len(d["rows"]) >= 3, "need >= 3 refinement rows")
    for r in d["rows"]:
        for key in ("N", "T", "lhs_re", "rhs_re", "abs_err", "rel_err"):
            _require(key in r, f"row field {key} missing")
    ns = [r["N"] for r in d["rows"]]
    ts = [r["T"] for r in d["rows"]]
    seq = ns if len(set(ns)) > 1 else ts
    _require(all(b == 2 * a for a, b in zip(seq, seq[1:])), "rows must strictly refine (doubling)")
    _require(isinstance(d.get("passed"), bool), "experiment pass flag missing")
    _require("seed" in d, "seed missing")


def write_atomic(path: Path, data: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_suite_report(suite, outdir: Path) -> Path:
    d = suite.as_dict()
    validate_suite_dict(d)
    path = Path(outdir) / f"suite-{suite.id}.json"
    write_atomic(path, json.dumps(d, indent=2) + "\n")
    return path


def write_experiment_report(report, outdir: Path) -> List[Path]:
    d = report.as_dict()
    validate_experiment_dict(d)
    outdir = Path(outdir)
    base = f"experiment-{report.experiment}"
    paths = []
    jpath = outdir / f"{base}.json"
    write_atomic(jpath, json.dumps(d, indent=2) + "\n")
    paths.append(jpath)

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(d["rows"][0].keys()))
    writer.writeheader()
    for r in d["rows"]:
        writer.writerow(r)
    cpath = outdir / f"{base}.csv"
    write_atomic(cpath, buf.getvalue())
    paths.append(cpath)

    paths.append(render_convergence_figure(report, outdir / f"{base}.png"))
    return paths


def render_convergence_figure(report, path: Path) -> Path:
    rows = report.rows
    ns = [r.N for r in rows]
    xvals = ns if len(set(ns)) > 1 else [r.T for r in rows]
    xlabel = "N" if len(set(ns)) > 1 else "T"
    errs = [max(r.rel_err, 1e-18) for r in rows]
    fig, ax = plt.subplots(figsize=(4.4, 3.4))
    ax.loglog(xvals, errs, "o-", base=2, label="relative error")
    order = report.order
    if order is not None and errs[0] > 0:
        ref = [errs[0] * (xvals[0] / x) ** report.order_target for x in xvals]
        ax.loglog(xvals, ref, "--", base=2, color="gray",
                  label=f"target order {report.order_target:g}")
        ax.set_title(f"{report.experiment}: fitted order {order:.2f}")
    else:
        ax.set_title(report.experiment)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("relative error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


# ---------------------------------------------------------------------------
# Merged summary


def collect_report_files(inputs: Iterable[Path]) -> List[Path]:
    files: List[Path] = []
    for p in inputs:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*.json")))
        elif p.suffix == ".json":
            files.append(p)
        else:
            raise EngineError(f"unsupported report input {p}")
    return files


def merge_reports(files: List[Path]) -> dict:
    """One row per certified identity; duplicate ids with different outcomes conflict."""
    rows = []
    seen = {}
    conflicts = []
    for f in files:
        d = json.loads(Path(f).read_text())
        if "suite" in d:
            validate_suite_dict(d)
            for e in d["entries"]:
                key = ("suite", d["suite"], e["name"])
                row = {
                    "kind": "symbolic",
                    "id": f"{d['suite']}/{e['name']}",
                    "anchor": e["anchor"],
                    "status": e["status"],
                    "detail": f"trials={e['trials']}",
                }
                if key in seen and seen[key] != e["status"]:
                    conflicts.append(row["id"])
                seen[key] = e["status"]
                rows.append(row)
        elif "experiment" in d:
            validate_experiment_dict(d)
            key = ("experiment", d["experiment"], d["seed"])
            status = "pass" if d["passed"] else "fail"
            order = d.get("order")
            last = d["rows"][-1]
            row = {
                "kind": "lattice",
                "id": d["experiment"],
                "anchor": "; ".join(d.get("notes", [])[:1]),
                "status": status,
                "detail": f"order={order and round(order, 2)} rel_err={last['rel_err']:.3e}",
            }
            if key in seen and seen[key] != status:
                conflicts.append(row["id"])
            seen[key] = status
            rows.append(row)
        else:
            raise SchemaError(f"{f}: neither a suite nor an experiment report")
    return {"rows": rows, "conflicts": conflicts}


def write_summary(merged: dict, outdir: Path) -> List[Path]:
    outdir = Path(outdir)
    rows = merged["rows"]
    paths = []

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["kind", "id", "anchor", "status", "detail"])
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    cpath = outdir / "summary.csv"
    write_atomic(cpath, buf.getvalue())
    paths.append(cpath)

    width = max([len(r["id"]) for r in rows], default=10)
    lines = [f"{'ID'.ljust(width)}  STATUS  DETAIL"]
    for r in rows:
        lines.append(f"{r['id'].ljust(width)}  {r['status']:6s}  {r['detail']}")
    npass = sum(1 for r in rows if r["status"] == "pass")
    lines.append(f"\n{npass}/{len(rows)} checks passed")
    if merged["conflicts"]:
        lines.append("CONFLICTS: " + ", ".join(merged["conflicts"]))
    tpath = outdir / "summary.txt"
    write_atomic(tpath, "\n".join(lines) + "\n")
    paths.append(tpath)

    if rows:
        paths.append(render_summary_figure(rows, outdir / "summary.png"))
    return paths


def render_summary_figure(rows: List[dict], path: Path) -> Path:
    groups = {}
    for r in rows:
        group = r["id"].split("/")[0]
        ok, total = groups.get(group, (0, 0))
        groups[group] = (ok + (r["status"] == "pass"), total + 1)
    names = sorted(groups)
    fracs = [groups[n][0] / groups[n][1] for n in names]
    fig, ax = plt.subplots(figsize=(6.0, 0.4 * len(names) + 1.2))
    colors = ["#2a8" if f == 1.0 else "#d43" for f in fracs]
    ax.barh(range(len(names)), fracs, color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels([f"{n} ({groups[n][0]}/{groups[n][1]})" for n in names], fontsize=8)
    ax.set_xlim(0, 1.05)
    ax.set_xlabel("fraction of checks passing")
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
