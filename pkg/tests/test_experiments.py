"""Experiment drivers: small fast sweeps, determinism, config validation."""

import numpy as np
import pytest

from bvbfv.lattice.experiments import ExperimentConfig, list_experiments, run_experiment


SMALL = dict(N_list=(4, 8, 16), T=16, seed=7)


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="cs-failure", N_list=(8, 12, 16)).normalized()
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="cs-failure", N_list=(8, 16)).normalized()


def test_unknown_experiment():
    with pytest.raises(KeyError):
        run_experiment("nope")


def test_every_driver_runs_small():
    for name in list_experiments():
        kw = dict(SMALL)
        if name == "abelian-edge":
            kw["group"] = "u1"
        if "wz" in name:
            kw["T"] = 64
        reps = run_experiment(name, **kw)
        assert reps and all(len(r.rows) >= 3 for r in reps)


def test_determinism_of_rows():
    a = run_experiment("transgression-bf", **SMALL)[0]
    b = run_experiment("transgression-bf", **SMALL)[0]
    for ra, rb in zip(a.rows, b.rows):
        assert ra.lhs == rb.lhs and ra.rhs == rb.rhs


def test_seed_changes_fields():
    a = run_experiment("transgression-bf", **SMALL)[0]
    c = run_experiment("transgression-bf", N_list=(4, 8, 16), T=16, seed=8)[0]
    assert a.rows[-1].lhs != c.rows[-1].lhs


def test_report_dict_schema():
    from bvbfv.reports import validate_experiment_dict

    rep = run_experiment("transgression-psm0", **SMALL)[0]
    validate_experiment_dict(rep.as_dict())


def test_pairing_matrix_validation():
    with pytest.raises(ValueError):
        run_experiment("abelian-edge", N_list=(4, 8, 16), T=16, seed=1, group="u1",
                       n_u1=2, pairing=[[1, 1], [1, 1]])


def test_abelian_edge_with_pairing_matrix():
    reps = run_experiment("abelian-edge", N_list=(4, 8, 16), T=16, seed=3, group="u1",
                          n_u1=2, pairing=[[2, 1], [1, 2]])
    inv = next(r for r in reps if r.experiment == "abelian-edge-invariance")
    assert inv.rows[-1].rel_err <= 1e-10
