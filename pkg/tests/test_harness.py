"""Suite orchestration: config validation, statuses, exit codes, determinism."""

import csv
import json

import pytest

from wittenlap import (
    Admissibility,
    ConfigError,
    ExperimentSpec,
    ShapeSpec,
    Theorem,
    builtin_profile,
    check_admissibility,
    load_config,
    run_experiment,
    run_suite,
    space_form,
)
from wittenlap.harness import CSV_HEADER, _required_classes


def _spec(theorem, kappa, weight, shape, mesh_h=0.045, **kw):
    name, _, raw = weight.partition(":")
    return ExperimentSpec(
        theorem=theorem,
        model=space_form(kappa),
        profile=builtin_profile(name, float(raw) if raw else None),
        shape=ShapeSpec.parse(shape) if shape else None,
        mesh_h=mesh_h,
        **kw,
    )


def _config(tmp_path, experiments, name="suite.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"experiments": experiments}))
    return path


# ---------------------------------------------------------------------------
# spec validation


def test_tolerance_must_be_positive():
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN, 0, "zero", "disk:0,0,1", tolerance=0.0)


def test_hemisphere_requires_kappa_plus_one():
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN_HEMISPHERE, 0, "log_cos", "disk:0,0,0.4")


def test_hemisphere_requires_log_cos():
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN_HEMISPHERE, 1, "zero", "disk:0,0,0.4")


def test_hemisphere_rejects_non_cap_shapes():
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN_HEMISPHERE, 1, "log_cos", "rectangle:1,1")


def test_spherical_faber_krahn_is_routed_to_hemisphere_family():
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN, 1, "log_cos", "disk:0,0,0.4")


def test_szego_weinberger_excludes_sphere():
    with pytest.raises(ConfigError):
        _spec(Theorem.SZEGO_WEINBERGER, 1, "log_cos", "disk:0,0,0.4")


def test_mesh_theorems_need_shape_and_h():
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN, 0, "zero", None)
    with pytest.raises(ConfigError):
        _spec(Theorem.FABER_KRAHN, 0, "zero", "disk:0,0,1", mesh_h=0.0)


# ---------------------------------------------------------------------------
# config files


def test_load_config_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(path)


def test_load_config_requires_experiments_list(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"runs": []}))
    with pytest.raises(ConfigError, match="experiments"):
        load_config(path)
    path.write_text(json.dumps({"experiments": {"theorem": "faber_krahn"}}))
    with pytest.raises(ConfigError, match="must be a list"):
        load_config(path)


def test_parse_errors_name_the_offending_entry(tmp_path):
    rows = [
        {"kappa": 0, "weight": "zero", "shape": "disk:0,0,1", "mesh_h": 0.05},
        {"theorem": "fab_kra", "kappa": 0, "weight": "zero"},
        {"theorem": "faber_krahn", "kappa": 7, "weight": "zero"},
        {"theorem": "faber_krahn", "kappa": 0, "shape": "disk:0,0,1", "mesh_h": 0.05},
        {"theorem": "faber_krahn", "kappa": 0, "weight": "zero",
         "shape": "blob:1", "mesh_h": 0.05},
        {"theorem": "appendix_ordering", "kappa": 0, "weight": "zero",
         "radius_grid": [0.5, -1.0]},
    ]
    for i, row in enumerate(rows):
        path = _config(tmp_path, [row], name=f"bad{i}.json")
        with pytest.raises(ConfigError, match="experiment 0"):
            load_config(path)


def test_load_config_sorts_deterministically(tmp_path):
    rows = [
        {"theorem": "szego_weinberger", "kappa": 0, "weight": "zero",
         "shape": "disk:0,0,1", "mesh_h": 0.05},
        {"theorem": "faber_krahn", "kappa": 0, "weight": "zero",
         "shape": "disk:0,0,1", "mesh_h": 0.05},
        {"theorem": "faber_krahn", "kappa": -1, "weight": "quad_neg:0.3",
         "shape": "disk:0,0,0.45", "mesh_h": 0.05},
    ]
    specs = load_config(_config(tmp_path, rows))
    keys = [s.sort_key() for s in specs]
    assert keys == sorted(keys)
    assert specs[0].theorem == Theorem.FABER_KRAHN


def test_empty_suite_exits_zero(tmp_path):
    path = _config(tmp_path, [])
    out = tmp_path / "reports"
    assert run_suite(path, out) == 0
    assert (out / "summary.csv").read_text() == CSV_HEADER + "\n"
    payload = json.loads((out / "report.json").read_text())
    assert payload["experiments"] == []


# ---------------------------------------------------------------------------
# statuses and exit codes


def test_single_passing_check_exits_zero(tmp_path):
    path = _config(tmp_path, [
        {"theorem": "faber_krahn", "kappa": 0, "weight": "zero",
         "shape": "rectangle:1.7724538509055159,1.7724538509055159",
         "mesh_h": 0.06},
    ])
    out = tmp_path / "reports"
    assert run_suite(path, out) == 0
    lines = (out / "summary.csv").read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 2
    assert lines[1].endswith(",Pass")


def test_hypothesis_violation_is_inconclusive_exit_3(tmp_path):
    # quad_neg is concave, not convex: outside the Neumann comparison class
    path = _config(tmp_path, [
        {"theorem": "szego_weinberger", "kappa": 0, "weight": "quad_neg:0.3",
         "shape": "disk:0,0,1", "mesh_h": 0.05},
    ])
    out = tmp_path / "reports"
    assert run_suite(path, out) == 3
    row = json.loads((out / "report.json").read_text())["experiments"][0]
    assert row["status"] == "Inconclusive"
    assert row["hypothesis_check"]["passed"] is False
    assert row["hypothesis_check"]["failed"] == "convex"


def test_true_violation_exits_two(tmp_path):
    # a strongly off-center cap genuinely reverses the hemisphere bound
    path = _config(tmp_path, [
        {"theorem": "faber_krahn_hemisphere", "kappa": 1, "weight": "log_cos",
         "shape": "disk:0.2,0,0.45", "mesh_h": 0.03},
    ])
    out = tmp_path / "reports"
    assert run_suite(path, out) == 2
    line = (out / "summary.csv").read_text().splitlines()[1]
    assert line.endswith(",Fail")
    assert float(line.split(",")[-2]) < -0.05


def test_solver_failure_is_inconclusive():
    # disk leaking outside the Poincare disk fails at mesh generation
    report = run_experiment(
        _spec(Theorem.FABER_KRAHN, -1, "quad_neg:0.3", "disk:0.5,0,0.6")
    )
    assert report.status == "Inconclusive"
    assert "reason" in report.diagnostics


def test_suite_is_byte_identical_across_runs(tmp_path):
    rows = [
        {"theorem": "faber_krahn", "kappa": 0, "weight": "quad_neg:0.3",
         "shape": "disk:0,0,1", "mesh_h": 0.06},
        {"theorem": "appendix_ordering", "kappa": 0, "weight": "exp_dec",
         "radius_grid": [0.5, 1.0]},
    ]
    path = _config(tmp_path, rows)
    assert run_suite(path, tmp_path / "a") == 0
    assert run_suite(path, tmp_path / "b") == 0
    csv_a = (tmp_path / "a" / "summary.csv").read_bytes()
    assert csv_a == (tmp_path / "b" / "summary.csv").read_bytes()
    # JSON may differ only in runtime_ms
    strip = lambda d: {k: v for k, v in d.items() if k != "runtime_ms"}
    rep_a = json.loads((tmp_path / "a" / "report.json").read_text())
    rep_b = json.loads((tmp_path / "b" / "report.json").read_text())
    assert list(map(strip, rep_a["experiments"])) == list(
        map(strip, rep_b["experiments"])
    )


# ---------------------------------------------------------------------------
# report content


def test_hypothesis_check_matches_independent_admissibility():
    spec = _spec(Theorem.FABER_KRAHN, 0, "quad_neg:0.3", "disk:0,0,1", mesh_h=0.06)
    report = run_experiment(spec)
    assert report.status == "Pass"
    independent = check_admissibility(
        spec.profile, _required_classes(spec.theorem, 0), t_max=1.0
    )
    assert bool(report.hypothesis_check) == bool(independent) is True


def test_ordering_report_carries_per_radius_diagnostics():
    spec = _spec(
        Theorem.APPENDIX_ORDERING, 0, "exp_dec", None, mesh_h=None,
        radius_grid=(0.5, 1.0),
    )
    report = run_experiment(spec)
    assert report.status == "Pass"
    rows = report.diagnostics["per_radius"]
    assert [r["R"] for r in rows] == [0.5, 1.0]
    for r in rows:
        assert r["mu_1_1"] < r["mu_0_2"]
        assert r["wronskian_residual"] <= 1e-6
        assert r["node_counts"] == [0, 1]
    assert report.margin > 0


def test_ordering_hemisphere_uses_its_own_weight_class():
    spec = _spec(
        Theorem.APPENDIX_ORDERING, 1, "log_cos", None, mesh_h=None,
        radius_grid=(0.4, 0.8),
    )
    report = run_experiment(spec)
    assert report.status == "Pass"
    assert _required_classes(Theorem.APPENDIX_ORDERING, 1) == [
        Admissibility.LOG_COS_HEMISPHERE
    ]


def test_csv_row_round_trips_floats():
    report = run_experiment(
        _spec(Theorem.FABER_KRAHN, 0, "zero", "disk:0,0,1", mesh_h=0.06)
    )
    (fields,) = csv.reader([report.csv_row()])
    assert len(fields) == 8
    assert fields[0] == "faber_krahn"
    assert fields[3] == "disk:0,0,1"
    assert float(fields[4]) == report.lhs
    assert float(fields[6]) == report.margin
    payload = report.to_json_dict()
    assert payload["diagnostics"]["matched_radius"] > 0
    assert payload["status"] == report.status
