import json

import numpy as np
import pytest

from specshrink import cli, core


def run_cli(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def check_schema(report, command):
    assert report["schema"] == 1
    assert report["command"] == command
    assert "seed" in report
    assert isinstance(report["config"], dict)
    assert isinstance(report["results"], list) and report["results"]
    assert "wall_time" in report
    for r in report["results"]:
        assert {"name", "claim", "passed", "defect", "threshold", "details"} <= set(r)


def test_verify_canonical(capsys):
    code, report = run_cli(capsys, [
        "verify", "--space", "gl", "--n", "3", "--m", "6",
        "--pq", "1,1", "--samples", "50", "--seed", "0"])
    assert code == 0
    check_schema(report, "verify")
    by_name = {r["name"]: r for r in report["results"]}
    assert by_name["powerlaw"]["defect"] <= 1e-7
    assert by_name["shrinking-inclusion"]["defect"] <= 1e-8


def test_verify_reports_defaults(capsys):
    code, report = run_cli(capsys, [
        "verify", "--space", "un", "--n", "2", "--m", "4", "--pq", "1,1"])
    assert code == 0
    cfg = report["config"]
    # no hidden configuration: defaults are all in the report
    assert cfg["samples"] == 100 and cfg["seed"] == 0
    assert cfg["inclusion_threshold"] == 1e-8 and cfg["powerlaw_threshold"] == 1e-7


def test_verify_degenerate_hermitian(capsys):
    code, report = run_cli(capsys, [
        "verify", "--space", "hn", "--n", "2", "--m", "5",
        "--shrinker", "hn-max", "--samples", "30", "--seed", "0"])
    assert code == 0
    by_name = {r["name"]: r for r in report["results"]}
    assert by_name["shrinking-inclusion"]["passed"]
    assert by_name["divisibility"]["passed"]


def test_verify_usage_error_on_inconsistent_m(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--space", "gl", "--n", "3", "--m", "7", "--pq", "1,1"])
    assert info.value.code == 2


def test_monodromy(capsys):
    code, report = run_cli(capsys, [
        "monodromy", "--n", "3", "--r", "1", "--steps", "512", "--seed", "0"])
    assert code == 0
    check_schema(report, "monodromy")
    assert all(r["passed"] for r in report["results"])
    assert len(report["config"]["paths"]) == 3
    path = report["config"]["paths"][0]
    assert len(path["values"]) == 513
    assert len(path["values"][0]) == 2  # [re, im] pairs


def test_select_su(capsys):
    code, report = run_cli(capsys, [
        "select", "--selector", "su", "--n", "3", "--steps", "200", "--seed", "1"])
    assert code == 0
    check_schema(report, "select")
    assert all(r["passed"] for r in report["results"])


def test_select_hn_and_unlambda(capsys):
    code, _ = run_cli(capsys, [
        "select", "--selector", "hn", "--n", "3", "--steps", "200", "--seed", "1"])
    assert code == 0
    code, report = run_cli(capsys, [
        "select", "--selector", "unlambda", "--n", "3", "--steps", "200",
        "--seed", "1", "--cut=-1,0"])
    assert code == 0
    assert all(r["passed"] for r in report["results"])


def test_configspace(capsys):
    code, report = run_cli(capsys, ["configspace", "--n", "4", "--seed", "0"])
    assert code == 0
    names = {r["name"] for r in report["results"]}
    assert {"equivariance", "isotropy", "cycle-decomposition"} <= names
    assert all(r["passed"] for r in report["results"])


def test_calculus(capsys):
    code, report = run_cli(capsys, [
        "calculus", "--f", "conj", "--n", "3", "--samples", "30", "--seed", "0"])
    assert code == 0
    assert all(r["passed"] for r in report["results"])


def test_theta_checks(capsys):
    code, report = run_cli(capsys, [
        "theta", "--check", "all", "--n", "3", "--samples", "20", "--seed", "0"])
    assert code == 0
    names = {r["name"] for r in report["results"]}
    assert names == {"involution", "pf", "commute", "ads"}
    code, report = run_cli(capsys, [
        "theta", "--check", "probe", "--n", "3", "--samples", "10",
        "--seed", "0", "--scale", "1e-3"])
    assert code == 0


def test_reconstruct_identity(capsys):
    code, report = run_cli(capsys, [
        "reconstruct", "--oracle", "id", "--space", "un", "--n", "3", "--seed", "0"])
    assert code == 0
    result = report["results"][0]
    assert result["details"]["mode"] == "conjugation"


def test_reconstruct_transpose(capsys):
    code, report = run_cli(capsys, [
        "reconstruct", "--oracle", "transpose", "--space", "un", "--n", "4",
        "--seed", "0"])
    assert code == 0
    assert report["results"][0]["details"]["mode"] == "transpose_conjugation"


def test_reconstruct_matrix_file(capsys, tmp_path):
    rng = np.random.default_rng(0)
    T0 = np.eye(3) + 0.4 * (rng.standard_normal((3, 3))
                            + 1j * rng.standard_normal((3, 3)))
    path = tmp_path / "t0.json"
    core.save_matrix(path, T0)
    code, report = run_cli(capsys, [
        "reconstruct", "--oracle", f"conj:{path}", "--space", "un", "--n", "3",
        "--seed", "0"])
    assert code == 0
    got = core.matrix_from_dict(report["results"][0]["details"]["matrix"])
    from specshrink.reconstruct import projective_distance
    assert projective_distance(got, T0) <= 1e-6


def test_reconstruct_theta_negative_path(capsys):
    code, report = run_cli(capsys, [
        "reconstruct", "--oracle", "theta", "--space", "gln_ss", "--n", "3",
        "--seed", "0"])
    assert code == 1
    result = report["results"][0]
    assert not result["passed"]
    assert result["details"]["error"] == "ResidualTooLarge"
    assert result["details"]["residual"] > 1e-3


def test_verify_determinism_to_twelve_digits(capsys):
    argv = ["verify", "--space", "sl", "--n", "3", "--m", "6",
            "--pq", "1,1", "--samples", "30", "--seed", "5"]
    _, first = run_cli(capsys, argv)
    _, second = run_cli(capsys, argv)
    for a, b in zip(first["results"], second["results"]):
        if a["defect"] is not None:
            assert abs(a["defect"] - b["defect"]) <= 1e-12 * max(abs(a["defect"]), 1e-300)
