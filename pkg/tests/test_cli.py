import json

import pytest

import becimpurity
from becimpurity import DEFAULT_TOLERANCES
from becimpurity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dispersion_csv_golden(capsys):
    code, out, err = run(capsys, "dispersion")
    assert code == 0 and err == ""
    lines = out.splitlines()
    assert lines[0] == "p,epsilon,alpha,beta,w"
    assert lines[1] == "0,0,,,0"  # transform is singular at p = 0
    assert len(lines) == 8  # header + 7 grid points
    assert out.endswith("\n")


def test_empty_grid_gives_header_only(capsys):
    code, out, _ = run(capsys, "dispersion", "--grid", "0:1:0")
    assert code == 0
    assert out == "p,epsilon,alpha,beta,w\n"


def test_json_format_carries_version_and_inputs(capsys):
    code, out, _ = run(capsys, "dispersion", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["version"] == becimpurity.__version__
    assert doc["inputs"]["command"] == "dispersion"
    assert doc["inputs"]["params"]["g"] == 1.0
    assert len(doc["results"]["rows"]) == 7
    assert doc["results"]["rows"][0]["alpha"] is None


def test_reruns_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["rates", "--output", str(a)]) == 0
    assert main(["rates", "--output", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_config_file_params_reach_the_physics(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"a": 0.01}}))
    code, out, _ = run(capsys, "spectrum", "--config", str(cfg))
    assert code == 0
    assert out.startswith("# M_ef = 1.0002845253")


def test_flag_overrides_config_grid(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grid": "0:1:3"}))
    code, out, _ = run(capsys, "dispersion", "--config", str(cfg), "--grid", "0:1:5")
    assert code == 0
    assert len(out.splitlines()) == 6


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"grids": "0:1:3"}))
    code, _, err = run(capsys, "dispersion", "--config", str(cfg))
    assert code == 2
    assert "unknown config keys" in err


def test_unknown_params_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"params": {"mass": 2.0}}))
    code, _, err = run(capsys, "dispersion", "--config", str(cfg))
    assert code == 2
    assert "params" in err


def test_malformed_config_rejected(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("[1, 2]")
    assert run(capsys, "dispersion", "--config", str(cfg))[0] == 2
    cfg.write_text("{not json")
    assert run(capsys, "dispersion", "--config", str(cfg))[0] == 2
    missing = tmp_path / "nope.json"
    assert run(capsys, "dispersion", "--config", str(missing))[0] == 2


@pytest.mark.parametrize("grid", ["1:2", "2:1:5", "a:b:3", "0:1:-2"])
def test_bad_grids_rejected(grid, capsys):
    code, _, err = run(capsys, "dispersion", "--grid", grid)
    assert code == 2
    assert "grid" in err


def test_nonpositive_tol_rejected(capsys):
    code, _, err = run(capsys, "rates", "--tol", "-1")
    assert code == 2
    assert "tol" in err


def test_unreachable_tol_is_a_numerical_failure(capsys):
    code, _, err = run(capsys, "rates", "--tol", "1e-18", "--grid", "2:2:1")
    assert code == 3
    assert "numerical failure" in err


def test_spectrum_beyond_critical_momentum_is_domain_error(capsys):
    code, _, err = run(capsys, "spectrum", "--grid", "0:2:5")
    assert code == 2
    assert "domain error" in err


def test_output_to_missing_directory_rejected(tmp_path, capsys):
    target = tmp_path / "no_such_dir" / "out.csv"
    code, _, err = run(capsys, "dispersion", "--output", str(target))
    assert code == 2
    assert "cannot write output" in err


def test_check_reports_designed_failures(capsys):
    code, out, _ = run(capsys, "check")
    assert code == 1
    lines = out.splitlines()
    failed = {ln.split()[1].rstrip(":") for ln in lines if ln.startswith("FAIL ")}
    assert failed == {
        "heavy_mass_dissipation_limit",
        "box_schedule_monotone",
        "branch_point_one_sided",
    }
    assert lines[-1] == "19 passed, 3 failed"


def test_check_json_report_covers_every_check(tmp_path, capsys):
    report = tmp_path / "report.json"
    code = main(["check", "--output", str(report)])
    capsys.readouterr()
    assert code == 1
    doc = json.loads(report.read_text())
    names = [r["name"] for r in doc["results"]]
    assert names == list(DEFAULT_TOLERANCES)
    assert doc["meta"]["version"] == becimpurity.__version__
    assert all(isinstance(r["passed"], bool) for r in doc["results"])


def test_check_passes_with_relaxed_tolerances(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {
        "heavy_mass_dissipation_limit": 0.06,
        "box_schedule_monotone": 0.009,
        "branch_point_one_sided": 2e-5,
    }}))
    code, out, _ = run(capsys, "check", "--config", str(cfg))
    assert code == 0
    assert out.splitlines()[-1] == "22 passed, 0 failed"


def test_check_rejects_negative_tolerance_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"landau_exact_zero": -1.0}}))
    code, _, err = run(capsys, "check", "--config", str(cfg))
    assert code == 2
    assert "tolerance" in err


def test_box_oracle_flags_reach_the_row(capsys):
    code, out, _ = run(capsys, "box-oracle", "--L", "30", "--eta", "0.1")
    assert code == 0
    header, row = out.splitlines()
    cols = dict(zip(header.split(","), row.split(",")))
    assert cols["L"] == "30"
    assert cols["eta"] == "0.10000000000000001"  # %.17g of 0.1
    assert cols["p_cut"] == "3"
    assert float(cols["est_error"]) > 0.0


def test_effective_mass_lists_all_three_methods(capsys):
    code, out, _ = run(capsys, "effective-mass")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "method,M_ef,correction"
    assert [ln.split(",")[0] for ln in lines[1:]] == [
        "closed", "quadrature", "finite_difference",
    ]


def test_fig1_equal_mass_row_is_exact(capsys):
    code, out, _ = run(capsys, "fig1", "--grid", "1:1:1")
    assert code == 0
    assert out.splitlines()[1] == "1,1.3333333333333333,0.13333333333333333"


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert becimpurity.__version__ in capsys.readouterr().out


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
