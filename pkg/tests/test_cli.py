"""Command-line surface: reports, exit codes, determinism, CSV output."""

import json

import pytest

import diraclab.multivector
from diraclab.cli import (
    EXIT_CHECK_FAILED,
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    main,
    parse_mesh_spec,
    render_report,
    run_mesh_spectrum,
    run_twistor,
    run_verify_fiber,
)


def test_verify_fiber_passes():
    code, report = run_verify_fiber(4, exact=True)
    assert code == EXIT_OK
    assert report["schema"] == "dirac-lab/1"
    assert report["status"] == "pass"
    assert len(report["checks"]) >= 10
    names = [rec["name"] for rec in report["checks"]]
    assert names == sorted(names)
    for rec in report["checks"]:
        assert rec["anchor"]
        assert rec["status"] == "pass"


def test_verify_fiber_float_mode():
    code, report = run_verify_fiber(3, exact=False)
    assert code == EXIT_OK and report["status"] == "pass"


def test_injected_sign_flip_fails_volume_check(monkeypatch):
    true_hodge = diraclab.multivector.hodge

    def flipped(a):
        return true_hodge(a).scale(-1)

    monkeypatch.setattr(diraclab.multivector, "hodge", flipped)
    import diraclab.fibersuite as fs
    monkeypatch.setattr(fs.mv, "hodge", flipped)
    code, report = run_verify_fiber(3, exact=True)
    assert code == EXIT_CHECK_FAILED
    failing = {rec["name"] for rec in report["checks"] if rec["status"] == "fail"}
    assert "fiber-volume-action" in failing


def test_twistor_report_n2():
    code, report = run_twistor(2, 20, 1e-8, 42)
    assert code == EXIT_OK and report["status"] == "pass"
    by_name = {rec["name"]: rec for rec in report["checks"]}
    dim_rec = by_name["twistor-family-dimension"]
    assert dim_rec["details"]["rank"] == 8
    assert by_name["dirac-derivative-endomorphism"]["status"] == "skipped"
    assert by_name["twistor-eigenvalue-gap-table"]["status"] == "pass"


def test_twistor_report_n3():
    code, report = run_twistor(3, 15, 1e-8, 42)
    assert code == EXIT_OK
    by_name = {rec["name"]: rec for rec in report["checks"]}
    assert by_name["dirac-derivative-endomorphism"]["status"] == "pass"
    assert by_name["twistor-family-dimension"]["details"]["rank"] == 10


def test_twistor_forced_ricci_n2():
    code, report = run_twistor(2, 10, 1e-8, 42, ricci_mode="force")
    assert code == EXIT_OK
    by_name = {rec["name"]: rec for rec in report["checks"]}
    assert by_name["dirac-derivative-endomorphism"]["status"] == "skipped"


def test_report_determinism():
    _, r1 = run_twistor(2, 10, 1e-8, 7)
    _, r2 = run_twistor(2, 10, 1e-8, 7)
    assert render_report(r1) == render_report(r2)
    _, m1, c1 = run_mesh_spectrum("icosphere:2", 0, 8, 1e-8, 5)
    _, m2, c2 = run_mesh_spectrum("icosphere:2", 0, 8, 1e-8, 5)
    assert render_report(m1) == render_report(m2)
    assert c1 == c2


def test_mesh_spectrum_icosphere():
    code, report, csv_text = run_mesh_spectrum("icosphere:3", 0, 10, 1e-8, 42)
    assert code == EXIT_OK and report["status"] == "pass"
    by_name = {rec["name"]: rec for rec in report["checks"]}
    assert by_name["betti-numbers"]["details"]["betti"] == [1, 0, 1]
    assert by_name["first-cluster-multiplicity"]["details"]["multiplicity"] == 3
    lines = csv_text.strip().splitlines()
    assert lines[0] == "degree,index,eigenvalue,residual"
    assert len(lines) == 11
    first_positive = float(lines[2].split(",")[2])
    assert abs(first_positive - 2.0) < 0.04


def test_mesh_spectrum_torus_degree1():
    code, report, _ = run_mesh_spectrum("torus:16", 1, 8, 1e-8, 42)
    assert code == EXIT_OK
    by_name = {rec["name"]: rec for rec in report["checks"]}
    assert by_name["betti-numbers"]["details"]["betti"] == [1, 2, 1]


def test_mesh_spec_errors(tmp_path):
    from diraclab.mesh import MeshError
    for spec in ("icosphere:9", "torus:2", "klein:3", "icosphere:x", "missing.off"):
        with pytest.raises(MeshError):
            parse_mesh_spec(spec)
    good = parse_mesh_spec("icosphere:1")
    assert good.num_vertices == 42


def test_main_exit_codes(tmp_path, capsys):
    assert main(["verify-fiber", "--max-dim", "1"]) == EXIT_USAGE
    assert main(["twistor", "--n", "1"]) == EXIT_USAGE
    assert main(["mesh-spectrum", "--mesh", "missing.off"]) == EXIT_DATA
    assert main(["no-such-command"]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["verify-fiber", "--max-dim", "2", "--exact"]) == EXIT_OK
    out = capsys.readouterr().out
    report = json.loads(out)
    assert report["status"] == "pass"


def test_main_writes_outputs(tmp_path):
    out = tmp_path / "report.json"
    csv_out = tmp_path / "spec.csv"
    code = main(["mesh-spectrum", "--mesh", "icosphere:2", "--degree", "0",
                 "--num", "6", "--out", str(out), "--csv-out", str(csv_out)])
    assert code == EXIT_OK
    report = json.loads(out.read_text())
    assert report["config"]["mesh"] == "icosphere:2"
    assert csv_out.read_text().startswith("degree,index,eigenvalue,residual")


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_dim": 3, "seed": 9}))
    assert main(["verify-fiber", "--exact", "--config", str(cfg)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["max_dim"] == 3
    assert report["config"]["seed"] == 9
    # explicit flag wins over the file
    assert main(["verify-fiber", "--exact", "--config", str(cfg),
                 "--max-dim", "2"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["max_dim"] == 2


def test_version_flag(capsys):
    assert main(["--version"]) == EXIT_OK
    assert "dirac-lab" in capsys.readouterr().out
