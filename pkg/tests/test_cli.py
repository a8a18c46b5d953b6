from __future__ import annotations

import json

import pytest

from buildingwave.cli import emit_table, main


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_info_summary(capsys):
    code, out = run_cli(capsys, "info", "--type", "A2", "--q", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "rootsys-v1"
    assert payload["weyl_order"] == 6
    assert payload["h"] == 4
    assert payload["rho_coords"] == [1, 1]


def test_info_bad_type_exits_one(capsys):
    code, _ = run_cli(capsys, "info", "--type", "A0", "--q", "2")
    assert code == 1


def test_orbit_inconsistent_q_exits_one(capsys):
    code, _ = run_cli(capsys, "info", "--type", "A2", "--q", "2,3")
    assert code == 1


def test_nlambda(capsys):
    code, out = run_cli(capsys, "nlambda", "--type", "A2", "--q", "2", "--lambda", "1,0")
    assert code == 0
    payload = json.loads(out)
    assert payload["n_lambda"] == "7"


def test_macdonald_json(capsys):
    code, out = run_cli(
        capsys, "macdonald", "--type", "A1", "--q", "2", "--lambda", "1",
        "--z", "zeta=0", "theta=0.3",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["z"]["sigma_member"] is True
    assert len(payload["coefficients"]) == 1


def test_macdonald_malformed_lambda(capsys):
    code, _ = run_cli(capsys, "macdonald", "--type", "A2", "--q", "2", "--lambda", "1,x")
    assert code == 1


def test_wave_csv(capsys):
    code, out = run_cli(capsys, "wave", "--type", "A2", "--q", "2", "--mu", "1,1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("#")
    assert "omega,u" in lines
    assert any(line.startswith("1 1,") for line in lines)


def test_wave_verify_json(capsys):
    code, out = run_cli(capsys, "wave", "verify", "--type", "A1", "--q", "2", "--max-time", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["sup_decay"]["rate"] > 0


def test_spectrum_sample_csv(capsys):
    code, out = run_cli(capsys, "spectrum", "sample", "--type", "A1", "--q", "2", "--resolution", "3")
    assert code == 0
    assert "family,zeta,theta" in out


def test_kernel_build_verify_roundtrip(tmp_path, capsys):
    table = tmp_path / "table.json"
    code, _ = run_cli(
        capsys, "kernel", "build", "--type", "A1", "--q", "2",
        "--z0", "zeta=0", "theta=0", "--M", "1", "--N", "2", "--out", str(table),
    )
    assert code == 0
    payload = json.loads(table.read_text())
    assert payload["schema"] == "kernel-v1"
    assert payload["report"]["failures"] == []
    code, out = run_cli(capsys, "kernel", "verify", str(table))
    assert code == 0
    assert json.loads(out)["mismatches"] == []


def test_kernel_build_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for path in paths:
        code, _ = run_cli(
            capsys, "kernel", "build", "--type", "A2", "--q", "2",
            "--z0", "zeta=vq:1", "theta=0", "--M", "1", "--N", "2", "--out", str(path),
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_kernel_verify_missing_file(capsys):
    code, _ = run_cli(capsys, "kernel", "verify", "missing.json")
    assert code == 1


def test_kernel_verify_tampered_table(tmp_path, capsys):
    table = tmp_path / "table.json"
    run_cli(
        capsys, "kernel", "build", "--type", "A1", "--q", "2",
        "--z0", "zeta=0", "theta=0", "--M", "1", "--N", "2", "--out", str(table),
    )
    payload = json.loads(table.read_text())
    payload["coefficients"][0]["c"] = 0.123
    table.write_text(json.dumps(payload))
    code, out = run_cli(capsys, "kernel", "verify", str(table))
    assert code == 2
    assert json.loads(out)["mismatches"]


def test_kernel_build_external_target(capsys):
    code, _ = run_cli(
        capsys, "kernel", "build", "--type", "A1", "--q", "2",
        "--z0", "zeta=vq:2", "theta=0", "--M", "1", "--N", "2",
    )
    assert code == 1


def test_plancherel_check(capsys):
    code, out = run_cli(capsys, "plancherel", "check", "--type", "A1", "--q", "2", "--K", "64")
    assert code == 0
    assert "constant_mass" in out


def test_emit_table_empty_rows(tmp_path):
    path = tmp_path / "empty.csv"
    emit_table([], "csv", str(path), {"type": "A1"})
    text = path.read_text()
    assert text.startswith("# type = A1")


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as err:
        main(["unknown-command"])
    assert err.value.code == 1
