import csv
import io
import json

import numpy as np
import pytest

from ginibre3d.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table2_row(capsys):
    code, out, _ = run(capsys, "tables", "--which", "2")
    assert code == 0
    line = out.splitlines()[7]
    assert line == "6,z^6+21z^4+105z^2+105,5040,6"


def test_table1_entry_and_json_meta(capsys):
    code, out, _ = run(capsys, "tables", "--which", "1", "--nmax", "6", "--format", "json")
    doc = json.loads(out)
    assert doc["meta"]["command"] == "tables"
    assert doc["meta"]["argv"] == ["tables", "--which", "1", "--nmax", "6", "--format", "json"]
    assert doc["data"][6]["6"] == "135135"


def test_tables_large_integers_exact(capsys):
    code, out, _ = run(capsys, "poly", "--n", "40", "--format", "json")
    doc = json.loads(out)
    import math

    assert doc["data"][40]["h_n"] == str(math.factorial(41))


def test_usage_errors(capsys):
    assert run(capsys, "tables", "--nmax", "51")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "sample", "--n", "3", "--count", "5")[0] == 2
    assert run(capsys, "figures", "--which", "4")[0] == 2


def test_figure2(capsys):
    code, out, _ = run(capsys, "figures", "--which", "2", "--grid", "50")
    data = rows(out)
    vals = np.array([float(r["value"]) for r in data])
    assert np.all(vals >= 0)
    first = data[0]
    assert first["n"] == "2" and float(first["x"]) == 0.0
    # (1/3) K_2(0, 0) = (1 + 9/6) / 3
    assert float(first["value"]) == pytest.approx(2.5 / 3, rel=1e-11)
    assert {r["n"] for r in data} == {str(n) for n in range(2, 65, 2)}


def test_figure3_diagonal(capsys):
    code, out, _ = run(capsys, "figures", "--which", "3", "--grid", "5", "--n", "800")
    data = rows(out)
    at_zero = [r for r in data if float(r["tau"]) == 0.0]
    assert len(at_zero) == 3
    assert all(float(r["limit"]) == 1.0 for r in at_zero)


def test_figure1_counts(capsys):
    code, out, _ = run(capsys, "figures", "--which", "1", "--grid", "11")
    data = rows(out)
    assert len(data) == 9 * 11


def test_kernel_and_density_columns(capsys):
    code, out, _ = run(capsys, "kernel", "--n", "3", "--grid", "3")
    data = rows(out)
    assert list(data[0]) == ["n", "s", "t", "u_dot_v", "rho", "delta", "K_real", "K_i", "K_j", "K_k"]
    assert len(data) == 9
    code, out, _ = run(capsys, "radial", "--n", "2", "--grid", "5")
    assert rows(out)[0]["density"] == "0"


def test_asymptotics_command(capsys):
    code, out, _ = run(capsys, "asymptotics", "--regime", "density", "--n", "4000", "--grid", "7")
    data = rows(out)
    assert max(float(r["rel_err"]) for r in data) < 0.05


def test_sample_deterministic_and_round_trip(capsys):
    args = ("sample", "--n", "1", "--count", "4000", "--seed", "11", "--workers", "2")
    _, csv_out, _ = run(capsys, *args)
    _, csv_again, _ = run(capsys, *args)
    assert csv_out == csv_again
    _, json_out, _ = run(capsys, *args, "--format", "json")
    report = {d["statistic"]: d for d in json.loads(json_out)["data"]}
    data = rows(csv_out)
    xyz = np.array([[float(r["x"]), float(r["y"]), float(r["z"])] for r in data])
    r = np.linalg.norm(xyz, axis=1)
    counts, _ = np.histogram(r, bins=np.linspace(0, 6, 51))
    assert [str(c) for c in counts] == report["radial"]["counts"]
    u = xyz / r[:, None]
    cos_a = np.sum(u[0::2] * u[1::2], axis=1)
    assert float(report["angular"]["mean"]) == pytest.approx(cos_a.mean(), abs=1e-10)


def test_verify_exit_codes(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, err = run(capsys, "verify", "--criteria", "1,2", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert [c["id"] for c in doc["data"]] == ["1", "2"]
    assert "criterion  1" in err
    code, _, _ = run(capsys, "verify", "--criteria", "7", "--quiet")
    assert code == 1
