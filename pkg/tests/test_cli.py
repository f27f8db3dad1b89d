import json
import subprocess
import sys

import pytest

from gop import cli
from gop.config import bundled_path
from gop.sampling import read_measurements

EXPO = """
name = "{name}"
M = {M}
seed = 7

[family]
kind = "exponential"

[truth]
parameters = [[0.3, 1.0], [-0.2, -2.0]]
coefficients = [1.0, [2.0, -1.0]]

[scheme]
kind = "{scheme}"
tau = 1.0
x0 = 0.0

[noise]
sigma = {sigma}
"""


def write(tmp_path, name="e", M=2, scheme="hankel_shift", sigma=0.0):
    path = tmp_path / f"{name}.toml"
    path.write_text(EXPO.format(name=name, M=M, scheme=scheme, sigma=sigma))
    return path


def report_without_time(path):
    rep = json.loads(path.read_text())
    rep.pop("wall_time_s")
    return rep


def test_run_writes_report_and_csv(tmp_path):
    cfg = write(tmp_path)
    out = tmp_path / "out" / "e.report.json"
    assert cli.main(["run", str(cfg), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema_version"] == cli.SCHEMA_VERSION
    assert rep["status"] == "ok" and rep["error"] is None
    assert rep["scheme"] == {"kind": "hankel_shift", "M": 2, "hankel": True, "measurement_count": 4}
    assert rep["errors"]["max_parameter_abs_error"] < 1e-12
    assert len(read_measurements(tmp_path / "out" / "e.measurements.csv")) == 4


def test_determinism_with_noise(tmp_path):
    cfg = write(tmp_path, sigma=1e-3)
    a, b = tmp_path / "a.report.json", tmp_path / "b.report.json"
    cli.main(["run", str(cfg), "--out", str(a)])
    cli.main(["run", str(cfg), "--out", str(b)])
    assert report_without_time(a) == report_without_time(b)
    assert (tmp_path / "a.measurements.csv").read_bytes() == (tmp_path / "b.measurements.csv").read_bytes()
    cli.main(["run", str(cfg), "--out", str(b), "--seed", "8"])
    assert report_without_time(a)["result"] != report_without_time(b)["result"]


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text(EXPO.format(name="bad", M=2, scheme="no_such_scheme", sigma=0))
    assert cli.main(["run", str(bad), "--out", str(tmp_path / "x.json")]) == 2
    assert "scheme" in capsys.readouterr().err
    assert cli.main(["run", str(tmp_path / "missing.toml")]) == 2
    # three unknowns for a two-term signal: the sampling matrix is rank deficient
    over = write(tmp_path, name="over", M=3)
    out = tmp_path / "over.report.json"
    assert cli.main(["run", str(over), "--out", str(out)]) == 3
    rep = json.loads(out.read_text())
    assert rep["status"] == "failed" and rep["error"]["type"] == "RankDeficient"
    assert rep["result"] is None and rep["errors"] is None


@pytest.mark.parametrize("config, rows", [
    ("expo_hankel_m2", 4), ("expo_strided_m2", 5), ("legendre_table3", 6),
])
def test_simulate_row_counts(tmp_path, config, rows):
    if config == "expo_hankel_m2":
        path = write(tmp_path)
    elif config == "expo_strided_m2":
        path = write(tmp_path, scheme="strided")
    else:
        path = bundled_path(config)
    out = tmp_path / "m.csv"
    assert cli.main(["simulate", str(path), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == rows + 1


def test_simulate_to_stdout(tmp_path, capsys):
    assert cli.main(["simulate", str(write(tmp_path))]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "measurement_id,real,imag" and len(lines) == 5


def test_ingest_csv_without_truth(tmp_path):
    cfg = write(tmp_path)
    csv_path = tmp_path / "data.csv"
    cli.main(["simulate", str(cfg), "--out", str(csv_path)])
    ingest = tmp_path / "ingest.toml"
    ingest.write_text('name = "ingest"\nM = 2\n[family]\nkind = "exponential"\n'
                      '[scheme]\nkind = "hankel_shift"\n[data]\nmeasurements = "data.csv"\n')
    out = tmp_path / "ingest.report.json"
    assert cli.main(["run", str(ingest), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert "errors" not in rep
    params = sorted((complex(*p) for p in rep["result"]["parameters"]), key=lambda z: z.real)
    assert abs(params[0] - (-0.2 - 2j)) < 1e-12 and abs(params[1] - (0.3 + 1j)) < 1e-12


def test_batch(tmp_path):
    write(tmp_path, name="one")
    write(tmp_path, name="two", scheme="mixed")
    write(tmp_path, name="three", M=3)
    out = tmp_path / "reports"
    assert cli.main(["batch", str(tmp_path), "--out", str(out), "--workers", "2"]) == 3
    statuses = {p.name: json.loads(p.read_text())["status"] for p in out.glob("*.report.json")}
    assert statuses == {"one.report.json": "ok", "two.report.json": "ok",
                        "three.report.json": "failed"}


def test_list_and_bundled_configs_run(tmp_path, capsys):
    assert cli.main(["list"]) == 0
    names = capsys.readouterr().out.split()
    assert "legendre_table3" in names and len(names) == 13
    for name in names:
        out = tmp_path / f"{name}.report.json"
        assert cli.main(["run", str(bundled_path(name)), "--out", str(out)]) == 0, name


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "gop.cli", "run", str(bundled_path("expo_m1_trivial")),
                           "--out", str(tmp_path / "r.json")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "expo_m1_trivial" in proc.stdout
