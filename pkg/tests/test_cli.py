import csv
import json

import numpy as np
import pytest

from chaindecoherence import cli
from chaindecoherence.analysis import time_series
from chaindecoherence.exceptions import PositivityError

from conftest import make_config

HEADER = "t,f14,f23,mutual_info,classical,discord,concurrence,eof"
FIG2_ARGS = [
    "evolve", "--n", "400", "--lambda", "1", "--gamma", "1", "--alpha", "0", "--g", "0.05",
    "--delta", "0", "--c1", "1", "--c2", "-1", "--c3", "1", "--t-max", "20", "--t-steps", "2000",
]


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_evolve_example(tmp_path):
    out = tmp_path / "fig2.csv"
    assert cli.run(FIG2_ARGS + ["--out", str(out)]) == 0
    raw = out.read_bytes()
    assert b"\r" not in raw
    lines = raw.decode("utf-8").splitlines()
    assert lines[0] == HEADER
    assert len(lines) == 2001
    assert sum(line == HEADER for line in lines) == 1


def test_csv_round_trip(tmp_path):
    out = tmp_path / "a.csv"
    assert cli.run(["evolve", "--n", "101", "--c2", "-0.2", "--c3", "0.2", "--t-steps", "300",
                    "--out", str(out)]) == 0
    values = np.array(read_rows(out)[1:], dtype=float)
    expected = time_series(make_config(n_sites=101, coeffs=(1.0, -0.2, 0.2), steps=300)).as_array()
    np.testing.assert_allclose(values, expected, rtol=1e-11, atol=1e-300)


def test_output_is_deterministic(tmp_path, capsys):
    paths = [tmp_path / "1.csv", tmp_path / "2.csv"]
    for p in paths:
        assert cli.run(["sweep", "--n", "51", "--t-steps", "20", "--alpha-steps", "5", "--jobs", "2",
                        "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_stdout_and_json(capsys):
    assert cli.run(["evolve", "--n", "21", "--t-steps", "3", "--format", "json"]) == 0
    body = json.loads(capsys.readouterr().out)
    assert body["columns"] == HEADER.split(",")
    assert len(body["rows"]) == 3


def test_too_few_steps_names_flag(capsys):
    assert cli.run(["evolve", "--t-steps", "1"]) == 2
    assert "--t-steps" in capsys.readouterr().err


@pytest.mark.parametrize("argv, flag", [
    (["evolve", "--n", "2"], "--n"),
    (["evolve", "--delta", "2"], "--delta"),
    (["evolve", "--c1", "1", "--c2", "1", "--c3", "1"], "--c1"),
    (["gamma-scan", "--gamma-steps", "3"], "--gamma-steps"),
])
def test_config_errors(argv, flag, capsys):
    assert cli.run(argv) == 2
    assert flag in capsys.readouterr().err


def test_unknown_preset(tmp_path, capsys):
    assert cli.run(["preset", "fig9", "--out", str(tmp_path)]) == 2
    assert "fig9" in capsys.readouterr().err


def test_argparse_errors_are_config_errors(capsys):
    assert cli.run(["evolve", "--n", "many"]) == 2
    assert cli.run(["nonsense"]) == 2


def test_unwritable_output(tmp_path, capsys):
    assert cli.run(["evolve", "--n", "21", "--t-steps", "3", "--out", str(tmp_path / "missing" / "x.csv")]) == 4
    assert "cannot write" in capsys.readouterr().err


def test_physics_error_exit(monkeypatch, capsys):
    def broken(cfg):
        raise PositivityError("omega_1 = -0.1 < 0", t=1.0)

    monkeypatch.setattr(cli.analysis, "time_series", broken)
    assert cli.run(["evolve", "--n", "21", "--t-steps", "3"]) == 3
    assert "invalid state" in capsys.readouterr().err


def test_events_table(tmp_path):
    out = tmp_path / "ev.csv"
    assert cli.run(["events", "--c2", "-0.2", "--c3", "0.2", "--delta", "1", "--out", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0] == ["kind", "t_event", "bracket_lo", "bracket_hi", "tolerance", "n_crossings"]
    kinds = {r[0]: r for r in rows[1:]}
    assert float(kinds["transition"][1]) > 0


def test_metadata_sidecar(tmp_path):
    meta = tmp_path / "m.json"
    assert cli.run(["evolve", "--n", "21", "--t-steps", "3", "--alpha", "1", "--lambda", "0",
                    "--out", str(tmp_path / "x.csv"), "--metadata", str(meta)]) == 0
    data = json.loads(meta.read_text())
    assert data["parameters"]["n_sites"] == 21
    assert data["flags"]["negative_energy_modes"] > 0
    assert "version" in data


def test_preset_fig6(tmp_path):
    assert cli.run(["preset", "fig6", "--out", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "fig6.csv")
    assert ",".join(rows[0]) == HEADER and len(rows) == 2001
    meta = json.loads((tmp_path / "fig6.meta.json").read_text())
    assert meta["files"] == ["fig6.csv"]
    assert meta["parameters"]["delta"] == 1.0
    assert meta["variants"]["fig6"]["events"]["transition"]["t_event"] > 0


def test_preset_series_variants(tmp_path):
    assert cli.run(["preset", "fig3", "--out", str(tmp_path), "--t-steps", "200"]) == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["fig3.meta.json", "fig3_alpha=0.1.csv", "fig3_alpha=0.5.csv", "fig3_alpha=0.csv"]
