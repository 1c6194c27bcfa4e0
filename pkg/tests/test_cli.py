import csv
import io
import json

import pytest

from wsdirac.cli import (
    COMMANDS,
    PEKERIS_COLUMNS,
    SPECTRUM_COLUMNS,
    VERIFY_COLUMNS,
    WAVEFUNCTION_COLUMNS,
    fmt,
    main,
)

BASE = {
    "potential": {"V0": 2.2, "q": -2, "a": 1.425, "R0": 14.25},
    "symmetry": {"kind": "spin", "A": -5, "mass": 15},
    "quantum": {"n_max": 2, "kappa_list": [-1, 1, 2]},
    "wavefunction": {"n": 1, "kappa": -1, "points": 41},
    "pekeris": {"alpha_values": [2, 5, 10]},
}


@pytest.fixture
def config(tmp_path):
    def make(doc=BASE, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
        return str(path)
    return make


def run(argv, tmp_path, name="out.txt"):
    out = tmp_path / name
    rc = main([*argv, "--out", str(out)])
    return rc, (out.read_bytes() if out.exists() else b"")


def rows_of(data: bytes):
    lines = data.decode().splitlines()
    return lines[0], list(csv.reader(io.StringIO("\n".join(lines[1:]))))


GOLDEN = {
    "spectrum": ("wsdirac.spectrum/1", SPECTRUM_COLUMNS),
    "swave-table": ("wsdirac.swave-table/1", ("n", "E1_q1", "E2_q1", "E1_q2", "E2_q2",
                                              "E1_q-1", "E2_q-1", "E1_q-2", "E2_q-2")),
    "wavefunction": ("wsdirac.wavefunction/1", WAVEFUNCTION_COLUMNS),
    "pekeris": ("wsdirac.pekeris/1", PEKERIS_COLUMNS),
}


@pytest.mark.parametrize("cmd", sorted(GOLDEN))
def test_csv_headers(cmd, config, tmp_path):
    rc, data = run([cmd, "--config", config()], tmp_path)
    assert rc == 0
    schema, rows = rows_of(data)
    assert schema == f"# schema: {GOLDEN[cmd][0]}"
    assert tuple(rows[0]) == tuple(GOLDEN[cmd][1])


def test_spectrum_columns_are_stable():
    assert SPECTRUM_COLUMNS[:7] == ("n", "kappa", "omega", "E1", "E2", "eps1", "eps2")
    assert VERIFY_COLUMNS[:5] == ("n", "kappa", "root", "E_closed", "E_oracle")


def test_spectrum_row_order(config, tmp_path):
    _, data = run(["spectrum", "--config", config()], tmp_path)
    _, rows = rows_of(data)
    assert [(int(r[0]), int(r[1])) for r in rows[1:]] == [(n, k) for n in range(3) for k in (-1, 1, 2)]


def test_swave_table_matches_reference(config, tmp_path, swave_reference):
    doc = dict(BASE, quantum={"n_max": 10, "kappa_list": [-1]})
    doc["potential"] = {"V0": 2.2, "q": 1, "a": 1.425}
    _, data = run(["swave-table", "--config", config(doc)], tmp_path)
    _, rows = rows_of(data)
    header, body = rows[0], rows[1:]
    ref_cols = list(swave_reference[0].keys())
    matches = worst = 0
    for got, ref in zip(body, swave_reference):
        for i in range(1, len(header)):
            printed = ref[ref_cols[i]]
            matches += got[i] == printed
            worst = max(worst, abs(float(got[i]) - float(printed)))
    assert len(body) == 11 and matches >= 80 and worst <= 1e-5


def test_wavefunction_grid(config, tmp_path):
    _, data = run(["wavefunction", "--config", config()], tmp_path)
    _, rows = rows_of(data)
    assert len(rows) == 42
    r = [float(x[0]) for x in rows[1:]]
    assert r == sorted(r)


def test_verify_json_report(config, tmp_path):
    rc, data = run(["verify", "--config", config()], tmp_path)
    assert rc == 0
    doc = json.loads(data)
    assert doc["schema"] == "wsdirac.verify/1" and doc["q"] == -2.0
    first = doc["states"][0]["rows"][0]
    assert first["nodes_ok"] and first["abs_delta"] <= 1e-3


def test_verify_unit_q_reports_missing_bound_state(config, tmp_path):
    doc = dict(BASE, quantum={"n_max": 0, "kappa_list": [-1]})
    doc["potential"] = {"V0": 2.2, "q": 1, "a": 1.425, "R0": 14.25}
    rc, data = run(["verify", "--config", config(doc)], tmp_path)
    assert rc == 0
    row = json.loads(data)["states"][0]["rows"][0]
    assert row["E_oracle"] is None and row["error"].startswith("NoSignChange")


def test_verify_csv(config, tmp_path):
    rc, data = run(["verify", "--config", config(), "--format", "csv"], tmp_path)
    schema, rows = rows_of(data)
    assert rc == 0 and schema == "# schema: wsdirac.verify/1"
    assert tuple(rows[0]) == VERIFY_COLUMNS


def test_spectrum_json_and_paper_coefficients(config, tmp_path):
    rc, a = run(["spectrum", "--config", config(), "--format", "json"], tmp_path, "a")
    rc2, b = run(["spectrum", "--config", config(), "--format", "json", "--pekeris", "paper"], tmp_path, "b")
    assert rc == rc2 == 0
    assert json.loads(a)["schema"] == "wsdirac.spectrum/1"
    assert a != b


@pytest.mark.parametrize("cmd", COMMANDS)
def test_byte_determinism(cmd, config, tmp_path):
    path = config()
    _, first = run([cmd, "--config", path], tmp_path, "1")
    _, second = run([cmd, "--config", path], tmp_path, "2")
    _, threaded = run([cmd, "--config", path, "--workers", "4"], tmp_path, "3")
    assert first and first == second == threaded


def test_stdout_when_no_path(config, capsys):
    assert main(["pekeris", "--config", config()]) == 0
    assert capsys.readouterr().out.startswith("# schema: wsdirac.pekeris/1")


@pytest.mark.parametrize(
    "doc",
    [
        "{",
        json.dumps(dict(BASE, potential={"V0": 2.2, "q": 0, "a": 1.425})),
        json.dumps(dict(BASE, quantum={"n_max": 1, "kappa_list": [0]})),
        json.dumps(dict(BASE, colour="red")),
    ],
)
def test_config_errors_exit_2(doc, config, tmp_path, capsys):
    rc, _ = run(["spectrum", "--config", config(doc)], tmp_path)
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_missing_config_file_exit_2(tmp_path):
    assert main(["spectrum", "--config", str(tmp_path / "nope.json")]) == 2


def test_bad_worker_count_exit_2(config, tmp_path):
    rc, _ = run(["spectrum", "--config", config(), "--workers", "0"], tmp_path)
    assert rc == 2


def test_numeric_error_exit_3(config, tmp_path, capsys):
    doc = dict(BASE, wavefunction={"n": 1, "kappa": -1, "normalize": "series"})
    doc["potential"] = {"V0": 2.2, "q": 1, "a": 1.425, "R0": 14.25}
    rc, _ = run(["wavefunction", "--config", config(doc)], tmp_path)
    assert rc == 3
    assert "DomainError" in capsys.readouterr().err


def test_pekeris_report_flags(config, tmp_path):
    _, data = run(["pekeris", "--config", config()], tmp_path)
    _, rows = rows_of(data)
    body = [dict(zip(rows[0], r)) for r in rows[1:]]
    assert [r["source"] for r in body] == ["taylor", "paper"] * 3
    assert all(r["identical_factors"] == "true" for r in body if r["source"] == "paper")


def test_fmt_cells():
    assert fmt(None) == "" and fmt(True) == "true" and fmt(3) == "3"
    assert fmt(1 / 3) == "0.333333333" and fmt("taylor") == "taylor"
    assert fmt(float("nan")) == "nan"
