import csv
import io
import json
import math

import pytest

from flagq.cli import main
from flagq.config import bundled, load, resolve
from flagq.experiments import COLUMNS, ResultTable, run_berezin_limit, run_commute, run_kernel_decay, run_szego


def data_rows(text):
    lines = [l for l in text.splitlines() if not l.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


def test_result_table_format():
    t = ResultTable("berezin-limit", COLUMNS["berezin-limit"], [(10, 0.1, 1 / 3)], {"seed": 0})
    rows = data_rows(t.to_csv())
    assert rows[0] == ["lambda1", "sup_error", "mean_error"]
    assert rows[1] == ["10", "0.10000000000000001", "0.33333333333333331"]
    assert float(rows[1][2]) == 1 / 3
    head = [l for l in t.to_csv().splitlines() if l.startswith("#")]
    assert any("config_hash" in l for l in head) and any(l.startswith("# config:") for l in head)
    assert not any("time" in l.lower() for l in head)


def test_result_table_rejects_nan_and_bad_width():
    with pytest.raises(FloatingPointError):
        ResultTable("x", ["a"], [(math.nan,)], {})
    with pytest.raises(FloatingPointError):
        ResultTable("x", ["a"], [(math.inf,)], {})
    with pytest.raises(ValueError):
        ResultTable("x", ["a", "b"], [(1.0,)], {})


def test_verify_cli_passes(tmp_path):
    out = tmp_path / "v.csv"
    assert main(["verify", "--config", str(bundled("verify_su2")), "--out", str(out), "--json"]) == 0
    rows = data_rows(out.read_text())
    assert rows[0] == COLUMNS["verify"]
    assert all(r[3] == "true" for r in rows[1:])
    assert all(r[4] for r in rows[1:])
    js = json.loads(out.with_suffix(".json").read_text())
    assert js["pass"] and js["columns"] == COLUMNS["verify"] and len(js["rows"]) == len(rows) - 1


def test_corrupted_kernel_fails_schur_row(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["verify", "--config", "verify_su2_corrupt", "--out", str(out)]) == 1
    failed = [r[0] for r in data_rows(out.read_text())[1:] if r[3] == "false"]
    assert failed == ["schur_normalization"]


def test_config_errors_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"experiment": "szego", "sweep": {"values": []}}')
    assert main(["szego", "--config", str(p)]) == 2
    assert main(["szego", "--config", str(tmp_path / "none.json")]) == 2
    assert main(["commute", "--config", "szego"]) == 2
    assert "error" in capsys.readouterr().err


def test_constant_family_refused(tmp_path):
    p = tmp_path / "const.json"
    p.write_text(json.dumps({"experiment": "szego", "family": {"laws": {"1": {"a": 0, "b": 4}}},
                             "sweep": {"values": [10, 20]}}))
    assert main(["szego", "--config", str(p)]) == 2


def test_szego_constant_symbol():
    cfg = resolve({"experiment": "szego", "symbols": [{"name": "const", "c": 0.5}], "taus": [0.7],
                   "sweep": {"values": [10, 20, 40]}})
    t = run_szego(cfg)
    assert t.column("counting_fraction") == [0.0] * 3 and t.column("level_measure") == [0.0] * 3
    assert t.passed


def test_szego_atom_refused():
    from flagq.errors import PreconditionError
    cfg = resolve({"experiment": "szego", "symbols": [{"name": "const", "c": 0.5}], "taus": [0.5]})
    with pytest.raises(PreconditionError):
        run_szego(cfg)


def test_berezin_constant_error_zero():
    cfg = resolve({"experiment": "berezin-limit", "symbols": [{"name": "const", "c": 2.0}]})
    t = run_berezin_limit(cfg)
    assert max(t.column("sup_error")) < 1e-13 and t.passed


def test_berezin_product_variant():
    cfg = load(bundled("berezin_product"))
    t = run_berezin_limit(cfg)
    sup = t.column("sup_error")
    assert sup[0] > sup[1] > sup[2] and t.passed


def test_kernel_control_constant():
    t = run_kernel_decay(load(bundled("kernel_decay_control")))
    assert len(set(t.column("sup_hk"))) == 1 and t.passed


def test_commute_flags():
    cfg = load(bundled("commute"))
    cfg["sweep"]["values"] = [2, 3]
    t = run_commute(cfg)
    assert t.passed
    assert all(t.column("multiplicity_free"))
    assert t.columns == COLUMNS["commute"]


def test_determinism_and_parallel_order(tmp_path):
    a, b, c = (tmp_path / f"{x}.csv" for x in "abc")
    assert main(["berezin-limit", "--config", "berezin_limit", "--out", str(a)]) == 0
    assert main(["berezin-limit", "--config", "berezin_limit", "--out", str(b), "--jobs", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert main(["berezin-limit", "--config", "berezin_limit", "--out", str(c), "--seed", "5"]) == 0
    assert a.read_text() != c.read_text()
    assert [r[0] for r in data_rows(b.read_text())[1:]] == ["10", "20", "40"]
