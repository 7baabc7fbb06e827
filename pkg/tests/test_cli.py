import csv
import io
import json

import pytest
from mpmath import mp, mpf

from pslet.classical import QuantumProblem
from pslet.cli import main
from pslet.pipeline import convert_units, make_record, run_table
from pslet.potentials import ScreeningRule, screening_alpha


def _capture(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr()


# --- unit conversion ---

def test_convert_units_examples():
    assert float(convert_units(mpf("-0.5"), "eV")) == pytest.approx(-13.598)
    assert convert_units(mpf(0), "keV") == 0
    assert convert_units(mpf("1.5"), "hartree") == mpf("1.5")
    with pytest.raises(ValueError):
        convert_units(mpf(1), "rydberg")


def test_kev_record_invariant():
    record = make_record(QuantumProblem.dimensional(3, 0))
    assert record.energy_kev == pytest.approx(record.energy_pade44 * 0.027196,
                                              rel=1e-12)
    assert record.energy_kev == pytest.approx(-0.05414708, abs=2e-7)


# --- solve command ---

def test_solve_json_roundtrip(tmp_path, capsys):
    out = tmp_path / "row.json"
    code = main(["solve", "--l", "0", "--alpha-prime", "0.1",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert len(payload) == 1
    row = payload[0]
    assert row["alpha_prime"] == 0.1
    assert abs(row["energy_pade44"] + 0.407058031) < 1e-8
    # re-serialization reproduces every numeric field bit-identically
    again = json.loads(json.dumps(payload))
    assert again == payload


def test_solve_human_units(capsys):
    code, captured = _capture(capsys, ["solve", "--l", "0", "--Z", "24",
                                       "--units", "keV"])
    assert code == 0
    assert "keV" in captured.out
    kev_line = [ln for ln in captured.out.splitlines() if ln.startswith("E[4,4]")][0]
    assert abs(float(kev_line.split()[1]) + 6.18276521) < 1e-6


def test_solve_requires_one_input_mode(capsys):
    with pytest.raises(SystemExit):
        main(["solve", "--l", "0"])
    with pytest.raises(SystemExit):
        main(["solve", "--l", "0", "--Z", "3", "--alpha-prime", "0.1"])


def test_solve_extra_pade_entry(capsys):
    code, captured = _capture(capsys, ["solve", "--l", "0", "--alpha-prime",
                                       "0.1", "--pade", "3,3"])
    assert code == 0
    assert "E[3,3]" in captured.out


def test_order_needs_digits(capsys):
    with pytest.raises(SystemExit):
        main(["solve", "--l", "0", "--alpha-prime", "0.1", "--digits", "20"])


def test_unbound_request_exits_nonzero(capsys):
    code, captured = _capture(capsys, ["solve", "--l", "7",
                                       "--alpha-prime", "0.3"])
    assert code == 2
    assert "error" in captured.err


def test_dimensional_scaled_scale_relation(tmp_path):
    z = 24
    with mp.workdps(40):
        ap = screening_alpha(ScreeningRule("scaled"), z)
        ap_str = mp.nstr(ap, 30)
    out_d = tmp_path / "dim.json"
    out_s = tmp_path / "sca.json"
    assert main(["solve", "--l", "0", "--Z", str(z),
                 "--format", "json", "--out", str(out_d)]) == 0
    assert main(["solve", "--l", "0", "--alpha-prime", ap_str,
                 "--format", "json", "--out", str(out_s)]) == 0
    dim = json.loads(out_d.read_text())[0]
    sca = json.loads(out_s.read_text())[0]
    assert dim["energy_pade44"] == pytest.approx(z ** 2 * sca["energy_pade44"],
                                                 rel=1e-10)
    assert dim["energy_kev"] == pytest.approx(
        z ** 2 * sca["energy_pade44"] * 0.027196, rel=1e-10)


# --- table command ---

def test_table_csv_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["table", "--id", "T4", "--format", "csv", "--out", str(a)]) == 0
    assert main(["table", "--id", "T4", "--format", "csv", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_table_t4_values(tmp_path):
    out = tmp_path / "t4.json"
    assert main(["table", "--id", "T4", "--format", "json",
                 "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    expected = {0.01: -0.490074506746694, 0.02: -0.48029610598378,
                0.03: -0.4706620270246}
    assert len(rows) == 3
    for row in rows:
        assert row["energy_pade44"] == pytest.approx(
            expected[row["alpha_prime"]], abs=1e-11)
        assert not row["low_confidence"]


def test_table_csv_parses_back(tmp_path):
    out = tmp_path / "t3.csv"
    assert main(["table", "--id", "T3", "--format", "csv",
                 "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.DictReader(fh))
    assert [float(r["alpha_prime"]) for r in rows] == [0.1, 0.2, 0.3, 0.4]
    assert abs(float(rows[0]["energy_pade44"]) + 0.407058031) < 1e-8
    assert "." in rows[0]["energy_pade44"] and "," not in rows[0]["energy_pade44"]


def test_table_human_header(capsys):
    code, captured = _capture(capsys, ["table", "--id", "T4"])
    assert code == 0
    assert "scaled ground-state energies" in captured.out


def test_weakly_bound_row_flagged_low_confidence():
    record = make_record(QuantumProblem.dimensional(9, 1))
    assert record.low_confidence
    assert "low-confidence" in record.flags
    # golden value: stay within 15% of the hypervirial reference for this
    # poorly converging row, on the raw sum
    kev_sum = record.energy_sum * 0.027196
    assert abs(kev_sum + 0.00423) < 0.15 * 0.00423


def test_t2_reference_rows():
    rec24 = make_record(QuantumProblem.dimensional(24, 1))
    assert rec24.energy_kev == pytest.approx(-0.599912, abs=1e-5)
    assert not rec24.low_confidence


# --- oracle and compare commands ---

def test_oracle_command_json(tmp_path):
    out = tmp_path / "oracle.json"
    assert main(["oracle", "--alpha-prime", "0.1", "--l", "0",
                 "--format", "json", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert abs(payload["energy"] + 0.407058031) < 1e-7
    assert payload["node_count"] == 0


def test_compare_command_t3(capsys):
    code, captured = _capture(capsys, ["compare", "--id", "T3"])
    assert code == 0
    lines = [ln for ln in captured.out.splitlines() if "pass" in ln]
    assert len(lines) == 4


def test_table_failing_row_sets_exit_code(tmp_path, capsys, monkeypatch):
    # a channel with no bound state must not abort the run: good rows are
    # still emitted, the failure goes to stderr, and the exit code is set
    from pslet import pipeline
    bad = pipeline.TableSpec("TX", "scaled", 5, alpha_primes=("0.01", "0.3"))
    monkeypatch.setitem(pipeline.TABLES, "TX", bad)
    out = tmp_path / "tx.json"
    code = main(["table", "--id", "TX", "--format", "json", "--out", str(out)])
    captured = capsys.readouterr()
    assert code == 1
    assert "l=5" in captured.err
    rows = json.loads(out.read_text())
    assert len(rows) == 1 and rows[0]["alpha_prime"] == 0.01


def test_config_file_presets(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"format": "json"}))
    code, captured = _capture(capsys, ["--config", str(cfg), "solve",
                                       "--l", "0", "--alpha-prime", "0.1"])
    assert code == 0
    payload = json.loads(captured.out)
    assert payload[0]["l"] == 0
