#!/usr/bin/env python3
"""
End-to-end tests of the command line: exit codes, report files and determinism
"""

import json

import pandas as pd
import pytest

import main
from src.ingest import parse_log

TOY_LOG = "".join(
    f"{t},1,1,{num},{name}\n"
    for t, (num, name) in enumerate([(1, "a"), (3, "c"), (3, "c"), (2, "b"),
                                     (1, "a"), (3, "c"), (2, "b")])
)


@pytest.fixture
def toy_log(tmp_path):
    path = tmp_path / "toy.csv"
    path.write_text(TOY_LOG, encoding="utf-8")
    return path


@pytest.fixture
def planted_log(tmp_path):
    """Synthetic corpus with <p,q,r> planted 50 times, gaps of ~30 s and up to 2 noise alarms"""
    log_path = tmp_path / "planted.csv"
    manifest_path = tmp_path / "planted.json"
    code = main.main(["synth", "--output", str(log_path), "--manifest", str(manifest_path),
                      "--seed", "5", "--alphabet", "40", "--events", "1500",
                      "--plant", "0,1,2:50:30:2", "--noise-rate", "0.2"])
    assert code == 0
    return log_path, json.loads(manifest_path.read_text(encoding="utf-8"))


def _frame(path):
    return pd.read_csv(path, dtype={'sequence': str, 'antecedent': str, 'consequent': str})


# =============================================================================
# MINE
# =============================================================================

def test_mine_toy_log(toy_log, tmp_path):
    output = tmp_path / "frequent.csv"
    code = main.main(["mine", "--input", str(toy_log), "--output", str(output),
                      "--win-add", "2", "--min-occur", "2"])
    assert code == 0
    frame = _frame(output)
    assert list(frame.columns) == ['window', 'length', 'sequence', 'occur', 'support']
    row = frame[frame['sequence'] == "1.1.1,1.1.2"].iloc[0]
    assert row['occur'] == 2
    assert row['support'] == pytest.approx(2 / 7)


def test_mine_threshold_above_every_count_gives_an_empty_report(toy_log, tmp_path):
    output = tmp_path / "frequent.csv"
    assert main.main(["mine", "--input", str(toy_log), "--output", str(output),
                      "--min-occur", "100"]) == 0
    assert _frame(output).empty


def test_mine_is_deterministic(toy_log, tmp_path):
    outputs = [tmp_path / "first.csv", tmp_path / "second.csv"]
    for output in outputs:
        assert main.main(["mine", "--input", str(toy_log), "--output", str(output),
                          "--win-add", "1", "--min-occur", "1", "--window", "4"]) == 0
    assert outputs[0].read_bytes() == outputs[1].read_bytes()
    assert set(_frame(outputs[0])['window']) == {"w0", "w1"}


# =============================================================================
# EXIT CODES
# =============================================================================

def test_unreadable_input_exits_2_without_output(tmp_path):
    output = tmp_path / "frequent.csv"
    code = main.main(["mine", "--input", str(tmp_path / "missing.csv"), "--output", str(output),
                      "--min-occur", "2"])
    assert code == 2
    assert not output.exists()


def test_missing_output_directory_exits_2(toy_log, tmp_path):
    code = main.main(["mine", "--input", str(toy_log), "--output",
                      str(tmp_path / "nowhere" / "frequent.csv"), "--min-occur", "2"])
    assert code == 2


def test_malformed_log_exits_2_without_output(tmp_path):
    log = tmp_path / "bad.csv"
    log.write_text("0,1,1,1,a\n1,1,1\n", encoding="utf-8")
    output = tmp_path / "frequent.csv"
    assert main.main(["mine", "--input", str(log), "--output", str(output),
                      "--min-occur", "1"]) == 2
    assert not output.exists()
    assert list(tmp_path.iterdir()) == [log]


def test_invalid_utf8_log_exits_2_without_output(tmp_path):
    log = tmp_path / "binary.csv"
    log.write_bytes(b"0,1,1,1,a\n1,1,1,2,\xff\xfe\n")
    output = tmp_path / "frequent.csv"
    assert main.main(["mine", "--input", str(log), "--output", str(output),
                      "--min-occur", "1"]) == 2
    assert not output.exists()


@pytest.mark.parametrize("extra", [
    ["--min-occur", "0"],
    ["--min-support", "2"],
    ["--min-occur", "2", "--window", "0"],
    ["--min-occur", "2", "--win-add", "-1"],
    ["--min-occur", "2", "--delimiter", ";;"],
    ["--min-occur", "2", "--unknown-flag"],
    [],
])
def test_configuration_errors_exit_1(toy_log, tmp_path, extra):
    output = tmp_path / "frequent.csv"
    assert main.main(["mine", "--input", str(toy_log), "--output", str(output)] + extra) == 1
    assert not output.exists()


def test_randomized_commands_require_a_seed(tmp_path):
    assert main.main(["synth", "--output", str(tmp_path / "log.csv")]) == 1
    assert main.main(["report-fig3", "--output", str(tmp_path / "fig3.csv")]) == 1
    assert not (tmp_path / "fig3.csv").exists()


def test_report_fig3_rejects_a_zero_threshold_sweep(tmp_path):
    output = tmp_path / "fig3.csv"
    assert main.main(["report-fig3", "--seed", "3", "--output", str(output),
                      "--min-occur-sweep", "0:20:10"]) == 1
    assert not output.exists()


# =============================================================================
# RULES
# =============================================================================

def test_planted_rule_is_recovered(planted_log, tmp_path):
    log_path, manifest = planted_log
    output = tmp_path / "rules.txt"
    records = tmp_path / "rules.csv"
    code = main.main(["rules", "--input", str(log_path), "--output", str(output),
                      "--records", str(records), "--win-add", "2", "--min-occur", "40"])
    assert code == 0

    pattern = manifest['patterns'][0]
    antecedent = ",".join(pattern['pattern'][:2])
    consequent = pattern['pattern'][2]
    frame = _frame(records)
    rows = frame[(frame['antecedent'] == antecedent) & (frame['consequent'] == consequent)]
    assert len(rows) == 1
    row = rows.iloc[0]
    assert 27.0 <= row['delta_t_seconds'] <= 33.0

    size_d = parse_log(log_path.read_bytes()).summary()['tuples']
    expected = pattern['expected_min_occur']['2']
    assert abs(row['support'] * size_d - expected) <= 1
    assert abs(row['correlation'] - abs(row['confidence'] - row['supp_consequent'])) <= 1e-12

    lines = output.read_text(encoding="utf-8").splitlines()
    assert any(line.startswith(f"{antecedent} --") and f"--> {consequent} [" in line
               for line in lines)
    assert all(line.endswith("win=w0]") for line in lines)


def test_rules_text_format(toy_log, tmp_path):
    output = tmp_path / "rules.txt"
    assert main.main(["rules", "--input", str(toy_log), "--output", str(output),
                      "--win-add", "2", "--min-occur", "2", "--measure", "confidence"]) == 0
    lines = output.read_text(encoding="utf-8").splitlines()
    assert "1.1.1 --2.5s--> 1.1.2 [conf=100.00%, supp=28.57%, win=w0]" in lines


# =============================================================================
# SYNTH AND REPORTS
# =============================================================================

def test_synth_is_byte_identical_for_a_seed(tmp_path):
    paths = []
    for name in ("one", "two"):
        log = tmp_path / f"{name}.csv"
        manifest = tmp_path / f"{name}.json"
        assert main.main(["synth", "--output", str(log), "--manifest", str(manifest),
                          "--seed", "8", "--alphabet", "15", "--events", "300",
                          "--plant", "1,2:10:20:1", "--burst", "600:0.5,60:3"]) == 0
        paths.append((log.read_bytes(), manifest.read_bytes()))
    assert paths[0] == paths[1]


def test_report_fig3_threshold_above_every_count(tmp_path):
    output = tmp_path / "fig3.csv"
    assert main.main(["report-fig3", "--seed", "3", "--output", str(output),
                      "--win-add-series", "0", "--min-occur-sweep", "100000:100000:1"]) == 0
    frame = pd.read_csv(output)
    assert list(frame.columns) == ['win_add', 'length', 'min_occur', 'count']
    assert set(frame['win_add']) == {0}
    assert (frame['count'] == 0).all()


def test_report_fig3_series_on_an_input_log(planted_log, tmp_path):
    log_path, _ = planted_log
    output = tmp_path / "fig3.csv"
    assert main.main(["report-fig3", "--input", str(log_path), "--output", str(output),
                      "--win-add-series", "0,2", "--min-occur-sweep", "30:50:10",
                      "--max-len", "3"]) == 0
    frame = pd.read_csv(output)
    assert set(frame['win_add']) == {0, 2}
    assert set(frame['min_occur']) == {30, 40, 50}
    totals = frame.groupby(['win_add', 'min_occur'])['count'].sum()
    for min_occur in (30, 40, 50):
        assert totals[(2, min_occur)] >= totals[(0, min_occur)]


def test_report_fig4_rows_satisfy_the_measure_identity(planted_log, tmp_path, capsys):
    log_path, _ = planted_log
    output = tmp_path / "fig4.csv"
    assert main.main(["report-fig4", "--input", str(log_path), "--output", str(output),
                      "--min-occur", "20", "--win-add", "2"]) == 0
    frame = pd.read_csv(output)
    assert list(frame.columns) == ['window', 'rule', 'confidence', 'correlation', 'supp_consequent']
    assert len(frame) > 0
    identity = (frame['correlation'] - (frame['confidence'] - frame['supp_consequent']).abs()).abs()
    assert (identity <= 1e-12).all()

    printed = capsys.readouterr().out
    assert "ALARM CORRELATION SUMMARY" in printed
    assert f"Correlation rules: {len(frame)}" in printed
