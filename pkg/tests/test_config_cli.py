import json
import warnings
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from recombination import cli
from recombination.config import ConfigError, load_config, parse_config
from recombination.measures import ProductMeasure
from recombination.partitions import ResourceLimitError, parse_partition

ROOT = Path(__file__).resolve().parent.parent
THREE_SITE = ROOT / "demos" / "configs" / "three_site.json"
GOLDEN = Path(__file__).resolve().parent / "golden" / "three_site"


def write_config(tmp_path, data, name="model.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data, indent=2) if not isinstance(data, str) else data)
    return str(path)


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), (json.loads(err) if err else None)


# --- config parsing ----------------------------------------------------------------------

def test_three_site_config():
    cfg = load_config(THREE_SITE)
    assert cfg.n == 3 and cfg.mode == "exact"
    assert cfg.weights[parse_partition("{1}{2,3}")] == F(1, 2)
    assert cfg.measure == ProductMeasure.random((2, 2, 2), 7)


def test_decimals_are_exact():
    cfg = parse_config('{"sites": 2, "weights": {"{1,2}": 0.1, "{1}{2}": 0.9}}')
    assert cfg.weights[parse_partition("{1,2}")] == F(1, 10)


def test_pairs_and_labels():
    cfg = parse_config(json.dumps({
        "sites": ["a", "b", "c"],
        "weights": [["{a}{b,c}", "1/2"], ["{a,b}{c}", "1/2"]],
        "measure": {"marginals": {"partition": "{a}{b,c}",
                                   "blocks": [["1/2", "1/2"], [["1/4", "1/4"], ["1/4", "1/4"]]]}},
    }))
    assert set(cfg.weights.support) == {parse_partition("{1}{2,3}"), parse_partition("{1,2}{3}")}
    assert cfg.measure == ProductMeasure.uniform((2, 2, 2))


def test_rgs_keys_and_alphabet_sizes():
    cfg = parse_config(json.dumps({
        "sites": 2, "alphabetSizes": [3, 1],
        "weights": {"0,1": "1"},
        "measure": {"table": ["1/3", "1/3", "1/3"]},
    }))
    assert cfg.measure.alphabet_sizes == (3, 1)
    assert cfg.weights.support == (parse_partition("{1}{2}"),)


def test_float_renormalization_is_reported():
    cfg = parse_config('{"sites": 2, "mode": "float", "weights": {"{1,2}": 0.5, "{1}{2}": 0.5000000005}}')
    assert cfg.warnings and "renormal" in cfg.warnings[0]
    assert abs(sum(cfg.weights.values()) - 1) < 1e-15
    with pytest.raises(ConfigError):
        parse_config('{"sites": 2, "mode": "float", "weights": {"{1,2}": 0.5, "{1}{2}": 0.51}}')


def test_mode_override():
    cfg = load_config(THREE_SITE, mode="float")
    assert cfg.mode == "float" and cfg.measure.mode == "float"


def test_json_syntax_error_position():
    raw = '{\n  "sites": 2,\n  "weights": {"{1,2}": 1,}\n}'
    with pytest.raises(ConfigError) as info:
        parse_config(raw)
    assert (info.value.line, info.value.column) == (3, 26)


def test_bad_partition_position():
    raw = '{\n  "sites": 3,\n  "weights": {"{1,2}{2,3}": 1}\n}'
    with pytest.raises(ConfigError) as info:
        parse_config(raw)
    assert info.value.line == 3 and info.value.column == 15


@pytest.mark.parametrize("raw", [
    "[]",
    '{"sites": 0, "weights": {}}',
    '{"sites": 2, "weights": {"{1,2}": "1/2"}}',
    '{"sites": 2, "weights": {"{1,2}": 1}, "colour": 1}',
    '{"sites": 2, "weights": {"{1,2}": 1}, "mode": "fast"}',
    '{"sites": 2, "weights": {"{1,2}": 1}, "alphabetSizes": [2]}',
    '{"sites": 2, "weights": {"{1,2}": 1}, "measure": {"random": {}}}',
    '{"sites": 2, "weights": {"{1,2}": 1}, "measure": {"table": [1, 0, 0]}}',
    '{"sites": 2, "weights": {"{1,2}": 1}, "measure": {"gaussian": 1}}',
    '{"sites": ["x", "x"], "weights": {"{1,2}": 1}}',
])
def test_invalid_configs(raw):
    with pytest.raises(ConfigError):
        parse_config(raw)


def test_table_cap_from_config():
    with pytest.raises(ResourceLimitError):
        parse_config('{"sites": 4, "weights": {"{1,2,3,4}": 1}, "measure": {"random": {"seed": 1}},'
                     ' "caps": {"table": 8}}')


# --- commands ------------------------------------------------------------------------------

@pytest.mark.parametrize("command, extra, files", [
    ("closure", [], ["closure.json"]),
    ("matrix", [], ["matrix.json", "matrix.csv"]),
    ("evolve", ["--steps", "5"], ["evolve.json", "evolve.csv"]),
    ("qsd", [], ["qsd.json"]),
    ("qprocess", ["--steps", "300"], ["qprocess.json"]),
    ("simulate", ["--seeds", "2000", "--horizon", "10", "--seed", "5"], ["simulate.json", "simulate.csv"]),
    ("verify", [], ["verify.json"]),
])
def test_golden_outputs(tmp_path, capsys, command, extra, files):
    code, data, _ = run([command, str(THREE_SITE), "--out", str(tmp_path)] + extra, capsys)
    assert code == 0
    for name in files:
        got = (tmp_path / name).read_bytes()
        assert got == (GOLDEN / name).read_bytes(), name
        assert got.endswith(b"\n") and b"\r" not in got
    assert json.loads((tmp_path / files[0]).read_text()) == data


def test_closure_and_qsd_values(capsys):
    _, data, _ = run(["closure", str(THREE_SITE)], capsys)
    assert data["count"] == 4 and data["absorbing"] == "{1}{2}{3}"
    _, data, _ = run(["qsd", str(THREE_SITE)], capsys)
    assert (data["eta"], data["F"], data["beta0"], data["limitConstant"]) == ("7/10", ["{1}{2,3}"], "1/2", "1")


def test_qprocess_paths_converge(capsys):
    _, data, _ = run(["qprocess", str(THREE_SITE)], capsys)
    assert data["Q"]["matrix"] == [["2/7", "5/7"], ["0", "1"]]
    assert data["maxError"] < 1e-6


def test_identity_model_is_flagged_degenerate(tmp_path, capsys):
    path = write_config(tmp_path, {"sites": 3, "weights": {"{1,2,3}": 1}})
    code, data, _ = run(["matrix", path], capsys)
    assert code == 0 and data["degenerate"] and data["matrix"] == [["1"]]
    code, data, _ = run(["qsd", path], capsys)
    assert code == 0 and data["degenerate"]
    code, data, _ = run(["qprocess", path], capsys)
    assert code == 0 and data["degenerate"]


def test_finest_only_model_reports_absorption_bound(tmp_path, capsys):
    path = write_config(tmp_path, {"sites": 2, "weights": {"{1}{2}": 1}})
    code, data, _ = run(["qsd", path], capsys)
    assert code == 0 and data["degenerate"] and data["absorptionBound"] == 2


def test_float_mode_output(capsys):
    code, data, _ = run(["qsd", str(THREE_SITE), "--mode", "float"], capsys)
    assert code == 0 and data["eta"] == pytest.approx(0.7)


def test_input_error_exit_code(tmp_path, capsys):
    path = write_config(tmp_path, '{"sites": 2,\n "weights": {"{1,2}": "2"}}')
    code, out, err = run(["closure", path], capsys)
    assert code == 2 and out is None
    assert err["error"] == "config" and err["line"] == 2
    code, _, err = run(["closure", str(tmp_path / "missing.json")], capsys)
    assert code == 2 and err["error"] == "io"


def test_state_cap_exit_code(tmp_path, capsys):
    splits = {"{1}{2,3,4,5,6}": "1/5", "{1,2}{3,4,5,6}": "1/5", "{1,2,3}{4,5,6}": "1/5",
              "{1,2,3,4}{5,6}": "1/5", "{1,2,3,4,5}{6}": "1/5"}
    path = write_config(tmp_path, {"sites": 6, "weights": splits})
    code, _, err = run(["closure", path, "--state-cap", "10"], capsys)
    assert code == 4 and err["error"] == "cap" and err["cap"] == 10


def test_bad_flag_values(capsys):
    assert run(["evolve", str(THREE_SITE), "--steps", "-1"], capsys)[0] == 2
    assert run(["simulate", str(THREE_SITE), "--seeds", "0"], capsys)[0] == 2


def test_partition_strings_round_trip(capsys):
    _, data, _ = run(["closure", str(THREE_SITE)], capsys)
    for s in data["states"] + data["support"] + [data["absorbing"]]:
        assert str(parse_partition(s)) == s


def test_simulate_is_reproducible(tmp_path, capsys):
    a = tmp_path / "a"
    b = tmp_path / "b"
    for d in (a, b):
        assert run(["simulate", str(THREE_SITE), "--seeds", "3000", "--horizon", "12",
                    "--seed", "99", "--out", str(d)], capsys)[0] == 0
    assert (a / "simulate.csv").read_bytes() == (b / "simulate.csv").read_bytes()


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "recombination", "closure", str(THREE_SITE)],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["count"] == 4
