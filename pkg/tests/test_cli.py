import csv
import io
import json
import subprocess
import sys

import pytest

from cmtorsion import quadorders
from cmtorsion.cli import load_cache, run, save_cache


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_class_number_row():
    code, out, _ = invoke("class-number", "-D", "-23")
    assert code == 0
    assert csv_rows(out) == [{"D": "-23", "D0": "-23", "f": "1", "w": "2", "h": "3"}]


def test_cm_degree_row():
    code, out, _ = invoke("cm-degree", "-N", "71")
    assert code == 0
    row = csv_rows(out)[0]
    assert row["d"] == "70" and row["attaining"] == "-7,-11,-28,-67,-163"
    assert row["completeness"] == "complete-to-bound"


def test_forms_sorted():
    code, out, _ = invoke("forms", "-D", "-84")
    rows = csv_rows(out)
    assert code == 0 and len(rows) == 4
    keys = [(int(r["a"]), int(r["b"])) for r in rows]
    assert keys == sorted(keys)


def test_csv_header_and_line_endings():
    _, out, _ = invoke("thresholds", "-N", "17")
    assert out.startswith("N,index,")
    assert "\r" not in out and out.endswith("\n")
    assert csv_rows(out)[0]["gonality_lower_conditional"] == "3/2"


@pytest.mark.parametrize("argv", [
    ("class-number", "-D", "-20"),
    ("cartan", "-N", "5"),
    ("thresholds", "-N", "127", "--conditional"),
    ("crossover", "--max-n", "40"),
    ("growth-sequence", "--max-n", "5"),
    ("upper-bound", "--max-n", "60"),
    ("inert-family", "-H", "1"),
])
def test_json_and_csv_carry_the_same_rows(argv):
    code_c, out_c, _ = invoke(*argv)
    code_j, out_j, _ = invoke(*argv, "--format", "json")
    assert code_c == code_j == 0
    doc = json.loads(out_j)
    assert doc["schema_version"] == "1.0"
    assert doc["command"] == argv[0]
    assert set(doc) >= {"schema_version", "command", "parameters", "rows"}
    as_text = sorted(tuple(sorted((k, _text(v)) for k, v in r.items())) for r in doc["rows"])
    from_csv = sorted(tuple(sorted(r.items())) for r in csv_rows(out_c))
    assert as_text == from_csv


def _text(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ",".join(str(x) for x in v)
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def test_rows_sorted_by_key():
    _, out, _ = invoke("crossover", "--max-n", "60")
    Ns = [int(r["N"]) for r in csv_rows(out)]
    assert Ns == sorted(Ns)
    _, out, _ = invoke("cartan", "-N", "7")
    Ds = [int(r["D"]) for r in csv_rows(out)]
    assert [abs(D) for D in Ds] == sorted(abs(D) for D in Ds)


def test_approx_columns_only_for_floats():
    _, out, _ = invoke("growth-sequence", "--max-n", "4")
    row = csv_rows(out)[0]
    assert row["ratio_approx"] == "0.583333333333"
    assert [k for k in row if k.endswith("_approx")] == [
        "ratio_approx", "mertens_prediction_approx", "ratio_over_prediction_approx"]


def test_byte_deterministic():
    runs = [invoke("crossover", "--max-n", "50", "--format", "json")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_validation_errors_exit_2():
    for argv in (("class-number", "-D", "5"), ("cm-degree", "-N", "9"),
                 ("cm-degree",), ("thresholds", "-N", "3")):
        code, out, err = invoke(*argv)
        assert code == 2 and out == "" and err, argv


def test_unknown_flag_and_subcommand_exit_2():
    assert invoke("class-number", "--bogus")[0] == 2
    assert invoke("no-such-command")[0] == 2


def test_table1_check_reports_differences():
    code, out, err = invoke("table1", "--check")
    rows = {int(r["N"]): r for r in csv_rows(out)}
    assert rows[2]["status"] == "out-of-model"
    bad = sorted(N for N, r in rows.items() if r["status"] == "mismatch")
    # exit status follows the diff, whatever it is
    assert code == (1 if bad else 0)
    if bad:
        assert "mismatch" in err


def test_table1_without_check_exits_0():
    assert invoke("table1")[0] == 0


def test_cache_roundtrip(tmp_path, monkeypatch):
    path = tmp_path / "h.txt"
    code, _, _ = invoke("class-number", "-D", "-47", "--cache", str(path))
    assert code == 0
    entries = load_cache(path)
    assert entries[-47] == 5
    lines = path.read_text().splitlines()
    Ds = [int(line.split()[0]) for line in lines]
    assert [abs(D) for D in Ds] == sorted(abs(D) for D in Ds)
    # environment variable supplies the default path
    env_path = tmp_path / "env.txt"
    monkeypatch.setenv("CMTORSION_CACHE", str(env_path))
    assert invoke("class-number", "-D", "-71")[0] == 0
    assert load_cache(env_path)[-71] == 7


def test_cache_file_format(tmp_path):
    path = tmp_path / "h.txt"
    save_cache(path, {-3: 1, -4: 1})
    assert load_cache(path) == {-3: 1, -4: 1}
    assert path.read_text() == "-3 1\n-4 1\n"


def test_corrupt_cache_exit_2(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("-3 one\n")
    assert invoke("class-number", "-D", "-3", "--cache", str(path))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cmtorsion", "class-number", "-D", "-4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "D,D0,f,w,h\n-4,-4,1,4,1\n"
