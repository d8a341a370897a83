import csv
import io
import json
import re
import subprocess
import sys

import pytest

from menon_sury import menon
from menon_sury.characters import DirichletCharacter
from menon_sury.cli import CharacterSpecError, main, parse_character_spec

KEYS = {"n", "r", "s", "d", "n0", "closed_form", "oracle", "agreement", "per_prime_factors", "elapsed_ms"}


def run(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text, want",
    [
        ("trivial@12", DirichletCharacter.trivial(12)),
        ("mod=9;exps=3", DirichletCharacter(9, (3,))),
        ("mod=8;exps=1,0", DirichletCharacter(8, (1, 0))),
        ("mod=8;exps=-1,6", DirichletCharacter(8, (1, 0))),
        ("mod=1;exps=", DirichletCharacter.trivial(1)),
    ],
)
def test_parse_examples(text, want):
    assert parse_character_spec(text) == want


def test_parsed_characters_have_expected_values():
    assert parse_character_spec("mod=9;exps=3").conductor == 3
    chi = parse_character_spec("mod=8;exps=1,0")
    assert chi.exponent_at(7, 2) == 1 and chi.exponent_at(5, 2) == 0


@pytest.mark.parametrize(
    "text, position",
    [
        ("mod=0;exps=", 4),
        ("trivial@0", 8),
        ("trivial@x", 8),
        ("foo", 0),
        ("mod=9;exp=1", 5),
        ("mod=9;exps=a", 11),
        ("mod=9;exps=1,", 13),
        ("mod=9;exps=1;2", 12),
        ("mod=8;exps=1", 11),
        ("mod=9;exps=1,2", 11),
    ],
)
def test_parse_errors_report_position(text, position):
    with pytest.raises(CharacterSpecError) as exc:
        parse_character_spec(text)
    assert exc.value.position == position


def test_enum_chars_round_trips():
    import menon_sury.characters as ch

    for n in (1, 8, 9, 36, 40):
        for c in ch.enumerate_characters(n):
            assert parse_character_spec(str(c)) == c


def test_verify_example(capsys):
    code, out, _ = run(["verify", "--n", "4", "--r", "1", "--char", "trivial@4", "--char", "trivial@4"], capsys)
    row = json.loads(out)
    assert code == 0
    assert KEYS <= set(row)
    assert (row["closed_form"], row["oracle"], row["agreement"]) == (26, 26, "matched")


def test_compute_example(capsys):
    code, out, _ = run(["compute", "--n", "9", "--r", "1", "--char", "mod=9;exps=3"], capsys)
    row = json.loads(out)
    assert code == 0 and row["closed_form"] == 24 and row["oracle"] is None
    assert KEYS <= set(row)


def test_trivial_shorthand(capsys):
    code, out, _ = run(["verify", "--n", "4", "--r", "1", "--s", "2"], capsys)
    assert code == 0 and json.loads(out)["closed_form"] == 26


def test_csv_and_plain(capsys):
    code, out, _ = run(["verify", "--n", "12", "--r", "1", "--char", "mod=3;exps=1", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["closed_form"] == "28" and rows[0]["oracle"] == "28"
    assert rows[0]["per_prime_factors"] == "4:14 3:2"
    code, out, _ = run(["compute", "--n", "12", "--r", "1", "--char", "mod=3;exps=1", "--format", "plain"], capsys)
    assert "closed form: 28" in out and "oracle: skipped" in out


def test_exit_code_usage(capsys):
    code, _, err = run(["verify", "--n", "9", "--char", "mod=9;exps=1,1"], capsys)
    assert code == 2 and "position" in err
    code, _, _ = run(["verify", "--n", "12", "--char", "mod=5;exps=1"], capsys)
    assert code == 2
    code, _, _ = run(["verify", "--n", "12"], capsys)
    assert code == 2
    code, _, _ = run(["verify", "--n", "0", "--s", "1"], capsys)
    assert code == 2
    code, _, _ = run(["frobnicate"], capsys)
    assert code == 2


def test_exit_code_budget(capsys, monkeypatch):
    code, out, err = run(["verify", "--n", "1000000000000", "--r", "1", "--s", "1"], capsys)
    row = json.loads(out)
    assert code == 3 and row["oracle"] is None and row["agreement"] == "oracle-skipped"
    assert "refused" in err
    code, _, _ = run(["verify", "--n", "30", "--s", "2", "--budget", "10"], capsys)
    assert code == 3
    monkeypatch.setenv("MENON_COST_BUDGET", "10")
    code, _, _ = run(["verify", "--n", "30", "--s", "2"], capsys)
    assert code == 3
    code, _, _ = run(["sweep", "--max-n", "12"], capsys)
    assert code == 3


def test_exit_code_mismatch(capsys, monkeypatch):
    real = menon.brute_force_oracle
    monkeypatch.setattr(menon, "brute_force_oracle", lambda q, mode="grouped", budget=None: real(q, mode, budget) + 1)
    code, out, _ = run(["verify", "--n", "6", "--s", "1"], capsys)
    assert code == 1 and json.loads(out)["agreement"] == "mismatched"
    code, out, _ = run(["sweep", "--max-n", "5", "--format", "plain"], capsys)
    assert code == 1 and "MISMATCH" in out


def test_sweep_example(capsys):
    code, out, _ = run(["sweep", "--max-n", "20", "--max-r", "1", "--max-s", "2"], capsys)
    doc = json.loads(out)
    assert code == 0
    summary = doc["summary"]
    assert summary["instances"] == len(doc["instances"]) > 0
    assert summary["mismatched"] == summary["oracle_skipped"] == 0
    assert all(v > 0 for v in summary["branch_hits"].values())
    assert all(KEYS <= set(row) for row in doc["instances"])


def test_sweep_worker_pool_keeps_order(capsys):
    argv = ["sweep", "--max-n", "12", "--max-s", "2", "--format", "csv"]
    _, serial, _ = run(argv, capsys)
    _, pooled, _ = run(argv + ["--workers", "2"], capsys)
    strip = lambda text: [row[:-1] for row in csv.reader(io.StringIO(text))]
    assert strip(serial) == strip(pooled)


def test_sweep_sampling_is_seeded(capsys):
    argv = ["sweep", "--max-n", "16", "--max-s", "2", "--sample", "5", "--format", "csv"]
    _, a, _ = run(argv + ["--seed", "3"], capsys)
    _, b, _ = run(argv + ["--seed", "3"], capsys)
    strip = lambda text: [row[:-1] for row in csv.reader(io.StringIO(text))]
    assert strip(a) == strip(b)


def test_enum_chars(capsys):
    code, out, _ = run(["enum-chars", "--n", "5"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [c["order"] for c in doc["characters"]] == [1, 4, 2, 4]
    assert [c["conductor"] for c in doc["characters"]] == [1, 5, 5, 5]


def test_lemmas_command(capsys):
    code, out, _ = run(["lemmas", "--bound", "27", "--b-bound", "16", "--max-r", "2", "--max-s", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and all(s["ok"] for s in doc["suites"])


def test_bench_command(capsys, tmp_path):
    target = tmp_path / "bench.json"
    code, out, _ = run(["bench", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    rows = json.loads(target.read_text())["rows"]
    row32 = next(r for r in rows if r["n"] == 32)
    assert (row32["s"], row32["r"], row32["oracle_terms"]) == (2, 2, 2**18)
    assert row32["matched"] is True


def test_out_flag(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(["compute", "--n", "36", "--r", "1", "--s", "1", "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["closed_form"] == 1092


def _mask(text):
    return re.sub(r'"elapsed_ms": [0-9.e+-]+', '"elapsed_ms": 0', text)


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--n", "360", "--r", "1", "--char", "mod=9;exps=3", "--char", "mod=8;exps=1,0"],
        ["sweep", "--max-n", "10", "--max-s", "2"],
        ["enum-chars", "--n", "24"],
    ],
)
def test_reruns_are_byte_identical(argv):
    outs = [
        subprocess.run([sys.executable, "-m", "menon_sury", *argv], capture_output=True, text=True, check=True).stdout
        for _ in range(2)
    ]
    assert _mask(outs[0]) == _mask(outs[1])
    assert outs[0]
