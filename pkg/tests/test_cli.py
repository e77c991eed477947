import csv
import io
import json
import subprocess
import sys

import pytest

from bmw_duality.cli import UsageError, main, parse_grid, parse_range

REPORT_KEYS = ["m", "n", "f", "field", "dim_total", "dim_algebra", "dim_ideal", "dim_W",
               "dim_quotient", "dim_HT", "dim_image_phi_f", "dim_commutant_quotient",
               "surjective", "truncation_match", "hom_vanishing"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ranges():
    assert parse_range("2") == [2]
    assert parse_range("1..3") == [1, 2, 3]
    assert parse_grid("1..2,2..3") == ([1, 2], [2, 3])
    with pytest.raises(UsageError):
        parse_range("3..1")
    with pytest.raises(UsageError):
        parse_grid("1..2")


def test_eval_loop(capsys):
    code, out, _ = run(capsys, "eval", "--m", "1", "A ; U")
    assert code == 0 and out.strip() == "[-q^2 - q^-2]"


def test_eval_identity(capsys):
    code, out, _ = run(capsys, "eval", "--m", "1", "I")
    assert code == 0 and out.split("\n")[:2] == ["[1, 0]", "[0, 1]"]


def test_eval_reidemeister_two(capsys):
    code, out, _ = run(capsys, "eval", "--m", "2", "--out", "json", "X ; Xi")
    entries = json.loads(out)["entries"]
    assert code == 0
    assert sorted((i, j) for i, j, _ in entries) == [(i, i) for i in range(16)]
    assert all(v == "1" for _, _, v in entries)


def test_eval_specialized(capsys):
    code, out, _ = run(capsys, "eval", "--m", "1", "--field", "zeta:2", "A ; U")
    assert code == 0 and out.strip() == "[-17/4]"


def test_eval_syntax_error(capsys):
    code, _, err = run(capsys, "eval", "--m", "1", "X ; I")
    assert code == 2 and "position 2" in err and "';'" in err
    code, _, err = run(capsys, "eval", "--m", "1", "X ) I")
    assert code == 2 and "position 2" in err


def test_usage_errors(capsys):
    assert run(capsys, "dims")[0] == 2
    assert run(capsys, "dims", "--m", "1", "--n", "2", "--field", "bogus")[0] == 2
    assert run(capsys, "check", "nosuch", "--m", "1", "--n", "2")[0] == 2
    assert run(capsys, "dims", "--m", "1", "--n", "2", "--f", "5")[0] == 2
    assert run(capsys, "nosuch")[0] == 2


@pytest.mark.parametrize("suite", ["relations", "tangle", "uq-commute"])
def test_check_suites(capsys, suite):
    code, out, _ = run(capsys, "check", suite, "--m", "1", "--n", "2", "--out", "json")
    doc = json.loads(out)
    assert code == 0 and doc["passed"]
    assert all(r["passed"] for r in doc["results"])


def test_relations_has_ten_families(capsys):
    code, out, _ = run(capsys, "check", "relations", "--m", "2", "--n", "3", "--out", "json")
    fams = {r["family"] for r in json.loads(out)["results"]}
    assert code == 0 and len(fams) == 10


def test_eval_sparse_output(capsys):
    code, out, _ = run(capsys, "eval", "--m", "2", "--out", "csv", "X")
    lines = out.strip().split("\n")
    nnz = int(lines[0].split(", ")[1].split()[0])
    assert code == 0 and lines[0].startswith("# 16x16")
    assert len(lines) == nnz + 1
    assert all(len(ln.split(" ", 2)) == 3 for ln in lines[1:])


def test_dims_rows(capsys):
    code, out, _ = run(capsys, "dims", "--m", "2", "--n", "3", "--f", "1", "--field", "zeta:2",
                       "--field", "modp:5", "--out", "json")
    doc = json.loads(out)
    rows = doc["results"]
    assert code == 0 and doc["cross_field"]["consistent"]
    for r in rows:
        assert (r["dim_W"], r["dim_quotient"], r["dim_HT"]) == (12, 52, 12)


def test_dims_csv_mirrors_json(capsys):
    _, out_j, _ = run(capsys, "dims", "--m", "1", "--n", "2", "--out", "json", "--stable")
    _, out_c, _ = run(capsys, "dims", "--m", "1", "--n", "2", "--out", "csv", "--stable")
    rows = list(csv.DictReader(io.StringIO(out_c)))
    js = json.loads(out_j)["results"]
    assert list(rows[0]) == list(js[0])
    assert [{k: str(v) for k, v in r.items()} for r in js] == rows
    assert [r for r in rows if r["f"] == "1"][0]["dim_W"] == "1"


@pytest.mark.parametrize("m,n,img", [(1, 2, 1), (2, 2, 2), (2, 3, 5)])
def test_duality(capsys, m, n, img):
    code, out, _ = run(capsys, "duality", "--m", str(m), "--n", str(n), "--out", "json")
    r = json.loads(out)["results"][0]
    assert code == 0 and list(r) == REPORT_KEYS
    assert r["surjective"] and r["dim_image_phi_f"] == r["dim_commutant_quotient"] == img


def test_stable_json_is_byte_identical(capsys):
    argv = ["duality", "--grid", "1..2,2..3", "--field", "zeta:3", "--out", "json", "--stable"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and "runtime" not in json.loads(a)


def test_jobs_give_same_answer(capsys):
    argv = ["dims", "--grid", "1..2,2..3", "--field", "modp:7", "--out", "json", "--stable"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--jobs", "2")
    assert a == b


def test_generic_size_guard(capsys):
    code, _, err = run(capsys, "dims", "--m", "3", "--n", "5")
    assert code == 2 and "force-generic" in err


def test_cache_hits_on_second_run(capsys, tmp_path):
    argv = ["duality", "--m", "2", "--n", "3", "--out", "json", "--cache", str(tmp_path)]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    first, second = json.loads(a), json.loads(b)
    assert first["runtime"]["cache"]["hits"] == 0
    assert second["runtime"]["cache"]["hits"] > 0 and second["runtime"]["cache"]["misses"] == 0
    assert first["results"] == second["results"]


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("BMW_DUALITY_CACHE", str(tmp_path))
    run(capsys, "dims", "--m", "1", "--n", "2", "--out", "json")
    assert list(tmp_path.rglob("*.json"))


def test_corrupt_cache_recomputes(capsys, tmp_path):
    argv = ["duality", "--m", "1", "--n", "3", "--out", "json", "--cache", str(tmp_path)]
    _, good, _ = run(capsys, *argv)
    for p in tmp_path.rglob("*.json"):
        p.write_text("garbage")
    code, again, err = run(capsys, *argv)
    assert code == 0
    assert json.loads(again)["results"] == json.loads(good)["results"]
    assert json.loads(again)["runtime"]["cache"]["corrupt"] > 0


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "bmw_duality", "eval", "--m", "1", "A ; U"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "[-q^2 - q^-2]"
