from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from mvtbounds import cache
from mvtbounds.cli import UsageError, main, parse_k_range
from mvtbounds.exponents import ExponentTable, build_catalog


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_k_ranges():
    assert parse_k_range("5") == [5]
    assert parse_k_range("5..8") == [5, 6, 7, 8]
    assert parse_k_range("5,7") == [5, 7]
    assert parse_k_range("3..4,9") == [3, 4, 9]
    for bad in ("2", "8..5", "x", "10001"):
        with pytest.raises(UsageError):
            parse_k_range(bad)


def test_catalog_json(capsys):
    code, out, _ = run(capsys, "catalog", "--k", "5", "--format", "json")
    assert code == 0
    t = ExponentTable.from_json(out)
    assert t.delta(18) <= Fraction(2, 7)


def test_catalog_closed_form_only(capsys):
    code, out, _ = run(capsys, "catalog", "--k", "5", "--parity", "closed-form-only", "--format", "csv")
    assert code == 0
    row = next(line for line in out.splitlines() if line.startswith("18,"))
    assert ",2/7," in row


def test_catalog_usage_errors(capsys):
    assert run(capsys, "catalog", "--k", "2")[0] == 2
    assert run(capsys, "catalog", "--k", "4..5")[0] == 2
    assert run(capsys, "catalog", "--k", "4", "--parity", "bogus")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "waring", "--k", "5", "--jobs", "0")[0] == 2


def test_waring_markdown(capsys):
    code, out, _ = run(capsys, "waring", "--k", "5..6")
    assert code == 0
    assert out.startswith("| k | 5 | 6 |")
    s_route = next(line for line in out.splitlines() if line.startswith("| gtilde_s_route"))
    assert s_route.split("|")[2:4] == [" 28 ", " 43 "]


def test_waring_json_parallel_matches_serial(capsys):
    _, serial, _ = run(capsys, "waring", "--k", "5..7", "--format", "json")
    _, parallel, _ = run(capsys, "waring", "--k", "5..7", "--format", "json", "--jobs", "2")
    assert json.loads(serial) == json.loads(parallel)


def test_hua(capsys):
    code, out, _ = run(capsys, "hua", "--k", "4", "--format", "json")
    assert code == 0
    vals = {r["name"]: r["value"] for r in json.loads(out)}
    assert vals == {"hua_C": 26, "t_star": 11, "hua_S": 22}


def test_tarry_and_weyl(capsys):
    code, out, _ = run(capsys, "tarry", "--k", "3..4", "--format", "csv")
    assert code == 0 and out.startswith("k,")
    code, out, _ = run(capsys, "weyl", "--k", "6", "--format", "json")
    assert code == 0
    obj = json.loads(out)[0]
    assert obj["sigma_inverse_direct"] == 42
    assert run(capsys, "weyl", "--k", "3")[0] == 2


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--format", "json")
    assert code == 0
    assert json.loads(out) == [{"name": "xi", "value": "0.312383"}, {"name": "C", "value": "1.542749"}]
    assert run(capsys, "constants", "--precision", "99")[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "tables", "--k", "5", "--format", "json")
    assert code == 0
    s1_row = next(r for r in json.loads(out) if r["item"] == "s1")
    assert s1_row["verdict"] in ("match", "dominates")
    code, out, _ = run(capsys, "verify", "identities", "--format", "json")
    assert code == 0
    assert all(r["verdict"] == "match" for r in json.loads(out))
    code, out, _ = run(capsys, "verify", "oracle", "--format", "json")
    assert code == 0
    row = next(r for r in json.loads(out) if r["item"] == "count_J(2, 2, 3)")
    assert row["ours"] == "15" and row["verdict"] == "match"


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--s", "3", "--k", "2", "--X", "2")
    assert (code, out.strip()) == (0, "20")
    code, out, _ = run(capsys, "count", "--s", "1", "--k", "1", "--X", "5")
    assert (code, out.strip()) == (0, "5")
    code, out, err = run(capsys, "count", "--s", "6", "--k", "4", "--X", "10000")
    assert code == 3 and "budget" in err
    code, out, _ = run(capsys, "count", "--s", "1", "--k", "1", "--X-list", "10,100")
    assert code == 0 and out.splitlines()[0] == "X,J,slope"
    assert run(capsys, "count", "--s", "1", "--k", "1")[0] == 2


def test_cache_round_trip(tmp_path, capsys):
    d = tmp_path / "c"
    code, first, _ = run(capsys, "catalog", "--k", "6", "--format", "json", "--cache-dir", str(d))
    files = list(d.glob("catalog-k6-*.json"))
    assert code == 0 and len(files) == 1
    assert ExponentTable.from_json(files[0].read_text()) == build_catalog(6)
    _, second, _ = run(capsys, "catalog", "--k", "6", "--format", "json", "--cache-dir", str(d))
    assert first == second


def test_cache_keys_differ_by_parity(tmp_path):
    a = cache.cache_path(tmp_path, 5, None)
    b = cache.cache_path(tmp_path, 5, "closed-form-only")
    assert a != b
    assert cache.fingerprint(5, None) != cache.fingerprint(6, None)


def test_damaged_cache_is_rebuilt(tmp_path):
    p = cache.cache_path(tmp_path, 4, None)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text("{not json")
    assert cache.load_or_build(4, None, tmp_path) == build_catalog(4)
    assert ExponentTable.from_json(p.read_text()) == build_catalog(4)


def test_env_var_sets_default_dir(_isolated_cache, capsys):
    run(capsys, "catalog", "--k", "4")
    assert list(_isolated_cache.glob("catalog-k4-*.json"))


def test_no_cache_writes_nothing(_isolated_cache, capsys):
    run(capsys, "catalog", "--k", "4", "--no-cache")
    assert not _isolated_cache.exists()


def test_module_entry_point(_isolated_cache):
    r = subprocess.run(
        [sys.executable, "-m", "mvtbounds", "count", "--s", "2", "--k", "2", "--X", "3"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and r.stdout.strip() == "15"
