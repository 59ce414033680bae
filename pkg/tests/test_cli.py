"""Command-line contract: exit codes, cache behavior, exact-output rule."""

import json
import os

import pytest

from ltlab.cli import (EXIT_GUARD, EXIT_MATH_FAILURE, EXIT_OK, EXIT_USAGE,
                       main)


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_count_json(capsys):
    code, out = _run(capsys, "count", "--q", "2", "--h", "2", "--n", "1")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["count"] == 16
    assert report["method"] == "trace-histogram"


def test_conjecture_exit_zero(capsys):
    code, out = _run(capsys, "conjecture", "--q", "2", "--h", "2",
                     "--N", "2")
    assert code == EXIT_OK
    assert json.loads(out)["all_match"] is True


def test_identities_all_hold(capsys):
    code, out = _run(capsys, "identities", "--q", "2", "--h", "3")
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["all_hold"] and len(report["identities"]) == 6


def test_usage_error_exit_code(capsys):
    assert main(["count", "--q", "2"]) == EXIT_USAGE


def test_guard_exit_code(capsys):
    code, _ = _run(capsys, "count", "--q", "2", "--h", "4", "--n", "9")
    assert code == EXIT_GUARD


def test_cache_hit_is_byte_identical(tmp_path, capsys):
    args = ["count", "--q", "2", "--h", "2", "--n", "2",
            "--cache-dir", str(tmp_path)]
    code1, out1 = _run(capsys, *args)
    files = list(tmp_path.iterdir())
    assert code1 == EXIT_OK and len(files) == 1
    code2, out2 = _run(capsys, *args)
    assert code2 == EXIT_OK and out2 == out1
    # the cache really was consulted: corrupt it and observe the replay
    files[0].write_bytes(b'{"count": 16, "match": true}\n')
    _, out3 = _run(capsys, *args)
    assert json.loads(out3)["count"] == 16


def test_env_overrides_cache_dir(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("LTLAB_CACHE", str(tmp_path / "env"))
    _run(capsys, "count", "--q", "2", "--h", "2", "--n", "1",
         "--cache-dir", str(tmp_path / "flag"))
    assert (tmp_path / "env").exists()
    assert not (tmp_path / "flag").exists()


def test_charsum_csv_one_row_per_lambda(capsys):
    code, out = _run(capsys, "charsum", "--q", "2", "--h", "2", "--n", "1",
                     "--format", "csv")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0].startswith("q,h,lambda,primitive,n,S")
    assert len(lines) == 1 + 4  # header + one row per lambda in F_4


def test_charsum_primitive_selector(capsys):
    code, out = _run(capsys, "charsum", "--q", "2", "--h", "2", "--n", "1",
                     "--lambda", "primitive")
    report = json.loads(out)
    assert code == EXIT_OK
    assert all(row["primitive"] for row in report["per_lambda"])


def test_symmetry_verdict(capsys):
    code, out = _run(capsys, "symmetry", "--q", "2", "--h", "2", "--n", "2")
    assert code == EXIT_OK
    assert json.loads(out)["preserved"] is True


def _no_floats(obj):
    if isinstance(obj, float):
        return False
    if isinstance(obj, dict):
        return all(_no_floats(v) for v in obj.values())
    if isinstance(obj, list):
        return all(_no_floats(v) for v in obj)
    return True


@pytest.mark.parametrize("argv", [
    ["count", "--q", "2", "--h", "2", "--n", "2"],
    ["conjecture", "--q", "2", "--h", "2", "--N", "2"],
    ["zeta", "--q", "2", "--h", "2", "--n", "1"],
    ["identities", "--q", "2", "--h", "2"],
    ["formal-verify", "--q", "2", "--h", "2", "--samples", "1"],
    ["congruence-verify", "--q", "2", "--h", "2", "--samples", "1"],
    ["symmetry", "--q", "2", "--h", "2"],
])
def test_reports_contain_no_floating_point(capsys, argv):
    code, out = _run(capsys, *argv)
    assert code == EXIT_OK
    assert _no_floats(json.loads(out, parse_float=lambda s: 0.5))


def test_congruence_verify_schema(capsys):
    code, out = _run(capsys, "congruence-verify", "--q", "2", "--h", "2",
                     "--samples", "1")
    assert code == EXIT_OK
    report = json.loads(out)
    sample = report["per_sample"][0]
    for key in ("prop41", "yzeta", "yprop", "eq_w"):
        assert key in sample
    row = report["per_sample"][1]["prop41"][0]
    assert set(row) >= {"r", "achieved", "threshold"}
    assert "/" in row["threshold"]