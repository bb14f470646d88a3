import csv
import io
import json
import subprocess
import sys

import pytest

from ncball.cli import main, run


@pytest.fixture
def fx(fixtures_dir):
    return lambda name: str(fixtures_dir / f"{name}.json")


def cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "ncball.cli", *argv], capture_output=True, text=True, check=False
    )


def test_omega_on_compressed_shifts(fx):
    report, code = run(["radius", "omega", "--input", fx("sec6_n2"), "--rho", "2", "--level", "6"])
    assert code == 0
    assert report["result"]["omega"] == pytest.approx(0.5, abs=1e-5)
    assert "wall_ms" not in report
    assert len(report["inputs_sha256"]["input"]) == 64


@pytest.mark.parametrize("kind,key,expected", [("row", "row_norm", 1.0), ("spectral", "spectral_radius", 0.0)])
def test_other_radii(fx, kind, key, expected):
    report, code = run(["radius", kind, "--input", fx("sec6_n2")])
    assert code == 0 and report["result"][key] == pytest.approx(expected, abs=1e-9)


def test_scalar_distances(fx):
    report, _ = run(["distance", "hyperbolic", "--a", fx("scalar_a"), "--b", fx("scalar_b"), "--level", "6"])
    res = report["result"]
    assert 0 < res["delta"] < 0.30951960420311175
    assert [m for m, _ in res["trace"]] == [4, 5, 6]
    report, _ = run(["singlevar", "delta", "--a", fx("scalar_a"), "--b", fx("scalar_b")])
    assert report["result"]["delta"] == pytest.approx(0.30951960420311175, abs=1e-8)


def test_dominate_and_rho_min(fx):
    report, code = run(["dominate", "--a", fx("scalar_a"), "--b", fx("scalar_a"), "--c", "1", "--level", "4"])
    assert code == 0 and report["result"]["verdict"] == "dominated"
    report, code = run(["rho-min", "--input", fx("scalar_half")])
    assert code == 0


def test_map_verify_and_apply(fx, tmp_path):
    out = tmp_path / "img.json"
    _, code = run(["map", "apply", "--map", fx("map_z1z2_z1z1"), "--input", fx("sec6_n2"), "--save", str(out)])
    assert code == 0 and out.exists()
    report, code = run(["map", "verify", "--map", fx("map_zero_pad"), "--input", fx("pair_a"), "--level", "3"])
    assert code == 0 and report["result"]["passed"]


def test_converge_csv(fx, tmp_path):
    out = tmp_path / "trace.csv"
    code = main(["converge", "dk", "--a", fx("pair_a"), "--b", fx("pair_b"), "--levels", "2:4", "--out", str(out)])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["level", "value", "min_eig", "wall_ms"]
    assert [r[0] for r in rows[1:]] == ["2", "3", "4"]
    assert all(r[3] == "" for r in rows[1:])
    values = [float(r[1]) for r in rows[1:]]
    assert values == sorted(values)


def test_timing_flag_adds_wall_clock(fx):
    report, _ = run(["radius", "row", "--input", fx("scalar_half"), "--timing"])
    assert report["wall_ms"] >= 0


def test_reruns_are_byte_identical(fx):
    argv = ["distance", "caratheodory", "--a", fx("pair_a"), "--b", fx("pair_b"), "--level", "4"]
    first, second = cli(*argv), cli(*argv)
    assert first.returncode == 0
    assert first.stdout == second.stdout


def test_exit_code_for_missing_file(tmp_path):
    proc = cli("radius", "omega", "--input", str(tmp_path / "absent.json"))
    assert proc.returncode == 1
    assert json.loads(proc.stderr)["error"] in {"FileNotFoundError", "OSError"}


def test_exit_code_for_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "d": 1, "matrices": [[[["x", 0]]]]}')
    proc = cli("radius", "row", "--input", str(bad))
    assert proc.returncode == 1
    assert "/matrices/0/0/0/0" in json.loads(proc.stderr)["message"]


def test_usage_errors_exit_two(fx):
    assert cli("radius", "bogus", "--input", fx("scalar_half")).returncode == 2
    assert cli("frobnicate").returncode == 2


def test_out_of_ball_is_a_failure(fx, tmp_path):
    big = tmp_path / "big.json"
    big.write_text('{"n": 1, "d": 1, "matrices": [[[[1.5, 0]]]]}')
    _, code = run(["distance", "hyperbolic", "--a", str(big), "--b", fx("scalar_b"), "--level", "4"])
    assert code == 1


def test_verify_suite_and_jobs_env(monkeypatch):
    argv = ["verify", "--suite", "radii", "--trials", "2", "--seed", "3"]
    serial, code = run(argv)
    assert code == 0 and serial["result"]["all_passed"]
    monkeypatch.setenv("NCBALL_JOBS", "3")
    threaded, _ = run(argv)
    assert threaded == serial


def test_unknown_suite_exits_one():
    _, code = run(["verify", "--suite", "nope", "--trials", "1"])
    assert code == 1


def test_random_subcommand_is_seeded(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        _, code = run(["random", "--n", "2", "--d", "2", "--spectral", "0.5", "--seed", "5", "--save", str(p)])
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_json_output_to_file(fx, tmp_path):
    out = tmp_path / "r.json"
    assert main(["radius", "row", "--input", fx("scalar_half"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["result"]["row_norm"] == 0.5
