import json

import jsonschema
import pytest

from treejacobi.cli import main
from treejacobi.reports import REPORT_SCHEMA
from treejacobi.treecore import build_from_spec

STAR = """
{"vertices": [
  {"id": "a", "parent": "x", "level": 0, "lambda": "1/1", "beta": "0/1"},
  {"id": "b", "parent": "x", "level": 0, "lambda": "1/1", "beta": "0/1"},
  {"id": "x", "level": 1, "beta": "0/1"}],
 "top": "x", "top_lambda": "1/1"}
"""


@pytest.fixture
def star_file(tmp_path):
    f = tmp_path / "star.json"
    f.write_text(STAR)
    return str(f)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    report = json.loads(out) if out else None
    if report is not None:
        jsonschema.validate(report, REPORT_SCHEMA)
    return code, report


def test_spectrum_star(capsys, star_file):
    code, report = run(capsys, ["spectrum", "--tree", star_file,
                                "--at", "x", "--verify"])
    assert code == 0 and report["pass"]
    assert report["results"]["identity"] is True
    assert report["results"]["top_factor"] == ["-2/1", "0/1", "1/1"]
    assert report["results"]["char_poly"] == ["0/1", "-2/1", "0/1", "1/1"]
    assert report["results"]["shared_factors"][0]["factor"] == ["0/1", "1/1"]


def test_poly_leaf(capsys, tmp_path):
    f = tmp_path / "leaf.json"
    f.write_text('{"vertices": [{"id": "v", "level": 0, "beta": "0/1"}],'
                 ' "top": "v", "top_lambda": "1/1"}')
    code, report = run(capsys, ["poly", "--tree", str(f), "--at", "v"])
    assert code == 0
    assert report["results"]["self"] == ["1/1"]
    assert report["results"]["up"] == ["0/1", "1/1"]


def test_poly_full_table(capsys, star_file):
    code, report = run(capsys, ["poly", "--tree", star_file, "--full"])
    assert code == 0
    assert set(report["results"]["table"]) == {"a", "b", "x"}


def test_solve_and_wronskian(capsys, star_file):
    code, report = run(capsys, ["solve", "--tree", star_file,
                                "--z", "0/1+1/1i"])
    assert code == 0 and report["results"]["residuals_zero"]
    code, report = run(capsys, ["wronskian", "--tree", star_file])
    assert code == 0
    assert all(step["ok"] for step in report["results"]["steps"])


def test_solve_real_mode(capsys, star_file):
    code, report = run(capsys, ["solve", "--tree", star_file, "--z", "1/1"])
    assert code == 0
    assert report["results"]["mode"] == "real"
    assert not report["results"]["obstructed"]


def test_growth(capsys):
    code, report = run(capsys, ["growth", "--generator", "homogeneous:2",
                                "--depths", "2..4"])
    assert code == 0
    assert report["results"]["strictly_increasing"] is True
    assert len(report["results"]["rows"]) == 3


def test_growth_small_norm_generator(capsys):
    code, report = run(capsys, ["growth", "--generator", "small-norm",
                                "--depths", "3..6"])
    assert code == 0
    assert report["results"]["bounded_by_one"] is True
    assert report["results"]["strictly_increasing"] is True


def test_classical_geometric(capsys):
    code, report = run(capsys, ["classical", "--rule", "geometric",
                                "--q", "2", "--a", "1", "--depth", "20",
                                "--report", "pq0"])
    assert code == 0
    assert report["results"]["kernel_residuals_zero"] is True
    assert len(report["results"]["p0"]) == 21


def test_construct_and_reload(capsys, tmp_path):
    out = tmp_path / "built.json"
    code, report = run(capsys, ["construct", "--example", "real-obstruction",
                                "--depth", "3", "--out", str(out)])
    assert code == 0
    assert report["results"]["obstructed_at_zero"] is True
    tree = build_from_spec(out.read_text())
    assert tree.size == report["results"]["vertices"]
    # the written artifact keeps the obstruction under verify-all semantics
    code2, report2 = run(capsys, ["solve", "--tree", str(out), "--z", "0/1"])
    assert code2 == 1
    assert report2["results"]["obstructed"] is True


def test_construct_small_norm(capsys, tmp_path):
    code, report = run(capsys, ["construct", "--example", "small-norm",
                                "--depth", "5"])
    assert code == 0
    assert report["results"]["norm_bounds_hold"] is True
    assert report["results"]["residuals_zero"] is True


def test_construct_bounded_path(capsys):
    code, report = run(capsys, ["construct", "--example", "bounded-path",
                                "--depth", "3", "--d", "4"])
    assert code == 0
    assert report["results"]["base_radius_within_2"] is True
    assert report["results"]["classical_window_below_1e-6"] is True


def test_construct_pendant(capsys):
    code, report = run(capsys, ["construct", "--example", "pendant-path",
                                "--depth", "6", "--pendant-rule", "ramp",
                                "--a", "1"])
    assert code == 0
    assert report["results"]["classical_match"] is True


def test_bounded_path_artifact_full_verification(capsys, tmp_path):
    out = tmp_path / "bounded.json"
    code, _ = run(capsys, ["construct", "--example", "bounded-path",
                           "--depth", "3", "--d", "4", "--out", str(out)])
    assert code == 0
    code, report = run(capsys, ["verify-all", "--tree", str(out)])
    assert code == 0 and report["pass"]
    code, report = run(capsys, ["spectrum", "--tree", str(out), "--verify"])
    assert code == 0 and report["results"]["identity"] is True


def test_solve_real_rejects_explicit_path(capsys, star_file):
    assert main(["solve", "--tree", star_file, "--z", "1/1",
                 "--path", "a,x"]) == 2
    capsys.readouterr()


def test_verify_all_on_cut_tree(capsys, tmp_path):
    out = tmp_path / "pendant.json"
    code, _ = run(capsys, ["construct", "--example", "pendant-path",
                           "--depth", "4", "--a", "1", "--out", str(out)])
    assert code == 0
    code, report = run(capsys, ["verify-all", "--tree", str(out)])
    assert code == 0 and report["pass"]
    assert "skipped" in report["results"]["uniqueness_dimension"]


def test_verify_all_passes_and_is_deterministic(capsys, star_file):
    code, first = run(capsys, ["verify-all", "--tree", star_file, "--seed", "7"])
    assert code == 0 and first["pass"]
    code, second = run(capsys, ["verify-all", "--tree", star_file, "--seed", "7"])
    assert first == second


def test_verify_all_threads_env(capsys, star_file, monkeypatch):
    monkeypatch.setenv("TREEJACOBI_THREADS", "4")
    code, threaded = run(capsys, ["verify-all", "--tree", star_file,
                                  "--seed", "7"])
    monkeypatch.delenv("TREEJACOBI_THREADS")
    code2, serial = run(capsys, ["verify-all", "--tree", star_file,
                                 "--seed", "7"])
    assert code == code2 == 0
    assert threaded == serial


def test_usage_error_exit_code(capsys, tmp_path):
    assert main(["spectrum"]) == 2            # missing --tree
    assert main(["no-such-command"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    assert main(["spectrum", "--tree", str(bad)]) == 2
    missing = tmp_path / "missing.json"
    assert main(["spectrum", "--tree", str(missing)]) == 2
    capsys.readouterr()


def test_reports_are_byte_identical(capsys, star_file):
    main(["spectrum", "--tree", star_file, "--verify"])
    first = capsys.readouterr().out
    main(["spectrum", "--tree", star_file, "--verify"])
    second = capsys.readouterr().out
    assert first == second
