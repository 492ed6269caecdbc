import csv
import json
import os
import subprocess
import sys

import pytest

from cohomlab import __version__
from cohomlab.cli import parse_deltas, run


def _cli(*args, threads=None):
    env = dict(os.environ)
    if threads is not None:
        env["COHOMLAB_THREADS"] = str(threads)
    return subprocess.run([sys.executable, "-m", "cohomlab.cli", *args], env=env, capture_output=True, text=True)


def _report(capsys, *args):
    code = run(list(args))
    return code, json.loads(capsys.readouterr().out)


def test_parse_log_range():
    d = parse_deltas("1e-8:1e-2:logstep7")
    assert len(d) == 7
    assert d[0] == pytest.approx(1e-8) and d[-1] == pytest.approx(1e-2)
    assert d[1] / d[0] == pytest.approx(10.0)


def test_parse_comma_list():
    assert parse_deltas("1e-2,1e-3") == [1e-2, 1e-3]


@pytest.mark.parametrize("spec", ["1e-8:1e-2", "1e-8:1e-2:step7", "a,b", "1e-2:1e-8:logstep1", "-1:1:logstep3"])
def test_parse_rejects(spec):
    from cohomlab.cli import UsageError

    with pytest.raises(UsageError):
        parse_deltas(spec)


def test_verify_curvature_so4(capsys):
    code, rep = _report(capsys, "verify-curvature", "--scenario", "so4-stiefel", "--samples", "10000", "--seed", "42")
    assert code == 0
    r = rep["results"]
    assert r["nSamples"] >= 10000
    assert r["maxGeneralVsOracle"] < 1e-8
    assert set(rep) == {"version", "command", "config", "results", "timings"}
    assert rep["version"] == __version__
    assert rep["config"]["seed"] == 42 and rep["config"]["scenario"] == "so4-stiefel"
    assert rep["timings"] is None


def test_example_alias(capsys):
    code, rep = _report(capsys, "biquotient", "--example", "torus2-flat")
    assert code == 0
    assert rep["config"]["scenario"] == "torus2-flat"


def test_biquotient_torus(capsys):
    code, rep = _report(capsys, "biquotient", "--scenario", "torus2-flat")
    assert code == 0
    r = rep["results"]
    assert r["torusRank"] == 1
    assert r["ricciPositiveWitness"] is None
    assert r["flatDirectionRate"] == 0.0


def test_biquotient_semisimple(capsys):
    code, rep = _report(capsys, "biquotient", "--scenario", "so4-stiefel")
    assert code == 0
    assert rep["results"]["torusRank"] == 0
    assert rep["results"]["ricciPositiveWitness"] is not None


def test_build_profile_csv(tmp_path, capsys):
    path = tmp_path / "p.csv"
    code, rep = _report(capsys, "build-profile", "--grid", "21", "--csv", str(path))
    assert code == 0
    rows = list(csv.reader(path.open(encoding="utf-8")))
    assert rows[0] == ["t", "f", "f_prime", "f_double_prime", "ineq_margin"]
    assert len(rows) == 22


def test_cheeger_demo_csv(tmp_path, capsys):
    path = tmp_path / "c.csv"
    code, rep = _report(capsys, "cheeger-demo", "--scenario", "su2-berger", "--deltas", "1,0.1,0.01",
                        "--csv", str(path))
    assert code == 0
    rows = list(csv.reader(path.open(encoding="utf-8")))
    assert rows[0] == ["delta", "min_sec", "diam_est", "product"]
    assert len(rows) == 4


def test_glue_passes(capsys):
    code, rep = _report(capsys, "glue", "--scenario", "su2-berger")
    assert code == 0


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert run(["biquotient", "--scenario", "torus2-flat", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(path.read_text(encoding="utf-8"))["results"]["torusRank"] == 1


def test_timings_opt_in(capsys):
    code, rep = _report(capsys, "biquotient", "--scenario", "torus2-flat", "--timings")
    assert rep["timings"]["wallSeconds"] >= 0


def test_unknown_scenario_exit_1():
    p = _cli("biquotient", "--scenario", "no-such-thing")
    assert p.returncode == 1
    assert p.stdout == ""


def test_bad_range_exit_1():
    assert _cli("scaling", "--scenario", "so4-stiefel", "--deltas", "1e-8:1e-2:oops").returncode == 1


def test_missing_command_exit_1():
    assert _cli().returncode == 1


def test_unknown_flag_exit_1():
    assert _cli("biquotient", "--bogus").returncode == 1


def test_missing_scenario_file_exit_1(tmp_path):
    assert _cli("biquotient", "--scenario-file", str(tmp_path / "absent.json")).returncode == 1


def test_scenario_file(tmp_path, capsys):
    from cohomlab.catalog import load_scenario

    path = tmp_path / "s.json"
    path.write_text(json.dumps(load_scenario("torus2-flat").to_json()), encoding="utf-8")
    code, rep = _report(capsys, "biquotient", "--scenario-file", str(path))
    assert code == 0
    assert rep["results"]["torusRank"] == 1


def test_assertion_failure_exit_2():
    # the so4-stiefel sweep misses the fitted-slope windows
    p = _cli("scaling", "--scenario", "so4-stiefel")
    assert p.returncode == 2
    rep = json.loads(p.stdout)
    assert "slopeR" in rep["results"]


def test_library_error_exit_2(capsys):
    # out-of-range parameters surface as an error report, not a traceback
    code, rep = _report(capsys, "build-profile", "--delta", "2.0")
    assert code == 2
    assert "error" in rep["results"]


@pytest.mark.parametrize("args", [
    ["verify-curvature", "--scenario", "so4-stiefel", "--samples", "2000"],
    ["biquotient", "--scenario", "son-circle"],
    ["cheeger-demo", "--scenario", "su2-berger", "--deltas", "1,0.01"],
    ["glue", "--scenario", "su2-berger"],
])
def test_thread_count_invariance(args):
    a = _cli(*args, threads=1)
    b = _cli(*args, threads=8)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_repeat_runs_identical():
    args = ["verify-curvature", "--scenario", "su2-berger", "--samples", "500", "--seed", "7"]
    assert _cli(*args).stdout == _cli(*args).stdout
