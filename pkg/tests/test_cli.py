import json

import pytest

from twobit.cli import main
from twobit.graph import read_alist, write_alist
from twobit.simulation import FER_CSV_HEADER

from conftest import fixture_graph


@pytest.fixture(scope="module")
def graphs(tmp_path_factory):
    d = tmp_path_factory.mktemp("graphs")
    out = {}
    for kind in ("theorem1_positive", "violate_4_11"):
        path = d / f"{kind}.alist"
        write_alist(fixture_graph(kind, 40, 0), path)
        out[kind] = str(path)
    bad = d / "bad.alist"
    bad.write_text("3 2\n2 2\n")
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_lut(capsys, tmp_path):
    code, cap = run(capsys, "lut", "--c", "2", "--s", "2", "--w", "1")
    assert code == 0 and len(cap.out.splitlines()) > 20
    out = tmp_path / "lut.json"
    code, _ = run(capsys, "--json", "lut", "--c", "2", "--s", "2", "--w", "1", "--table", "update",
                  "--out", str(out))
    data = json.loads(out.read_text())
    assert code == 0 and data["rule"] == "twobit:2,2,1" and len(data["update"]) == 40
    assert data["decision"] is None


def test_threshold(capsys):
    code, cap = run(capsys, "threshold", "--rho", "8", "--precision", "1e-4", "--json")
    data = json.loads(cap.out)
    assert code == 0 and abs(data["threshold"] - 0.0567) < 5e-4


def test_threshold_bad_decoder_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["threshold", "--rho", "8", "--decoder", "nonsense"])
    assert exc.value.code == 64


def test_sweep(capsys, tmp_path):
    rules = tmp_path / "rules.txt"
    rules.write_text("# rules\ntwobit:2,2,1\ngallagerA\n")
    code, cap = run(capsys, "sweep", "--rules-file", str(rules), "--rho", "8,16", "--precision", "1e-3")
    lines = cap.out.splitlines()
    assert code == 0 and lines[0].startswith("rule,") and len(lines) == 5
    rules.write_text("bogus\n")
    assert run(capsys, "sweep", "--rules-file", str(rules), "--rho", "8")[0] == 64


def test_check_graph(capsys, graphs):
    code, cap = run(capsys, "check-graph", graphs["theorem1_positive"])
    assert code == 0 and "PASS" in cap.out
    code, cap = run(capsys, "check-graph", graphs["violate_4_11"], "--json")
    data = json.loads(cap.out)
    assert code == 1 and data["violations"][0]["subset"] == [0, 1, 2, 3]
    code, cap = run(capsys, "check-graph", graphs["theorem1_positive"], "--budget", "10")
    assert code == 2 and "TRUNCATED" in cap.out


def test_missing_and_malformed_files(capsys, graphs, tmp_path):
    assert run(capsys, "check-graph", str(tmp_path / "none.alist"))[0] == 66
    assert run(capsys, "verify", graphs["bad"])[0] == 65
    assert run(capsys, "check-graph", graphs["theorem1_positive"], "--conditions", "nope")[0] == 64


def test_make_fixture(capsys, tmp_path):
    out = tmp_path / "g.alist"
    code, _ = run(capsys, "--seed", "3", "make-fixture", "--kind", "violate_6_14", "--n", "30", "--out", str(out))
    g = read_alist(out)
    assert code == 0 and g.n_variables == 30
    code, cap = run(capsys, "make-fixture", "--kind", "theorem1_positive", "--n", "30", "--seed", "3")
    assert code == 0 and cap.out.startswith("30 ")
    assert run(capsys, "make-fixture", "--kind", "violate_4_11", "--n", "10")[0] == 64


def test_verify(capsys, graphs):
    code, cap = run(capsys, "verify", graphs["theorem1_positive"])
    assert code == 0 and "all corrected" in cap.out
    code, cap = run(capsys, "verify", graphs["violate_4_11"], "--first-failure", "--json")
    data = json.loads(cap.out)
    assert code == 1 and len(data["failures"]) == 1


def test_simulate_and_sweep(capsys, graphs, tmp_path):
    code, cap = run(capsys, "simulate", graphs["theorem1_positive"], "--alpha", "0.03", "--trials", "256")
    lines = cap.out.splitlines()
    assert code == 0 and lines[0] == FER_CSV_HEADER and len(lines) == 2
    assert run(capsys, "simulate", graphs["theorem1_positive"], "--alpha", "0.9")[0] == 64
    out = tmp_path / "fer.csv"
    code, _ = run(capsys, "fer-sweep", graphs["theorem1_positive"], "--decoder", "twobit:2,2,1",
                  "--decoder", "gallagerB:b=2", "--alphas", "0.02,0.04", "--trials", "256",
                  "--threads", "2", "--out", str(out))
    assert code == 0 and len(out.read_text().splitlines()) == 5


def test_simulate_seed_reproducible(capsys, graphs):
    argv = ["simulate", graphs["theorem1_positive"], "--alpha", "0.05", "--trials", "512", "--seed", "7", "--json"]
    a = json.loads(run(capsys, *argv)[1].out)
    b = json.loads(run(capsys, *argv, "--threads", "3")[1].out)
    assert a == b


def test_nonpositive_threads_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["--threads", "0", "lut", "--c", "2", "--s", "2", "--w", "1"])
    assert exc.value.code == 64
