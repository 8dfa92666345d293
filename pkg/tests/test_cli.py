import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from cobordcalc import cobord
from cobordcalc.cli import run

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def call(*argv):
    out = io.StringIO()
    status = run([str(a) for a in argv], out=out)
    return status, json.loads(out.getvalue())


def test_tqft_closed_value():
    status, out = call("tqft", "eval", "--expr", "chidag(1) ; chi(1)", "--instance", "abelian:4")
    assert status == 0 and out == {"value": 8, "mu0Total": 1}


def test_tqft_open_value():
    status, out = call("tqft", "eval", "--expr", "pidag([1,1]) ; pi([1,1])")
    assert status == 0 and out["mu0Total"] == 1 and out["source"] == [2]
    assert len(out["value"]) == 16


def test_solid_tori_anomaly():
    status, out = call("cob", "anomaly", SAMPLES / "solid_tori.json")
    assert status == 0 and out == {"mu0": 0, "mu1": 1, "muPartial": 1}


def test_anomaly_from_expression():
    status, out = call("cob", "anomaly", "--expr", "pidag([1,2]) ; pi([1,2])", "--detail")
    assert status == 0 and out["mu0"] == 1 and out["w12Dim"] == 1


def test_cob_compose_betti_rho(tmp_path):
    status, out = call("cob", "compose", SAMPLES / "lambda_pair.json")
    assert status == 0 and out["anomaly"]["mu0"] == 1
    f = tmp_path / "lam.json"
    f.write_text(json.dumps(out["result"]))
    status, b = call("cob", "betti", f)
    assert status == 0 and b["betaInt1"] == 1
    status, r = call("cob", "rho", SAMPLES / "circle_genus2.json")
    assert r["total"] == {"lower": 2, "upper": 2, "exact": True, "betaUpper": 5}


def test_graph_commands():
    status, out = call("graph", "canon", SAMPLES / "graph.json")
    assert status == 0 and out["components"] == [{"src": [0, 1], "tgt": [0], "beta1": 1}]
    status, out = call("graph", "compose", SAMPLES / "graph_pair.json")
    assert status == 0 and out["mu0"] == 0


def test_hopf_analyze():
    status, out = call("hopf", "analyze", "--algebra", "sweedler")
    assert status == 0
    assert out["integralDim"] == 1 and out["epsLambda"] == 0 and out["semisimple"] is False


def test_hennings_eval():
    status, out = call("hennings", "eval", "--diagram", SAMPLES / "hopf_link.txt",
                       "--algebra", "d-z2")
    assert status == 0 and out["value"] == 1 and out["normalized"]
    status, out = call("hennings", "eval", "--diagram", SAMPLES / "unknot0.txt",
                       "--algebra", "d-sweedler")
    assert status == 0 and out["value"] == 0


def test_hennings_vanishing_normalizers(tmp_path):
    f = tmp_path / "lens.txt"
    f.write_text("framing: 1\ncap(0)\ncup(0)\n")
    status, out = call("hennings", "eval", "--diagram", f, "--algebra", "d-sweedler")
    assert status == 0 and out["normalized"] is False and out["unnormalized"] == 0


@pytest.mark.parametrize("argv", [
    ["bogus"], [], ["tqft", "eval", "--expr", "chi(1) ; chi(1)"],
    ["tqft", "eval", "--expr", "nonsense("], ["cob", "betti", "/no/such/file.json"],
    ["cob", "anomaly"], ["selftest", "--suite", "nope"],
])
def test_parse_errors_exit_2(argv):
    status, out = call(*argv)
    assert status == 2 and out["kind"] == "parse" and out["error"]


def test_bad_json_exit_2(tmp_path):
    f = tmp_path / "x.json"
    f.write_text("{not json")
    assert call("cob", "betti", f)[0] == 2
    f.write_text("cap(9)\n")
    assert call("hennings", "eval", "--diagram", f)[0] == 2


@pytest.mark.parametrize("argv", [
    ["tqft", "eval", "--expr", "circle(2)", "--instance", "hopf:d-sweedler"],
    ["tqft", "eval", "--expr", "ball", "--instance", "abelian:3"],
    ["hopf", "analyze", "--algebra", "octonions"],
])
def test_domain_errors_exit_1(argv):
    status, out = call(*argv)
    assert status == 1 and out["kind"] == "domain"


def test_composition_mismatch_is_domain_error(tmp_path):
    f = tmp_path / "pair.json"
    f.write_text(json.dumps({"first": cobord.chi(1).to_json(),
                             "second": cobord.chi(1).to_json()}))
    assert call("cob", "anomaly", f)[0] == 1


def test_seed_sources(monkeypatch):
    monkeypatch.setenv("COBORD_SEED", "5")
    status, out = call("selftest", "--suite", "betti")
    assert status == 0 and out["seed"] == 5
    status, out = call("--seed", "9", "selftest", "--suite", "betti")
    assert out["seed"] == 9
    monkeypatch.setenv("COBORD_SEED", "abc")
    assert call("selftest", "--suite", "betti")[0] == 2


def test_text_mode():
    out = io.StringIO()
    assert run(["--text", "tqft", "eval", "--expr", "s1xs2"], out=out) == 0
    assert out.getvalue().startswith("{\n")


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "cobordcalc", "tqft", "eval", "--expr", "circle(1)"],
                       capture_output=True, text=True)
    assert p.returncode == 0 and json.loads(p.stdout) == {"value": 8, "mu0Total": 0}
