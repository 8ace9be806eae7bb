from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

import charnumbers.charnum as engine
import charnumbers.cli as cli
from charnumbers.groebner import ResourceLimitError

from test_algebra import EXAMPLE_IDEAL


def run(*argv, env_seed=None, monkeypatch=None):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


def payload(text):
    return json.loads(text)


def strip_timestamp(rec):
    rec = dict(rec)
    rec.pop("timestamp", None)
    return rec


def test_info_chain():
    code, out = run("info", "family:chain(3)")
    r = payload(out)["results"]
    assert code == 0 and r["dimension"] == 3 and r["local"] and r["gorenstein"]


def test_info_worked_example():
    spec = json.dumps({"type": "quotient", "vars": ["x", "y", "z"], "ideal": EXAMPLE_IDEAL})
    code, out = run("info", "--spec", spec)
    r = payload(out)["results"]
    assert code == 0 and r["dimension"] == 5 and r["local"] and r["gorenstein"]
    entries = r["pencil"]["entries"]
    assert entries[1] == ["x1", "0", "x4", "0", "0"] and entries[3][3] == "x4"


def test_info_trivial():
    code, out = run("info", "family:trivial(3)")
    r = payload(out)["results"]
    assert r["dimension"] == 4 and r["local"] and not r["gorenstein"]


def test_charnum_values():
    code, out = run("charnum", "family:chain(4)", "--index", "1,1,1", "--seed", "1")
    assert code == 0 and payload(out)["results"]["value"] == "6"
    code, out = run("charnum", "family:cw(3)", "--index", "0,3,0", "--seed", "1")
    assert code == 0 and payload(out)["results"]["value"] == "4"


def test_bad_index_is_input_error():
    code, out = run("charnum", "family:chain(3)", "--index", "1,2")
    err = payload(out)["error"]
    assert code == 2 and err["kind"] == "input" and "3" in err["message"]


@pytest.mark.parametrize("spec", ["family:nope(3)", "{not json", '{"type":"quotient","vars":["x"],"ideal":["x^"]}'])
def test_malformed_specs_exit_two(spec):
    code, _ = run("info", spec)
    assert code == 2


def test_engine_error_exit_three(monkeypatch):
    def boom(*a, **k):
        raise ResourceLimitError("pair budget of 1 exceeded")

    monkeypatch.setattr(engine, "_count_run", boom)
    engine.CACHE.clear()
    code, out = run("charnum", "family:chain(3)", "--index", "1,1", "--seed", "999")
    assert code == 3 and payload(out)["error"]["kind"] == "engine"
    engine.CACHE.clear()


def test_verification_failure_exit_one(monkeypatch):
    monkeypatch.setattr(cli, "binomial_sequence", lambda d: (1,) * d)
    code, out = run("verify", "family:chain(3)")
    assert code == 1
    checks = payload(out)["results"]["checks"]
    assert any(not c["passed"] and c["anchor"] == "binomial-sequence" for c in checks)


def test_verify_core_suite_passes():
    code, out = run("verify", "--suite", "core", "--seed", "2")
    assert code == 0


def test_verify_single_specs():
    code, out = run("verify", "family:chain(5)")
    assert code == 0
    code, out = run("verify", '{"type":"quotient","vars":["x","y"],"ideal":["x^2","y^2"]}')
    checks = payload(out)["results"]["checks"]
    ci = [c for c in checks if c["anchor"] == "complete-intersection-bound"]
    assert code == 0 and ci and ci[0]["passed"]
    assert ci[0]["detail"] == {"bound": "4", "value": "4", "verdict": True}


def test_wrappers():
    code, out = run("eulerian", "3")
    vals = {tuple(v["index"]): v["value"] for v in payload(out)["results"]["values"]}
    assert len(vals) == 10 and vals[(1, 1, 1)] == "6"
    code, out = run("sequence", "family:smooth(5)")
    assert payload(out)["results"]["values"] == ["1", "4", "6", "4", "1"]
    code, out = run("multidegree", "family:trivial(2)")
    assert len(payload(out)["results"]["values"]) == 3


def test_text_format():
    code, out = run("sequence", "family:chain(3)", "--format", "text")
    assert code == 0 and "1" in out and not out.lstrip().startswith("{")


def test_replay_is_byte_identical_modulo_timestamp():
    engine.CACHE.clear()
    _, a = run("multidegree", "family:cw(3)", "--seed", "42")
    engine.CACHE.clear()
    _, b = run("multidegree", "family:cw(3)", "--seed", "42")
    assert strip_timestamp(payload(a)) == strip_timestamp(payload(b))
    ja = json.dumps(strip_timestamp(payload(a)), sort_keys=True)
    jb = json.dumps(strip_timestamp(payload(b)), sort_keys=True)
    assert ja == jb


def test_environment_seed(monkeypatch):
    monkeypatch.setenv("CHARNUM_SEED", "123")
    _, out = run("charnum", "family:chain(3)", "--index", "1,1")
    assert payload(out)["seed"] == "123"
    _, out = run("charnum", "family:chain(3)", "--index", "1,1", "--seed", "5")
    assert payload(out)["seed"] == "5"


def test_explicit_primes_are_recorded():
    _, out = run("charnum", "family:chain(3)", "--index", "1,1", "--prime", "2147483647,2147483629")
    rec = payload(out)
    assert rec["primes"][:2] == ["2147483647", "2147483629"]


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "charnumbers.cli", "eulerian", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["results"]["n"] == 2
