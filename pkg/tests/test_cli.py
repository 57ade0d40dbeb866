import json
import os
import subprocess
import sys

import jsonschema
import pytest

from apw import cli
from apw.apolar import FermatVerdict, UNDETERMINED

REPORT_SCHEMA = {
    "type": "object",
    "required": ["params", "seed", "trial", "normality", "hilbert_function", "dual_form",
                 "fermat_verdict", "gamma", "timings_ms"],
    "additionalProperties": False,
    "properties": {
        "params": {"type": "object", "required": ["kind", "s", "eta"]},
        "seed": {"type": "integer", "minimum": 0},
        "trial": {"type": "integer", "minimum": 0},
        "normality": {"type": "array", "items": {"type": "boolean"}},
        "hilbert_function": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "dual_form": {"type": "string"},
        "fermat_verdict": {
            "type": "object",
            "required": ["tag"],
            "properties": {
                "tag": {"enum": ["CertifiedFermat", "CertifiedNot", "Undetermined"]},
                "witness": {"type": "string"},
                "points": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                "lambdas": {"type": "array", "items": {"type": "string"}},
                "reason": {"type": "string"},
            },
        },
        "gamma": {
            "type": "object",
            "required": ["length", "apolar"],
            "properties": {
                "length": {"type": ["integer", "null"]},
                "points": {"type": "array"},
                "apolar": {"type": "boolean"},
            },
        },
        "timings_ms": {"type": ["object", "null"]},
    },
}

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["summary"],
    "properties": {"summary": {"type": "object", "required": ["trials", "passed", "verdicts"]}},
}


def run(args, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "apw.cli", *args], capture_output=True, text=True, env=full_env)


def test_perp_examples(capsys):
    assert cli.main(["perp", "x0^4+x1^4"]) == 0
    out = capsys.readouterr().out
    assert "{deg2:1, deg4:1}" in out and "HF 1,2,2,2,1" in out
    assert cli.main(["perp", "x0^3"]) == 0
    assert "HF 1,1,1,1" in capsys.readouterr().out
    assert cli.main(["perp", "x0^3*x1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["hilbert_function"] == [1, 2, 2, 2, 1]
    assert data["minimal_generators"] == {"2": 1, "4": 1}


@pytest.mark.parametrize("args,code", [
    (["fermat", "x0^4+x1^4+x2^4"], 0),
    (["fermat", "x0^3*x1"], 1),
    (["fermat", "x0^2*x1^2"], 1),
    (["fermat", "x0^4+x0*x1^3"], 1),
    (["perp", "x0^2+x1"], 2),
    (["perp", "x0^^2"], 2),
    (["fermat", "x0^2"], 2),
    (["fermat", "x0^3", "--seed", "-1"], 2),
    (["verify", "scroll-fermat", "--s", "2", "--a1", "6", "--a2", "1"], 2),
    (["nonsense"], 2),
    (["apolar", "x0^4+x1^4", "--points", "1,0;0,1"], 0),
    (["apolar", "x0^4+x1^4", "--points", "1,1;1,-1"], 1),
    (["apolar", "x0^4+x1^4", "--points", "1,0,0"], 2),
    (["dual", "d0*d1", "d0^4-d1^4"], 0),
    (["dual", "d0^2", "d0*d1", "d1^3"], 1),
    (["cut", "veronese"], 2),
])
def test_exit_codes(args, code, capsys):
    assert cli.main(args) == code


def test_fermat_witness_text(capsys):
    cli.main(["fermat", "x0^3*x1"])
    assert "CertifiedNot (non-reduced)" in capsys.readouterr().out
    cli.main(["fermat", "x0^2*x1^2"])
    assert "CertifiedNot (quadric-count)" in capsys.readouterr().out


def test_undetermined_exit(monkeypatch, capsys):
    def undetermined(f, seed=0):
        return FermatVerdict(UNDETERMINED, f, reason="genericity failure")
    monkeypatch.setattr(cli, "detect_fermat", undetermined)
    assert cli.main(["fermat", "x0^4+x1^4"]) == 3


def test_undetermined_cut_exit(monkeypatch):
    from apw import pipeline

    def exhausted(*a, **k):
        raise pipeline.UndeterminedError("no cut")
    monkeypatch.setattr(pipeline, "rational_cut", exhausted)
    assert cli.main(["cut", "scroll", "--a1", "1", "--a2", "1"]) == 3


def test_internal_error_exit(monkeypatch):
    def broken(f, seed=0):
        raise AssertionError("formula bug")
    monkeypatch.setattr(cli, "detect_fermat", broken)
    assert cli.main(["fermat", "x0^4+x1^4"]) == 4


def test_invariants(capsys):
    assert cli.main(["invariants", "--s", "2", "--a1", "1", "--a2", "1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"class": "4C0+4f", "genus": 9, "degree": 8, "N": 3, "smooth": True,
                    "very_ample": True, "C.f": 4}
    cli.main(["invariants", "--s", "3", "--a1", "1", "--a2", "1", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert (data["class"], data["genus"], data["degree"]) == ("5C0+5f", 16, 10)
    cli.main(["invariants", "--s", "2", "--a1", "6", "--a2", "1", "--format", "json"])
    assert json.loads(capsys.readouterr().out)["smooth"] is False


def test_scroll_and_cut(capsys):
    assert cli.main(["scroll", "--s", "2", "--a1", "1", "--a2", "1", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ideal_dims"] == [0, 1, 4] and all(data["normality"])
    assert cli.main(["cut", "veronese", "--m", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["length"] == 4 and len(data["points"]) == 4


def test_verify_scroll_json_validates(capsys):
    assert cli.main(["verify", "scroll-fermat", "--s", "2", "--a1", "1", "--a2", "1",
                     "--trials", "5", "--format", "json"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    for line in lines[:-1]:
        report = json.loads(line)
        jsonschema.validate(report, REPORT_SCHEMA)
        assert report["fermat_verdict"]["tag"] == "CertifiedFermat"
    summary = json.loads(lines[-1])
    jsonschema.validate(summary, SUMMARY_SCHEMA)
    assert summary["summary"]["passed"] == 5


def test_verify_plane_waring(capsys):
    assert cli.main(["verify", "plane-waring", "--m", "2", "--s", "2", "--trials", "3"]) == 0
    out = capsys.readouterr().out
    assert out.count("gamma length 4, apolar") == 3


def test_verify_negative_exit(monkeypatch):
    from apw import apolar, pipeline

    def never(f, seed=0):
        return apolar.FermatVerdict(apolar.CERTIFIED_NOT, f, witness="quadric-count")
    monkeypatch.setattr(pipeline, "detect_fermat", never)
    assert cli.main(["verify", "scroll-fermat", "--s", "2", "--a1", "1", "--a2", "1"]) == 1


def test_json_is_byte_stable():
    args = ["verify", "scroll-fermat", "--s", "2", "--a1", "2", "--a2", "1", "--trials", "2",
            "--seed", "18446744073709551615", "--format", "json"]
    a, b = run(args), run(args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_parallel_trials_keep_order():
    base = ["verify", "scroll-fermat", "--s", "2", "--a1", "1", "--a2", "1", "--trials", "3", "--format", "json"]
    assert run(base).stdout == run(base + ["--jobs", "3"]).stdout


def test_log_levels_go_to_stderr():
    quiet = run(["hf", "x0^4+x1^4"], env={"APW_LOG": "quiet"})
    debug = run(["verify", "scroll-fermat", "--s", "2", "--a1", "1", "--a2", "1"], env={"APW_LOG": "debug"})
    assert quiet.stderr == "" and quiet.stdout.strip() == "HF 1,2,2,2,1"
    assert debug.returncode == 0 and "trial 0" in debug.stdout
    assert "reduction HF [1, 2, 2, 2, 1]" in debug.stderr
