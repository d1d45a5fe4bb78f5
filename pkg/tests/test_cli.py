import json

import pytest

from salemk3.cli import run

LEHMER_JSON = ["1", "1", "0", "-1", "-1", "-1", "-1", "-1", "0", "1", "1"]
S4_JSON = ["1", "-1", "-1", "-1", "1"]
PAIR = {
    "lattice": {"rank": 2, "gram": [["2", "3"], ["3", "2"]]},
    "isometry": [["0", "-1"], ["1", "3"]],
}


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_certify_salem(tmp_path, capsys):
    path = write(tmp_path, "lehmer.json", LEHMER_JSON)
    assert run(["certify-salem", path]) == 0
    out = capsys.readouterr().out
    assert "degree 10" in out
    path = write(tmp_path, "phi5.json", ["1", "1", "1", "1", "1"])
    assert run(["certify-salem", path]) == 1
    assert "wrong_root_pattern" in capsys.readouterr().out


def test_realizable(tmp_path, capsys):
    path = write(tmp_path, "lehmer.json", LEHMER_JSON)
    assert run(["realizable", path, "--class", "enriques"]) == 0
    out = capsys.readouterr().out
    assert "clause (2)" in out
    path22 = write(tmp_path, "d22.json", ["1", "-2"] + ["0"] * 19 + ["-2", "1"])
    assert run(["realizable", path22, "--class", "k3"]) == 1


def test_realizable_bad_input(tmp_path, capsys):
    path = write(tmp_path, "bad.json", {"wat": 1})
    assert run(["realizable", path, "--class", "k3"]) == 2
    path = write(tmp_path, "notsalem.json", ["2", "0", "1"])
    assert run(["realizable", path, "--class", "k3"]) == 2


def test_positivity_exit_codes(tmp_path, capsys):
    pair = write(tmp_path, "pair.json", PAIR)
    assert run(["positivity", pair]) == 1
    twisted = dict(PAIR)
    twisted["lattice"] = {"rank": 2, "gram": [["22", "33"], ["33", "22"]]}
    pair2 = write(tmp_path, "pair2.json", twisted)
    assert run(["positivity", pair2]) == 0
    out = capsys.readouterr().out
    assert "determinant_bound" in out


def test_strict_unknown_field(tmp_path, capsys):
    bad = dict(PAIR)
    bad["comment"] = "sneaky"
    pair = write(tmp_path, "pair.json", bad)
    assert run(["positivity", pair]) == 2
    assert "comment" in capsys.readouterr().out


def test_twist_and_split_check(tmp_path, capsys):
    doc = dict(PAIR)
    doc["element"] = ["11"]
    path = write(tmp_path, "twist.json", doc)
    assert run(["--format", "json", "twist", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["determinant"] == "-605"
    doc["exponent"] = 1
    doc["prime"] = 11
    path = write(tmp_path, "tsc.json", doc)
    assert run(["twist-split-check", path]) == 0
    doc["prime"] = 5
    doc["element"] = ["5"]
    path = write(tmp_path, "tsc5.json", doc)
    assert run(["twist-split-check", path]) == 1


def test_power_integral(tmp_path, capsys):
    doc = {
        "lattice": {"rank": 2, "gram": [["-4", "0"], ["0", "5"]]},
        "isometry": [["3/2", "5/4"], ["1", "3/2"]],
    }
    path = write(tmp_path, "rat.json", doc)
    assert run(["--format", "json", "power-integral", path]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["power"] == 3


def test_lattice_constructors(capsys):
    for name in ("U", "E8", "3U", "U+E8", "3U+2E8"):
        assert run(["--format", "json", "lattice", name]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["rank"] == len(payload["gram"])


def test_json_determinism_and_roundtrip(tmp_path, capsys):
    pair = write(tmp_path, "pair.json", PAIR)
    assert run(["--format", "json", "positivity", pair]) == 1
    first = capsys.readouterr().out
    assert run(["--format", "json", "positivity", pair]) == 1
    second = capsys.readouterr().out
    assert first == second
    json.loads(first)  # emitted JSON re-parses


def test_build_and_verify_certificate(tmp_path, capsys):
    poly = write(tmp_path, "s4.json", S4_JSON)
    cert_path = str(tmp_path / "cert.json")
    assert run(["build-certificate", poly, "--output", cert_path]) == 0
    capsys.readouterr()
    assert run(["verify", cert_path]) == 0
    out = capsys.readouterr().out
    assert "verified" in out
    # tamper symmetrically: parse survives, isometry item fails
    doc = json.loads(open(cert_path).read())
    g = doc["lattice"]["gram"]
    g[0][1] = str(int(g[0][1]) + 2)
    g[1][0] = str(int(g[1][0]) + 2)
    tampered = write(tmp_path, "tampered.json", doc)
    assert run(["verify", tampered]) == 1
    assert "isometry" in capsys.readouterr().out


def test_malformed_json_diagnostic(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert run(["certify-salem", str(path)]) == 2
    assert "malformed JSON" in capsys.readouterr().out
