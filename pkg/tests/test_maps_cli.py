"""Map-file wire format and the command-line front end."""

import json

import pytest

from hermsym.cli import dump_json, main
from hermsym.maps import map_to_json, identity_map, parse_map_file
from hermsym.spaces import build_space


@pytest.fixture(scope="module")
def disc():
    return build_space("typeI:1,1")


def identity_payload(space):
    return {"maps": [map_to_json(identity_map(space))]}


def test_parse_map_file(disc):
    mf = parse_map_file(disc, identity_payload(disc))
    assert len(mf.maps) == 1 and mf.lambdas is None
    payload = identity_payload(disc)
    payload["lambdas"] = ["1/2"]
    mf = parse_map_file(disc, payload)
    assert mf.lambdas == [0.5]
    assert str(mf.lambdas_exact[0]) == "1/2"
    payload["lambdas"] = [0.25]
    mf = parse_map_file(disc, payload)
    assert mf.lambdas_exact is None


def test_parse_map_file_errors(disc):
    with pytest.raises(ValueError, match="components"):
        parse_map_file(disc, {"maps": [[]]})
    payload = identity_payload(disc)
    payload["lambdas"] = ["1/2", "1/2"]
    with pytest.raises(ValueError, match="count"):
        parse_map_file(disc, payload)
    payload = identity_payload(disc)
    payload["lambdas"] = ["-1/2"]
    with pytest.raises(ValueError, match="positive"):
        parse_map_file(disc, payload)


def test_dump_json_determinism():
    obj = {"b": 1.0 / 3.0, "a": [1, 2.5, "x"], "c": {"y": None, "z": True}}
    s1 = dump_json(obj)
    s2 = dump_json({"c": {"z": True, "y": None}, "a": [1, 2.5, "x"], "b": 1.0 / 3.0})
    assert s1 == s2
    assert "0.33333333333333331" in s1


def run_cli(capsys, args):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_cli_describe(capsys):
    code, out = run_cli(capsys, ["describe", "--space", "typeI:2,2"])
    assert code == 0
    obj = json.loads(out)
    assert obj["n"] == 4 and obj["N"] == 5 and obj["lambda"] == 4


def test_cli_rho(capsys):
    code, out = run_cli(capsys, ["rho", "--space", "typeIV:3"])
    assert code == 0
    obj = json.loads(out)
    assert len(obj["rho"]["terms"]) == 13


def test_cli_einstein(capsys):
    code, out = run_cli(capsys, ["einstein", "--space", "typeIV:3", "--seed", "7"])
    assert code == 0
    obj = json.loads(out)
    assert obj["lambda"] == 3 and obj["einstein_residual"] < 1e-8


def test_cli_seed_required(capsys):
    code = main(["einstein", "--space", "typeIV:3"])
    assert code == 2


def test_cli_env_seed(capsys, monkeypatch):
    monkeypatch.setenv("HSS_SEED", "11")
    code, out = run_cli(capsys, ["einstein", "--space", "typeIV:3"])
    assert code == 0
    assert json.loads(out)["config"]["seed"] == 11


def test_cli_determinism(capsys):
    _, out1 = run_cli(capsys, ["hyp2", "--space", "typeIII:2", "--seed", "5"])
    _, out2 = run_cli(capsys, ["hyp2", "--space", "typeIII:2", "--seed", "5"])
    assert out1 == out2


def test_cli_hyp_commands(capsys):
    code, out = run_cli(capsys, ["hyp1", "--space", "typeIII:2", "--seed", "3"])
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] and obj["witness"]["betas"][0] == [0, 0]
    code, out = run_cli(capsys, ["hyp2", "--space", "typeII:4", "--seed", "3"])
    assert code == 0
    assert json.loads(out)["witness"]["transversality_rank"] == 2
    code, out = run_cli(capsys, ["hyp3", "--space", "typeIV:3", "--seed", "3"])
    assert code == 0
    obj = json.loads(out)
    assert obj["evidence"] == "exact"
    assert obj["witness"]["oracle"]["status"] == "irreducible_certified"
    code, out = run_cli(capsys, ["hyp3", "--space", "e16", "--seed", "3"])
    assert code == 0
    assert json.loads(out)["evidence"] == "support-only"


def test_cli_volume_and_isometry(tmp_path, capsys, disc):
    path = tmp_path / "id.json"
    payload = identity_payload(disc)
    payload["lambdas"] = ["1"]
    path.write_text(json.dumps(payload))
    code, out = run_cli(capsys, ["volume-check", "--space", "typeI:1,1",
                                 "--maps", str(path), "--seed", "2"])
    assert code == 0
    assert json.loads(out)["residual"] < 1e-12
    code, out = run_cli(capsys, ["isometry-check", "--space", "typeI:1,1",
                                 "--maps", str(path), "--seed", "2"])
    assert code == 0


def test_cli_malformed_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{ not json ]")
    code = main(["volume-check", "--space", "typeI:1,1",
                 "--maps", str(path), "--seed", "2"])
    assert code == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_cli_table_output(capsys):
    code, out = run_cli(capsys, ["describe", "--space", "typeIV:3",
                                 "--output", "table"])
    assert code == 0
    assert "kind: typeIV" in out


def test_cli_usage_error(capsys):
    assert main(["describe", "--space", "typeV:9"]) == 2
    assert main(["nonsense"]) == 2


def test_cli_hyp1_determinism(capsys):
    _, out1 = run_cli(capsys, ["hyp1", "--space", "typeIV:3", "--seed", "9"])
    _, out2 = run_cli(capsys, ["hyp1", "--space", "typeIV:3", "--seed", "9"])
    assert out1 == out2
    import json as _json
    assert _json.loads(out1)["witness"] is not None


def test_cli_einstein_exceptional(capsys):
    code, out = run_cli(capsys, ["einstein", "--space", "e16", "--seed", "4",
                                 "--samples", "25"])
    assert code == 0
    obj = json.loads(out)
    assert obj["lambda"] == 12 and obj["einstein_residual"] < 1e-8


def test_cli_cross_process_determinism():
    import subprocess, sys
    cmd = [sys.executable, "-m", "hermsym.cli", "einstein",
           "--space", "typeIV:3", "--seed", "7"]
    out1 = subprocess.run(cmd, capture_output=True, check=True).stdout
    out2 = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert out1 == out2 and out1


def test_cli_map_with_vanishing_denominator(tmp_path, capsys, disc):
    payload = identity_payload(disc)
    payload["maps"][0][0]["den"] = {
        "vars": ["z1_1"], "terms": [{"exp": [1], "re": "1", "im": "0"}]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    code = main(["volume-check", "--space", "typeI:1,1",
                 "--maps", str(path), "--seed", "2"])
    assert code == 2
    assert "denominator" in capsys.readouterr().err
