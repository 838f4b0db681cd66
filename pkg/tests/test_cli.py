import json
from pathlib import Path

import pytest

from phipoisson.cli import ConfigError, build_parser, load_config, main

GOLDEN = Path(__file__).parent / "golden" / "default_report.json"


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_roots_command(capsys):
    code, out = run(["roots", "E8", "--node", "4"], capsys)
    assert code == 0
    assert "roots 240" in out.out and "node 4 coefficient 6" in out.out


def test_roots_bad_type(capsys):
    code, out = run(["roots", "E9"], capsys)
    assert code == 2 and "error" in out.err


def test_verify_single_instance_passes(capsys):
    code, out = run(["verify", "--instance", "G2:1:3"], capsys)
    assert code == 0
    assert "failed 0" in out.out


def test_perturbation_makes_verify_fail(capsys):
    code, out = run(["verify", "--instance", "G2:1:3", "--perturb", "0.1", "--format", "json"], capsys)
    assert code == 1
    rep = json.loads(out.out)
    mc = [c for s in rep["instances"][0]["solutions"] for c in s["checks"] if c["name"] == "mcybe"]
    assert mc and all(c["status"] == "fail" and c["value"] > 1e-2 for c in mc)


def test_empty_instance_list_is_usage_error(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"instances": []}')
    code, out = run(["verify", "--config", str(cfg)], capsys)
    assert code == 2 and "no instances" in out.err


@pytest.mark.parametrize("argv", [
    ["verify", "--instance", "A2:1:2"],
    ["verify", "--instance", "G2:1"],
    ["verify", "--instance", "G2:3:2"],
    ["verify", "--instance", "G2:1:3", "--accept", "1e-3", "--reject", "1e-6"],
])
def test_bad_settings_are_usage_errors(argv, capsys):
    code, _ = run(argv, capsys)
    assert code == 2


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"instancez": ["G2:1:3"]}')
    code, _ = run(["verify", "--config", str(cfg)], capsys)
    assert code == 2


def test_precedence_env_config_flags(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"instances": [["F4", 3, 4]], "tolerances": {"accept": 1e-10},
                               "seed": 5}))
    env = {"PHIPOISSON_ACCEPT": "1e-11", "PHIPOISSON_REJECT": "1e-5"}
    args = build_parser().parse_args(["verify", "--config", str(cfg), "--seed", "9"])
    rc = load_config(args, environ=env)
    assert rc.accept == 1e-10          # config beats environment
    assert rc.reject == 1e-5           # environment beats default
    assert rc.seed == 9                # flag beats config
    assert [s.label() for s in rc.instances] == ["F4:3:4"]


def test_bad_env_value():
    args = build_parser().parse_args(["verify"])
    with pytest.raises(ConfigError):
        load_config(args, environ={"PHIPOISSON_ACCEPT": "tiny"})


def test_selftest_small_and_mutation(capsys):
    code, out = run(["selftest", "--max-rank", "2"], capsys)
    assert code == 0 and "selftest passed" in out.out
    code, out = run(["selftest", "--max-rank", "2", "--inject-sign-error"], capsys)
    assert code == 1 and "FAIL" in out.out


def test_json_report_matches_golden(tmp_path):
    out = tmp_path / "a.json"
    assert main(["verify", "--format", "json", "--output", str(out)]) == 0
    assert out.read_bytes() == GOLDEN.read_bytes()
