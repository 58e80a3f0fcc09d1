import io
import json

import pytest

from ris_d2d.cli import main, parse_values
from ris_d2d.config import KEYS, ConfigError, RunConfig


def run(argv):
    out = io.StringIO()
    code = main(argv, out)
    return code, out.getvalue()


def result_json(text):
    line = next(l for l in text.splitlines() if l.startswith("RESULT "))
    return json.loads(line[len("RESULT "):])


# --- configuration -----------------------------------------------------------

def test_defaults_in_si():
    p = RunConfig().params()
    assert p.total_time == pytest.approx(0.1)
    assert p.noise_power == pytest.approx(3.981071705534972e-13, rel=1e-12)
    assert p.min_harvest_energy == pytest.approx(1e-4)
    assert p.bandwidth == 1e6 and p.element_power == pytest.approx(1e-6)
    assert p.carrier_freq == 3e9


def test_every_key_documented():
    for k in KEYS:
        assert k.doc
    assert len({k.name for k in KEYS}) == len(KEYS)


def test_unknown_key_named():
    with pytest.raises(ConfigError, match="bogus"):
        RunConfig().update_from_text("bogus = 1\n")


def test_malformed_value_names_key():
    with pytest.raises(ConfigError, match="key N"):
        RunConfig().update_from_text("N=abc")


def test_comments_and_blank_lines():
    cfg = RunConfig().update_from_text("# header\n\nN = 70  # elements\nchan.mode = exact_sum\n")
    assert cfg["N"] == 70 and cfg["chan.mode"] == "exact_sum"


def test_choice_validation():
    with pytest.raises(ConfigError):
        RunConfig().set("solver.block_solver", "magic")


def test_invalid_params_become_config_error():
    cfg = RunConfig().update_from_text("zeta = 1.5")
    with pytest.raises(ConfigError):
        cfg.build()


def test_echo_round_trip():
    cfg = RunConfig().update_from_text("zeta = 0.1\n").apply_overrides(
        ["geo.ris_dist=0.3", "solver.init_tau_ms=12.5"])
    again = RunConfig().update_from_text(cfg.to_text())
    assert again.values == cfg.values
    assert again.build()[0] == cfg.build()[0]


# --- CLI ------------------------------------------------------------------------

def test_solve_seed_42():
    code, text = run(["solve", "--seed", "42"])
    assert code == 0
    assert "T_ms = 100.0" in text  # config echo
    res = result_json(text)
    assert res["status"] == "Converged"
    assert res["bits"] > 0 and 0 <= res["m"] <= 50
    assert "C5" in text


def test_solve_infeasible_exit_code():
    code, text = run(["solve", "--set", "zeta=0"])
    assert code == 2
    assert result_json(text)["status"] == "Infeasible"


def test_solve_maxiters_exit_code():
    code, _ = run(["solve", "--set", "solver.max_outer_iters=1"])
    assert code == 3


def test_parse_error_exit_code(capsys):
    code, _ = run(["solve", "--set", "N=abc"])
    assert code == 1
    assert "key N" in capsys.readouterr().err


def test_config_file(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# test\nN = 40\nchan.seed = 3\n", encoding="utf-8")
    code, text = run(["solve", "--config", str(path)])
    assert code == 0
    assert "N = 40" in text
    code, _ = run(["solve", "--config", str(tmp_path / "missing.cfg")])
    assert code == 1


def test_echoed_config_reproduces_result(tmp_path):
    code, text = run(["solve", "--seed", "7", "--set", "zeta=0.3"])
    echo = text.split("\n\n", 1)[0]
    path = tmp_path / "echo.cfg"
    path.write_text(echo + "\n", encoding="utf-8")
    code2, text2 = run(["solve", "--config", str(path)])
    assert result_json(text) == result_json(text2)


def test_verify_passes():
    code, text = run(["verify", "--seeds", "2"])
    assert code == 0
    assert "2/2 within 1%" in text


def test_verify_infeasible_is_pass():
    code, text = run(["verify", "--set", "zeta=0"])
    assert code == 0
    assert "Infeasible" in text


def test_verify_reports_sca_disagreements():
    code, text = run(["verify", "--set", "solver.block_solver=paper_sca"])
    assert code == 0
    assert "SCA/scan block disagreements:" in text


def test_sweep_outputs(tmp_path):
    out = tmp_path / "zeta.csv"
    code, text = run(["sweep", "--var", "zeta", "--values", "0.1:0.3:0.1", "--seeds", "2",
                      "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 3 * 2 * 2
    assert (tmp_path / "zeta.summary.csv").exists()
    assert "bits_mean" in text
    first = out.read_bytes()
    run(["sweep", "--var", "zeta", "--values", "0.1:0.3:0.1", "--seeds", "2", "--out", str(out)])
    assert out.read_bytes() == first


def test_sweep_no_baseline_and_io_error(tmp_path):
    out = tmp_path / "n.csv"
    code, _ = run(["sweep", "--var", "elements", "--values", "50,100", "--seeds", "1",
                   "--no-baseline", "--out", str(out)])
    assert code == 0
    assert len(out.read_text().splitlines()) == 3
    code, _ = run(["sweep", "--var", "zeta", "--values", "0.5", "--seeds", "1",
                   "--out", str(tmp_path / "nope" / "x.csv")])
    assert code == 4


def test_sweep_bad_values():
    code, _ = run(["sweep", "--var", "zeta", "--values", "0.5,0.3", "--seeds", "1"])
    assert code == 1


def test_trace(tmp_path):
    out = tmp_path / "trace.csv"
    code, text = run(["trace", "--seed", "1", "--out", str(out)])
    assert code == 0
    assert out.read_text().startswith("iteration,m,k,tau_ms,bits\n")


def test_parse_values():
    assert parse_values("0.1:0.9:0.1") == [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    assert parse_values("50,100,150") == [50.0, 100.0, 150.0]
    with pytest.raises(ConfigError):
        parse_values("1:2")
    with pytest.raises(ConfigError):
        parse_values("a,b")
