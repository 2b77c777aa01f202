import json
import math

import numpy as np
import pytest

from asymphoton.cli import main
from asymphoton.config import ConfigError, load_experiment, parse_float, parse_seed, parse_vector
from asymphoton.distribution import SystemId
from asymphoton.entangled import EntangledConfig, entangled_distribution
from asymphoton.feasibility import frontier_row
from asymphoton.oam import OamSystemConfig, joint_distribution_closed
from asymphoton.output import atomic_write_text, csv_text, fmt, json_text
from asymphoton.solver import solve_ratio
from asymphoton.sweep import sweep_rows


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def text_fields(out):
    return dict(line.split(" = ", 1) for line in out.strip().splitlines())


# --- output helpers -------------------------------------------------------------------


def test_fmt_round_trips_with_17_digits():
    for v in (0.1, 1 / 3, 2.0**-40, 123456789.123):
        assert float(fmt(v)) == v
        assert fmt(v) == "%.17g" % v
    assert fmt(math.inf) == "inf" and fmt(None) == "nan"


def test_json_text_uses_17_digits():
    text = json_text({"a": 0.1, "b": [1.0, 2], "c": "x"})
    assert '"a": 0.10000000000000001' in text
    assert '"b": [\n    1.0,\n    2\n  ]' in text
    assert json.loads(text)["a"] == 0.1


def test_atomic_write_replaces_whole_file(tmp_path):
    target = tmp_path / "out.csv"
    target.write_text("old contents that are longer\n")
    atomic_write_text(target, "new\n")
    assert target.read_text() == "new\n"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_csv_text_paths_agree():
    rows = np.array([[0.1, np.inf], [np.nan, 2.0]])
    assert csv_text(["x", "y"], rows) == csv_text(["x", "y"], rows.tolist())


# --- probs --------------------------------------------------------------------------


def test_probs_oam_corner(capsys):
    code, out, _ = run(capsys, "probs", "--system", "oam", "--alpha", ".7071", "--beta", ".7071",
                       "--a", "1,0", "--b", "0,1", "--phi", "0,0", "--psi", "0,0")
    assert code == 0
    fields = text_fields(out)
    assert float(fields["p21"]) == pytest.approx(1.0, abs=1e-12)
    assert float(fields["loss"]) == pytest.approx(0.0, abs=1e-12)


def test_probs_entangled_table_regime(capsys):
    code, out, _ = run(capsys, "probs", "--system", "entangled", "--ax", "0", "--bx", "1.5708", "--ay", "0", "--by", "1.5708")
    fields = text_fields(out)
    assert code == 0
    assert float(fields["p12"]) == pytest.approx(0.5, abs=1e-8)
    assert float(fields["p21"]) == pytest.approx(0.5, abs=1e-8)


def test_probs_output_equals_library_exactly(capsys):
    code, out, _ = run(capsys, "probs", "--system", "oam", "--theta", "0.3", "--a", "0.6,0.8", "--b", "0.8,0.6",
                       "--phi", "0.1,0.9", "--psi", "1.3,0.2", "--format", "json")
    assert code == 0
    got = json.loads(out)
    dist = joint_distribution_closed(OamSystemConfig.from_theta(0.3, (0.6, 0.8), (0.8, 0.6), (0.1, 0.9), (1.3, 0.2)))
    assert got["schema_version"] == 1
    assert got["p12"] == dist.p12 and got["p21"] == dist.p21 and got["loss"] == dist.loss
    assert got["p"] == dist.p.tolist()


def test_probs_csv_header(capsys):
    _, out, _ = run(capsys, "probs", "--system", "attenuation", "--a", "1,0", "--b", "0,1", "--dx2", "0.5", "--format", "csv")
    header, row = out.strip().splitlines()
    assert header == "p12,p21,loss,conflict,ratio"
    assert row.split(",")[:2] == ["0.25", "0.0625"]


def test_probs_bs_variant(capsys):
    code, out, _ = run(capsys, "probs", "--system", "bs", "--a", "0,1", "--b", "1,0", "--format", "json")
    assert code == 0 and json.loads(out)["p12"] == 1.0


def test_probs_arity_error_names_flag(capsys):
    code, _, err = run(capsys, "probs", "--system", "oam", "--theta", "0", "--a", "1", "--b", "0,1")
    assert code == 2
    assert "--b" in err or "--a" in err
    code, _, err = run(capsys, "probs", "--system", "oam", "--theta", "0", "--a", "1,0", "--b", "1")
    assert code == 2 and "--b" in err


@pytest.mark.parametrize("value", ["45deg", "1.2 rad", "abc", "nan"])
def test_probs_rejects_bad_angles(capsys, value):
    code, _, err = run(capsys, "probs", "--system", "oam", "--theta", value, "--a", "1,0", "--b", "0,1")
    assert code == 2 and "--theta" in err


def test_usage_errors_exit_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "frontier")[0] == 2


# --- sweep --------------------------------------------------------------------------


def test_sweep_file_matches_library_and_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run(capsys, "sweep", "--system", "oam", "--samples", "5000", "--seed", "42", "--out", str(path))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "p12,p21,loss,conflict,ratio"
    assert len(lines) == 5001
    rows = sweep_rows("oam", 5000, 42)
    assert lines[1:] == csv_text(["h"], rows).splitlines()[1:]


def test_sweep_parallel_file_identical(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "sweep", "--system", "entangled", "--samples", "9000", "--seed", "1", "--out", str(a))
    run(capsys, "sweep", "--system", "entangled", "--samples", "9000", "--seed", "1", "--workers", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--system", "attenuation", "--samples", "3", "--seed", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema_version"] == 1 and len(data["rows"]) == 3


def test_sweep_unwritable_path_is_runtime_failure(capsys, tmp_path):
    code, _, err = run(capsys, "sweep", "--system", "oam", "--samples", "10", "--out", str(tmp_path / "missing" / "x.csv"))
    assert code == 1 and err


@pytest.mark.parametrize("argv", [["--samples", "0"], ["--seed", "-3"], ["--seed", str(2**64)]])
def test_sweep_bad_counts(capsys, argv):
    assert run(capsys, "sweep", "--system", "oam", *argv)[0] == 2


# --- frontier -------------------------------------------------------------------------


def test_frontier_spot_values(capsys):
    _, out, _ = run(capsys, "frontier", "--system", "oam", "--x", "0.5")
    assert out.splitlines() == ["x,y_upper,y_lower", "0.5,1,1"]
    _, out, _ = run(capsys, "frontier", "--system", "attenuation", "--x", "0.6875")
    assert out.splitlines()[1] == "0.6875,4,0.25"
    _, out, _ = run(capsys, "frontier", "--system", "entangled", "--x", "0.25,0.5")
    assert out.splitlines()[1:] == ["0.25,2,0.5", "0.5,inf,0"]


def test_frontier_grid_matches_library(capsys):
    _, out, _ = run(capsys, "frontier", "--system", "oam", "--points", "11")
    lines = out.strip().splitlines()[1:]
    assert len(lines) == 11
    for line in lines:
        x, up, lo = line.split(",")
        exp_up, exp_lo = frontier_row("oam", float(x))
        assert up == fmt(exp_up) and lo == fmt(exp_lo)


def test_frontier_out_of_domain_lists_ranges(capsys):
    code, _, err = run(capsys, "frontier", "--system", "entangled", "--x", "0.7")
    assert code == 2
    for system in ("oam", "entangled", "attenuation"):
        assert system in err


# --- solve-ratio ---------------------------------------------------------------------------


def test_solve_ratio_examples(capsys):
    code, out, _ = run(capsys, "solve-ratio", "--system", "oam", "--r", "1")
    assert code == 0 and float(text_fields(out)["theta"]) == 0.0
    _, out, _ = run(capsys, "solve-ratio", "--system", "entangled", "--r", "2")
    fields = text_fields(out)
    assert float(fields["p21"]) == 0.5 and float(fields["p12"]) == pytest.approx(0.25, abs=1e-15)
    _, out, _ = run(capsys, "solve-ratio", "--system", "attenuation", "--r", "0.25")
    assert float(text_fields(out)["frontier_x"]) == 0.6875


def test_solve_ratio_json_equals_library(capsys):
    _, out, _ = run(capsys, "solve-ratio", "--system", "oam", "--r", "4", "--locus", "a1b2_zero", "--format", "json")
    data = json.loads(out)
    sol = solve_ratio("oam", 4.0, locus="a1b2_zero")
    assert data["p12"] == sol.achieved_p12 and data["p21"] == sol.achieved_p21
    assert data["details"]["theta"] == sol.details["theta"]


@pytest.mark.parametrize("r", ["0", "-2", "x"])
def test_solve_ratio_rejects_non_positive(capsys, r):
    assert run(capsys, "solve-ratio", "--system", "oam", "--r", r)[0] == 2


# --- bandit ----------------------------------------------------------------------------


def _bandit_config(tmp_path, trials=20000, extra=""):
    path = tmp_path / "exp.ini"
    path.write_text(
        f"[experiment]\nsystem = oam\nseed = 99\n\n[system]\ntarget_r = 4\n\n[bandit]\nrewards = 0.7, 0.2\ntrials = {trials}\n{extra}",
        encoding="utf-8",
    )
    return path


def test_bandit_report_is_deterministic(capsys, tmp_path):
    cfg = _bandit_config(tmp_path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "bandit", "--config", str(cfg), "--out", str(a))[0] == 0
    assert run(capsys, "bandit", "--config", str(cfg), "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["schema_version"] == 1 and data["rng_seed"] == 99 and data["generator"] == "numpy.random.PCG64"
    assert list(data)[:3] == ["schema_version", "system", "parameters"]


def test_bandit_flags_override_file(capsys, tmp_path):
    cfg = _bandit_config(tmp_path)
    _, out, _ = run(capsys, "bandit", "--config", str(cfg), "--seed", "5", "--trials", "100")
    data = json.loads(out)
    assert data["rng_seed"] == 5 and data["trials"] == 100


def test_bandit_realizes_ratio(capsys, tmp_path):
    _, out, _ = run(capsys, "bandit", "--config", str(_bandit_config(tmp_path, trials=10**6)))
    assert 3.6 <= json.loads(out)["empirical_ratio"] <= 4.4


def test_bandit_usage_errors(capsys, tmp_path):
    assert run(capsys, "bandit", "--config", str(_bandit_config(tmp_path, trials=0)))[0] == 2
    assert run(capsys, "bandit", "--config", str(_bandit_config(tmp_path)), "--format", "csv")[0] == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[experiment]\nsystem = oam\n[bogus]\nx = 1\n")
    code, _, err = run(capsys, "bandit", "--config", str(bad))
    assert code == 2 and "[bogus]" in err
    assert run(capsys, "bandit", "--config", str(tmp_path / "absent.ini"))[0] == 2


# --- config parsing ----------------------------------------------------------------------------


def test_parsers():
    assert parse_vector("0.6, 0.8", "--a") == (0.6, 0.8)
    with pytest.raises(ConfigError, match="--a"):
        parse_vector("1", "--a", length=2)
    with pytest.raises(ConfigError):
        parse_float("30deg", "--theta", angle=True)
    assert parse_seed(str(2**64 - 1)) == 2**64 - 1
    with pytest.raises(ConfigError):
        parse_seed("1.5")


def test_load_experiment_with_overrides(tmp_path):
    path = tmp_path / "e.ini"
    path.write_text("[experiment]\nsystem = entangled\nseed = 3\n[system]\nalpha_y = 1.0471975511965976\n")
    exp = load_experiment(path, {("experiment", "seed"): "8"})
    assert exp.seed == 8 and exp.system is SystemId.ENTANGLED
    cfg = exp.system_config()
    assert isinstance(cfg, EntangledConfig)
    assert entangled_distribution(cfg).p21 == pytest.approx(0.125, abs=1e-15)


def test_unknown_keys_rejected(tmp_path):
    path = tmp_path / "e.ini"
    path.write_text("[experiment]\nsystem = oam\ncolour = red\n")
    with pytest.raises(ConfigError, match="colour"):
        load_experiment(path)
