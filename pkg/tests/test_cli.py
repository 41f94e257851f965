import io

import numpy as np
import pytest

from swmoment.cli import (
    ConfigError,
    RunManifest,
    bench_command,
    constants_command,
    eigs_command,
    main,
    parse_config,
    run_command,
    table_command,
    write_config,
)
from swmoment.models import ModelSpec
from swmoment.solver import SolverError

BASE_CFG = """\
# smoke configuration
scenario = smooth_sine
model = swe
n = 0
epsilon = 0.1
n_x = 16
t_end = 0.05
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_parse_defaults(tmp_path):
    m = parse_config(write(tmp_path, BASE_CFG))
    assert m == RunManifest(scenario="smooth_sine", model="swe", n=0, epsilon=0.1,
                            n_x=16, t_end=0.05)
    assert m.g == 1.0 and m.cfl == 0.7 and m.lambda0 == 1.0 and m.nu0 == 1.0
    assert m.emit_snapshots is False and m.benchmark_repeats == 1


def test_parse_rejects_unknown_key(tmp_path):
    path = write(tmp_path, BASE_CFG + "viscosity = 3\n")
    with pytest.raises(ConfigError, match=r"run\.cfg:8: unknown key 'viscosity'"):
        parse_config(path)


def test_parse_rejects_bad_value(tmp_path):
    path = write(tmp_path, BASE_CFG.replace("n_x = 16", "n_x = many"))
    with pytest.raises(ConfigError, match=r":6: invalid value 'many' for n_x"):
        parse_config(path)


def test_parse_rejects_duplicate_key(tmp_path):
    path = write(tmp_path, BASE_CFG + "model = swme\n")
    with pytest.raises(ConfigError, match="duplicate key 'model'"):
        parse_config(path)


def test_parse_rejects_bad_cfl(tmp_path):
    path = write(tmp_path, BASE_CFG + "cfl = 1.5\n")
    with pytest.raises(ConfigError, match=r"cfl must lie in \(0,1\]"):
        parse_config(path)


def test_parse_empty_file_lists_required_keys(tmp_path):
    path = write(tmp_path, "# nothing here\n")
    with pytest.raises(ConfigError, match="missing required keys: scenario, model, n, epsilon, n_x, t_end"):
        parse_config(path)


def test_parse_model_order_consistency(tmp_path):
    path = write(tmp_path, BASE_CFG.replace("model = swe", "model = rswme"))
    with pytest.raises(ConfigError, match="requires n >= 1"):
        parse_config(path)
    path = write(tmp_path, BASE_CFG.replace("n = 0", "n = 2"))
    with pytest.raises(ConfigError, match="swe requires n = 0"):
        parse_config(path)


def test_parse_snapshot_times(tmp_path):
    path = write(tmp_path, BASE_CFG + "emit_snapshots = 0.01,0.05\n")
    assert parse_config(path).emit_snapshots == (0.01, 0.05)
    path = write(tmp_path, BASE_CFG + "emit_snapshots = true\n")
    assert parse_config(path).emit_snapshots is True


def test_config_roundtrip(tmp_path):
    manifest = RunManifest(scenario="sqrt_profile", model="rswme", n=4, epsilon=0.5,
                           n_x=32, t_end=0.25, lambda0=1.5, nu0=0.75, g=9.81,
                           cfl=0.9, output_dir="out", emit_snapshots=(0.1, 0.25),
                           benchmark_repeats=2)
    path = write_config(manifest, tmp_path / "roundtrip.cfg")
    assert parse_config(path) == manifest


def test_run_command_swe_columns(tmp_path):
    m = parse_config(write(tmp_path, BASE_CFG + f"output_dir = {tmp_path / 'out'}\n"))
    assert run_command(m) == 0
    lines = (tmp_path / "out" / "solution.csv").read_text().splitlines()
    assert lines[0] == "x,h,u_m"
    assert len(lines) == 17
    meta = (tmp_path / "out" / "meta.csv").read_text().splitlines()
    assert meta[0] == "wall_time_min,wall_time_median,step_count,dt_min,dt_max,dt_mean,final_time"


def test_run_command_reduced_reconstruction_columns(tmp_path):
    cfg = BASE_CFG.replace("model = swe", "model = rswme").replace("n = 0", "n = 4")
    m = parse_config(write(tmp_path, cfg + f"output_dir = {tmp_path / 'out'}\n"))
    assert run_command(m) == 0
    lines = (tmp_path / "out" / "solution.csv").read_text().splitlines()
    assert lines[0] == "x,h,u_m,alpha_1,alpha_2,alpha_3,alpha_4,dx_h4"


def test_run_command_moment_columns(tmp_path):
    cfg = BASE_CFG.replace("model = swe", "model = swme").replace("n = 0", "n = 2")
    m = parse_config(write(tmp_path, cfg + f"output_dir = {tmp_path / 'out'}\n"))
    assert run_command(m) == 0
    lines = (tmp_path / "out" / "solution.csv").read_text().splitlines()
    assert lines[0] == "x,h,u_m,alpha_1,alpha_2"


def test_run_command_snapshots(tmp_path):
    cfg = BASE_CFG + f"output_dir = {tmp_path / 'out'}\nemit_snapshots = 0.02,0.05\n"
    m = parse_config(write(tmp_path, cfg))
    assert run_command(m) == 0
    assert (tmp_path / "out" / "solution_t0.02.csv").exists()
    assert (tmp_path / "out" / "solution_t0.05.csv").exists()


def test_run_command_is_deterministic(tmp_path):
    cfg = BASE_CFG + f"output_dir = {tmp_path / 'out'}\n"
    m = parse_config(write(tmp_path, cfg))
    run_command(m)
    first = (tmp_path / "out" / "solution.csv").read_bytes()
    run_command(m)
    assert (tmp_path / "out" / "solution.csv").read_bytes() == first


def test_output_root_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SWMOMENT_OUTPUT_ROOT", str(tmp_path / "root"))
    m = parse_config(write(tmp_path, BASE_CFG + "output_dir = inner\n"))
    assert run_command(m) == 0
    assert (tmp_path / "root" / "inner" / "solution.csv").exists()


def test_run_command_reports_solver_failure(tmp_path, monkeypatch, capsys):
    import swmoment.cli as cli_module

    def boom(manifest):
        raise SolverError("step 3 (t=0.1): transport step produced an invalid state")

    monkeypatch.setattr(cli_module, "execute_manifest", boom)
    m = parse_config(write(tmp_path, BASE_CFG + f"output_dir = {tmp_path / 'out'}\n"))
    assert run_command(m) == 1
    assert "invalid state" in capsys.readouterr().err


def test_benchmark_repeats_in_meta(tmp_path):
    cfg = BASE_CFG + f"output_dir = {tmp_path / 'out'}\nbenchmark_repeats = 3\n"
    m = parse_config(write(tmp_path, cfg))
    assert run_command(m) == 0
    header, row = (tmp_path / "out" / "meta.csv").read_text().splitlines()
    values = dict(zip(header.split(","), (float(v) for v in row.split(","))))
    assert values["wall_time_min"] <= values["wall_time_median"]


def test_table_command_layout(tmp_path):
    base = RunManifest(scenario="smooth_sine", model="swme", n=1, epsilon=1.0,
                       n_x=32, t_end=0.2, output_dir=str(tmp_path / "table"))
    path, errors = table_command(base, epsilons=[0.1, 1.0])
    lines = path.read_text().splitlines()
    assert lines[0] == "model,variable,eps=0.1,eps=1"
    assert [line.split(",")[0] for line in lines[1:]] == ["swe", "rswme", "swe", "rswme"]
    assert set(errors) == {(m, v, e) for m in ("swe", "rswme") for v in ("h", "u_m") for e in (0.1, 1.0)}
    assert all(v >= 0.0 for v in errors.values())


def test_table_command_with_regularised_row(tmp_path):
    base = RunManifest(scenario="smooth_sine", model="swme", n=2, epsilon=1.0,
                       n_x=32, t_end=0.1, output_dir=str(tmp_path / "table6"))
    path, errors = table_command(base, epsilons=[1.0], models=["swe", "rswme", "hrswme"])
    lines = path.read_text().splitlines()
    assert [line.split(",")[0] for line in lines[1:]] == ["swe", "rswme", "hrswme", "swe", "rswme", "hrswme"]
    assert ("hrswme", "u_m", 1.0) in errors


def test_bench_command(tmp_path):
    base = RunManifest(scenario="sqrt_profile", model="swme", n=2, epsilon=0.5,
                       n_x=32, t_end=0.05, output_dir=str(tmp_path / "bench"))
    path, timings = bench_command(base, n_list=[1, 2])
    lines = path.read_text().splitlines()
    assert lines[0] == "model,n,wall_time_s,steps"
    assert set(timings) == {("swe", 0), ("swme", 1), ("rswme", 1), ("swme", 2), ("rswme", 2)}
    assert all(wall > 0 and steps > 0 for wall, steps in timings.values())


def test_constants_command_output():
    buffer = io.StringIO()
    constants_command(2, stream=buffer)
    text = buffer.getvalue()
    assert "Gamma = 1/45" in text
    assert "Btilde_2 = 1/12" in text
    assert "Lambda = 4/45" in text


def test_eigs_command_reduced():
    buffer = io.StringIO()
    eigs_command(ModelSpec("rswme", 1, epsilon=0.5), h=1.0, um=0.0, stream=buffer)
    text = buffer.getvalue()
    assert "verdict: hyperbolic" in text
    assert "hyperbolicity threshold" in text
    buffer = io.StringIO()
    h_bad = 2.0 * 4 * np.sqrt(3) / 0.5
    eigs_command(ModelSpec("rswme", 1, epsilon=0.5), h=h_bad, um=0.0, stream=buffer)
    assert "not hyperbolic" in buffer.getvalue()


def test_eigs_command_moment_system():
    buffer = io.StringIO()
    eigs_command(ModelSpec("swme", 1), h=1.0, um=0.25, alphas=[-0.25], stream=buffer)
    assert "verdict: hyperbolic" in buffer.getvalue()
    with pytest.raises(ValueError, match="expected 1 moment values"):
        eigs_command(ModelSpec("swme", 1), h=1.0, um=0.0, alphas=[0.1, 0.2])


def test_main_run_and_errors(tmp_path, capsys):
    cfg = write(tmp_path, BASE_CFG + f"output_dir = {tmp_path / 'out'}\n")
    assert main(["run", str(cfg)]) == 0
    assert main(["constants", "--n", "3"]) == 0
    assert "Omega = 1/3" in capsys.readouterr().out
    assert main(["eigs", "--model", "swe", "--h", "1.0", "--um", "0.0"]) == 0
    capsys.readouterr()
    bad = write(tmp_path, BASE_CFG + "cfl = 7\n", name="bad.cfg")
    assert main(["run", str(bad)]) == 2
    assert "cfl" in capsys.readouterr().err


def test_main_table_requires_epsilons_for_single_config(tmp_path, capsys):
    cfg = write(tmp_path, BASE_CFG)
    assert main(["table", str(cfg)]) == 2
    assert "--epsilons" in capsys.readouterr().err


def test_main_table_directory_mode(tmp_path):
    sweep = tmp_path / "sweep"
    sweep.mkdir()
    common = BASE_CFG.replace("n_x = 16", "n_x = 32").replace("t_end = 0.05", "t_end = 0.1")
    write(sweep, common.replace("model = swe\nn = 0", "model = swme\nn = 1"), name="ref.cfg")
    write(sweep, common, name="swe.cfg")
    out_dir = tmp_path / "tbl"
    for p in sweep.glob("*.cfg"):
        p.write_text(p.read_text() + f"output_dir = {out_dir}\n")
    assert main(["table", str(sweep)]) == 0
    assert (out_dir / "table.csv").exists()
