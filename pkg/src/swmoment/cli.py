"""Config parsing, run orchestration, CSV emission, and report generation.

Entry point ``swmoment`` with subcommands::

    swmoment run <cfg>                       one simulation -> solution.csv, meta.csv
    swmoment table <cfg|dir> [--epsilons ..] error table against the moment reference
    swmoment bench <cfg> --n 2,4,6           runtime comparison table
    swmoment constants --n N                 closure constants, exact and decimal
    swmoment eigs --model m --n N --h H --um U   eigenvalues + hyperbolicity verdict

Config files are line-oriented ``key = value`` text; ``#`` starts a comment.
The output root can be redirected with the SWMOMENT_OUTPUT_ROOT env var.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .closure import constants_for_order, reconstruct_moments
from .models import (
    FAMILIES,
    REDUCED,
    ModelSpec,
    default_source_mode,
    hyperbolicity_threshold,
    rswme_eigenvalues,
    system_matrix,
)
from .scenarios import dx_h4, init_scenario, relative_l1, scenario_by_name
from .solver import Grid1D, SimulationResult, SolverConfig, SolverError, run


class ConfigError(ValueError):
    """Malformed run configuration."""


@dataclass(frozen=True)
class RunManifest:
    scenario: str
    model: str
    n: int
    epsilon: float
    n_x: int
    t_end: float
    lambda0: float = 1.0
    nu0: float = 1.0
    g: float = 1.0
    cfl: float = 0.7
    output_dir: str = "."
    emit_snapshots: bool | tuple[float, ...] = False
    benchmark_repeats: int = 1

    def __post_init__(self):
        if self.model not in FAMILIES:
            raise ConfigError(f"unknown model {self.model!r}; expected one of {FAMILIES}")
        if self.n < 0:
            raise ConfigError(f"n must be nonnegative, got {self.n}")
        if self.model == "swe" and self.n != 0:
            raise ConfigError("model swe requires n = 0")
        if self.model != "swe" and self.n < 1:
            raise ConfigError(f"model {self.model} requires n >= 1")
        for name in ("epsilon", "lambda0", "nu0", "g"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0,1], got {self.cfl}")
        if self.n_x < 4:
            raise ConfigError(f"n_x must be at least 4, got {self.n_x}")
        if self.t_end < 0:
            raise ConfigError(f"t_end must be nonnegative, got {self.t_end}")
        if self.benchmark_repeats < 1:
            raise ConfigError(f"benchmark_repeats must be at least 1, got {self.benchmark_repeats}")


_REQUIRED = ("scenario", "model", "n", "epsilon", "n_x", "t_end")
_PARSERS = {
    "scenario": str,
    "model": str,
    "n": int,
    "epsilon": float,
    "n_x": int,
    "t_end": float,
    "lambda0": float,
    "nu0": float,
    "g": float,
    "cfl": float,
    "output_dir": str,
    "benchmark_repeats": int,
}


def _parse_snapshots(raw: str):
    low = raw.strip().lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off", ""):
        return False
    return tuple(float(tok) for tok in raw.split(","))


def parse_config(path: str | Path) -> RunManifest:
    """Read a key=value config file into a manifest, rejecting unknown keys."""
    path = Path(path)
    values: dict[str, object] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = (part.strip() for part in line.partition("="))
        if key == "emit_snapshots":
            try:
                values[key] = _parse_snapshots(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: emit_snapshots takes a boolean or a comma list of times") from None
            continue
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: invalid value {value!r} for {key}") from None
    missing = [key for key in _REQUIRED if key not in values]
    if missing:
        raise ConfigError(f"{path}: missing required keys: {', '.join(missing)}")
    try:
        return RunManifest(**values)  # type: ignore[arg-type]
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def write_config(manifest: RunManifest, path: str | Path) -> Path:
    path = Path(path)
    lines = []
    for f in fields(manifest):
        value = getattr(manifest, f.name)
        if f.name == "emit_snapshots":
            if isinstance(value, bool):
                value = "true" if value else "false"
            else:
                value = ",".join(_fmt(t) for t in value)
        elif isinstance(value, float):
            value = _fmt(value)
        lines.append(f"{f.name} = {value}")
    path.write_text("\n".join(lines) + "\n")
    return path


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def manifest_model_spec(m: RunManifest) -> ModelSpec:
    return ModelSpec(family=m.model, order=m.n, g=m.g, epsilon=m.epsilon,
                     lambda0=m.lambda0, nu0=m.nu0)


def manifest_grid(m: RunManifest) -> Grid1D:
    return Grid1D(n_cells=m.n_x)


def _output_dir(m: RunManifest) -> Path:
    root = os.environ.get("SWMOMENT_OUTPUT_ROOT", "")
    out = Path(root) / m.output_dir if root else Path(m.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def execute_manifest(m: RunManifest) -> SimulationResult:
    spec = manifest_model_spec(m)
    grid = manifest_grid(m)
    config = SolverConfig(t_end=m.t_end, cfl=m.cfl, source_mode=default_source_mode(spec))
    initial = init_scenario(scenario_by_name(m.scenario), spec, grid)
    snap = list(m.emit_snapshots) if isinstance(m.emit_snapshots, tuple) else (
        [m.t_end] if m.emit_snapshots else [])
    return run(spec, grid, config, initial, snapshot_times=snap)


def _solution_table(m: RunManifest, grid: Grid1D, states: np.ndarray):
    """(header, columns) for a solution CSV in the documented schema."""
    spec = manifest_model_spec(m)
    x = grid.cell_centers()
    h = states[:, 0]
    u_m = states[:, 1] / h
    header = ["x", "h", "u_m"]
    cols = [x, h, u_m]
    if spec.family == "swme":
        header += [f"alpha_{j}" for j in range(1, m.n + 1)]
        cols += [states[:, 1 + j] / h for j in range(1, m.n + 1)]
    elif spec.family in REDUCED:
        grad = dx_h4(h, grid.dx)
        alphas = reconstruct_moments(constants_for_order(m.n), h, u_m, grad, spec)
        header += [f"alpha_{j}" for j in range(1, m.n + 1)]
        cols += [alphas[:, j] for j in range(m.n)]
        header.append("dx_h4")
        cols.append(grad)
    return header, cols


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = np.column_stack(columns)
    with path.open("w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def run_command(m: RunManifest) -> int:
    """Run one manifest and emit solution.csv / meta.csv (plus snapshots)."""
    out = _output_dir(m)
    grid = manifest_grid(m)
    try:
        results = [execute_manifest(m) for _ in range(m.benchmark_repeats)]
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    result = results[-1]
    header, cols = _solution_table(m, grid, result.states)
    _write_csv(out / "solution.csv", header, cols)
    for t_snap, snap_states in result.snapshots:
        s_header, s_cols = _solution_table(m, grid, snap_states)
        _write_csv(out / f"solution_t{t_snap:g}.csv", s_header, s_cols)
    walls = [r.wall_time for r in results]
    meta_header = ["wall_time_min", "wall_time_median", "step_count",
                   "dt_min", "dt_max", "dt_mean", "final_time"]
    meta_row = np.array([min(walls), statistics.median(walls), result.step_count,
                         result.dt_min, result.dt_max, result.dt_mean, result.final_time])
    _write_csv(out / "meta.csv", meta_header, [np.atleast_1d(v) for v in meta_row])
    return 0


def table_command(base: RunManifest, epsilons: list[float],
                  models: list[str] | None = None) -> tuple[Path, dict]:
    """Relative-L1 error table with the moment system as reference per epsilon.

    Returns the CSV path and the error map {(model, variable, eps): error}.
    """
    models = models or ["swe", "rswme"]
    if base.model != "swme":
        base = replace(base, model="swme", n=max(base.n, 1))
    out = _output_dir(base)
    errors: dict[tuple[str, str, float], float] = {}
    for eps in epsilons:
        ref_m = replace(base, epsilon=eps, output_dir=str(Path(base.output_dir) / f"swme_eps{eps:g}"))
        ref = execute_manifest(ref_m)
        ref_h = ref.states[:, 0]
        ref_u = ref.states[:, 1] / ref_h
        for model in models:
            n = 0 if model == "swe" else base.n
            cand_m = replace(base, model=model, n=n, epsilon=eps,
                             output_dir=str(Path(base.output_dir) / f"{model}_eps{eps:g}"))
            cand = execute_manifest(cand_m)
            h = cand.states[:, 0]
            errors[(model, "h", eps)] = relative_l1(h, ref_h)
            errors[(model, "u_m", eps)] = relative_l1(cand.states[:, 1] / h, ref_u)
            header, cols = _solution_table(cand_m, manifest_grid(cand_m), cand.states)
            _write_csv(_output_dir(cand_m) / "solution.csv", header, cols)
        header, cols = _solution_table(ref_m, manifest_grid(ref_m), ref.states)
        _write_csv(_output_dir(ref_m) / "solution.csv", header, cols)

    path = out / "table.csv"
    with path.open("w") as fh:
        fh.write("model,variable," + ",".join(f"eps={e:g}" for e in epsilons) + "\n")
        for variable in ("h", "u_m"):
            for model in models:
                row = ",".join(_fmt(errors[(model, variable, e)]) for e in epsilons)
                fh.write(f"{model},{variable},{row}\n")
    return path, errors


def bench_command(base: RunManifest, n_list: list[int]) -> tuple[Path, dict]:
    """Wall-time comparison of swe, swme(N), rswme for each N in n_list."""
    out = _output_dir(base)
    timings: dict[tuple[str, int], tuple[float, int]] = {}

    def timed(m: RunManifest) -> tuple[float, int]:
        results = [execute_manifest(m) for _ in range(m.benchmark_repeats)]
        return min(r.wall_time for r in results), results[-1].step_count

    timings[("swe", 0)] = timed(replace(base, model="swe", n=0))
    for n in n_list:
        timings[("swme", n)] = timed(replace(base, model="swme", n=n))
        timings[("rswme", n)] = timed(replace(base, model="rswme", n=n))

    path = out / "bench.csv"
    with path.open("w") as fh:
        fh.write("model,n,wall_time_s,steps\n")
        for (model, n), (wall, steps) in timings.items():
            fh.write(f"{model},{n},{_fmt(wall)},{steps}\n")
    return path, timings


def constants_command(order: int, stream=None) -> None:
    stream = stream or sys.stdout
    cc = constants_for_order(order)
    print(f"closure constants at order {order}", file=stream)
    for name in ("Btilde", "Dtilde", "Ftilde"):
        vec = getattr(cc, name)
        for j, value in enumerate(vec, start=1):
            print(f"  {name}_{j} = {value} = {float(value):.17g}", file=stream)
    for name in ("Gamma", "Phi", "Omega", "Lambda"):
        value = getattr(cc, name)
        print(f"  {name} = {value} = {float(value):.17g}", file=stream)


def eigs_command(spec: ModelSpec, h: float, um: float, alphas: list[float] | None = None,
                 stream=None) -> None:
    stream = stream or sys.stdout
    state = np.zeros(spec.dim)
    state[0] = h
    state[1] = h * um
    if spec.family == "swme" and alphas:
        if len(alphas) != spec.order:
            raise ValueError(f"expected {spec.order} moment values, got {len(alphas)}")
        state[2:] = h * np.asarray(alphas)
    if spec.family in REDUCED:
        eigs = np.array(rswme_eigenvalues(spec, state))
    else:
        eigs = np.sort_complex(np.linalg.eigvals(system_matrix(spec, state)))
    for k, lam in enumerate(eigs, start=1):
        if lam.imag == 0.0:
            print(f"  lambda_{k} = {lam.real:.17g}", file=stream)
        else:
            print(f"  lambda_{k} = {lam.real:.17g} {lam.imag:+.17g}i", file=stream)
    real = bool(np.all(eigs.imag == 0.0))
    distinct = len(np.unique(eigs)) == len(eigs)
    verdict = "hyperbolic" if real and distinct else ("not hyperbolic (complex eigenvalues)" if not real else "degenerate (repeated eigenvalues)")
    print(f"  verdict: {verdict}", file=stream)
    if spec.family == "rswme":
        print(f"  hyperbolicity threshold h_max = {hyperbolicity_threshold(spec):.17g}", file=stream)


def _float_list(raw: str) -> list[float]:
    return [float(tok) for tok in raw.split(",") if tok.strip()]


def _int_list(raw: str) -> list[int]:
    return [int(tok) for tok in raw.split(",") if tok.strip()]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="swmoment", description="shallow-water moment model toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one configuration")
    p_run.add_argument("config")

    p_table = sub.add_parser("table", help="error table over an epsilon sweep")
    p_table.add_argument("config", help="base config file, or a directory of config files")
    p_table.add_argument("--epsilons", type=_float_list, default=None)
    p_table.add_argument("--models", default="swe,rswme",
                         help="comma list of candidate models (reference is always swme)")

    p_bench = sub.add_parser("bench", help="runtime comparison over moment orders")
    p_bench.add_argument("config")
    p_bench.add_argument("--n", type=_int_list, required=True, help="comma list of moment orders")

    p_const = sub.add_parser("constants", help="print closure constants")
    p_const.add_argument("--n", type=int, required=True)

    p_eigs = sub.add_parser("eigs", help="eigenvalues and hyperbolicity verdict for one state")
    p_eigs.add_argument("--model", required=True, choices=FAMILIES)
    p_eigs.add_argument("--n", type=int, default=0)
    p_eigs.add_argument("--h", type=float, required=True)
    p_eigs.add_argument("--um", type=float, required=True)
    p_eigs.add_argument("--alpha", type=_float_list, default=None)
    p_eigs.add_argument("--epsilon", type=float, default=1.0)
    p_eigs.add_argument("--lambda0", type=float, default=1.0)
    p_eigs.add_argument("--nu0", type=float, default=1.0)
    p_eigs.add_argument("--g", type=float, default=1.0)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return run_command(parse_config(args.config))
        if args.command == "table":
            path = Path(args.config)
            if path.is_dir():
                manifests = [parse_config(p) for p in sorted(path.glob("*.cfg"))]
                if not manifests:
                    raise ConfigError(f"{path}: no .cfg files found")
                base = next((m for m in manifests if m.model == "swme"), manifests[0])
                epsilons = args.epsilons or sorted({m.epsilon for m in manifests})
            else:
                base = parse_config(path)
                if not args.epsilons:
                    raise ConfigError("table with a single config needs --epsilons")
                epsilons = args.epsilons
            out_path, _ = table_command(base, epsilons, args.models.split(","))
            print(out_path)
            return 0
        if args.command == "bench":
            out_path, _ = bench_command(parse_config(args.config), args.n)
            print(out_path)
            return 0
        if args.command == "constants":
            constants_command(args.n)
            return 0
        if args.command == "eigs":
            spec = ModelSpec(family=args.model, order=args.n, g=args.g, epsilon=args.epsilon,
                             lambda0=args.lambda0, nu0=args.nu0)
            eigs_command(spec, args.h, args.um, args.alpha)
            return 0
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
