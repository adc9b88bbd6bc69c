"""Scenario runner: reproduces the five study figures end to end and exposes
`design` (protocol only) and `propagate` (PDE only) building blocks.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from . import adiabatic, analysis, gpe, sta, variational
from .errors import ConfigError, SolstaError
from .io import fmt, write_csv, write_json, write_manifest
from .types import PhysicalConfig, SwitchingParams

SCENARIOS = ("fig1", "fig2", "fig3", "fig4", "fig5", "custom")
METHODS = ("perturbative", "exact")

_DEFAULTS = {
    "physical": {"omega": 0.04, "n_norm": 1.0},
    "switching": {"g_base": 2.0, "a_s_amp": 10.0, "s_rate": 1.0, "t_f": 100.0},
    "grid": {"x_half_width": 40.0, "n_points": 8192, "dt": 1e-4},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; defaults mirror the slow-compression
    baseline (A_s=10, s=1, omega=0.04, N=1, t_f=100)."""

    omega: float = 0.04
    n_norm: float = 1.0
    g_base: float = 2.0
    a_s_amp: float = 10.0
    s_rate: float = 1.0
    t_f: float = 100.0
    x_half_width: float = 40.0
    n_points: int = 8192
    dt: float = 1e-4
    scenario: str = "fig1"
    method: str = "perturbative"
    output_dir: str = "."
    sweep_a_s: tuple = tuple(float(v) for v in range(1, 21))

    def physical(self) -> PhysicalConfig:
        return PhysicalConfig(omega=self.omega, n_norm=self.n_norm)

    def switching(self) -> SwitchingParams:
        return SwitchingParams(g_base=self.g_base, a_s_amp=self.a_s_amp,
                               s_rate=self.s_rate, t_f=self.t_f)

    def grid(self, dt: float | None = None) -> gpe.Grid1D:
        return gpe.build_grid(self.x_half_width, self.n_points,
                              self.dt if dt is None else dt)

    def to_dict(self) -> dict:
        return {
            "physical": {"omega": self.omega, "n_norm": self.n_norm},
            "switching": {"g_base": self.g_base, "a_s_amp": self.a_s_amp,
                          "s_rate": self.s_rate, "t_f": self.t_f},
            "grid": {"x_half_width": self.x_half_width,
                     "n_points": self.n_points, "dt": self.dt},
            "scenario": self.scenario,
            "method": self.method,
            "output_dir": self.output_dir,
            "sweep_a_s": list(self.sweep_a_s),
        }


def _take(group: dict, section: str, key: str, cast, default):
    value = group.pop(key, default)
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {section}.{key}: {value!r}") from exc


def parse_config(doc) -> RunConfig:
    """Parse and validate a JSON config document (text or dict); unknown keys
    are rejected, missing keys take the defaults."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed config document: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    doc = {k: (dict(v) if isinstance(v, dict) else v) for k, v in doc.items()}

    kwargs = {}
    for section in ("physical", "switching", "grid"):
        group = doc.pop(section, {})
        if not isinstance(group, dict):
            raise ConfigError(f"section {section!r} must be an object")
        for key, default in _DEFAULTS[section].items():
            cast = int if key == "n_points" else float
            kwargs[key] = _take(group, section, key, cast, default)
        if group:
            raise ConfigError(f"unknown key in {section!r}: {sorted(group)[0]!r}")

    kwargs["scenario"] = str(doc.pop("scenario", "fig1"))
    kwargs["method"] = str(doc.pop("method", "perturbative"))
    kwargs["output_dir"] = str(doc.pop("output_dir", "."))
    sweep = doc.pop("sweep_a_s", list(RunConfig.sweep_a_s))
    if not isinstance(sweep, (list, tuple)) or not sweep:
        raise ConfigError("sweep_a_s must be a non-empty list")
    kwargs["sweep_a_s"] = tuple(float(v) for v in sweep)
    if doc:
        raise ConfigError(f"unknown config key: {sorted(doc)[0]!r}")
    if kwargs["scenario"] not in SCENARIOS:
        raise ConfigError(f"unknown scenario: {kwargs['scenario']!r}")
    if kwargs["method"] not in METHODS:
        raise ConfigError(f"unknown method: {kwargs['method']!r}")

    cfg = RunConfig(**kwargs)
    cfg.physical()
    cfg.switching()
    cfg.grid()
    return cfg


# ---------------------------------------------------------------------------
# artifact helpers

def _downsample_rows(rows: np.ndarray, max_rows: int = 2001) -> np.ndarray:
    n = rows.shape[0]
    if n <= max_rows:
        return rows
    idx = np.unique(np.linspace(0, n - 1, max_rows).round().astype(int))
    return rows[idx]

def _write_trajectory(path, traj: variational.SolitonTrajectory,
                      config: PhysicalConfig) -> None:
    rows = _downsample_rows(variational.trajectory_csv_rows(traj, config))
    write_csv(path, variational.TRAJECTORY_CSV_HEADER, rows)


def _write_reference(path, p: SwitchingParams, config: PhysicalConfig,
                     method: str, n_samples: int = 1001) -> None:
    ref = adiabatic.ac_trajectory(p, config, n_samples, method)
    g = adiabatic.switching_g(ref.times, p)
    b = ref.adot / (2.0 * ref.a)
    zeros = np.zeros_like(ref.times)
    rows = np.column_stack([ref.times, ref.a, ref.adot, ref.addot,
                            b, zeros, zeros, g])
    write_csv(path, variational.TRAJECTORY_CSV_HEADER, rows)


def _write_density(path, psi: gpe.WaveFunction) -> None:
    rows = np.column_stack([psi.grid.x, psi.values.real, psi.values.imag,
                            psi.density()])
    write_csv(path, gpe.SNAPSHOT_CSV_HEADER, rows)


def _write_timeseries(path, result: gpe.PropagationResult) -> None:
    cols = [result.times, result.norm, result.width, result.peak_density]
    header = gpe.TIMESERIES_CSV_HEADER
    if result.fidelity_running is not None:
        cols.append(result.fidelity_running)
        header += ",fidelity_running"
    write_csv(path, header, np.column_stack(cols))


def _write_protocol(csv_path, json_path, design: sta.ProtocolDesign,
                    p: SwitchingParams, method: str) -> None:
    write_csv(csv_path, sta.PROTOCOL_CSV_HEADER, sta.protocol_csv_rows(design))
    write_json(json_path, sta.protocol_sidecar(design, p, method))


def _edge_states(p: SwitchingParams, config: PhysicalConfig, method: str,
                 grid: gpe.Grid1D):
    a0, adot0, _ = adiabatic._reference_at(0.0, p, config, method)
    af, adotf, _ = adiabatic._reference_at(p.t_f, p, config, method)
    return (gpe.sech_state(a0, adot0, config.n_norm, grid),
            gpe.sech_state(af, adotf, config.n_norm, grid))


# ---------------------------------------------------------------------------
# scenarios

def _scenario_fig1(cfg: RunConfig, out: str) -> list[str]:
    config = cfg.physical()
    files = []
    branches = {
        "adiabatic": (replace(cfg.switching(), t_f=100.0, s_rate=1.0), cfg.dt * 10),
        "nonadiabatic": (replace(cfg.switching(), t_f=10.0, s_rate=10.0), cfg.dt),
    }
    for name, (p, dt) in branches.items():
        curve = adiabatic.protocol_curve(p)
        a0, adot0, _ = adiabatic._reference_at(0.0, p, config, cfg.method)
        traj = variational.integrate_full(
            curve, variational.SolitonState(a=a0, b=adot0 / (2 * a0)), config)
        path = os.path.join(out, f"variational_{name}.csv")
        _write_trajectory(path, traj, config)
        files.append(path)
        path = os.path.join(out, f"reference_{name}.csv")
        _write_reference(path, p, config, cfg.method)
        files.append(path)
        grid = cfg.grid(dt)
        psi0, target = _edge_states(p, config, cfg.method, grid)
        result = gpe.propagate(psi0, curve, config, p.t_f,
                               observe_every=100, target=target)
        path = os.path.join(out, f"gpe_timeseries_{name}.csv")
        _write_timeseries(path, result)
        files.append(path)
        path = os.path.join(out, f"density_initial_{name}.csv")
        _write_density(path, psi0)
        files.append(path)
        path = os.path.join(out, f"density_final_{name}.csv")
        _write_density(path, result.psi)
        files.append(path)
    return files


def _scenario_fig2(cfg: RunConfig, out: str) -> list[str]:
    config = cfg.physical()
    p = replace(cfg.switching(), t_f=10.0, s_rate=10.0)
    design = sta.design_protocol(p, config, cfg.method)
    files = [os.path.join(out, "sta_protocol.csv"),
             os.path.join(out, "sta_protocol.json"),
             os.path.join(out, "reference.csv")]
    _write_protocol(files[0], files[1], design, p, cfg.method)
    _write_reference(files[2], p, config, cfg.method)
    return files


def _scenario_fig3(cfg: RunConfig, out: str) -> list[str]:
    config = cfg.physical()
    files = []
    report = {}
    for t_f in (0.1, 0.2, 10.0):
        p = replace(cfg.switching(), t_f=t_f, s_rate=100.0 / t_f)
        design = sta.design_protocol(p, config, cfg.method)
        tag = fmt(t_f)
        csv_path = os.path.join(out, f"protocol_tf{tag}.csv")
        json_path = os.path.join(out, f"protocol_tf{tag}.json")
        _write_protocol(csv_path, json_path, design, p, cfg.method)
        files += [csv_path, json_path]
        report[tag] = {"g_min": design.g_min, "g_max": design.g_max,
                       "changes_sign": design.changes_sign}
    path = os.path.join(out, "report.json")
    write_json(path, report)
    files.append(path)
    return files


def _scenario_fig4(cfg: RunConfig, out: str) -> list[str]:
    config = cfg.physical()
    p = replace(cfg.switching(), t_f=10.0, s_rate=10.0)
    design = sta.design_protocol(p, config, cfg.method)
    files = [os.path.join(out, "sta_protocol.csv"),
             os.path.join(out, "sta_protocol.json")]
    _write_protocol(files[0], files[1], design, p, cfg.method)
    grid = cfg.grid()
    psi0, target = _edge_states(p, config, cfg.method, grid)
    n_steps = int(round(p.t_f / grid.dt))
    snapshot_every = max(1, -(-n_steps // 199))  # <= 200 time slices
    result = gpe.propagate(psi0, design.protocol, config, p.t_f,
                           observe_every=100, target=target,
                           snapshot_every=snapshot_every)
    path = os.path.join(out, "density_initial.csv")
    _write_density(path, psi0)
    files.append(path)
    path = os.path.join(out, "density_final.csv")
    _write_density(path, result.psi)
    files.append(path)
    path = os.path.join(out, "gpe_timeseries.csv")
    _write_timeseries(path, result)
    files.append(path)

    x = grid.x
    stride = max(1, -(-grid.n_points // 1024))  # <= 1024 space points
    rows = []
    for t, dens in result.snapshots:
        for xi, di in zip(x[::stride], dens[::stride]):
            rows.append([t, xi, di])
    path = os.path.join(out, "evolution.csv")
    write_csv(path, "t,x,density", rows)
    files.append(path)
    return files


def _scenario_fig5(cfg: RunConfig, out: str, workers: int = 1) -> list[str]:
    config = cfg.physical()
    base = cfg.switching()
    result = analysis.sweep_fidelity(
        cfg.sweep_a_s, base, config,
        sta_branch=(10.0, 10.0), adiabatic_branch=(100.0, 1.0),
        grid=cfg.grid(), sta_dt=cfg.dt, adiabatic_dt=cfg.dt * 10,
        workers=workers)
    path = os.path.join(out, "sweep.csv")
    write_csv(path, analysis.SWEEP_CSV_HEADER, analysis.sweep_csv_rows(result))
    return [path]


def _scenario_custom(cfg: RunConfig, out: str) -> list[str]:
    config = cfg.physical()
    p = cfg.switching()
    design = sta.design_protocol(p, config, cfg.method)
    files = [os.path.join(out, "sta_protocol.csv"),
             os.path.join(out, "sta_protocol.json")]
    _write_protocol(files[0], files[1], design, p, cfg.method)
    grid = cfg.grid()
    psi0, target = _edge_states(p, config, cfg.method, grid)
    result = gpe.propagate(psi0, design.protocol, config, p.t_f,
                           observe_every=100, target=target)
    path = os.path.join(out, "gpe_timeseries.csv")
    _write_timeseries(path, result)
    files.append(path)
    path = os.path.join(out, "density_final.csv")
    _write_density(path, result.psi)
    files.append(path)
    return files


def run_scenario(cfg: RunConfig, workers: int = 1) -> dict:
    """Run one scenario, writing every artifact plus a hash manifest into
    cfg.output_dir. Partial outputs are removed on failure."""
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    runners = {
        "fig1": _scenario_fig1, "fig2": _scenario_fig2,
        "fig3": _scenario_fig3, "fig4": _scenario_fig4,
        "custom": _scenario_custom,
    }
    preexisting = set(os.listdir(out))
    try:
        if cfg.scenario == "fig5":
            files = _scenario_fig5(cfg, out, workers)
        else:
            files = runners[cfg.scenario](cfg, out)
    except Exception:
        for name in set(os.listdir(out)) - preexisting:
            os.remove(os.path.join(out, name))
        raise
    manifest_path = write_manifest(out, cfg.scenario, files)
    with open(manifest_path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# command-line surface

def _load_config(path: str | None, scenario: str | None, out: str | None) -> RunConfig:
    doc = "{}"
    if path is not None:
        with open(path) as fh:
            doc = fh.read()
    cfg = parse_config(doc)
    if scenario is not None:
        cfg = replace(cfg, scenario=scenario)
    if out is not None:
        cfg = replace(cfg, output_dir=out)
    return cfg


def _cmd_run(args) -> int:
    cfg = _load_config(args.config, args.scenario, args.out)
    run_scenario(cfg, workers=args.workers)
    return 0


def _cmd_design(args) -> int:
    cfg = _load_config(args.config, None, args.out)
    os.makedirs(cfg.output_dir, exist_ok=True)
    design = sta.design_protocol(cfg.switching(), cfg.physical(), cfg.method)
    csv_path = os.path.join(cfg.output_dir, "sta_protocol.csv")
    json_path = os.path.join(cfg.output_dir, "sta_protocol.json")
    _write_protocol(csv_path, json_path, design, cfg.switching(), cfg.method)
    write_manifest(cfg.output_dir, "design", [csv_path, json_path])
    return 0


def _read_protocol_csv(path: str):
    """Load a protocol CSV (t,g[,a_design,adot_design,...]) back into a curve
    plus initial width data when the design columns are present."""
    from .types import ProtocolCurve

    with open(path) as fh:
        header = fh.readline().strip().split(",")
    if len(header) < 2 or header[0] != "t" or header[1] != "g":
        raise ConfigError(f"{path}: expected a 't,g,...' protocol CSV")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    curve = ProtocolCurve(data[:, 0], data[:, 1], provenance="sta-designed")
    initial = None
    if "a_design" in header and "adot_design" in header:
        initial = (float(data[0, header.index("a_design")]),
                   float(data[0, header.index("adot_design")]))
    return curve, initial


def _cmd_propagate(args) -> int:
    cfg = _load_config(args.config, None, args.out)
    os.makedirs(cfg.output_dir, exist_ok=True)
    config = cfg.physical()
    curve, initial = _read_protocol_csv(args.protocol)
    grid = cfg.grid()
    if initial is None:
        a0, adot0, _ = adiabatic._reference_at(0.0, cfg.switching(), config, cfg.method)
        initial = (a0, adot0)
    psi0 = gpe.sech_state(initial[0], initial[1], config.n_norm, grid)
    result = gpe.propagate(psi0, curve, config, curve.t_f, observe_every=100)
    ts_path = os.path.join(cfg.output_dir, "gpe_timeseries.csv")
    _write_timeseries(ts_path, result)
    dens_path = os.path.join(cfg.output_dir, "density_final.csv")
    _write_density(dens_path, result.psi)
    write_manifest(cfg.output_dir, "propagate", [ts_path, dens_path])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solsta",
        description="Design and validate fast soliton-compression protocols.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a figure scenario end to end")
    p_run.add_argument("--scenario", choices=SCENARIOS, required=True)
    p_run.add_argument("--config", default=None)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--workers", type=int, default=1)
    p_run.set_defaults(func=_cmd_run)

    p_design = sub.add_parser("design", help="design a protocol (no PDE run)")
    p_design.add_argument("--config", default=None)
    p_design.add_argument("--out", default=None)
    p_design.set_defaults(func=_cmd_design)

    p_prop = sub.add_parser("propagate", help="propagate under a protocol CSV")
    p_prop.add_argument("--protocol", required=True)
    p_prop.add_argument("--config", default=None)
    p_prop.add_argument("--out", default=None)
    p_prop.set_defaults(func=_cmd_propagate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SolstaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
