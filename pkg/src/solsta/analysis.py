"""Observables and verdicts: norm, width extraction, center of mass,
fidelity, and the fidelity-versus-amplitude sweep."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import adiabatic, gpe, sta
from .errors import ConfigError, DomainError
from .types import PhysicalConfig, SwitchingParams


def norm(psi: gpe.WaveFunction) -> float:
    """Trapezoid-rule integral of |psi|^2 over the grid."""
    return float(np.trapezoid(psi.density(), dx=psi.grid.dx))


def width_second_moment(psi: gpe.WaveFunction) -> float:
    """Width estimate sqrt(12 <(x - <x>)^2>) / pi, exact for sech profiles
    (for density ~ sech^2(x/a) the second moment is pi^2 a^2 / 12)."""
    dens = psi.density()
    total = np.trapezoid(dens, dx=psi.grid.dx)
    if total <= 0:
        raise DomainError("zero-norm state has no width")
    x = psi.grid.x
    mean = np.trapezoid(x * dens, dx=psi.grid.dx) / total
    var = np.trapezoid((x - mean) ** 2 * dens, dx=psi.grid.dx) / total
    return float(np.sqrt(12.0 * var) / np.pi)


def center_of_mass(psi: gpe.WaveFunction) -> float:
    """Density-weighted mean position."""
    dens = psi.density()
    total = np.trapezoid(dens, dx=psi.grid.dx)
    if total <= 0:
        raise DomainError("zero-norm state has no center of mass")
    return float(np.trapezoid(psi.grid.x * dens, dx=psi.grid.dx) / total)


def fidelity(psi: gpe.WaveFunction, target: gpe.WaveFunction) -> float:
    """Normalized squared overlap |<target|psi>|^2 / (|target|^2 |psi|^2),
    so identical states give exactly 1."""
    if psi.grid != target.grid:
        raise ConfigError("fidelity requires both states on the same grid")
    overlap = np.trapezoid(np.conj(target.values) * psi.values, dx=psi.grid.dx)
    denom = norm(psi) * norm(target)
    if denom <= 0:
        raise DomainError("fidelity undefined for zero-norm states")
    return float(np.abs(overlap) ** 2 / denom)


@dataclass(eq=False)
class SweepResult:
    """Fidelity of both protocol families as a function of the compression
    amplitude."""

    a_s_values: np.ndarray
    fidelity_sta: np.ndarray
    fidelity_adiabatic: np.ndarray
    sta_feasible: np.ndarray
    sta_branch: tuple[float, float]
    adiabatic_branch: tuple[float, float]


def _branch_run(p: SwitchingParams, config: PhysicalConfig, grid: gpe.Grid1D,
                dt: float, curve, feasible: bool):
    """Propagate the reference initial state under one protocol and score it
    against the adiabatic target of the same parameters."""
    run_grid = gpe.Grid1D(grid.x_min, grid.x_max, grid.n_points, dt)
    a0, adot0, _ = adiabatic._reference_at(0.0, p, config, "perturbative")
    af, adotf, _ = adiabatic._reference_at(p.t_f, p, config, "perturbative")
    psi0 = gpe.sech_state(a0, adot0, config.n_norm, run_grid)
    target = gpe.sech_state(af, adotf, config.n_norm, run_grid)
    result = gpe.propagate(psi0, curve, config, p.t_f, observe_every=10_000)
    return fidelity(result.psi, target), feasible


def _sweep_row(args):
    (a_s, base, config, sta_branch, adiabatic_branch, grid,
     sta_dt, adiabatic_dt) = args
    p_sta = replace(base, a_s_amp=a_s, t_f=sta_branch[0], s_rate=sta_branch[1])
    design = sta.design_protocol(p_sta, config)
    f_sta, feasible = _branch_run(p_sta, config, grid, sta_dt,
                                  design.protocol, design.g_min > 0)
    p_ad = replace(base, a_s_amp=a_s, t_f=adiabatic_branch[0],
                   s_rate=adiabatic_branch[1])
    curve = adiabatic.protocol_curve(p_ad)
    f_ad, _ = _branch_run(p_ad, config, grid, adiabatic_dt, curve, True)
    return a_s, f_sta, f_ad, feasible


def sweep_fidelity(a_s_values, base: SwitchingParams, config: PhysicalConfig,
                   sta_branch: tuple[float, float] = (10.0, 10.0),
                   adiabatic_branch: tuple[float, float] = (100.0, 1.0),
                   grid: gpe.Grid1D | None = None,
                   sta_dt: float | None = None,
                   adiabatic_dt: float | None = None,
                   workers: int = 1) -> SweepResult:
    """For each amplitude, run the STA-designed protocol and the arctan
    switching protocol against their adiabatic targets and record both
    fidelities. Infeasible (negative-g) designs are flagged, not dropped."""
    a_s_values = sorted(float(v) for v in a_s_values)
    if not a_s_values:
        raise ConfigError("a_s_values must be non-empty")
    if any(v <= 0 for v in a_s_values):
        raise ConfigError("a_s_values must be positive")
    if grid is None:
        grid = gpe.build_grid(40.0, 8192, 1e-4)
    sta_dt = grid.dt if sta_dt is None else sta_dt
    adiabatic_dt = grid.dt if adiabatic_dt is None else adiabatic_dt
    jobs = [(a_s, base, config, sta_branch, adiabatic_branch, grid,
             sta_dt, adiabatic_dt) for a_s in a_s_values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(job) for job in jobs]
    rows.sort(key=lambda r: r[0])
    arr = np.array([r[:3] for r in rows])
    feasible = np.array([r[3] for r in rows], dtype=bool)
    return SweepResult(a_s_values=arr[:, 0], fidelity_sta=arr[:, 1],
                       fidelity_adiabatic=arr[:, 2], sta_feasible=feasible,
                       sta_branch=sta_branch, adiabatic_branch=adiabatic_branch)


SWEEP_CSV_HEADER = "A_s,F_sta,F_adiabatic,sta_feasible"


def sweep_csv_rows(result: SweepResult) -> list[list]:
    return [[a, fs, fa, int(flag)] for a, fs, fa, flag in
            zip(result.a_s_values, result.fidelity_sta,
                result.fidelity_adiabatic, result.sta_feasible)]
