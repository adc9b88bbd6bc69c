"""Per-scenario figure builders and the render entry point."""

from __future__ import annotations

import glob
import json
import os

import matplotlib

matplotlib.use("Agg")
# deterministic output: stable SVG element ids, no embedded creation date
matplotlib.rcParams["svg.hashsalt"] = "solsta-figs"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .spec import FigureSpec, RenderError, load_inputs  # noqa: E402

TRAJ_COLS = ("t", "a", "g")
PROTOCOL_COLS = ("t", "g", "a_design")
TIMESERIES_COLS = ("t", "norm", "width", "peak_density")
DENSITY_COLS = ("x", "density")
EVOLUTION_COLS = ("t", "x", "density")
SWEEP_COLS = ("A_s", "F_sta", "F_adiabatic", "sta_feasible")


def _detect_scenario(run_dir: str) -> str:
    manifest = os.path.join(run_dir, "manifest.json")
    if os.path.isfile(manifest):
        try:
            with open(manifest) as fh:
                payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RenderError(f"{manifest}: malformed manifest: {exc}") from exc
        scenario = payload.get("scenario")
        if scenario:
            return scenario
    names = set(os.listdir(run_dir)) if os.path.isdir(run_dir) else set()
    if "sweep.csv" in names:
        return "fig5"
    if "evolution.csv" in names:
        return "fig4"
    if "report.json" in names:
        return "fig3"
    if "reference.csv" in names:
        return "fig2"
    if "variational_adiabatic.csv" in names:
        return "fig1"
    if "sta_protocol.csv" in names:
        return "custom"
    raise RenderError(f"{run_dir}: cannot determine scenario "
                      "(no manifest.json and no recognizable artifacts)")


def specs_for_run(run_dir: str, out_dir: str) -> list[FigureSpec]:
    """Build the figure specs for a scenario output directory."""
    scenario = _detect_scenario(run_dir)
    j = lambda name: os.path.join(run_dir, name)
    o = lambda name: os.path.join(out_dir, name)

    if scenario == "fig1":
        return [
            FigureSpec("fig1", "widths", (
                (j("variational_adiabatic.csv"), TRAJ_COLS),
                (j("reference_adiabatic.csv"), TRAJ_COLS),
                (j("gpe_timeseries_adiabatic.csv"), TIMESERIES_COLS),
                (j("variational_nonadiabatic.csv"), TRAJ_COLS),
                (j("reference_nonadiabatic.csv"), TRAJ_COLS),
                (j("gpe_timeseries_nonadiabatic.csv"), TIMESERIES_COLS),
            ), o("fig1_widths.svg"),
                title="Soliton width: slow vs fast switching",
                xlabel="t / t_f", ylabel="width a(t)"),
            FigureSpec("fig1", "densities", (
                (j("density_initial_adiabatic.csv"), DENSITY_COLS),
                (j("density_final_adiabatic.csv"), DENSITY_COLS),
                (j("density_final_nonadiabatic.csv"), DENSITY_COLS),
            ), o("fig1_densities.svg"),
                title="Initial and final density profiles",
                xlabel="x", ylabel="|psi|^2"),
        ]
    if scenario == "fig2":
        return [
            FigureSpec("fig2", "width", (
                (j("sta_protocol.csv"), PROTOCOL_COLS),
                (j("reference.csv"), TRAJ_COLS),
            ), o("fig2_width.svg"),
                title="Designed width trajectory vs adiabatic reference",
                xlabel="t", ylabel="width a(t)"),
            FigureSpec("fig2", "g", (
                (j("sta_protocol.csv"), PROTOCOL_COLS),
                (j("reference.csv"), TRAJ_COLS),
            ), o("fig2_g.svg"),
                title="Engineered interaction schedule vs switching form",
                xlabel="t", ylabel="g(t)"),
        ]
    if scenario == "fig3":
        protocols = sorted(glob.glob(j("protocol_tf*.csv")))
        if not protocols:
            raise RenderError(f"{run_dir}: no protocol_tf*.csv files found")
        return [
            FigureSpec("fig3", "protocols",
                       tuple((p, PROTOCOL_COLS) for p in protocols),
                       o("fig3_protocols.svg"),
                       title="Engineered g(t) across horizons",
                       xlabel="t / t_f", ylabel="g(t)"),
        ]
    if scenario == "fig4":
        return [
            FigureSpec("fig4", "densities", (
                (j("density_initial.csv"), DENSITY_COLS),
                (j("density_final.csv"), DENSITY_COLS),
            ), o("fig4_densities.svg"),
                title="Compression: initial and final densities",
                xlabel="x", ylabel="|psi|^2"),
            FigureSpec("fig4", "evolution", (
                (j("evolution.csv"), EVOLUTION_COLS),
            ), o("fig4_evolution.png"),
                title="Density evolution", xlabel="t", ylabel="x"),
        ]
    if scenario == "fig5":
        return [
            FigureSpec("fig5", "sweep", (
                (j("sweep.csv"), SWEEP_COLS),
            ), o("fig5_sweep.svg"),
                title="Final fidelity vs switching amplitude",
                xlabel="A_s", ylabel="fidelity"),
        ]
    if scenario == "custom":
        return [
            FigureSpec("custom", "protocol", (
                (j("sta_protocol.csv"), PROTOCOL_COLS),
            ), o("custom_protocol.svg"),
                title="Engineered protocol", xlabel="t", ylabel="g(t)"),
            FigureSpec("custom", "density", (
                (j("density_final.csv"), DENSITY_COLS),
            ), o("custom_density.svg"),
                title="Final density", xlabel="x", ylabel="|psi|^2"),
        ]
    raise RenderError(f"unknown scenario {scenario!r}")


# ---------------------------------------------------------------------------
# panel painters: (ax, list-of-tables in spec input order) -> None

def _paint_fig1_widths(ax, tables):
    var_ad, ref_ad, gpe_ad, var_na, ref_na, gpe_na = tables
    for var, ref, gpe, label, color in (
            (var_ad, ref_ad, gpe_ad, "slow", "tab:blue"),
            (var_na, ref_na, gpe_na, "fast", "tab:red")):
        tf = var["t"][-1]
        ax.plot(var["t"] / tf, var["a"], color=color,
                label=f"{label}: variational")
        ax.plot(ref["t"] / tf, ref["a"], "--", color=color,
                label=f"{label}: adiabatic reference")
        ax.plot(gpe["t"] / tf, gpe["width"], ":", color=color, lw=2,
                label=f"{label}: full dynamics")
    ax.legend(fontsize=8)


def _paint_fig1_densities(ax, tables):
    initial, final_ad, final_na = tables
    ax.plot(initial["x"], initial["density"], label="initial")
    ax.plot(final_ad["x"], final_ad["density"], label="final (slow)")
    ax.plot(final_na["x"], final_na["density"], label="final (fast)")
    ax.set_xlim(-3, 3)
    ax.legend()


def _paint_fig2_width(ax, tables):
    protocol, reference = tables
    ax.plot(protocol["t"], protocol["a_design"], label="designed")
    ax.plot(reference["t"], reference["a"], "--", label="adiabatic reference")
    ax.legend()


def _paint_fig2_g(ax, tables):
    protocol, reference = tables
    ax.plot(protocol["t"], protocol["g"], label="engineered g(t)")
    ax.plot(reference["t"], reference["g"], "--", label="switching form")
    ax.legend()


def _paint_fig3_protocols(ax, tables):
    for table in tables:
        tf = table["t"][-1]
        ax.plot(table["t"] / tf, table["g"], label=f"t_f = {tf:g}")
    ax.axhline(0.0, color="gray", lw=0.5)
    ax.legend()


def _paint_fig4_densities(ax, tables):
    initial, final = tables
    ax.plot(initial["x"], initial["density"], label="initial")
    ax.plot(final["x"], final["density"], label="final")
    ax.set_xlim(-3, 3)
    ax.legend()


def _paint_fig4_evolution(ax, tables):
    table = tables[0]
    t, x, dens = table["t"], table["x"], table["density"]
    times = np.unique(t)
    xs = np.unique(x)
    if len(times) * len(xs) != len(dens):
        raise RenderError("evolution table is not a complete (t, x) grid")
    grid = dens.reshape(len(times), len(xs))
    mesh = ax.pcolormesh(times, xs, grid.T, shading="auto", cmap="viridis")
    ax.figure.colorbar(mesh, ax=ax, label="|psi|^2")
    ax.set_ylim(-3, 3)


def _paint_fig5_sweep(ax, tables):
    table = tables[0]
    ax.plot(table["A_s"], table["F_sta"], "o-", label="engineered protocol")
    ax.plot(table["A_s"], table["F_adiabatic"], "s--", label="slow switching")
    ax.set_ylim(0.0, 1.05)
    ax.legend()


def _paint_custom_protocol(ax, tables):
    table = tables[0]
    ax.plot(table["t"], table["g"])


def _paint_custom_density(ax, tables):
    table = tables[0]
    ax.plot(table["x"], table["density"])


_PAINTERS = {
    ("fig1", "widths"): _paint_fig1_widths,
    ("fig1", "densities"): _paint_fig1_densities,
    ("fig2", "width"): _paint_fig2_width,
    ("fig2", "g"): _paint_fig2_g,
    ("fig3", "protocols"): _paint_fig3_protocols,
    ("fig4", "densities"): _paint_fig4_densities,
    ("fig4", "evolution"): _paint_fig4_evolution,
    ("fig5", "sweep"): _paint_fig5_sweep,
    ("custom", "protocol"): _paint_custom_protocol,
    ("custom", "density"): _paint_custom_density,
}


def render(spec: FigureSpec) -> str:
    """Validate every input, paint the panel, and write the image atomically
    (no partial file is left behind on failure)."""
    painter = _PAINTERS.get((spec.scenario, spec.panel))
    if painter is None:
        raise RenderError(f"no painter for {spec.scenario}/{spec.panel}")
    tables = [t for t in load_inputs(spec).values()]

    fig, ax = plt.subplots(figsize=(6.0, 4.0), constrained_layout=True)
    try:
        painter(ax, tables)
        ax.set_title(spec.title)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
        os.makedirs(os.path.dirname(spec.output) or ".", exist_ok=True)
        ext = os.path.splitext(spec.output)[1].lstrip(".") or "svg"
        tmp = spec.output + ".tmp"
        metadata = {"Date": None} if ext == "svg" else None
        fig.savefig(tmp, format=ext, metadata=metadata)
        os.replace(tmp, spec.output)
    finally:
        plt.close(fig)
    return spec.output
