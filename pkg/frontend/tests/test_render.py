import json
import os

import numpy as np
import pytest

from solsta_figs import FigureSpec, RenderError, render, specs_for_run
from solsta_figs.cli import main

TRAJ_HEADER = "t,a,adot,addot,b,c,zeta,g"
PROTOCOL_HEADER = "t,g,a_design,adot_design,addot_design"
TIMESERIES_HEADER = "t,norm,width,peak_density,fidelity_running"
DENSITY_HEADER = "x,re,im,density"
SWEEP_HEADER = "A_s,F_sta,F_adiabatic,sta_feasible"


def write_rows(path, header, rows):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def fake_trajectory(path, t_f=10.0, n=50):
    t = np.linspace(0.0, t_f, n)
    a = 0.5 - 0.04 * t / t_f
    rows = np.column_stack([t, a, np.zeros(n), np.zeros(n),
                            np.zeros(n), np.zeros(n), np.zeros(n), 2.0 + t])
    write_rows(path, TRAJ_HEADER, rows)


def fake_protocol(path, t_f=10.0, n=50):
    t = np.linspace(0.0, t_f, n)
    rows = np.column_stack([t, 2.0 + t, 0.5 - 0.04 * t / t_f,
                            np.zeros(n), np.zeros(n)])
    write_rows(path, PROTOCOL_HEADER, rows)


def fake_timeseries(path, t_f=10.0, n=20):
    t = np.linspace(0.0, t_f, n)
    rows = np.column_stack([t, np.full(n, 2.0), 0.5 - 0.04 * t / t_f,
                            np.full(n, 2.0), np.full(n, 0.999)])
    write_rows(path, TIMESERIES_HEADER, rows)


def fake_density(path, a=0.5, n=64):
    x = np.linspace(-5.0, 5.0, n)
    dens = (1.0 / a) / np.cosh(x / a) ** 2
    write_rows(path, DENSITY_HEADER,
               np.column_stack([x, np.sqrt(dens), np.zeros(n), dens]))


def make_fig2_dir(run_dir):
    os.makedirs(run_dir, exist_ok=True)
    fake_protocol(os.path.join(run_dir, "sta_protocol.csv"))
    fake_trajectory(os.path.join(run_dir, "reference.csv"))
    with open(os.path.join(run_dir, "manifest.json"), "w") as fh:
        json.dump({"scenario": "fig2", "files": {}}, fh)


def assert_real_image(path):
    assert os.path.isfile(path)
    assert os.path.getsize(path) > 500  # nonzero content, not a stub


class TestScenarioDetection:
    def test_manifest_wins(self, tmp_path):
        make_fig2_dir(tmp_path)
        specs = specs_for_run(str(tmp_path), str(tmp_path / "out"))
        assert {s.panel for s in specs} == {"width", "g"}

    def test_inference_without_manifest(self, tmp_path):
        make_fig2_dir(tmp_path)
        os.remove(tmp_path / "manifest.json")
        specs = specs_for_run(str(tmp_path), str(tmp_path / "out"))
        assert specs[0].scenario == "fig2"

    def test_unrecognizable_directory(self, tmp_path):
        with pytest.raises(RenderError):
            specs_for_run(str(tmp_path), str(tmp_path / "out"))


class TestRenderPanels:
    def test_fig2_panels(self, tmp_path):
        make_fig2_dir(tmp_path)
        for spec in specs_for_run(str(tmp_path), str(tmp_path / "out")):
            assert_real_image(render(spec))

    def test_fig1_panels(self, tmp_path):
        for branch, t_f in (("adiabatic", 100.0), ("nonadiabatic", 10.0)):
            fake_trajectory(tmp_path / f"variational_{branch}.csv", t_f)
            fake_trajectory(tmp_path / f"reference_{branch}.csv", t_f)
            fake_timeseries(tmp_path / f"gpe_timeseries_{branch}.csv", t_f)
            fake_density(tmp_path / f"density_initial_{branch}.csv", 0.5)
            fake_density(tmp_path / f"density_final_{branch}.csv", 0.1)
        for spec in specs_for_run(str(tmp_path), str(tmp_path / "out")):
            assert_real_image(render(spec))

    def test_fig3_panel(self, tmp_path):
        for t_f in (0.1, 0.2, 10.0):
            fake_protocol(tmp_path / f"protocol_tf{t_f:.17g}.csv", t_f)
        (tmp_path / "report.json").write_text("{}")
        specs = specs_for_run(str(tmp_path), str(tmp_path / "out"))
        assert len(specs) == 1
        assert_real_image(render(specs[0]))

    def test_fig4_panels_including_heatmap(self, tmp_path):
        fake_protocol(tmp_path / "sta_protocol.csv")
        fake_density(tmp_path / "density_initial.csv", 0.5)
        fake_density(tmp_path / "density_final.csv", 0.1)
        fake_timeseries(tmp_path / "gpe_timeseries.csv")
        times = np.linspace(0.0, 10.0, 30)
        xs = np.linspace(-5.0, 5.0, 40)
        rows = [[t, x, np.exp(-x * x / (1.0 + t))] for t in times for x in xs]
        write_rows(tmp_path / "evolution.csv", "t,x,density", rows)
        outputs = [render(s) for s in
                   specs_for_run(str(tmp_path), str(tmp_path / "out"))]
        assert any(p.endswith(".png") for p in outputs)
        for p in outputs:
            assert_real_image(p)

    def test_fig5_panel(self, tmp_path):
        a_s = np.arange(1.0, 6.0)
        rows = np.column_stack([a_s, np.full(5, 0.999),
                                0.95 + 0.02 * np.sin(a_s), np.ones(5)])
        write_rows(tmp_path / "sweep.csv", SWEEP_HEADER, rows)
        specs = specs_for_run(str(tmp_path), str(tmp_path / "out"))
        assert_real_image(render(specs[0]))

    def test_rendering_is_deterministic(self, tmp_path):
        make_fig2_dir(tmp_path)
        spec = specs_for_run(str(tmp_path), str(tmp_path / "out"))[0]
        render(spec)
        first = open(spec.output, "rb").read()
        render(spec)
        assert open(spec.output, "rb").read() == first


class TestFailureModes:
    def test_missing_file_named_in_error(self, tmp_path):
        make_fig2_dir(tmp_path)
        os.remove(tmp_path / "reference.csv")
        spec = specs_for_run(str(tmp_path), str(tmp_path / "out"))[0]
        with pytest.raises(RenderError, match="reference.csv"):
            render(spec)
        assert not os.path.exists(tmp_path / "out")

    def test_truncated_csv_no_partial_image(self, tmp_path):
        make_fig2_dir(tmp_path)
        path = tmp_path / "reference.csv"
        content = path.read_text().splitlines()
        # chop the last row mid-field
        content[-1] = content[-1][: len(content[-1]) // 2]
        path.write_text("\n".join(content) + "\n")
        spec = specs_for_run(str(tmp_path), str(tmp_path / "out"))[0]
        with pytest.raises(RenderError, match="reference.csv"):
            render(spec)
        out = tmp_path / "out"
        assert not out.exists() or not any(out.iterdir())

    def test_empty_csv(self, tmp_path):
        make_fig2_dir(tmp_path)
        (tmp_path / "reference.csv").write_text("")
        spec = specs_for_run(str(tmp_path), str(tmp_path / "out"))[0]
        with pytest.raises(RenderError):
            render(spec)

    def test_wrong_header(self, tmp_path):
        make_fig2_dir(tmp_path)
        (tmp_path / "reference.csv").write_text("foo,bar\n1,2\n")
        spec = specs_for_run(str(tmp_path), str(tmp_path / "out"))[0]
        with pytest.raises(RenderError, match="missing column"):
            render(spec)

    def test_incomplete_evolution_grid(self, tmp_path):
        rows = [[0.0, -1.0, 0.5], [0.0, 1.0, 0.4], [1.0, -1.0, 0.3]]
        write_rows(tmp_path / "evolution.csv", "t,x,density", rows)
        fake_protocol(tmp_path / "sta_protocol.csv")
        fake_density(tmp_path / "density_initial.csv")
        fake_density(tmp_path / "density_final.csv")
        specs = specs_for_run(str(tmp_path), str(tmp_path / "out"))
        heat = [s for s in specs if s.panel == "evolution"][0]
        with pytest.raises(RenderError, match="grid"):
            render(heat)


class TestCli:
    def test_success(self, tmp_path, capsys):
        make_fig2_dir(tmp_path / "run")
        rc = main([str(tmp_path / "run"), str(tmp_path / "out")])
        assert rc == 0
        printed = capsys.readouterr().out.strip().splitlines()
        assert len(printed) == 2
        for line in printed:
            assert os.path.getsize(line) > 0

    def test_failure_exit_code(self, tmp_path, capsys):
        make_fig2_dir(tmp_path / "run")
        os.remove(tmp_path / "run" / "sta_protocol.csv")
        rc = main([str(tmp_path / "run"), str(tmp_path / "out")])
        assert rc == 2
        assert "sta_protocol.csv" in capsys.readouterr().err
