"""Rendering checks for every figure kind, including byte-stable re-rendering
and the schema/empty-input failure modes.  The reference CSV under data/ was
produced by the simulator's sweep command and is frozen so these tests run
without the simulator installed."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from annihilate_plots import FigureError, FigureSpec, load_specs, render_figures

DATA = Path(__file__).parent / "data" / "reference_sweep.csv"
KINDS = ("mean_vs_n", "residual_fit", "coefficient_vs_p", "occupancy_hist")


def spec_for(kind: str, tmp_path: Path, **extra) -> FigureSpec:
    return FigureSpec(input_csv=(str(DATA),), figure=kind,
                      output=str(tmp_path / kind), **extra)


@pytest.mark.parametrize("kind", KINDS)
def test_renders_every_figure_kind(kind, tmp_path):
    written = render_figures(spec_for(kind, tmp_path))
    assert [Path(w).suffix for w in written] == [".png", ".svg"]
    for path in written:
        assert Path(path).stat().st_size > 0


def test_residual_fit_output_exists_nonzero(tmp_path):
    written = render_figures(spec_for("residual_fit", tmp_path))
    png = Path(written[0])
    assert png.exists() and png.stat().st_size > 10_000  # a real image


@pytest.mark.parametrize("kind", KINDS)
def test_regeneration_is_byte_identical(kind, tmp_path):
    first = render_figures(spec_for(kind, tmp_path / "a"))
    second = render_figures(spec_for(kind, tmp_path / "b"))
    for f, s in zip(first, second):
        assert Path(f).read_bytes() == Path(s).read_bytes(), (f, s)


def test_log_scale_options(tmp_path):
    written = render_figures(spec_for("mean_vs_n", tmp_path,
                                      log_x=True, log_y=True))
    assert Path(written[0]).stat().st_size > 0


def test_empty_csv_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(DATA.read_text().splitlines()[0] + "\n", encoding="utf-8")
    spec = FigureSpec(input_csv=(str(empty),), figure="mean_vs_n",
                      output=str(tmp_path / "x"))
    with pytest.raises(FigureError, match="no data rows"):
        render_figures(spec)


def test_missing_columns_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("system,topology\ntwo,star\n", encoding="utf-8")
    spec = FigureSpec(input_csv=(str(bad),), figure="mean_vs_n",
                      output=str(tmp_path / "x"))
    with pytest.raises(FigureError, match="missing column"):
        render_figures(spec)


def test_unknown_kind_rejected(tmp_path):
    with pytest.raises(FigureError, match="unknown figure kind"):
        FigureSpec(input_csv=("x.csv",), figure="sparkline", output="y")


def test_spec_file_forms(tmp_path):
    single = tmp_path / "single.json"
    single.write_text(json.dumps({
        "input_csv": str(DATA), "figure": "occupancy_hist",
        "output": str(tmp_path / "h")}), encoding="utf-8")
    assert len(load_specs(str(single))) == 1
    many = tmp_path / "many.json"
    many.write_text(json.dumps({"figures": [
        {"input_csv": [str(DATA)], "figure": k, "output": str(tmp_path / k)}
        for k in KINDS]}), encoding="utf-8")
    assert len(load_specs(str(many))) == 4


def test_cli_renders_all_kinds(tmp_path):
    spec_path = tmp_path / "figs.json"
    spec_path.write_text(json.dumps([
        {"input_csv": [str(DATA)], "figure": k,
         "output": str(tmp_path / "figs" / k)} for k in KINDS]),
        encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "annihilate_plots.cli", "--spec", str(spec_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.count("wrote ") == 2 * len(KINDS)
    for kind in KINDS:
        assert (tmp_path / "figs" / f"{kind}.png").stat().st_size > 0
        assert (tmp_path / "figs" / f"{kind}.svg").stat().st_size > 0


def test_cli_reports_errors(tmp_path):
    spec_path = tmp_path / "bad.json"
    spec_path.write_text(json.dumps({
        "input_csv": [str(tmp_path / "missing.csv")],
        "figure": "mean_vs_n", "output": str(tmp_path / "x")}),
        encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "annihilate_plots.cli", "--spec", str(spec_path)],
        capture_output=True, text=True)
    assert proc.returncode == 1
    assert "error:" in proc.stderr


def test_does_not_import_the_simulator():
    # the figures package must stand alone on the CSV schema; no module in
    # it may import the simulator package
    import annihilate_plots

    pkg_dir = Path(annihilate_plots.__file__).parent
    for source_file in pkg_dir.rglob("*.py"):
        source = source_file.read_text(encoding="utf-8")
        assert "import annihilate\n" not in source, source_file
        assert "from annihilate import" not in source, source_file
        assert "from annihilate." not in source, source_file
