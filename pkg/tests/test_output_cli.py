"""Output writers and the command-line interface."""

import csv
import math
import xml.etree.ElementTree as ET

import numpy as np
import pytest
import yaml

from fracmg import preset, serialize
from fracmg.cli import main


def run_cli(*args):
    return main(list(args))


@pytest.fixture(scope="module")
def of1_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("of1")
    status = run_cli("run", "one_fracture_case1", "--kf", "1e-2",
                     "--grid", "32x16", "--out", str(out))
    assert status == 0
    return out


def test_cli_reproduces_reference_iteration_count(of1_run):
    summary = (of1_run / "summary.txt").read_text()
    assert "iterations: 8" in summary
    assert "32x16" in summary and "converged" in summary


def test_convergence_csv_ratios_multiply_to_total(of1_run):
    with open(of1_run / "convergence.csv") as fh:
        rows = list(csv.DictReader(fh))
    residuals = [float(r["residual"]) for r in rows]
    ratios = [float(r["ratio"]) for r in rows if r["ratio"]]
    assert len(ratios) == len(rows) - 1
    assert math.prod(ratios) == pytest.approx(residuals[-1] / residuals[0],
                                              rel=1e-12)


def test_vtr_cell_counts_match_subdomains(of1_run):
    cfg = preset("one_fracture_case1")
    level = cfg.hierarchy().finest
    for s in range(1, level.network.num_subdomains + 1):
        tree = ET.parse(of1_run / f"pressure_bulk_{s:02d}.vtr")
        arr = tree.find(".//CellData/DataArray")
        values = np.array([float(v) for v in arr.text.split()])
        assert np.count_nonzero(~np.isnan(values)) == \
            np.count_nonzero(level.cell_subdomain == s)


def test_vtp_point_count_is_elements_plus_one(of1_run):
    cfg = preset("one_fracture_case1")
    level = cfg.hierarchy().finest
    n_elems = sum(pg.n for pg in level.piece_grids)
    tree = ET.parse(of1_run / "pressure_fracture_01.vtp")
    piece = tree.find(".//Piece")
    assert int(piece.get("NumberOfPoints")) == n_elems + 1
    pressures = piece.find("CellData/DataArray").text.split()
    assert len(pressures) == n_elems


def test_cli_levels_zero_direct_solve(tmp_path):
    out = tmp_path / "direct"
    assert run_cli("run", "one_fracture_case1", "--levels", "0",
                   "--out", str(out)) == 0
    with open(out / "convergence.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert int(rows[-1]["iter"]) == 1
    assert float(rows[-1]["residual"]) <= 1e-10 * float(rows[0]["residual"])


def test_cli_config_file_and_overrides(tmp_path):
    doc = serialize(preset("one_fracture_case1"))
    path = tmp_path / "cfg.yaml"
    path.write_text(yaml.safe_dump(doc))
    out = tmp_path / "run"
    assert run_cli("run", str(path), "--grid", "16x8", "--cycle", "V",
                   "--nu1", "1", "--nu2", "1", "--tol", "1e-8",
                   "--out", str(out)) == 0
    summary = (out / "summary.txt").read_text()
    assert "16x8" in summary and "V(1,1)" in summary


def test_cli_exit_two_on_no_convergence(tmp_path):
    doc = serialize(preset("one_fracture_case1"))
    doc["cycle"]["max_iterations"] = 1
    path = tmp_path / "cfg.yaml"
    path.write_text(yaml.safe_dump(doc))
    out = tmp_path / "run"
    assert run_cli("run", str(path), "--out", str(out)) == 2
    # the convergence report is still written
    assert (out / "convergence.csv").exists()
    assert "NOT CONVERGED" in (out / "summary.txt").read_text()


def test_cli_exit_one_on_config_errors(tmp_path):
    assert run_cli("run", "no_such_preset") == 1
    assert run_cli("run", "one_fracture_case2", "--kf", "1.0") == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text("domain: {x0: 0.0}\n")
    assert run_cli("run", str(bad)) == 1
    cfgfile = tmp_path / "ok.yaml"
    cfgfile.write_text(yaml.safe_dump(serialize(preset("one_fracture_case1"))))
    assert run_cli("run", str(cfgfile), "--kf", "2.0") == 1


def test_cli_unreachable_grid_is_config_error():
    assert run_cli("run", "one_fracture_case1", "--grid", "48x24") == 1
