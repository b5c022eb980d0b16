"""Result writers: convergence CSV, summary table row, VTK pressure fields.

One run produces, in its output directory:

* ``convergence.csv`` — per-iteration residual norms and reduction ratios;
* ``summary.txt`` — one table row (experiment, grid, iterations, factor);
* ``pressure_bulk_<i>.vtr`` — cell-centered bulk pressure, one rectilinear
  VTK file per subdomain (non-rectangular subdomains are written on their
  bounding box with NaN outside);
* ``pressure_fracture_<i>.vtp`` — element-centered fracture pressure, one
  polyline VTK file per fracture segment.
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def write_convergence_csv(path, report):
    """Write ``iter,residual,ratio`` rows; ratios multiply to r_n/r_0."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iter", "residual", "ratio"])
        prev = None
        for it, r in enumerate(report.residuals):
            w.writerow([it, f"{r:.16e}", "" if prev is None else f"{r / prev:.16e}"])
            prev = r


def write_summary(path, name, level, report, config):
    """One human-readable table row plus the run parameters."""
    rho = report.reduction_factor
    status = "converged" if report.converged else "NOT CONVERGED"
    with open(path, "w") as fh:
        fh.write(f"experiment: {name}\n")
        fh.write(f"grid: {level.nx}x{level.ny}  (levels: {level.k})\n")
        fh.write(f"cycle: {config.cycle}({config.nu1},{config.nu2})  "
                 f"tol: {config.tol:g}\n")
        fh.write(f"status: {status}\n")
        fh.write(f"iterations: {report.iterations}\n")
        fh.write(f"convergence factor: {rho:.3f}\n" if np.isfinite(rho)
                 else "convergence factor: n/a\n")
        fh.write("\n")
        fh.write(f"| {name} | {level.nx}x{level.ny} | "
                 f"{report.iterations} | {rho:.3f} |\n")


def _da(fh, name, values, fmt="%.16e", n_components=1):
    fh.write(f'        <DataArray type="Float64" Name="{name}" '
             f'NumberOfComponents="{n_components}" format="ascii">\n')
    fh.write("          " + " ".join(fmt % v for v in values) + "\n")
    fh.write("        </DataArray>\n")


def write_bulk_pressure_vtr(path, level, x, subdomain):
    """Rectilinear-grid file with one subdomain's cell pressures.

    The file covers the subdomain's bounding box in cells; cells of the
    box that belong to other subdomains carry NaN.
    """
    lay = level.layout
    dom = level.network.domain
    mask = level.cell_subdomain == subdomain  # [iy, ix]
    iys, ixs = np.nonzero(mask)
    x0, x1 = ixs.min(), ixs.max() + 1
    y0, y1 = iys.min(), iys.max() + 1
    p = np.full((y1 - y0, x1 - x0), np.nan)
    sub = mask[y0:y1, x0:x1]
    p[sub] = x[lay.p2_id[y0:y1, x0:x1][sub]]

    xs = dom.x0 + np.arange(x0, x1 + 1) * level.hx
    ys = dom.y0 + np.arange(y0, y1 + 1) * level.hy
    nx, ny = x1 - x0, y1 - y0
    with open(path, "w") as fh:
        fh.write('<?xml version="1.0"?>\n')
        fh.write('<VTKFile type="RectilinearGrid" version="1.0" '
                 'byte_order="LittleEndian">\n')
        fh.write(f'  <RectilinearGrid WholeExtent="0 {nx} 0 {ny} 0 0">\n')
        fh.write(f'    <Piece Extent="0 {nx} 0 {ny} 0 0">\n')
        fh.write('      <Coordinates>\n')
        _da(fh, "x", xs)
        _da(fh, "y", ys)
        _da(fh, "z", [0.0])
        fh.write('      </Coordinates>\n')
        fh.write('      <CellData Scalars="pressure">\n')
        _da(fh, "pressure", p.ravel())
        fh.write('      </CellData>\n')
        fh.write('    </Piece>\n  </RectilinearGrid>\n</VTKFile>\n')


def segment_polyline(level, segment_index, x):
    """(points, element pressures) of one fracture segment's polyline.

    Pieces of the segment are concatenated in span order; the polyline has
    one point per element boundary (element count + 1 in total).
    """
    lay = level.layout
    order = sorted((pi for pi, piece in enumerate(level.network.pieces)
                    if piece.segment_index == segment_index),
                   key=lambda pi: level.network.pieces[pi].span)
    pts, pvals = [], []
    for pi in order:
        piece, pg = level.network.pieces[pi], level.piece_grids[pi]
        start = 0 if not pts else 1   # shared point with the previous piece
        for i in range(start, pg.n + 1):
            pts.append(piece.point(pg.node(i)))
        pvals.append(x[lay.pf_id[pi]])
    return np.asarray(pts), np.concatenate(pvals)


def write_fracture_pressure_vtp(path, level, x, segment_index):
    """Polyline file with one fracture segment's element pressures."""
    pts, p = segment_polyline(level, segment_index, x)
    n = len(p)
    xyz = np.column_stack([pts, np.zeros(len(pts))]).ravel()
    conn = np.column_stack([np.arange(n), np.arange(1, n + 1)]).ravel()
    with open(path, "w") as fh:
        fh.write('<?xml version="1.0"?>\n')
        fh.write('<VTKFile type="PolyData" version="1.0" '
                 'byte_order="LittleEndian">\n')
        fh.write('  <PolyData>\n')
        fh.write(f'    <Piece NumberOfPoints="{n + 1}" NumberOfLines="{n}">\n')
        fh.write('      <Points>\n')
        _da(fh, "points", xyz, n_components=3)
        fh.write('      </Points>\n')
        fh.write('      <Lines>\n')
        fh.write('        <DataArray type="Int64" Name="connectivity" format="ascii">\n')
        fh.write("          " + " ".join(str(v) for v in conn) + "\n")
        fh.write('        </DataArray>\n')
        fh.write('        <DataArray type="Int64" Name="offsets" format="ascii">\n')
        fh.write("          " + " ".join(str(2 * (i + 1)) for i in range(n)) + "\n")
        fh.write('        </DataArray>\n')
        fh.write('      </Lines>\n')
        fh.write('      <CellData Scalars="pressure">\n')
        _da(fh, "pressure", p)
        fh.write('      </CellData>\n')
        fh.write('    </Piece>\n  </PolyData>\n</VTKFile>\n')


def write_outputs(out_dir, name, level, x, report, cycle_config):
    """Write the full output set of one run; returns the directory path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_convergence_csv(out / "convergence.csv", report)
    write_summary(out / "summary.txt", name, level, report, cycle_config)
    if x is not None:
        for s in range(1, level.network.num_subdomains + 1):
            write_bulk_pressure_vtr(out / f"pressure_bulk_{s:02d}.vtr",
                                    level, x, s)
        for si in range(len(level.network.segments)):
            write_fracture_pressure_vtp(
                out / f"pressure_fracture_{si + 1:02d}.vtp", level, x, si)
    return out
