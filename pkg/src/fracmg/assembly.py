"""Assembly of the mixed-dimensional saddle-point system on one grid level.

Velocity basis functions are normalized to unit integrated flux across
their edge, so the divergence blocks B and the coupling blocks F carry
signed incidence entries (+-1) and all metric information sits in the
velocity blocks.  The trapezoidal-midpoint quadrature collapses the bulk
velocity mass matrix to its diagonal; the only velocity-velocity coupling
left is the collocated-twin term across fractures, which carries a factor
(1 - xi) and vanishes for xi = 1.

Bulk velocities follow the global +x/+y orientation (a positive
coefficient is a flux in the positive axis direction); fracture velocities
follow the positive running coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch
from .geometry import DirichletPressure, VERTICAL
from .grids import ABSENT, ELIMINATED, GridLevel


@dataclass
class MixedDimSystem:
    """Assembled symmetric saddle-point system A x = b on one level."""

    A: sp.csr_matrix
    b: np.ndarray
    level: GridLevel

    @property
    def layout(self):
        return self.level.layout

    def residual(self, x):
        """Residual b - A x and its Euclidean norm."""
        x = np.asarray(x, dtype=float)
        if x.shape != self.b.shape:
            raise DimensionMismatch(f"x has shape {x.shape}, expected {self.b.shape}")
        r = self.b - self.A @ x
        return r, float(np.linalg.norm(r))


def coefficient_arrays(level: GridLevel):
    """Evaluate bulk coefficients at the cell centers of this level."""
    cfg = level.config
    nx, ny = level.nx, level.ny
    dom = level.network.domain
    xc = dom.x0 + (np.arange(nx) + 0.5) * level.hx
    yc = dom.y0 + (np.arange(ny) + 0.5) * level.hy
    kxx = np.empty((ny, nx))
    kyy = np.empty((ny, nx))
    q = np.empty((ny, nx))
    if not callable(cfg.bulk_k) and not callable(cfg.q):
        k = cfg.k_at(xc[0], yc[0])
        kxx[:], kyy[:] = k
        q[:] = cfg.q_at(xc[0], yc[0])
    else:
        for iy, y in enumerate(yc):
            for ix, x in enumerate(xc):
                kxx[iy, ix], kyy[iy, ix] = cfg.k_at(x, y)
                q[iy, ix] = cfg.q_at(x, y)
    return kxx, kyy, q


def fracture_element_data(level: GridLevel, piece_index: int):
    """Per-element aperture, permeabilities and source of one piece."""
    piece = level.network.pieces[piece_index]
    seg = level.network.segments[piece.segment_index]
    pg = level.piece_grids[piece_index]
    mids = pg.s0 + (np.arange(pg.n) + 0.5) * pg.h
    k_tau = np.array([seg.k_tau(s) for s in mids])
    k_n = np.array([seg.k_n(s) for s in mids])
    q = np.array([level.config.q_fracture_at(*piece.point(s)) for s in mids])
    return seg.aperture, k_tau, k_n, q


def assemble(level: GridLevel) -> MixedDimSystem:
    """Assemble matrix and right-hand side for one grid level.

    The block layout is [[A22, 0, B22^T, F21^T, 0], [0, A11, 0, B11^T,
    F10^T], [B22, 0, 0, 0, 0], [F21, B11, 0, 0, 0], [0, F10, 0, 0, 0]]
    with right-hand side [g_U2, g_U1, Q2, Q1, 0]; prescribed-flux
    velocities were eliminated at layout time and contribute to the
    right-hand side here.
    """
    lay = level.layout
    net = level.network
    nx, ny, hx, hy = level.nx, level.ny, level.hx, level.hy
    xi = level.config.xi
    kxx, kyy, q = coefficient_arrays(level)

    rows, cols, vals = [], [], []
    b = np.zeros(lay.n)

    def add(r, c, v):
        rows.append(np.asarray(r, dtype=np.int64).ravel())
        cols.append(np.asarray(c, dtype=np.int64).ravel())
        vals.append(np.asarray(v, dtype=float).ravel())

    def add_sym(r, c, v):
        add(r, c, v)
        add(c, r, v)

    # ---- bulk velocity diagonal ------------------------------------------
    kxxT, kyyT = kxx.T, kyy.T  # (nx, ny) indexed [ix, iy]

    ux0, ux1 = lay.ux_id[:, :, 0], lay.ux_id[:, :, 1]
    half_l = np.zeros((nx + 1, ny))
    half_r = np.zeros((nx + 1, ny))
    half_l[1:, :] = hx / (2.0 * kxxT) / hy
    half_r[:nx, :] = hx / (2.0 * kxxT) / hy
    doubled_x = ux1 != ABSENT
    diag0 = np.where(doubled_x, half_l, half_l + half_r)
    free = ux0 >= 0
    add(ux0[free], ux0[free], diag0[free])
    free = ux1 >= 0
    add(ux1[free], ux1[free], half_r[free])

    uy0, uy1 = lay.uy_id[:, :, 0], lay.uy_id[:, :, 1]
    half_b = np.zeros((nx, ny + 1))
    half_t = np.zeros((nx, ny + 1))
    half_b[:, 1:] = hy / (2.0 * kyyT) / hx
    half_t[:, :ny] = hy / (2.0 * kyyT) / hx
    doubled_y = uy1 != ABSENT
    diag0 = np.where(doubled_y, half_b, half_b + half_t)
    free = uy0 >= 0
    add(uy0[free], uy0[free], diag0[free])
    free = uy1 >= 0
    add(uy1[free], uy1[free], half_t[free])

    # ---- divergence block B22 and bulk sources ---------------------------
    prow = lay.p2_id.T  # (nx, ny) indexed [ix, iy]
    b[lay.p2_id] = -q * hx * hy

    def couple_pressure(edge_ids, fixed, prows, sign):
        """B22 incidence entries; eliminated edges move to the RHS."""
        free = edge_ids >= 0
        add_sym(prows[free], edge_ids[free], np.full(int(free.sum()), sign))
        elim = edge_ids == ELIMINATED
        np.subtract.at(b, prows[elim], sign * fixed[elim])

    # left edge of each cell: cell sits on the positive side
    le = np.where(doubled_x[:nx, :], ux1[:nx, :], ux0[:nx, :])
    couple_pressure(le, lay.ux_fixed[:nx, :], prow, +1.0)
    # right edge: negative side, slot 0 always
    couple_pressure(ux0[1:, :], lay.ux_fixed[1:, :], prow, -1.0)
    be = np.where(doubled_y[:, :ny], uy1[:, :ny], uy0[:, :ny])
    couple_pressure(be, lay.uy_fixed[:, :ny], prow, +1.0)
    couple_pressure(uy0[:, 1:], lay.uy_fixed[:, 1:], prow, -1.0)

    # ---- Dirichlet side data on boundary velocity rows -------------------
    bcs = level.config.bcs
    if isinstance(bcs.left, DirichletPressure):
        b[ux0[0, :]] += bcs.left.value
    if isinstance(bcs.right, DirichletPressure):
        b[ux0[nx, :]] -= bcs.right.value
    if isinstance(bcs.bottom, DirichletPressure):
        b[uy0[:, 0]] += bcs.bottom.value
    if isinstance(bcs.top, DirichletPressure):
        b[uy0[:, ny]] -= bcs.top.value

    # ---- fracture contributions ------------------------------------------
    for pi, (piece, pg) in enumerate(zip(net.pieces, level.piece_grids)):
        d, k_tau, k_n, qf = fracture_element_data(level, pi)
        if piece.axis == VERTICAL:
            u_neg = ux0[pg.line, pg.j0:pg.j0 + pg.n]
            u_pos = ux1[pg.line, pg.j0:pg.j0 + pg.n]
        else:
            u_neg = uy0[pg.j0:pg.j0 + pg.n, pg.line]
            u_pos = uy1[pg.j0:pg.j0 + pg.n, pg.line]
        h = pg.h

        # Robin interface terms on the collocated bulk velocities
        robin = d / (2.0 * k_n * h)
        add(u_neg, u_neg, xi * robin)
        add(u_pos, u_pos, xi * robin)
        if xi != 1.0:
            add_sym(u_neg, u_pos, (1.0 - xi) * robin)

        # tangential fracture velocity diagonal (trapezoidal rule)
        uf = lay.uf_id[pi]
        elem_inv = h / (2.0 * d * k_tau)
        node_diag = np.zeros(pg.n + 1)
        node_diag[:-1] += elem_inv
        node_diag[1:] += elem_inv
        free = uf >= 0
        add(uf[free], uf[free], node_diag[free])

        # fracture divergence B11 and bulk transfer F21
        pf = lay.pf_id[pi]
        for node_ids, sign in ((uf[:-1], +1.0), (uf[1:], -1.0)):
            free = node_ids >= 0
            add_sym(pf[free], node_ids[free], np.full(int(free.sum()), sign))
            elim = node_ids == ELIMINATED
            fixed = (lay.uf_fixed[pi][:-1] if sign > 0 else lay.uf_fixed[pi][1:])
            np.subtract.at(b, pf[elim], sign * fixed[elim])
        add_sym(pf, u_neg, np.ones(pg.n))
        add_sym(pf, u_pos, -np.ones(pg.n))

        b[pf] += -qf * h

        # Dirichlet tip data on the end velocity rows
        tmin, tmax = lay.tips[pi]
        if tmin.kind == "dirichlet":
            b[uf[0]] += tmin.value
        if tmax.kind == "dirichlet":
            b[uf[pg.n]] -= tmax.value

    # ---- intersection flux conservation F10 ------------------------------
    for idx, it in enumerate(net.intersections):
        row = lay.p0_id[idx]
        for pi, end in it.incident:
            pg = level.piece_grids[pi]
            if end == "max":
                add_sym(row, lay.uf_id[pi][pg.n], 1.0)
            else:
                add_sym(row, lay.uf_id[pi][0], -1.0)

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    A = sp.coo_matrix((vals, (rows, cols)), shape=(lay.n, lay.n)).tocsr()
    return MixedDimSystem(A=A, b=b, level=level)
