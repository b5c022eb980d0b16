"""Intergrid transfer operators on the staggered mixed-dimensional layout.

The averaging restriction acts group-blockwise: cell pressures average
their four children, fracture element pressures their two, intersection
pressures transfer by identity; velocities use compact weighted stencils
over the collinear children and the flanking parallel fine velocities.
Stencils are truncated to DOFs that exist on the fine grid (and, across
fractures, to the matching side); the grid-function form additionally
renormalizes each row to sum one so constants restrict to constants.

Residuals scale differently from grid functions because velocity DOFs are
integrated fluxes: under coarsening, bulk momentum and all 1D equation
residuals grow by 2 and bulk continuity residuals by 4 (they sum over
children), while intersection balances are level-independent.  The cycle
therefore restricts residuals with diag(tau) times the raw (truncated,
un-renormalized) operator, tau = (2, 2, 4, 2, 1) on (U2, U1, P2, P1,
P0), and prolongates errors with exactly its transpose, which keeps the
coarse-grid correction consistent with the rediscretized coarse
operators and preserves constant fields everywhere.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .geometry import VERTICAL
from .grids import ABSENT, GridLevel


def tau_vector(layout):
    """Per-equation residual scaling between consecutive levels.

    2 on momentum-type and 1D continuity groups, 4 on bulk continuity,
    1 on intersection balances.
    """
    t = np.empty(layout.n)
    t[layout.u2] = 2.0
    t[layout.u1] = 2.0
    t[layout.p2] = 4.0
    t[layout.p1] = 2.0
    t[layout.p0] = 1.0
    return t


def _emit(rows, cols, vals, coarse_ids, candidates, weights, renormalize):
    """Append truncated stencil entries, optionally renormalized to sum 1."""
    c = coarse_ids.ravel()
    free = c >= 0
    cand = np.stack([np.asarray(a).ravel() for a in candidates], axis=1)
    w = np.asarray(weights, dtype=float)
    valid = cand >= 0
    wsum = valid @ w
    if np.any(free & (wsum == 0.0)):
        raise AssertionError("free coarse DOF with no fine-grid support")
    for j in range(cand.shape[1]):
        m = free & valid[:, j]
        rows.append(c[m])
        cols.append(cand[m, j])
        vals.append(w[j] / wsum[m] if renormalize
                    else np.full(int(m.sum()), w[j]))


def _masked(arr, mask):
    return np.where(mask, ABSENT, arr)


def restriction(coarse: GridLevel, fine: GridLevel,
                renormalize: bool = True) -> sp.csr_matrix:
    """Restriction on the staggered layout.

    With ``renormalize=True`` (the default) every row is scaled to sum
    one, giving the averaging restriction of grid functions.  With
    ``renormalize=False`` truncated stencils keep their raw weights; that
    variant underlies the cycle's residual restriction and makes the
    transposed prolongation preserve constant fields exactly (in the
    natural per-group variables) even next to boundaries and fractures.
    """
    clay, flay = coarse.layout, fine.layout
    nxc, nyc = coarse.nx, coarse.ny
    rows, cols, vals = [], [], []

    # ---- bulk x-velocities ----------------------------------------------
    fx0, fx1 = flay.ux_id[:, :, 0], flay.ux_id[:, :, 1]
    cx0, cx1 = clay.ux_id[:, :, 0], clay.ux_id[:, :, 1]
    doubled = cx1 != ABSENT
    odd = fx0[1::2, :]                      # parallel edges on odd lines
    shape = (nxc + 1, nyc)
    L0 = np.full(shape, ABSENT, dtype=np.int64)
    L1 = np.full(shape, ABSENT, dtype=np.int64)
    R0 = np.full(shape, ABSENT, dtype=np.int64)
    R1 = np.full(shape, ABSENT, dtype=np.int64)
    L0[1:, :], L1[1:, :] = odd[:, ::2], odd[:, 1::2]
    R0[:-1, :], R1[:-1, :] = odd[:, ::2], odd[:, 1::2]
    # slot 0: negative side on doubled edges, so no positive-side flanks
    _emit(rows, cols, vals, cx0,
          [fx0[::2, ::2], fx0[::2, 1::2],
           L0, L1, _masked(R0, doubled), _masked(R1, doubled)],
          [0.25, 0.25, 0.125, 0.125, 0.125, 0.125], renormalize)
    # slot 1: positive side, flanks on the positive side only
    _emit(rows, cols, vals, cx1,
          [fx1[::2, ::2], fx1[::2, 1::2], R0, R1],
          [0.25, 0.25, 0.125, 0.125], renormalize)

    # ---- bulk y-velocities ----------------------------------------------
    fy0, fy1 = flay.uy_id[:, :, 0], flay.uy_id[:, :, 1]
    cy0, cy1 = clay.uy_id[:, :, 0], clay.uy_id[:, :, 1]
    doubled = cy1 != ABSENT
    odd = fy0[:, 1::2]
    shape = (nxc, nyc + 1)
    B0 = np.full(shape, ABSENT, dtype=np.int64)
    B1 = np.full(shape, ABSENT, dtype=np.int64)
    T0 = np.full(shape, ABSENT, dtype=np.int64)
    T1 = np.full(shape, ABSENT, dtype=np.int64)
    B0[:, 1:], B1[:, 1:] = odd[::2, :], odd[1::2, :]
    T0[:, :-1], T1[:, :-1] = odd[::2, :], odd[1::2, :]
    _emit(rows, cols, vals, cy0,
          [fy0[::2, ::2], fy0[1::2, ::2],
           B0, B1, _masked(T0, doubled), _masked(T1, doubled)],
          [0.25, 0.25, 0.125, 0.125, 0.125, 0.125], renormalize)
    _emit(rows, cols, vals, cy1,
          [fy1[::2, ::2], fy1[1::2, ::2], T0, T1],
          [0.25, 0.25, 0.125, 0.125], renormalize)

    # ---- fracture velocities (nodal, per piece) --------------------------
    for cuf, fuf in zip(clay.uf_id, flay.uf_id):
        n = len(cuf)
        C = fuf[::2]
        L = np.full(n, ABSENT, dtype=np.int64)
        R = np.full(n, ABSENT, dtype=np.int64)
        L[1:], R[:-1] = fuf[1::2], fuf[1::2]
        _emit(rows, cols, vals, cuf, [C, L, R], [0.5, 0.25, 0.25], renormalize)

    # ---- pressures -------------------------------------------------------
    fp2, cp2 = flay.p2_id, clay.p2_id
    _emit(rows, cols, vals, cp2,
          [fp2[::2, ::2], fp2[::2, 1::2], fp2[1::2, ::2], fp2[1::2, 1::2]],
          [0.25] * 4, renormalize)
    for cpf, fpf in zip(clay.pf_id, flay.pf_id):
        _emit(rows, cols, vals, cpf, [fpf[::2], fpf[1::2]], [0.5, 0.5], renormalize)
    if clay.n_p0:
        _emit(rows, cols, vals, clay.p0_id, [flay.p0_id], [1.0], renormalize)

    R_ = sp.coo_matrix((np.concatenate(vals),
                        (np.concatenate(rows), np.concatenate(cols))),
                       shape=(clay.n, flay.n))
    return R_.tocsr()


def residual_restriction(coarse: GridLevel, fine: GridLevel,
                         R_raw: sp.csr_matrix | None = None) -> sp.csr_matrix:
    """Residual restriction used inside the multigrid cycle.

    This is diag(tau) times the raw (un-renormalized) averaging operator;
    truncated stencils keep their reduced weights, mirroring the reduced
    equation support near boundaries and fractures.
    """
    if R_raw is None:
        R_raw = restriction(coarse, fine, renormalize=False)
    return (sp.diags(tau_vector(coarse.layout)) @ R_raw).tocsr()


def prolongation(coarse: GridLevel, fine: GridLevel,
                 R_raw: sp.csr_matrix | None = None) -> sp.csr_matrix:
    """Error prolongation P = (diag(tau) R_raw)^T mapping coarse to fine.

    P is exactly the transpose of the residual restriction, so the
    cycle's coarse-grid correction is symmetric.  In the natural per-group
    variables (velocity densities, pressures) P maps constant fields to
    constant fields exactly, including next to boundaries and fractures.
    """
    return residual_restriction(coarse, fine, R_raw).T.tocsr()


def transfer_pairs(hierarchy):
    """(residual restriction, prolongation) pairs between consecutive levels.

    Index k of the returned list maps between levels k and k+1.
    """
    out = []
    for coarse, fine in zip(hierarchy.levels, hierarchy.levels[1:]):
        Rt = residual_restriction(coarse, fine)
        out.append((Rt, Rt.T.tocsr()))
    return out
