"""Overlapping block (Vanka-type) smoother for the mixed-dimensional system.

One smoothing step makes three multiplicative sweeps: over the bulk cells
(each block couples a cell pressure with its incident, side-correct edge
velocities), over the fracture elements (element pressure, its two nodal
fracture velocities and the two collocated bulk velocities) and over the
intersections (incident fracture end velocities, optionally with the
intersection pressure).  Every local saddle-point block is solved exactly
via a precomputed dense inverse; sweeps update the iterate in place, so
later blocks see earlier corrections.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse.linalg as spla
from numba import njit

from .errors import SingularBlock
from .geometry import VERTICAL
from .grids import ABSENT


@njit(cache=True)
def _build_inverses(indptr, indices, data, n, block_dofs, block_ptr, inv_flat, inv_ptr):
    pos = np.full(n, -1, dtype=np.int64)
    nb = len(block_ptr) - 1
    for bi in range(nb):
        lo, hi = block_ptr[bi], block_ptr[bi + 1]
        bs = hi - lo
        for k in range(bs):
            pos[block_dofs[lo + k]] = k
        M = np.zeros((bs, bs))
        for k in range(bs):
            row = block_dofs[lo + k]
            for p in range(indptr[row], indptr[row + 1]):
                c = pos[indices[p]]
                if c >= 0:
                    M[k, c] += data[p]
        Minv = np.linalg.inv(M)
        o = inv_ptr[bi]
        for k in range(bs):
            for c in range(bs):
                inv_flat[o + k * bs + c] = Minv[k, c]
        for k in range(bs):
            pos[block_dofs[lo + k]] = -1


@njit(cache=True)
def _sweep(indptr, indices, data, b, x, block_dofs, block_ptr, inv_flat, inv_ptr):
    nb = len(block_ptr) - 1
    r = np.empty(16)
    for bi in range(nb):
        lo, hi = block_ptr[bi], block_ptr[bi + 1]
        bs = hi - lo
        for k in range(bs):
            row = block_dofs[lo + k]
            acc = b[row]
            for p in range(indptr[row], indptr[row + 1]):
                acc -= data[p] * x[indices[p]]
            r[k] = acc
        o = inv_ptr[bi]
        for k in range(bs):
            upd = 0.0
            for c in range(bs):
                upd += inv_flat[o + k * bs + c] * r[c]
            x[block_dofs[lo + k]] += upd


class VankaSmoother:
    """Precomputed block structure and local inverses for one level's system."""

    def __init__(self, system, include_p0=True):
        self.system = system
        self.include_p0 = include_p0
        level = system.level
        lay = level.layout
        net = level.network
        nx, ny = level.nx, level.ny

        blocks = []

        # --- bulk cell blocks, grouped by subdomain, row-major within -----
        ux0, ux1 = lay.ux_id[:, :, 0], lay.ux_id[:, :, 1]
        uy0, uy1 = lay.uy_id[:, :, 0], lay.uy_id[:, :, 1]
        left = np.where(ux1[:nx, :] != ABSENT, ux1[:nx, :], ux0[:nx, :])   # [ix, iy]
        right = ux0[1:, :]
        bottom = np.where(uy1[:, :ny] != ABSENT, uy1[:, :ny], uy0[:, :ny])  # [ix, iy]
        top = uy0[:, 1:]
        sub = level.cell_subdomain  # [iy, ix]
        iy_idx, ix_idx = np.divmod(np.arange(nx * ny), nx)
        order = np.lexsort((ix_idx, iy_idx, sub.ravel()))
        cell_dofs = np.stack([left.T.ravel(), right.T.ravel(),
                              bottom.T.ravel(), top.T.ravel(),
                              lay.p2_id.ravel()], axis=1)[order]
        for row in cell_dofs:
            blocks.append(row[row >= 0])
        self.n_bulk_blocks = nx * ny

        # --- fracture element blocks, pieces ordered by (pair, span) ------
        piece_order = sorted(range(len(net.pieces)),
                             key=lambda i: (net.pieces[i].pair, net.pieces[i].span))
        nfrac = 0
        for pi in piece_order:
            piece, pg = net.pieces[pi], level.piece_grids[pi]
            uf, pf = lay.uf_id[pi], lay.pf_id[pi]
            if piece.axis == VERTICAL:
                u_neg = ux0[pg.line, pg.j0:pg.j0 + pg.n]
                u_pos = ux1[pg.line, pg.j0:pg.j0 + pg.n]
            else:
                u_neg = uy0[pg.j0:pg.j0 + pg.n, pg.line]
                u_pos = uy1[pg.j0:pg.j0 + pg.n, pg.line]
            for e in range(pg.n):
                dofs = np.array([uf[e], uf[e + 1], u_neg[e], u_pos[e], pf[e]])
                blocks.append(dofs[dofs >= 0])
                nfrac += 1
        self.n_fracture_blocks = nfrac

        # --- intersection blocks ------------------------------------------
        for idx, it in enumerate(net.intersections):
            dofs = []
            for pi, end in it.incident:
                pg = level.piece_grids[pi]
                dofs.append(lay.uf_id[pi][pg.n if end == "max" else 0])
            if include_p0:
                dofs.append(lay.p0_id[idx])
            blocks.append(np.array(dofs, dtype=np.int64))
        self.n_intersection_blocks = len(net.intersections)

        sizes = np.array([len(bk) for bk in blocks], dtype=np.int64)
        self.block_ptr = np.zeros(len(blocks) + 1, dtype=np.int64)
        np.cumsum(sizes, out=self.block_ptr[1:])
        self.block_dofs = (np.concatenate(blocks).astype(np.int64)
                           if blocks else np.empty(0, dtype=np.int64))
        self.inv_ptr = np.zeros(len(blocks) + 1, dtype=np.int64)
        np.cumsum(sizes * sizes, out=self.inv_ptr[1:])
        self.inv_flat = np.empty(self.inv_ptr[-1])

        A = system.A
        try:
            _build_inverses(A.indptr, A.indices, A.data, lay.n,
                            self.block_dofs, self.block_ptr,
                            self.inv_flat, self.inv_ptr[:-1])
        except Exception as exc:  # numba re-raises LinAlgError on singular blocks
            raise SingularBlock(f"singular local block: {exc}") from exc
        if not np.all(np.isfinite(self.inv_flat)):
            raise SingularBlock("non-finite entries in a local block inverse")

    def smooth(self, x, b=None, steps=1):
        """Apply the three-stage sweep ``steps`` times, updating x in place.

        ``b`` defaults to the assembled right-hand side; coarse levels of a
        multigrid cycle pass the restricted residual instead.
        """
        A = self.system.A
        if b is None:
            b = self.system.b
        for _ in range(steps):
            _sweep(A.indptr, A.indices, A.data, b, x,
                   self.block_dofs, self.block_ptr,
                   self.inv_flat, self.inv_ptr[:-1])
        return x

    def local_residual_norms(self, x):
        """Max per-block residual norm of the current iterate (diagnostic)."""
        r, _ = self.system.residual(x)
        out = np.empty(len(self.block_ptr) - 1)
        for bi in range(len(out)):
            out[bi] = np.linalg.norm(r[self.block_dofs[self.block_ptr[bi]:self.block_ptr[bi + 1]]])
        return out


def piece_line_dofs(level, piece_index):
    """Global DOFs of one fracture line block.

    The block couples every free fracture velocity node and element
    pressure of the piece with the collocated bulk twin velocities; bulk
    and intersection pressures stay frozen.
    """
    lay = level.layout
    pg = level.piece_grids[piece_index]
    piece = level.network.pieces[piece_index]
    if piece.axis == VERTICAL:
        u_neg = lay.ux_id[pg.line, pg.j0:pg.j0 + pg.n, 0]
        u_pos = lay.ux_id[pg.line, pg.j0:pg.j0 + pg.n, 1]
    else:
        u_neg = lay.uy_id[pg.j0:pg.j0 + pg.n, pg.line, 0]
        u_pos = lay.uy_id[pg.j0:pg.j0 + pg.n, pg.line, 1]
    uf = lay.uf_id[piece_index]
    return np.concatenate([uf[uf >= 0], u_neg, u_pos, lay.pf_id[piece_index]])


def strongly_conducting_pieces(level, threshold=10.0):
    """Pieces whose tangential conductance d K_tau dwarfs the bulk scale.

    Along such pieces the element-by-element sweep propagates corrections
    of the order of the huge tangential fluxes and leaves a transient
    residual far above the right-hand-side scale; those pieces get an
    exact line solve after each smoothing stage.
    """
    from .assembly import coefficient_arrays, fracture_element_data
    kxx, kyy, _ = coefficient_arrays(level)
    k_bulk = max(kxx.max(), kyy.max())
    out = []
    for pi in range(len(level.network.pieces)):
        d, k_tau, _, _ = fracture_element_data(level, pi)
        if d * k_tau.max() > threshold * k_bulk:
            out.append(pi)
    return out


class FractureLineSolver:
    """Exact solves of per-piece fracture line blocks (frozen environment).

    Each application computes the current residual and solves, piece by
    piece, the subsystem of :func:`piece_line_dofs`.  The blocks of
    different pieces share no DOFs, so one residual evaluation serves all
    of them.
    """

    def __init__(self, system, piece_indices=None):
        self.system = system
        level = system.level
        if piece_indices is None:
            piece_indices = range(len(level.network.pieces))
        A = system.A.tocsc()
        self.blocks = []
        for pi in piece_indices:
            dofs = piece_line_dofs(level, pi)
            try:
                lu = spla.splu(A[dofs][:, dofs].tocsc())
            except RuntimeError as exc:
                raise SingularBlock(
                    f"singular fracture line block on piece {pi}: {exc}") from exc
            self.blocks.append((dofs, lu))

    def apply(self, x, b=None):
        """Solve every line block against the current residual, in place."""
        if b is None:
            b = self.system.b
        if not self.blocks:
            return x
        r = b - self.system.A @ x
        for dofs, lu in self.blocks:
            x[dofs] += lu.solve(r[dofs])
        return x
