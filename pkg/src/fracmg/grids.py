"""Grid hierarchy and staggered mixed-dimensional DOF layouts.

The coarsest level is the uniform tensor grid whose lines resolve every
fracture; each refinement splits 2D cells into four and 1D fracture
elements into two, so fracture lines and intersection points persist as
grid entities on every level.

DOF groups are ordered globally as [U2, U1, P2, P1, P0]: bulk velocities
(one per edge, two collocated DOFs on fracture edges), fracture velocities
(1D nodal fluxes per piece), bulk cell pressures, fracture element
pressures and intersection pressures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .geometry import FractureNetwork, HORIZONTAL, VERTICAL
from .model import ModelConfig, resolve_tip

# id codes used in the index maps
ABSENT = -1     # slot not present (second slot of a single-DOF edge)
ELIMINATED = -2  # prescribed-flux DOF removed from the unknown vector


@dataclass
class PieceGrid:
    """1D grid of one fracture piece at a fixed level."""

    n: int        # element count
    s0: float     # span start (running coordinate)
    h: float      # element length
    # bulk edge anchors: for a vertical piece, edges (line, j0 + e)
    line: int
    j0: int

    def node(self, i):
        return self.s0 + i * self.h

    def midpoint(self, e):
        return self.s0 + (e + 0.5) * self.h


class DofLayout:
    """Index maps between staggered grid positions and global DOF numbers."""

    def __init__(self, level):
        net = level.network
        nx, ny = level.nx, level.ny
        bcs = level.config.bcs

        ux_id = np.full((nx + 1, ny, 2), ABSENT, dtype=np.int64)
        uy_id = np.full((nx, ny + 1, 2), ABSENT, dtype=np.int64)
        ux_fixed = np.zeros((nx + 1, ny), dtype=float)
        uy_fixed = np.zeros((nx, ny + 1), dtype=float)

        ux_id[:, :, 0] = 0
        uy_id[:, :, 0] = 0
        for pg, piece in zip(level.piece_grids, net.pieces):
            if piece.axis == VERTICAL:
                ux_id[pg.line, pg.j0:pg.j0 + pg.n, 1] = 0
            else:
                uy_id[pg.j0:pg.j0 + pg.n, pg.line, 1] = 0

        # prescribed-flux boundary velocities are eliminated
        from .geometry import FixedFlux
        if isinstance(bcs.left, FixedFlux):
            ux_id[0, :, 0] = ELIMINATED
            ux_fixed[0, :] = -bcs.left.value * level.hy
        if isinstance(bcs.right, FixedFlux):
            ux_id[nx, :, 0] = ELIMINATED
            ux_fixed[nx, :] = bcs.right.value * level.hy
        if isinstance(bcs.bottom, FixedFlux):
            uy_id[:, 0, 0] = ELIMINATED
            uy_fixed[:, 0] = -bcs.bottom.value * level.hx
        if isinstance(bcs.top, FixedFlux):
            uy_id[:, ny, 0] = ELIMINATED
            uy_fixed[:, ny] = bcs.top.value * level.hx

        # fracture node DOFs; tips with prescribed flux are eliminated
        uf_id, uf_fixed, tips = [], [], []
        for pg, piece in zip(level.piece_grids, net.pieces):
            seg = net.segments[piece.segment_index]
            ids = np.zeros(pg.n + 1, dtype=np.int64)
            fixed = np.zeros(pg.n + 1, dtype=float)
            tmin = resolve_tip(piece, piece.end_min, "min", seg, bcs)
            tmax = resolve_tip(piece, piece.end_max, "max", seg, bcs)
            if tmin.kind == "flux":
                ids[0] = ELIMINATED
                fixed[0] = -tmin.value   # outward at the min end is -s
            if tmax.kind == "flux":
                ids[pg.n] = ELIMINATED
                fixed[pg.n] = tmax.value
            uf_id.append(ids)
            uf_fixed.append(fixed)
            tips.append((tmin, tmax))

        # assign global indices in group order [U2, U1, P2, P1, P0]
        idx = 0

        def assign(arr):
            nonlocal idx
            free = arr >= 0
            count = int(free.sum())
            arr[free] = np.arange(idx, idx + count).reshape(arr[free].shape)
            idx += count

        # np boolean indexing flattens in C order: (i, j, slot) scan for ux
        assign(ux_id)
        assign(uy_id)
        self.n_u2 = idx
        for ids in uf_id:
            assign(ids)
        self.n_u1 = idx - self.n_u2
        p2_id = np.arange(idx, idx + nx * ny, dtype=np.int64).reshape(ny, nx)
        idx += nx * ny
        self.n_p2 = nx * ny
        pf_id = []
        for pg in level.piece_grids:
            pf_id.append(np.arange(idx, idx + pg.n, dtype=np.int64))
            idx += pg.n
        self.n_p1 = idx - self.n_u2 - self.n_u1 - self.n_p2
        p0_id = np.arange(idx, idx + len(net.intersections), dtype=np.int64)
        idx += len(net.intersections)
        self.n_p0 = len(net.intersections)
        self.n = idx

        self.ux_id, self.uy_id = ux_id, uy_id
        self.ux_fixed, self.uy_fixed = ux_fixed, uy_fixed
        self.uf_id, self.uf_fixed = uf_id, uf_fixed
        self.p2_id, self.pf_id, self.p0_id = p2_id, pf_id, p0_id
        self.tips = tips

        self.u2 = slice(0, self.n_u2)
        self.u1 = slice(self.n_u2, self.n_u2 + self.n_u1)
        self.p2 = slice(self.u1.stop, self.u1.stop + self.n_p2)
        self.p1 = slice(self.p2.stop, self.p2.stop + self.n_p1)
        self.p0 = slice(self.p1.stop, self.p1.stop + self.n_p0)

    def group_slices(self):
        return {"u2": self.u2, "u1": self.u1, "p2": self.p2,
                "p1": self.p1, "p0": self.p0}

    def check(self, x):
        if len(x) != self.n:
            raise DimensionMismatch(f"vector of length {len(x)}, layout has {self.n}")


class GridLevel:
    """One level of the hierarchy: uniform 2D grid + 1D fracture grids."""

    def __init__(self, network: FractureNetwork, config: ModelConfig, k: int):
        self.network = network
        self.config = config
        self.k = k
        r = 1 << k
        self.nx = network.nx * r
        self.ny = network.ny * r
        self.hx = network.hx / r
        self.hy = network.hy / r
        self.cell_subdomain = np.repeat(np.repeat(network.cell_subdomain, r, axis=0),
                                        r, axis=1)
        dom = network.domain
        self.piece_grids = []
        for piece in network.pieces:
            if piece.axis == VERTICAL:
                line = int(round((piece.at - dom.x0) / self.hx))
                j0 = int(round((piece.span[0] - dom.y0) / self.hy))
                n = int(round(piece.length / self.hy))
                h = self.hy
            else:
                line = int(round((piece.at - dom.y0) / self.hy))
                j0 = int(round((piece.span[0] - dom.x0) / self.hx))
                n = int(round(piece.length / self.hx))
                h = self.hx
            self.piece_grids.append(PieceGrid(n=n, s0=piece.span[0], h=h,
                                              line=line, j0=j0))
        self.layout = DofLayout(self)

    def cell_center(self, ix, iy):
        dom = self.network.domain
        return (dom.x0 + (ix + 0.5) * self.hx, dom.y0 + (iy + 0.5) * self.hy)

    def fracture_point(self, piece_index, s):
        return self.network.pieces[piece_index].point(s)


class GridHierarchy:
    """Nested levels 0..M (coarsest first) sharing one network and config."""

    def __init__(self, network: FractureNetwork, config: ModelConfig, levels: int):
        if levels < 0:
            raise ValueError("need levels >= 0")
        self.network = network
        self.config = config
        self.levels = [GridLevel(network, config, k) for k in range(levels + 1)]

    def __len__(self):
        return len(self.levels)

    @property
    def finest(self):
        return self.levels[-1]


def build_coarsest_grid(network: FractureNetwork, config: ModelConfig) -> GridLevel:
    """Coarsest fracture-conforming grid with its DOF layout."""
    return GridLevel(network, config, 0)


def refine(level: GridLevel) -> GridLevel:
    """Regularly refined level: 2D cells split in four, 1D elements in two."""
    return GridLevel(level.network, level.config, level.k + 1)


def build_hierarchy(network: FractureNetwork, config: ModelConfig, levels: int) -> GridHierarchy:
    return GridHierarchy(network, config, levels)


def levels_for_target(network: FractureNetwork, target_nx: int, target_ny: int | None = None) -> int:
    """Refinement count M turning the coarsest grid into target_nx x target_ny."""
    if target_ny is None:
        target_ny = target_nx * network.ny // network.nx
    mx = target_nx / network.nx
    my = target_ny / network.ny
    m = int(round(np.log2(mx)))
    if (1 << m) * network.nx != target_nx or (1 << m) * network.ny != target_ny:
        raise ValueError(
            f"target {target_nx}x{target_ny} not reachable from coarsest "
            f"{network.nx}x{network.ny} by regular refinement")
    return m
