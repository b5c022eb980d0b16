"""Assembled system entries against the independent quadrature oracle."""

import numpy as np
import pytest

from fracmg import (BoundaryConditions, DimensionMismatch, DirichletPressure,
                    Domain, FractureSegment, ModelConfig, PiecewiseConstant,
                    VERTICAL, assemble, build_hierarchy, partition_domain)
from fracmg.oracle import (bulk_velocity_diagonal, bulk_velocity_diagonal_exact,
                           fracture_velocity_diagonal, robin_entry)

from conftest import no_fracture_hierarchy, one_fracture_hierarchy

DIRICHLET_LR = BoundaryConditions(left=DirichletPressure(0.0),
                                  right=DirichletPressure(1.0))


def random_bulk_system(rng, levels=2, with_fracture=False, xi=1.0,
                       d=None, kf=None):
    """Uniform grid with independent random permeability per cell."""
    # grid-defining coordinates stay on a dyadic lattice so the coarsest
    # fracture-conforming grid is small; permeabilities are fully random
    width = float(rng.choice([1.0, 1.5, 2.0, 2.5, 3.0]))
    height = float(rng.choice([0.5, 1.0, 1.5, 2.0]))
    nx = (1 << levels) * (2 if with_fracture else 1)
    ny = 1 << levels
    hx, hy = width / nx, height / ny
    k_cells = rng.uniform(0.1, 10.0, size=(ny, nx))

    def k_field(x, y):
        return k_cells[min(int(y / hy), ny - 1), min(int(x / hx), nx - 1)]

    if with_fracture:
        seg = FractureSegment(VERTICAL, width / 2.0, (0.0, height),
                              aperture=d, k_tangential=kf, k_normal=kf)
        net = partition_domain(Domain(0.0, width, 0.0, height), [seg])
    else:
        net = partition_domain(Domain(0.0, width, 0.0, height), [])
    cfg = ModelConfig(bcs=DIRICHLET_LR, bulk_k=k_field, xi=xi)
    hier = build_hierarchy(net, cfg, levels)
    return assemble(hier.finest), k_cells


def test_interior_edge_entries_match_quadrature_oracle(rng):
    """100 randomized interior/boundary edges against the oracle."""
    checked = 0
    for _ in range(8):
        system, k = random_bulk_system(rng, levels=2)
        level = system.level
        lay, hx, hy = level.layout, level.hx, level.hy
        A = system.A
        for iy in range(level.ny):
            for ix in range(level.nx + 1):
                dof = lay.ux_id[ix, iy, 0]
                if dof < 0:
                    continue
                if 0 < ix < level.nx:
                    want = bulk_velocity_diagonal(
                        [hx, hx], hy, [k[iy, ix - 1], k[iy, ix]])
                else:   # Dirichlet boundary edge: one-sided half
                    want = bulk_velocity_diagonal(
                        [hx], hy, [k[iy, min(ix, level.nx - 1)]])
                assert A[dof, dof] == pytest.approx(want, rel=1e-13)
                checked += 1
        for iy in range(1, level.ny):
            for ix in range(level.nx):
                dof = lay.uy_id[ix, iy, 0]
                want = bulk_velocity_diagonal(
                    [hy, hy], hx, [k[iy - 1, ix], k[iy, ix]])
                assert A[dof, dof] == pytest.approx(want, rel=1e-13)
                checked += 1
    assert checked >= 100


def test_fracture_entries_match_quadrature_oracle(rng):
    checked = 0
    for _ in range(6):
        d = float(rng.uniform(1e-4, 1e-1))
        breaks = np.sort(rng.uniform(0.1, 0.9, size=2))
        kf = PiecewiseConstant(breaks, rng.uniform(1e-4, 1e2, size=3))
        system, k = random_bulk_system(rng, levels=3, with_fracture=True,
                                       d=d, kf=kf)
        level = system.level
        lay, hx, hy = level.layout, level.hx, level.hy
        pg = level.piece_grids[0]
        A = system.A
        uf = lay.uf_id[0]
        k_elems = [kf(pg.midpoint(e)) for e in range(pg.n)]
        for i in range(pg.n + 1):
            if uf[i] < 0:
                continue
            if i == 0:
                want = fracture_velocity_diagonal([pg.h], d, k_elems[:1])
            elif i == pg.n:
                want = fracture_velocity_diagonal([pg.h], d, k_elems[-1:])
            else:
                want = fracture_velocity_diagonal(
                    [pg.h, pg.h], d, k_elems[i - 1:i + 1])
            assert A[uf[i], uf[i]] == pytest.approx(want, rel=1e-13)
            checked += 1
        # collocated bulk velocities: one-sided bulk half + Robin term
        for e in range(pg.n):
            iy = pg.j0 + e
            kn = kf(pg.midpoint(e))
            neg, pos = lay.ux_id[pg.line, iy, 0], lay.ux_id[pg.line, iy, 1]
            robin = robin_entry(hy, d, kn, xi=1.0)
            want_neg = bulk_velocity_diagonal([hx], hy, [k[iy, pg.line - 1]]) + robin
            want_pos = bulk_velocity_diagonal([hx], hy, [k[iy, pg.line]]) + robin
            assert A[neg, neg] == pytest.approx(want_neg, rel=1e-13)
            assert A[pos, pos] == pytest.approx(want_pos, rel=1e-13)
            checked += 2
    assert checked >= 100


def test_assembled_matrix_exactly_symmetric(rng):
    for hier in (no_fracture_hierarchy(3), one_fracture_hierarchy(3)):
        A = assemble(hier.finest).A
        assert (A - A.T).nnz == 0
    system, _ = random_bulk_system(rng, levels=2, with_fracture=True,
                                   d=1e-2, kf=5.0, xi=0.75)
    assert (system.A - system.A.T).nnz == 0


def test_velocity_block_diagonal_for_xi_one():
    hier = one_fracture_hierarchy(3, xi=1.0)
    system = assemble(hier.finest)
    lay = system.layout
    nu = lay.n_u2 + lay.n_u1
    V = system.A[:nu, :nu].tocoo()
    assert np.all(V.row == V.col)


def test_twin_coupling_appears_for_xi_below_one(rng):
    d, kf, xi = 1e-2, 3.0, 0.8
    system, _ = random_bulk_system(rng, levels=2, with_fracture=True,
                                   d=d, kf=kf, xi=xi)
    level = system.level
    lay = level.layout
    pg = level.piece_grids[0]
    neg = lay.ux_id[pg.line, pg.j0, 0]
    pos = lay.ux_id[pg.line, pg.j0, 1]
    want = robin_entry(level.hy, d, kf, xi, cross=True)
    assert abs(system.A[neg, pos]) == pytest.approx(want, rel=1e-13)


def test_pressure_rows_have_zero_diagonal_and_incidence_entries():
    hier = one_fracture_hierarchy(2)
    system = assemble(hier.finest)
    lay = system.layout
    A = system.A
    for row in range(lay.p2.start, lay.n):
        assert A[row, row] == 0.0
    # divergence entries are exactly +-1
    B = A[lay.p2, lay.u2].tocoo()
    assert np.all(np.isin(B.data, (-1.0, 1.0)))
    # each bulk continuity row touches as many velocities as cell edges
    counts = np.diff(A[lay.p2, :lay.p2.start].tocsr().indptr)
    assert np.all((counts >= 2) & (counts <= 4))


def test_rhs_carries_dirichlet_and_source_data():
    hier = no_fracture_hierarchy(2, bulk_k=2.0, q=3.0)
    level = hier.finest
    system = assemble(level)
    lay = level.layout
    cell_area = level.hx * level.hy
    assert np.allclose(system.b[lay.p2_id], -3.0 * cell_area)
    assert np.allclose(system.b[lay.ux_id[0, :, 0]], 0.0)       # left p = 0
    assert np.allclose(system.b[lay.ux_id[-1, :, 0]], -1.0)     # right p = 1


def test_residual_contract():
    hier = one_fracture_hierarchy(1)
    system = assemble(hier.finest)
    r, norm = system.residual(np.zeros(system.layout.n))
    assert np.array_equal(r, system.b)
    assert norm == pytest.approx(np.linalg.norm(system.b))
    with pytest.raises(DimensionMismatch):
        system.residual(np.zeros(3))


def test_quadrature_differs_from_exact_integration():
    quad = bulk_velocity_diagonal([1.0], 1.0, [1.0])
    exact = bulk_velocity_diagonal_exact([1.0], 1.0, [1.0])
    assert quad == pytest.approx(0.5, rel=1e-12)
    assert exact == pytest.approx(1.0 / 3.0, rel=1e-6)
