"""Three-stage block smoother contracts."""

import numpy as np
import pytest

from fracmg import VankaSmoother, assemble, direct_solve
from fracmg.smoother import piece_line_dofs, strongly_conducting_pieces
from fracmg import FractureLineSolver

from conftest import no_fracture_hierarchy, one_fracture_hierarchy


def test_block_solve_zeroes_local_residual(rng):
    """After each individual block solve, that block's residual rows vanish."""
    system = assemble(one_fracture_hierarchy(2).finest)
    sm = VankaSmoother(system)
    A, b = system.A, system.b
    x = rng.standard_normal(system.layout.n)
    bnorm = np.linalg.norm(b)
    for bi in range(len(sm.block_ptr) - 1):
        dofs = sm.block_dofs[sm.block_ptr[bi]:sm.block_ptr[bi + 1]]
        bs = len(dofs)
        o = sm.inv_ptr[bi]
        Minv = sm.inv_flat[o:o + bs * bs].reshape(bs, bs)
        r = (b - A @ x)[dofs]
        x[dofs] += Minv @ r
        assert np.linalg.norm((b - A @ x)[dofs]) <= 1e-13 * bnorm


def test_smoother_is_fixed_point_on_exact_solution():
    system = assemble(one_fracture_hierarchy(3).finest)
    x = direct_solve(system)
    out = VankaSmoother(system).smooth(x.copy())
    assert np.linalg.norm(out - x) <= 1e-12 * np.linalg.norm(x)


def test_full_sweep_matches_blockwise_updates(rng):
    """The compiled sweep equals the straightforward per-block loop."""
    system = assemble(one_fracture_hierarchy(1).finest)
    sm = VankaSmoother(system)
    A, b = system.A, system.b
    x0 = rng.standard_normal(system.layout.n)
    x_ref = x0.copy()
    for bi in range(len(sm.block_ptr) - 1):
        dofs = sm.block_dofs[sm.block_ptr[bi]:sm.block_ptr[bi + 1]]
        bs = len(dofs)
        Minv = sm.inv_flat[sm.inv_ptr[bi]:sm.inv_ptr[bi] + bs * bs].reshape(bs, bs)
        x_ref[dofs] += Minv @ (b - A @ x_ref)[dofs]
    x = sm.smooth(x0.copy())
    assert np.allclose(x, x_ref, rtol=1e-13, atol=1e-13)


def test_error_norm_decreases_on_plain_darcy(rng):
    """Smoothing with b = 0 contracts 20 random error vectors."""
    system = assemble(no_fracture_hierarchy(4).finest)   # 16 x 16 grid
    sm = VankaSmoother(system)
    zero = np.zeros(system.layout.n)
    for _ in range(20):
        e = rng.standard_normal(system.layout.n)
        out = sm.smooth(e.copy(), b=zero)
        assert np.linalg.norm(out) < np.linalg.norm(e)


def test_block_structure_counts():
    hier = one_fracture_hierarchy(2)
    level = hier.finest
    system = assemble(level)
    sm = VankaSmoother(system)
    assert sm.n_bulk_blocks == level.nx * level.ny
    assert sm.n_fracture_blocks == level.piece_grids[0].n
    assert sm.n_intersection_blocks == 0
    sizes = np.diff(sm.block_ptr)
    # bulk blocks: 4 edges + pressure, minus eliminated boundary edges
    assert sizes.max() == 5
    assert sizes.min() >= 3


def test_intersection_blocks_present_and_optional_p0():
    from fracmg import (BoundaryConditions, DirichletPressure, Domain,
                        FractureSegment, HORIZONTAL, ModelConfig, VERTICAL,
                        build_hierarchy, partition_domain)
    segs = [FractureSegment(VERTICAL, 0.5, (0.0, 1.0)),
            FractureSegment(HORIZONTAL, 0.5, (0.0, 1.0))]
    net = partition_domain(Domain(0.0, 1.0, 0.0, 1.0), segs)
    cfg = ModelConfig(bcs=BoundaryConditions(left=DirichletPressure(0.0),
                                             right=DirichletPressure(1.0)))
    system = assemble(build_hierarchy(net, cfg, 1).finest)
    with_p0 = VankaSmoother(system, include_p0=True)
    without = VankaSmoother(system, include_p0=False)
    assert with_p0.n_intersection_blocks == 1
    last_with = np.diff(with_p0.block_ptr)[-1]
    last_without = np.diff(without.block_ptr)[-1]
    assert last_with == last_without + 1 == 5   # 4 incident ends + pressure


def test_line_solver_zeroes_piece_residual(rng):
    hier = one_fracture_hierarchy(3, kf=1e6)
    system = assemble(hier.finest)
    level = hier.finest
    assert strongly_conducting_pieces(level) == [0]
    dofs = piece_line_dofs(level, 0)
    x = rng.standard_normal(system.layout.n)
    r_before, _ = system.residual(x)
    before = np.linalg.norm(r_before[dofs])
    FractureLineSolver(system).apply(x)
    r_after, _ = system.residual(x)
    assert np.linalg.norm(r_after[dofs]) <= 1e-10 * before


def test_weakly_conducting_fracture_not_line_solved():
    level = one_fracture_hierarchy(2, kf=1.0).finest
    assert strongly_conducting_pieces(level) == []
