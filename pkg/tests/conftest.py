"""Shared builders for the test suite."""

import numpy as np
import pytest

from fracmg import (BoundaryConditions, DirichletPressure, Domain, FixedFlux,
                    FractureSegment, ModelConfig, VERTICAL, build_hierarchy,
                    partition_domain)


def no_fracture_hierarchy(levels, width=1.0, height=1.0, bulk_k=1.0, q=0.0,
                          bcs=None):
    """Plain Darcy problem on a rectangle (coarsest grid is one cell)."""
    net = partition_domain(Domain(0.0, width, 0.0, height), [])
    if bcs is None:
        bcs = BoundaryConditions(left=DirichletPressure(0.0),
                                 right=DirichletPressure(1.0))
    cfg = ModelConfig(bcs=bcs, bulk_k=bulk_k, q=q)
    return build_hierarchy(net, cfg, levels)


def one_fracture_hierarchy(levels, kf=1e-2, d=1e-2, xi=1.0, bcs=None,
                           tips=(DirichletPressure(0.0), DirichletPressure(1.0))):
    """Single vertical fracture at x = 1 in the (0,2) x (0,1) rectangle."""
    seg = FractureSegment(VERTICAL, 1.0, (0.0, 1.0), aperture=d,
                          k_tangential=kf, k_normal=kf, tips=tips)
    net = partition_domain(Domain(0.0, 2.0, 0.0, 1.0), [seg])
    if bcs is None:
        bcs = BoundaryConditions(left=DirichletPressure(0.0),
                                 right=DirichletPressure(1.0))
    cfg = ModelConfig(bcs=bcs, xi=xi)
    return build_hierarchy(net, cfg, levels)


@pytest.fixture
def rng():
    return np.random.default_rng(20260824)
