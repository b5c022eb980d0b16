"""Independent ground-truth solves and quadrature cross-checks.

The quadrature helpers evaluate the discrete inner products from pointwise
basis-function values fed through generic quadrature loops, deliberately
avoiding the closed-form stencils used by the assembly module, so that
agreement between the two is evidence rather than tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .errors import SingularSystem


@dataclass
class OracleReport:
    """Direct solution with comparison norms against a candidate."""

    solution: np.ndarray
    residual_norm: float
    abs_error: float = np.nan
    rel_error: float = np.nan
    max_error: float = np.nan


def direct_solve(system):
    """Solve the assembled system with a pivoted sparse LU factorization."""
    A = system.A.tocsc()
    try:
        lu = spla.splu(A)
        x = lu.solve(system.b)
    except RuntimeError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystem("factorization produced non-finite entries")
    _, rnorm = system.residual(x)
    bnorm = np.linalg.norm(system.b)
    if bnorm > 0 and rnorm > 1e-8 * bnorm:
        raise SingularSystem(f"direct solve residual {rnorm:.3e} vs |b| {bnorm:.3e}")
    return x


def compare(system, candidate):
    """OracleReport for a candidate solution against the direct solve."""
    x = direct_solve(system)
    _, rnorm = system.residual(x)
    diff = candidate - x
    nrm = np.linalg.norm(x)
    return OracleReport(
        solution=x, residual_norm=rnorm,
        abs_error=float(np.linalg.norm(diff)),
        rel_error=float(np.linalg.norm(diff) / nrm) if nrm > 0 else float(np.linalg.norm(diff)),
        max_error=float(np.abs(diff).max()) if diff.size else 0.0)


# ---------------------------------------------------------------------------
# quadrature evaluation of local matrix entries from basis point values


def bulk_velocity_diagonal(hx_cells, hy, k_cells):
    """(K^-1 v_e, v_e) for an x-direction edge via trapezoid-x / midpoint-y.

    ``hx_cells`` and ``k_cells`` list the widths and permeabilities of the
    adjacent cells (one entry for a boundary or fracture-side DOF, two for
    an interior edge).  The basis is the unit-flux RT0 function of the
    shared edge, evaluated pointwise at the quadrature nodes.
    """
    total = 0.0
    for hx, k in zip(hx_cells, k_cells):
        # v_x on this cell: 0 at the far face, 1/hy at the shared edge
        def vx(x):
            return x / (hx * hy)

        # trapezoid in x (nodes 0 and hx), midpoint in y
        for x_node, wx in ((0.0, hx / 2.0), (hx, hx / 2.0)):
            total += wx * hy * vx(x_node) ** 2 / k
    return total


def bulk_velocity_diagonal_exact(hx_cells, hy, k_cells, npts=2000):
    """Same entry with (numerically) exact integration instead of quadrature."""
    total = 0.0
    for hx, k in zip(hx_cells, k_cells):
        x = (np.arange(npts) + 0.5) * hx / npts
        total += np.sum((x / (hx * hy)) ** 2 / k) * (hx / npts) * hy
    return total


def robin_entry(h_edge, d, k_n, xi, cross=False):
    """Interface term on a fracture-adjacent bulk velocity, edge-wise rule.

    The normal trace of the unit-flux basis is the constant 1/h on its
    edge; the weight is xi for the diagonal and (1 - xi) for the coupling
    to the collocated twin.
    """
    alpha_inv = d / (2.0 * k_n)
    weight = (1.0 - xi) if cross else xi
    trace = 1.0 / h_edge
    return alpha_inv * weight * trace * trace * h_edge


def fracture_velocity_diagonal(h_elems, d, k_tau_elems, node_is_tip=False):
    """((d K_tau)^-1 v_i, v_i) for a fracture node via the trapezoidal rule.

    ``h_elems``/``k_tau_elems`` describe the adjacent 1D elements (one for
    a tip node, two for an interior node); the basis is the nodal hat.
    """
    total = 0.0
    for h, k in zip(h_elems, k_tau_elems):
        # hat value is 1 at the node, 0 at the other end
        for val, w in ((1.0, h / 2.0), (0.0, h / 2.0)):
            total += w * val * val / (d * k)
    return total
