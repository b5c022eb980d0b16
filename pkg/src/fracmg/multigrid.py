"""Monolithic geometric multigrid for the mixed-dimensional flow system.

Every level carries its own rediscretized operator (no Galerkin products);
the coarsest level is solved directly by sparse LU, all finer levels are
smoothed with the three-stage overlapping block smoother.  The default
cycle is a W-cycle with two pre- and two post-smoothing steps; iteration
stops when the finest-level residual norm has dropped below ``tol`` times
the initial residual norm.

Strongly conducting fractures (tangential conductance d K_tau far above
the bulk permeability) carry fluxes orders of magnitude larger than the
boundary data, and the sequential element sweep then leaves a transient
residual of that flux scale which costs extra cycles.  Two optional
mechanisms (both on by default) remove it: the initial guess starts from
exact per-fracture line solves instead of zero, and after each
post-smoothing step the line blocks of strongly conducting pieces are
solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse.linalg as spla

from .errors import NoConvergence, SingularSystem
from .assembly import assemble
from .smoother import (FractureLineSolver, VankaSmoother,
                       strongly_conducting_pieces)
from .transfer import transfer_pairs


@dataclass
class CycleConfig:
    """Multigrid cycle parameters."""

    cycle: str = "W"          # "W" or "V"
    nu1: int = 2              # pre-smoothing steps
    nu2: int = 2              # post-smoothing steps
    tol: float = 1e-10        # relative residual reduction target
    max_iterations: int = 100
    include_p0: bool = True   # intersection pressure joins its smoother block
    line_solve: str = "auto"  # exact fracture line solves: auto/always/never
    line_threshold: float = 10.0  # conductance ratio triggering "auto"
    presolve: bool = True     # start from exact per-fracture line solves

    def __post_init__(self):
        if self.cycle not in ("W", "V"):
            raise ValueError(f"cycle must be 'W' or 'V', got {self.cycle!r}")
        if self.nu1 < 0 or self.nu2 < 0 or self.nu1 + self.nu2 == 0:
            raise ValueError("need nu1, nu2 >= 0 with nu1 + nu2 > 0")
        if self.line_solve not in ("auto", "always", "never"):
            raise ValueError("line_solve must be auto, always or never")


@dataclass
class ConvergenceReport:
    """Residual history of one multigrid solve."""

    residuals: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False

    @property
    def reduction_factor(self):
        """Geometric mean of the last (up to five) residual ratios."""
        r = self.residuals
        if len(r) < 2:
            return np.nan
        tail = r[-6:]
        ratios = [b / a for a, b in zip(tail, tail[1:]) if a > 0]
        if not ratios:
            return 0.0
        return float(np.exp(np.mean(np.log(ratios)))) if min(ratios) > 0 else 0.0


class MultigridSolver:
    """Assembled hierarchy of operators, smoothers and transfer pairs."""

    def __init__(self, hierarchy, config: CycleConfig | None = None):
        self.hierarchy = hierarchy
        self.config = config or CycleConfig()
        self.systems = [assemble(level) for level in hierarchy.levels]
        self.smoothers = [None] + [
            VankaSmoother(s, include_p0=self.config.include_p0)
            for s in self.systems[1:]]
        self.transfers = transfer_pairs(hierarchy)
        self.line_solvers = [None] * len(self.systems)
        if self.config.line_solve != "never":
            for k, system in enumerate(self.systems[1:], start=1):
                if self.config.line_solve == "always":
                    pieces = None
                else:
                    pieces = strongly_conducting_pieces(
                        hierarchy.levels[k], self.config.line_threshold)
                if pieces is None or pieces:
                    self.line_solvers[k] = FractureLineSolver(system, pieces)
        try:
            self._coarse_lu = spla.splu(self.systems[0].A.tocsc())
        except RuntimeError as exc:
            raise SingularSystem(f"coarsest-level factorization failed: {exc}") from exc

    @property
    def finest_system(self):
        return self.systems[-1]

    def _cycle(self, k, x, b):
        if k == 0:
            x[:] = self._coarse_lu.solve(b)
            return
        sm = self.smoothers[k]
        R, P = self.transfers[k - 1]
        sm.smooth(x, b, steps=self.config.nu1)
        r = b - self.systems[k].A @ x
        rc = R @ r
        ec = np.zeros(self.systems[k - 1].layout.n)
        self._cycle(k - 1, ec, rc)
        if self.config.cycle == "W" and k > 1:
            self._cycle(k - 1, ec, rc)
        x += P @ ec
        sm.smooth(x, b, steps=self.config.nu2)
        if self.line_solvers[k] is not None:
            self.line_solvers[k].apply(x, b)

    def solve(self, b=None, x0=None):
        """Iterate cycles on the finest level until the tolerance is met.

        Returns ``(x, report)``; raises :class:`NoConvergence` (carrying the
        partial report) if ``max_iterations`` cycles do not suffice.
        """
        top = len(self.systems) - 1
        sysf = self.systems[top]
        if b is None:
            b = sysf.b
        if x0 is None:
            x = np.zeros(sysf.layout.n)
            if self.config.presolve and top > 0 and sysf.level.network.pieces:
                FractureLineSolver(sysf).apply(x, b)
        else:
            x = np.array(x0, dtype=float)
        sysf.layout.check(x)

        report = ConvergenceReport()
        r0 = float(np.linalg.norm(b - sysf.A @ x))
        report.residuals.append(r0)
        if r0 == 0.0:
            report.converged = True
            return x, report
        target = self.config.tol * r0
        for it in range(1, self.config.max_iterations + 1):
            if top == 0:
                x = self._coarse_lu.solve(b)
            else:
                self._cycle(top, x, b)
            rn = float(np.linalg.norm(b - sysf.A @ x))
            report.residuals.append(rn)
            report.iterations = it
            if rn <= target:
                report.converged = True
                return x, report
        raise NoConvergence(
            f"no convergence to {self.config.tol:g} within "
            f"{self.config.max_iterations} cycles", report=report)


def solve_problem(hierarchy, config: CycleConfig | None = None):
    """Convenience wrapper: build the solver and run it on the assembled RHS."""
    solver = MultigridSolver(hierarchy, config)
    x, report = solver.solve()
    return x, report, solver
