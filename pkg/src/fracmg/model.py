"""Physical model data: coefficients, boundary conditions, closure parameter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigMismatch
from .geometry import (DirichletPressure, FixedFlux, FractureNetwork,
                       FracturePiece, PieceEnd, ZERO_FLUX)

SIDES = ("left", "right", "bottom", "top")


class PiecewiseConstant:
    """Piecewise-constant function of one coordinate, right-continuous.

    ``values[k]`` holds on ``[breaks[k-1], breaks[k])`` with the convention
    that the first and last intervals extend to -inf / +inf.
    """

    def __init__(self, breaks, values):
        breaks = list(breaks)
        if len(values) != len(breaks) + 1:
            raise ValueError("need len(values) == len(breaks) + 1")
        if any(b >= c for b, c in zip(breaks, breaks[1:])):
            raise ValueError("breaks must be strictly increasing")
        self.breaks = np.asarray(breaks, dtype=float)
        self.values = np.asarray(values, dtype=float)

    def __call__(self, s):
        return float(self.values[int(np.searchsorted(self.breaks, s, side="right"))])


@dataclass(frozen=True)
class BoundaryConditions:
    """Boundary condition per domain side.

    Each side carries either a :class:`DirichletPressure` (natural in mixed
    form; the corresponding boundary velocities stay unknowns) or a
    :class:`FixedFlux` giving the outward normal flux density (those
    velocity DOFs are eliminated at layout time).
    """

    left: object = ZERO_FLUX
    right: object = ZERO_FLUX
    bottom: object = ZERO_FLUX
    top: object = ZERO_FLUX

    def __getitem__(self, side):
        return getattr(self, side)

    def has_dirichlet(self):
        return any(isinstance(self[s], DirichletPressure) for s in SIDES)


@dataclass(frozen=True)
class ResolvedTip:
    """Tip condition of one fracture piece end after inheritance rules.

    ``kind`` is ``"interior"`` (piece end at an intersection),
    ``"dirichlet"`` (value = pressure) or ``"flux"`` (value = total outward
    flux through the tip).
    """

    kind: str
    value: float = 0.0


@dataclass
class ModelConfig:
    """Coefficients and closure data for one flow problem.

    Parameters
    ----------
    bulk_k : scalar, pair or callable
        Diagonal bulk permeability.  A scalar K means K*I, a pair gives
        (Kxx, Kyy), a callable maps a cell center (x, y) to either form.
    q : scalar or callable
        Bulk source density; callable of the cell center.
    q_fracture : scalar or callable
        Fracture source density per arclength; callable of (x, y).
    xi : float
        Closure parameter of the averaged normal Darcy law, in (1/2, 1].
    bcs : BoundaryConditions
    """

    bcs: BoundaryConditions
    bulk_k: object = 1.0
    q: object = 0.0
    q_fracture: object = 0.0
    xi: float = 1.0

    def __post_init__(self):
        if not 0.5 < self.xi <= 1.0:
            raise ValueError("closure parameter xi must lie in (1/2, 1]")

    def k_at(self, x, y):
        """Diagonal permeability (Kxx, Kyy) at a cell center."""
        k = self.bulk_k(x, y) if callable(self.bulk_k) else self.bulk_k
        if np.isscalar(k):
            kxx = kyy = float(k)
        else:
            kxx, kyy = float(k[0]), float(k[1])
        if not (kxx > 0 and kyy > 0):
            raise ConfigMismatch(f"non-positive bulk permeability at ({x}, {y})")
        return kxx, kyy

    def q_at(self, x, y):
        return float(self.q(x, y)) if callable(self.q) else float(self.q)

    def q_fracture_at(self, x, y):
        return float(self.q_fracture(x, y)) if callable(self.q_fracture) else float(self.q_fracture)


def validate_fracture_coefficients(network: FractureNetwork):
    """Check apertures and permeabilities of every piece element midpoint sign."""
    for piece in network.pieces:
        seg = network.segments[piece.segment_index]
        mid = 0.5 * (piece.span[0] + piece.span[1])
        if not (seg.aperture > 0 and seg.k_tau(mid) > 0 and seg.k_n(mid) > 0):
            raise ConfigMismatch(f"non-positive fracture coefficient on piece {piece}")


def resolve_tip(piece: FracturePiece, end: PieceEnd, which: str,
                segment, bcs: BoundaryConditions) -> ResolvedTip:
    """Apply the tip inheritance rules to one piece end.

    Explicit tip conditions on the parent segment win where the piece end
    coincides with a segment end; otherwise immersed tips get zero flux and
    boundary tips inherit the touching side's condition (flux densities are
    scaled by the aperture to a total tip flux).
    """
    if end.kind == "intersection":
        return ResolvedTip("interior")
    explicit = None
    seg_end = segment.span[0] if which == "min" else segment.span[1]
    piece_end = piece.span[0] if which == "min" else piece.span[1]
    if abs(seg_end - piece_end) < 1e-12 * max(1.0, abs(seg_end)):
        explicit = segment.tips[0 if which == "min" else 1]
    if explicit is not None:
        if isinstance(explicit, DirichletPressure):
            return ResolvedTip("dirichlet", explicit.value)
        if isinstance(explicit, FixedFlux):
            return ResolvedTip("flux", explicit.value)
        raise ConfigMismatch(f"unsupported tip condition {explicit!r}")
    if end.kind == "immersed":
        return ResolvedTip("flux", 0.0)
    side_bc = bcs[end.side]
    if isinstance(side_bc, DirichletPressure):
        return ResolvedTip("dirichlet", side_bc.value)
    return ResolvedTip("flux", side_bc.value * segment.aperture)
