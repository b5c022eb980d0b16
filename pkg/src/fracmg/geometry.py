"""Fracture network geometry and its graph model.

The flow domain is a rectangle containing axis-aligned fracture segments.
Fractures cut the domain into subdomains; each maximal sub-segment lying
between two intersection points (or tips) separates a fixed pair of
subdomains and becomes an edge of the subdomain graph.  Points where three
or four fracture ends meet are classified as T- or X-intersections and
carry their own pressure unknown in the discrete model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import OverlappingFractures, SegmentOutsideDomain, UnsupportedValence

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

# snapping tolerance for coordinate comparisons, relative to domain size
_REL_TOL = 1e-9


@dataclass(frozen=True)
class Domain:
    """Axis-aligned rectangular flow domain."""

    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x1 > self.x0 and self.y1 > self.y0):
            raise ValueError("domain rectangle must have positive extent")

    @property
    def width(self):
        return self.x1 - self.x0

    @property
    def height(self):
        return self.y1 - self.y0


@dataclass(frozen=True)
class DirichletPressure:
    """Prescribed pressure value (natural condition in mixed form)."""

    value: float


@dataclass(frozen=True)
class FixedFlux:
    """Prescribed outward flux density; value 0 is a no-flow condition."""

    value: float


#: homogeneous flux condition used for immersed fracture tips
ZERO_FLUX = FixedFlux(0.0)


@dataclass(frozen=True)
class FractureSegment:
    """One axis-aligned fracture given by the user.

    Parameters
    ----------
    axis : str
        ``"horizontal"`` or ``"vertical"``.
    at : float
        The fixed coordinate (y for horizontal, x for vertical segments).
    span : tuple of float
        Closed interval of the running coordinate.
    aperture : float
        Fracture thickness d > 0.
    k_tangential, k_normal : float or callable
        Permeability along / across the fracture; a scalar or a function of
        the running coordinate (piecewise-constant fields are supported via
        :class:`fracmg.model.PiecewiseConstant`).
    tips : tuple
        Optional explicit conditions for the (min, max) endpoints, each a
        :class:`DirichletPressure`, :class:`FixedFlux` or None.  When None,
        immersed tips default to zero flux and boundary tips inherit the
        condition of the touching domain side.
    """

    axis: str
    at: float
    span: tuple[float, float]
    aperture: float = 1e-2
    k_tangential: object = 1.0
    k_normal: object = 1.0
    tips: tuple[object, object] = (None, None)

    def __post_init__(self):
        if self.axis not in (HORIZONTAL, VERTICAL):
            raise ValueError(f"unknown axis {self.axis!r}")
        if not self.span[1] > self.span[0]:
            raise ValueError("fracture span must have positive length")
        if not self.aperture > 0:
            raise ValueError("fracture aperture must be positive")

    def k_tau(self, s):
        """Tangential permeability at arclength position ``s``."""
        return self.k_tangential(s) if callable(self.k_tangential) else self.k_tangential

    def k_n(self, s):
        """Normal permeability at arclength position ``s``."""
        return self.k_normal(s) if callable(self.k_normal) else self.k_normal


# ---------------------------------------------------------------------------
# fracture pieces and intersections


@dataclass(frozen=True)
class PieceEnd:
    """Endpoint classification of a fracture piece.

    ``kind`` is one of ``"intersection"`` (index into the network's
    intersection list), ``"boundary"`` (touching domain side name) or
    ``"immersed"``.
    """

    kind: str
    index: int = -1
    side: str = ""


@dataclass
class FracturePiece:
    """Maximal fracture sub-segment separating a fixed subdomain pair."""

    segment_index: int
    axis: str
    at: float
    span: tuple[float, float]
    side_neg: int  # subdomain below (horizontal) / left of (vertical)
    side_pos: int  # subdomain above / right
    end_min: PieceEnd = field(default=None)
    end_max: PieceEnd = field(default=None)

    @property
    def pair(self):
        """Ordered subdomain pair (i, j) with i <= j."""
        i, j = sorted((self.side_neg, self.side_pos))
        return (i, j)

    @property
    def length(self):
        return self.span[1] - self.span[0]

    def point(self, s):
        """Cartesian point at running coordinate ``s``."""
        if self.axis == HORIZONTAL:
            return (s, self.at)
        return (self.at, s)


@dataclass
class Intersection:
    """T- or X-shaped intersection point of fracture pieces."""

    point: tuple[float, float]
    kind: str  # "T" | "X"
    subdomains: tuple[int, ...]  # strictly increasing
    incident: list  # list of (piece index, "min"|"max") ends


@dataclass
class FractureNetwork:
    """Partitioned domain: subdomain labels, fracture pieces, intersections.

    Subdomains are numbered 1..m in order of the lexicographically smallest
    coarse cell (row-major from the bottom-left) they contain.  The
    numbering is deterministic; :func:`relabel` can impose a different one.
    """

    domain: Domain
    segments: list[FractureSegment]
    nx: int
    ny: int
    hx: float
    hy: float
    cell_subdomain: np.ndarray  # (ny, nx) int, values 1..m
    pieces: list[FracturePiece]
    intersections: list[Intersection]

    @property
    def num_subdomains(self):
        return int(self.cell_subdomain.max()) if self.cell_subdomain.size else 0

    @property
    def fracture_pairs(self):
        """Index set of subdomain pairs separated by a fracture piece."""
        return {p.pair for p in self.pieces if p.side_neg != p.side_pos}

    @property
    def t_intersections(self):
        return [it for it in self.intersections if it.kind == "T"]

    @property
    def x_intersections(self):
        return [it for it in self.intersections if it.kind == "X"]

    def neighbor_sets(self):
        """Neighbor sets N_i = {j > i adjacent across a fracture}."""
        m = self.num_subdomains
        nbrs = {i: set() for i in range(1, m)}
        for i, j in self.fracture_pairs:
            if i < j:
                nbrs[i].add(j)
        return nbrs

    def pieces_at(self, intersection_index):
        """Piece ends incident to the given intersection."""
        return self.intersections[intersection_index].incident

    def subdomain_of_point(self, x, y):
        """Subdomain label of the cell containing (x, y)."""
        ix = min(int((x - self.domain.x0) / self.hx), self.nx - 1)
        iy = min(int((y - self.domain.y0) / self.hy), self.ny - 1)
        return int(self.cell_subdomain[iy, ix])


# ---------------------------------------------------------------------------
# construction helpers


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


def _uniform_spacing(coords, origin, extent):
    """Largest spacing h such that every coordinate is origin + k*h."""
    offsets = [Fraction(c - origin).limit_denominator(10**9) for c in coords]
    offsets.append(Fraction(extent).limit_denominator(10**9))
    offsets = [o for o in offsets if o != 0]
    g = reduce(_frac_gcd, offsets)
    n = int(round(extent / float(g)))
    return extent / n, n


def _near(a, b, tol):
    return abs(a - b) <= tol


def partition_domain(domain: Domain, segments: list[FractureSegment]) -> FractureNetwork:
    """Partition the domain by its fractures and build the subdomain graph.

    The coarsest uniform tensor grid resolving every fracture line is
    constructed, cells are flood-filled into connected components with
    adjacency blocked across fracture edges, and each segment is split at
    intersection points into pieces labeled with the subdomain pair they
    separate.

    Raises
    ------
    OverlappingFractures
        If two collinear segments share a sub-interval.
    SegmentOutsideDomain
        If a segment leaves the closed domain rectangle.
    UnsupportedValence
        If an intersection point has 2 or more than 4 incident ends.
    """
    tol = _REL_TOL * max(domain.width, domain.height)

    for s in segments:
        if s.axis == HORIZONTAL:
            ok = (domain.y0 - tol <= s.at <= domain.y1 + tol
                  and domain.x0 - tol <= s.span[0] and s.span[1] <= domain.x1 + tol)
        else:
            ok = (domain.x0 - tol <= s.at <= domain.x1 + tol
                  and domain.y0 - tol <= s.span[0] and s.span[1] <= domain.y1 + tol)
        if not ok:
            raise SegmentOutsideDomain(f"segment {s} outside domain {domain}")

    # collinear overlap check
    for a in range(len(segments)):
        for b in range(a + 1, len(segments)):
            sa, sb = segments[a], segments[b]
            if sa.axis == sb.axis and _near(sa.at, sb.at, tol):
                lo = max(sa.span[0], sb.span[0])
                hi = min(sa.span[1], sb.span[1])
                if hi - lo > tol:
                    raise OverlappingFractures(f"segments {a} and {b} overlap on ({lo}, {hi})")

    # coarsest uniform grid: all fracture coordinates must be grid lines
    xs = [domain.x0, domain.x1]
    ys = [domain.y0, domain.y1]
    for s in segments:
        if s.axis == HORIZONTAL:
            ys.append(s.at)
            xs.extend(s.span)
        else:
            xs.append(s.at)
            ys.extend(s.span)
    hx, nx = _uniform_spacing(xs, domain.x0, domain.width)
    hy, ny = _uniform_spacing(ys, domain.y0, domain.height)

    def xi(x):
        i = int(round((x - domain.x0) / hx))
        assert _near(domain.x0 + i * hx, x, tol), f"x={x} not on coarse grid"
        return i

    def yi(y):
        j = int(round((y - domain.y0) / hy))
        assert _near(domain.y0 + j * hy, y, tol), f"y={y} not on coarse grid"
        return j

    # blocked edges: blocked_v[i, j] vertical edge on line i, row j
    blocked_v = np.zeros((nx + 1, ny), dtype=bool)
    blocked_h = np.zeros((nx, ny + 1), dtype=bool)
    for s in segments:
        if s.axis == VERTICAL:
            i = xi(s.at)
            blocked_v[i, yi(s.span[0]):yi(s.span[1])] = True
        else:
            j = yi(s.at)
            blocked_h[xi(s.span[0]):xi(s.span[1]), j] = True

    cell_subdomain = _flood_fill(nx, ny, blocked_v, blocked_h)

    # intersection candidate points (pairwise)
    points = set()
    for a in range(len(segments)):
        for b in range(a + 1, len(segments)):
            pt = _segment_intersection(segments[a], segments[b], tol)
            if pt is not None:
                points.add((xi(pt[0]), yi(pt[1])))

    # split each segment at interior intersection points
    pieces = []
    for si, s in enumerate(segments):
        if s.axis == VERTICAL:
            i = xi(s.at)
            cuts = sorted({yi(s.span[0]), yi(s.span[1])}
                          | {j for (pi, j) in points if pi == i
                             and yi(s.span[0]) < j < yi(s.span[1])})
            for a, b in zip(cuts[:-1], cuts[1:]):
                pieces.append(FracturePiece(
                    segment_index=si, axis=VERTICAL, at=domain.x0 + i * hx,
                    span=(domain.y0 + a * hy, domain.y0 + b * hy),
                    side_neg=int(cell_subdomain[a, i - 1]),
                    side_pos=int(cell_subdomain[a, i])))
        else:
            j = yi(s.at)
            cuts = sorted({xi(s.span[0]), xi(s.span[1])}
                          | {i for (i, pj) in points if pj == j
                             and xi(s.span[0]) < i < xi(s.span[1])})
            for a, b in zip(cuts[:-1], cuts[1:]):
                pieces.append(FracturePiece(
                    segment_index=si, axis=HORIZONTAL, at=domain.y0 + j * hy,
                    span=(domain.x0 + a * hx, domain.x0 + b * hx),
                    side_neg=int(cell_subdomain[j - 1, a]),
                    side_pos=int(cell_subdomain[j, a])))

    network = FractureNetwork(
        domain=domain, segments=list(segments), nx=nx, ny=ny, hx=hx, hy=hy,
        cell_subdomain=cell_subdomain, pieces=pieces, intersections=[])
    _classify_intersections(network, points, tol)
    return network


def _flood_fill(nx, ny, blocked_v, blocked_h):
    """Connected components of the cell grid, adjacency blocked by fractures."""
    labels = np.zeros((ny, nx), dtype=np.int32)
    next_label = 0
    for jy in range(ny):
        for jx in range(nx):
            if labels[jy, jx]:
                continue
            next_label += 1
            stack = [(jy, jx)]
            labels[jy, jx] = next_label
            while stack:
                cy, cx = stack.pop()
                # left, right, down, up
                if cx > 0 and not blocked_v[cx, cy] and not labels[cy, cx - 1]:
                    labels[cy, cx - 1] = next_label
                    stack.append((cy, cx - 1))
                if cx < nx - 1 and not blocked_v[cx + 1, cy] and not labels[cy, cx + 1]:
                    labels[cy, cx + 1] = next_label
                    stack.append((cy, cx + 1))
                if cy > 0 and not blocked_h[cx, cy] and not labels[cy - 1, cx]:
                    labels[cy - 1, cx] = next_label
                    stack.append((cy - 1, cx))
                if cy < ny - 1 and not blocked_h[cx, cy + 1] and not labels[cy + 1, cx]:
                    labels[cy + 1, cx] = next_label
                    stack.append((cy + 1, cx))
    return labels


def _segment_intersection(sa, sb, tol):
    """Intersection point of two segments, or None.

    Perpendicular segments meet where the fixed coordinate of one lies in
    the span of the other; collinear segments may touch end-to-end (an
    unsupported valence-2 corner, detected later through the valence count).
    """
    if sa.axis == sb.axis:
        if not _near(sa.at, sb.at, tol):
            return None
        # end-to-end touch of collinear segments (overlap ruled out earlier)
        for ea in sa.span:
            for eb in sb.span:
                if _near(ea, eb, tol):
                    if sa.axis == HORIZONTAL:
                        return (ea, sa.at)
                    return (sa.at, ea)
        return None
    h, v = (sa, sb) if sa.axis == HORIZONTAL else (sb, sa)
    if (h.span[0] - tol <= v.at <= h.span[1] + tol
            and v.span[0] - tol <= h.at <= v.span[1] + tol):
        return (v.at, h.at)
    return None


def _classify_intersections(network, grid_points, tol):
    """Classify candidate points by incident piece-end valence."""
    domain = network.domain
    incident = {pt: [] for pt in grid_points}
    for pi, piece in enumerate(network.pieces):
        for end_name, s in (("min", piece.span[0]), ("max", piece.span[1])):
            x, y = piece.point(s)
            key = (int(round((x - domain.x0) / network.hx)),
                   int(round((y - domain.y0) / network.hy)))
            if key in incident:
                incident[key].append((pi, end_name))

    intersections = []
    for key in sorted(incident):
        ends = incident[key]
        point = (domain.x0 + key[0] * network.hx, domain.y0 + key[1] * network.hy)
        if len(ends) in (0, 1):
            continue  # tangential touch resolved as a plain tip
        if len(ends) == 2 or len(ends) > 4:
            raise UnsupportedValence(
                f"point {point} has {len(ends)} incident fracture ends")
        subs = set()
        for pi, _ in ends:
            subs.add(network.pieces[pi].side_neg)
            subs.add(network.pieces[pi].side_pos)
        intersections.append(Intersection(
            point=point, kind="T" if len(ends) == 3 else "X",
            subdomains=tuple(sorted(subs)), incident=ends))

    intersections.sort(key=lambda it: it.subdomains)
    network.intersections = intersections

    # attach end classifications to pieces
    end_of = {}
    for idx, it in enumerate(intersections):
        for pi, name in it.incident:
            end_of[(pi, name)] = idx
    for pi, piece in enumerate(network.pieces):
        ends = {}
        for name, s in (("min", piece.span[0]), ("max", piece.span[1])):
            if (pi, name) in end_of:
                ends[name] = PieceEnd("intersection", index=end_of[(pi, name)])
            else:
                x, y = piece.point(s)
                if piece.axis == HORIZONTAL:
                    if _near(x, domain.x0, tol):
                        ends[name] = PieceEnd("boundary", side="left")
                    elif _near(x, domain.x1, tol):
                        ends[name] = PieceEnd("boundary", side="right")
                    else:
                        ends[name] = PieceEnd("immersed")
                else:
                    if _near(y, domain.y0, tol):
                        ends[name] = PieceEnd("boundary", side="bottom")
                    elif _near(y, domain.y1, tol):
                        ends[name] = PieceEnd("boundary", side="top")
                    else:
                        ends[name] = PieceEnd("immersed")
        piece.end_min = ends["min"]
        piece.end_max = ends["max"]


# ---------------------------------------------------------------------------
# relabeling


def relabel(network: FractureNetwork, mapping: dict[int, int]) -> FractureNetwork:
    """Return a copy of the network with subdomains renumbered.

    ``mapping`` maps current labels to new labels and must be a bijection
    on 1..m.  Used to impose a presentation numbering; the discretization
    does not depend on labels.
    """
    m = network.num_subdomains
    if sorted(mapping) != list(range(1, m + 1)) or sorted(mapping.values()) != list(range(1, m + 1)):
        raise ValueError("mapping must be a bijection on 1..m")
    lut = np.zeros(m + 1, dtype=np.int32)
    for old, new in mapping.items():
        lut[old] = new
    pieces = [replace_sides(p, lut) for p in network.pieces]
    intersections = [Intersection(point=it.point, kind=it.kind,
                                  subdomains=tuple(sorted(int(lut[s]) for s in it.subdomains)),
                                  incident=list(it.incident))
                     for it in network.intersections]
    return FractureNetwork(
        domain=network.domain, segments=network.segments,
        nx=network.nx, ny=network.ny, hx=network.hx, hy=network.hy,
        cell_subdomain=lut[network.cell_subdomain],
        pieces=pieces, intersections=intersections)


def replace_sides(piece: FracturePiece, lut):
    p = FracturePiece(segment_index=piece.segment_index, axis=piece.axis,
                      at=piece.at, span=piece.span,
                      side_neg=int(lut[piece.side_neg]), side_pos=int(lut[piece.side_pos]))
    p.end_min, p.end_max = piece.end_min, piece.end_max
    return p


def relabel_by_points(network: FractureNetwork, points: dict[int, tuple[float, float]]):
    """Renumber subdomains so that ``points[i]`` lies in subdomain i."""
    mapping = {}
    for new, (x, y) in points.items():
        old = network.subdomain_of_point(x, y)
        if old in mapping:
            raise ValueError(f"points for labels {mapping[old]} and {new} share a subdomain")
        mapping[old] = new
    if len(mapping) != network.num_subdomains:
        raise ValueError("points must cover every subdomain exactly once")
    return relabel(network, mapping)
