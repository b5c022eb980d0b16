"""Experiment configuration: validated problem setups and YAML round-trip.

An :class:`ExperimentConfig` bundles everything one solve needs — domain,
fracture list, bulk coefficients, boundary conditions, target resolution
and cycle parameters — and knows how to build the network, hierarchy and
cycle configuration from it.  :func:`parse_file` / :func:`serialize` map
between configs and a plain YAML document; the schema is documented in
``docs/config_reference.md``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .errors import ConfigError
from .geometry import (Domain, DirichletPressure, FixedFlux, FractureSegment,
                       HORIZONTAL, VERTICAL, partition_domain)
from .grids import build_hierarchy, levels_for_target
from .model import BoundaryConditions, ModelConfig, PiecewiseConstant, SIDES
from .multigrid import CycleConfig


@dataclass
class ExperimentConfig:
    """Complete, validated description of one flow experiment."""

    name: str
    domain: Domain
    fractures: list = field(default_factory=list)
    bulk_k: object = 1.0
    q: float = 0.0
    q_fracture: float = 0.0
    xi: float = 1.0
    bcs: BoundaryConditions = field(default_factory=BoundaryConditions)
    grid: tuple | None = None     # target (nx, ny); exclusive with levels
    levels: int | None = None     # refinement count from the coarsest grid
    cycle: CycleConfig = field(default_factory=CycleConfig)
    out_dir: str | None = None

    def __post_init__(self):
        if self.grid is not None and self.levels is not None:
            raise ConfigError("give either a target grid or a level count, not both")
        self.validate()

    def validate(self):
        """Reject ill-posed setups (no pressure datum anywhere)."""
        has_dirichlet = self.bcs.has_dirichlet() or any(
            isinstance(t, DirichletPressure) for f in self.fractures for t in f.tips)
        if not has_dirichlet:
            raise ConfigError(
                "pure prescribed-flux problem: the pressure is only determined "
                "up to a constant; prescribe a pressure on at least one "
                "boundary side or fracture tip")

    # -- builders ----------------------------------------------------------
    def model(self):
        return ModelConfig(bcs=self.bcs, bulk_k=self.bulk_k, q=self.q,
                           q_fracture=self.q_fracture, xi=self.xi)

    def network(self):
        return partition_domain(self.domain, self.fractures)

    def resolve_levels(self, network):
        if self.grid is not None:
            return levels_for_target(network, self.grid[0], self.grid[1])
        return self.levels if self.levels is not None else 0

    def hierarchy(self):
        net = self.network()
        return build_hierarchy(net, self.model(), self.resolve_levels(net))


# ---------------------------------------------------------------------------
# YAML mapping


def _parse_condition(node, where):
    if node is None:
        return None
    if not isinstance(node, dict) or len(node) != 1:
        raise ConfigError(f"{where}: expected {{pressure: v}} or {{flux: v}}")
    (kind, value), = node.items()
    if kind == "pressure":
        return DirichletPressure(float(value))
    if kind == "flux":
        return FixedFlux(float(value))
    raise ConfigError(f"{where}: unknown condition kind {kind!r}")


def _parse_permeability(node, where):
    if isinstance(node, dict):
        try:
            return PiecewiseConstant(node["breaks"], node["values"])
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"{where}: bad piecewise permeability: {exc}") from exc
    return float(node)


def _parse_fracture(node, i):
    where = f"fractures[{i}]"
    try:
        axis = node["axis"]
        at = float(node["at"])
        span = tuple(float(v) for v in node["span"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: need axis, at and span: {exc}") from exc
    if axis not in (HORIZONTAL, VERTICAL):
        raise ConfigError(f"{where}: axis must be horizontal or vertical")
    tips_node = node.get("tips", [None, None])
    if len(tips_node) != 2:
        raise ConfigError(f"{where}: tips must list the (min, max) ends")
    try:
        return FractureSegment(
            axis=axis, at=at, span=span,
            aperture=float(node.get("aperture", 1e-2)),
            k_tangential=_parse_permeability(node.get("k_tangential", 1.0), where),
            k_normal=_parse_permeability(node.get("k_normal", 1.0), where),
            tips=tuple(_parse_condition(t, f"{where}.tips") for t in tips_node))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def parse(doc) -> ExperimentConfig:
    """Build a validated ExperimentConfig from a parsed YAML document."""
    if not isinstance(doc, dict):
        raise ConfigError("top level of the config must be a mapping")
    try:
        d = doc["domain"]
        domain = Domain(float(d["x0"]), float(d["x1"]),
                        float(d["y0"]), float(d["y1"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad or missing domain: {exc}") from exc

    fractures = [_parse_fracture(f, i)
                 for i, f in enumerate(doc.get("fractures", []))]

    bulk = doc.get("bulk", {})
    bulk_k = bulk.get("k", 1.0)
    if isinstance(bulk_k, (list, tuple)):
        bulk_k = tuple(float(v) for v in bulk_k)
    else:
        bulk_k = float(bulk_k)

    bc_node = doc.get("boundary", {})
    bc_kwargs = {}
    for side in SIDES:
        if side in bc_node:
            bc_kwargs[side] = _parse_condition(bc_node[side], f"boundary.{side}")

    grid = doc.get("grid")
    if grid is not None:
        grid = (int(grid[0]), int(grid[1]))
    levels = doc.get("levels")
    if levels is not None:
        levels = int(levels)

    cyc = doc.get("cycle", {})
    try:
        cycle = CycleConfig(
            cycle=str(cyc.get("type", "W")),
            nu1=int(cyc.get("nu1", 2)), nu2=int(cyc.get("nu2", 2)),
            tol=float(cyc.get("tol", 1e-10)),
            max_iterations=int(cyc.get("max_iterations", 100)),
            include_p0=bool(cyc.get("include_p0", True)),
            line_solve=str(cyc.get("line_solve", "auto")),
            line_threshold=float(cyc.get("line_threshold", 10.0)),
            presolve=bool(cyc.get("presolve", True)))
    except ValueError as exc:
        raise ConfigError(f"bad cycle section: {exc}") from exc

    try:
        return ExperimentConfig(
            name=str(doc.get("name", "experiment")),
            domain=domain, fractures=fractures, bulk_k=bulk_k,
            q=float(bulk.get("q", 0.0)),
            q_fracture=float(doc.get("q_fracture", 0.0)),
            xi=float(doc.get("xi", 1.0)),
            bcs=BoundaryConditions(**bc_kwargs),
            grid=grid, levels=levels, cycle=cycle,
            out_dir=doc.get("output", {}).get("directory"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def parse_file(path) -> ExperimentConfig:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    return parse(doc)


def _serialize_condition(cond):
    if cond is None:
        return None
    if isinstance(cond, DirichletPressure):
        return {"pressure": cond.value}
    if isinstance(cond, FixedFlux):
        return {"flux": cond.value}
    raise ConfigError(f"cannot serialize condition {cond!r}")


def _serialize_permeability(k):
    if isinstance(k, PiecewiseConstant):
        return {"breaks": [float(b) for b in k.breaks],
                "values": [float(v) for v in k.values]}
    if callable(k):
        raise ConfigError("cannot serialize an arbitrary callable permeability")
    return float(k)


def serialize(config: ExperimentConfig) -> dict:
    """Plain-data document; parse(serialize(c)) rebuilds an equal setup."""
    dom = config.domain
    doc = {
        "name": config.name,
        "domain": {"x0": dom.x0, "x1": dom.x1, "y0": dom.y0, "y1": dom.y1},
        "fractures": [{
            "axis": f.axis, "at": f.at, "span": list(f.span),
            "aperture": f.aperture,
            "k_tangential": _serialize_permeability(f.k_tangential),
            "k_normal": _serialize_permeability(f.k_normal),
            "tips": [_serialize_condition(t) for t in f.tips],
        } for f in config.fractures],
        "bulk": {"k": (list(config.bulk_k) if isinstance(config.bulk_k, tuple)
                       else config.bulk_k),
                 "q": config.q},
        "q_fracture": config.q_fracture,
        "xi": config.xi,
        "boundary": {side: _serialize_condition(config.bcs[side])
                     for side in SIDES},
        "cycle": {"type": config.cycle.cycle,
                  "nu1": config.cycle.nu1, "nu2": config.cycle.nu2,
                  "tol": config.cycle.tol,
                  "max_iterations": config.cycle.max_iterations,
                  "include_p0": config.cycle.include_p0,
                  "line_solve": config.cycle.line_solve,
                  "line_threshold": config.cycle.line_threshold,
                  "presolve": config.cycle.presolve},
    }
    if config.grid is not None:
        doc["grid"] = list(config.grid)
    if config.levels is not None:
        doc["levels"] = config.levels
    if config.out_dir is not None:
        doc["output"] = {"directory": config.out_dir}
    return doc


def serialize_file(config: ExperimentConfig, path):
    with open(path, "w") as fh:
        yaml.safe_dump(serialize(config), fh, sort_keys=False)
