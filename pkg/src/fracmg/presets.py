"""Ready-made experiment setups for the reference test problems.

Five presets are available: a single vertical fracture crossing a 2:1
rectangle with either constant permeability and pressurized tips
(``one_fracture_case1``) or a piecewise low-permeable middle section and
sealed tips (``one_fracture_case2``); two four-fracture networks on the
unit square driven by a top-to-bottom pressure drop
(``four_fractures_case1`` with disjoint horizontal fractures,
``four_fractures_case2`` with three T-intersections); and ``benchmark``,
the regular six-fracture network from the single-phase benchmark suite
(geometry shipped in ``data/benchmark_geometry.yaml``) driven by a
constant left inflow, in a conducting or blocking variant.
"""

from __future__ import annotations

import importlib.resources

import yaml

from .config import ExperimentConfig
from .errors import ConfigError, UnknownPreset
from .geometry import (Domain, DirichletPressure, FixedFlux, FractureSegment,
                       HORIZONTAL, VERTICAL, ZERO_FLUX)
from .model import BoundaryConditions, PiecewiseConstant
from .multigrid import CycleConfig

PRESET_NAMES = ("one_fracture_case1", "one_fracture_case2",
                "four_fractures_case1", "four_fractures_case2", "benchmark")

CONDUCTING_KF = 1e4
BLOCKING_KF = 1e-4


def benchmark_geometry():
    """Domain and fracture coordinates of the regular-network benchmark."""
    ref = importlib.resources.files("fracmg") / "data" / "benchmark_geometry.yaml"
    doc = yaml.safe_load(ref.read_text())
    d = doc["domain"]
    domain = Domain(d["x0"], d["x1"], d["y0"], d["y1"])
    fracs = [(f["axis"], float(f["at"]), tuple(map(float, f["span"])))
             for f in doc["fractures"]]
    return domain, fracs


def _one_fracture(name, k_tau, k_n, tips, tol):
    seg = FractureSegment(VERTICAL, 1.0, (0.0, 1.0), aperture=1e-2,
                          k_tangential=k_tau, k_normal=k_n, tips=tips)
    return ExperimentConfig(
        name=name, domain=Domain(0.0, 2.0, 0.0, 1.0), fractures=[seg],
        bulk_k=1.0,
        bcs=BoundaryConditions(left=DirichletPressure(0.0),
                               right=DirichletPressure(1.0)),
        grid=(32, 16), cycle=CycleConfig(tol=tol))


def _four_fractures(name, segments):
    return ExperimentConfig(
        name=name, domain=Domain(0.0, 1.0, 0.0, 1.0), fractures=segments,
        bulk_k=1.0,
        bcs=BoundaryConditions(bottom=DirichletPressure(0.0),
                               top=DirichletPressure(1.0)),
        grid=(40, 40), cycle=CycleConfig(tol=1e-10))


def preset(name, kf=None, mode=None) -> ExperimentConfig:
    """Build one of the named experiment setups.

    ``kf`` overrides the constant fracture permeability where the preset
    has one; ``mode`` selects ``"conducting"`` (K_f = 1e4) or
    ``"blocking"`` (K_f = 1e-4) for the benchmark preset.
    """
    if name not in PRESET_NAMES:
        raise UnknownPreset(f"unknown preset {name!r}; choose one of {PRESET_NAMES}")

    if name == "one_fracture_case1":
        k = 1e-2 if kf is None else float(kf)
        return _one_fracture(name, k, k,
                             tips=(DirichletPressure(0.0), DirichletPressure(1.0)),
                             tol=1e-10)

    if name == "one_fracture_case2":
        if kf is not None:
            raise ConfigError("one_fracture_case2 has a fixed piecewise "
                              "fracture permeability; --kf does not apply")
        k = PiecewiseConstant([0.25, 0.75], [1e2, 2e-3, 1e2])
        return _one_fracture(name, k, k, tips=(ZERO_FLUX, ZERO_FLUX), tol=1e-8)

    if name == "four_fractures_case1":
        k1 = 1e-2 if kf is None else float(kf)
        segs = [
            FractureSegment(HORIZONTAL, 0.8, (0.0, 0.8), aperture=1e-2,
                            k_tangential=k1, k_normal=k1),
            FractureSegment(HORIZONTAL, 0.6, (0.2, 1.0), aperture=1e-2,
                            k_tangential=k1, k_normal=k1),
            FractureSegment(HORIZONTAL, 0.4, (0.0, 0.8), aperture=1e-2,
                            k_tangential=1e2, k_normal=1e2),
            FractureSegment(HORIZONTAL, 0.2, (0.2, 1.0), aperture=1e-2,
                            k_tangential=k1, k_normal=k1),
        ]
        return _four_fractures(name, segs)

    if name == "four_fractures_case2":
        if kf is not None:
            raise ConfigError("four_fractures_case2 has fixed per-fracture "
                              "permeabilities; --kf does not apply")
        k2 = PiecewiseConstant([0.6], [1e2, 1e-2])
        segs = [
            FractureSegment(HORIZONTAL, 0.8, (0.0, 0.6), aperture=1e-2,
                            k_tangential=1e2, k_normal=1e2),
            FractureSegment(HORIZONTAL, 0.6, (0.2, 1.0), aperture=1e-2,
                            k_tangential=k2, k_normal=k2),
            FractureSegment(VERTICAL, 0.2, (0.0, 0.8), aperture=1e-2,
                            k_tangential=1e2, k_normal=1e2),
            FractureSegment(VERTICAL, 0.6, (0.0, 0.6), aperture=1e-2,
                            k_tangential=1e-2, k_normal=1e-2),
        ]
        return _four_fractures(name, segs)

    # benchmark
    if mode is None and kf is None:
        mode = "conducting"
    if mode is not None:
        if mode not in ("conducting", "blocking"):
            raise ConfigError(f"mode must be conducting or blocking, got {mode!r}")
        if kf is not None:
            raise ConfigError("give either --mode or --kf, not both")
        k = CONDUCTING_KF if mode == "conducting" else BLOCKING_KF
    else:
        k = float(kf)
    domain, fracs = benchmark_geometry()
    segs = [FractureSegment(axis, at, span, aperture=1e-4,
                            k_tangential=k, k_normal=k)
            for axis, at, span in fracs]
    return ExperimentConfig(
        name="benchmark", domain=domain, fractures=segs, bulk_k=1.0,
        bcs=BoundaryConditions(left=FixedFlux(-1.0),
                               right=DirichletPressure(1.0)),
        grid=(32, 32), cycle=CycleConfig(tol=1e-8))
