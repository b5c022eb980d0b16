"""YAML configuration parsing, serialization and validation."""

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmg import ConfigError, ExperimentConfig, parse, parse_file, preset
from fracmg import serialize, serialize_file
from fracmg.model import PiecewiseConstant
from fracmg.presets import PRESET_NAMES


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_round_trip_is_idempotent(name, tmp_path):
    cfg = preset(name)
    doc = serialize(cfg)
    again = serialize(parse(doc))
    assert again == doc
    path = tmp_path / "cfg.yaml"
    serialize_file(cfg, path)
    assert serialize(parse_file(path)) == doc


def test_round_trip_preserves_cycle_extras():
    import dataclasses
    cfg = preset("one_fracture_case1")
    cfg = dataclasses.replace(cfg, cycle=dataclasses.replace(
        cfg.cycle, cycle="V", nu1=1, nu2=3, line_solve="never",
        line_threshold=2.5, presolve=False, include_p0=False))
    back = parse(serialize(cfg))
    assert back.cycle == cfg.cycle


def test_pure_flux_problem_rejected():
    doc = serialize(preset("one_fracture_case1"))
    doc["boundary"] = {"left": {"flux": 0.0}, "right": {"flux": 0.0},
                       "bottom": None, "top": None}
    doc["fractures"][0]["tips"] = [{"flux": 0.0}, {"flux": 0.0}]
    with pytest.raises(ConfigError):
        parse(doc)


def test_grid_and_levels_are_exclusive():
    doc = serialize(preset("one_fracture_case1"))
    doc["levels"] = 2
    with pytest.raises(ConfigError):
        parse(doc)


def test_parse_errors_are_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        parse("not a mapping")
    with pytest.raises(ConfigError):
        parse({"domain": {"x0": 0.0}})
    doc = serialize(preset("one_fracture_case1"))
    doc["fractures"][0]["axis"] = "diagonal"
    with pytest.raises(ConfigError):
        parse(doc)
    doc = serialize(preset("one_fracture_case1"))
    doc["boundary"]["left"] = {"temperature": 3.0}
    with pytest.raises(ConfigError):
        parse(doc)
    bad = tmp_path / "bad.yaml"
    bad.write_text("a: [unclosed\n")
    with pytest.raises(ConfigError):
        parse_file(bad)


def test_piecewise_permeability_round_trip():
    doc = serialize(preset("one_fracture_case2"))
    k = doc["fractures"][0]["k_tangential"]
    assert k == {"breaks": [0.25, 0.75], "values": [1e2, 2e-3, 1e2]}
    cfg = parse(doc)
    assert isinstance(cfg.fractures[0].k_tangential, PiecewiseConstant)
    assert cfg.fractures[0].k_tau(0.5) == 2e-3


def test_serialized_documents_are_plain_yaml(tmp_path):
    path = tmp_path / "cfg.yaml"
    serialize_file(preset("benchmark"), path)
    doc = yaml.safe_load(path.read_text())
    assert doc["name"] == "benchmark"
    assert len(doc["fractures"]) == 6


@given(breaks=st.lists(st.integers(1, 98), min_size=1, max_size=5,
                       unique=True).map(sorted),
       s=st.floats(0.0, 1.0, allow_nan=False))
@settings(max_examples=50, deadline=None)
def test_piecewise_constant_lookup(breaks, s):
    bs = [b / 100.0 for b in breaks]
    values = list(range(len(bs) + 1))
    pw = PiecewiseConstant(bs, values)
    import bisect
    assert pw(s) == float(values[bisect.bisect_right(bs, s)])


def test_experiment_config_direct_validation():
    from fracmg import BoundaryConditions, Domain
    with pytest.raises(ConfigError):
        ExperimentConfig(name="bad", domain=Domain(0, 1, 0, 1),
                         bcs=BoundaryConditions())
    with pytest.raises(ConfigError):
        ExperimentConfig(name="bad", domain=Domain(0, 1, 0, 1),
                         grid=(8, 8), levels=2)
