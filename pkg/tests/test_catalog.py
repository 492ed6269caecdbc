import json
from decimal import Decimal

import numpy as np
import pytest

from cohomlab.catalog import (
    INV_SQRT2,
    list_scenarios,
    load_scenario,
    load_scenario_file,
    scenario_from_json,
    so_algebra,
    su2_algebra,
)
from cohomlab.errors import ConstructionError, UnknownScenarioError
from cohomlab.lie_core import check_algebra
from cohomlab.quotients import torus_rank

REQUIRED = ["su2-berger", "so3-sphere", "so4-stiefel", "so5-two-block", "torus2-flat", "son-circle"]


def test_registry_contents():
    names = [n for n, _ in list_scenarios()]
    for name in REQUIRED:
        assert name in names
    assert len(set(names)) == len(names)
    assert all(desc for _, desc in list_scenarios())


@pytest.mark.parametrize("name", [n for n, _ in list_scenarios()])
def test_every_scenario_validates(name):
    s = load_scenario(name)
    assert check_algebra(s.algebra).passed
    assert max(s.decomposition.validate().values()) < 1e-12
    assert s.C == max(s.dim_N, 9)


def test_su2_berger_shape():
    s = load_scenario("su2-berger")
    assert s.algebra.dim == 3
    assert [list(b) for b in s.decomposition.m_blocks] == [[0], [1, 2]]


def test_torus2_rank():
    assert torus_rank(load_scenario("torus2-flat").quotient_context()) == 1


def test_so4_diagnostics():
    d = check_algebra(load_scenario("so4-stiefel").algebra)
    assert d.passed


def test_unknown_name():
    with pytest.raises(UnknownScenarioError):
        load_scenario("so7-nowhere")


def test_structure_constants_are_integers():
    for A in (so_algebra(3), so_algebra(4), so_algebra(5), su2_algebra()):
        assert np.array_equal(A.c, np.round(A.c))


def test_hopf_constant_digits():
    assert len(INV_SQRT2.split(".")[1]) >= 30
    assert abs(Decimal(INV_SQRT2) ** 2 - Decimal("0.5")) < Decimal("1e-38")


def test_json_round_trip(tmp_path):
    s = load_scenario("so4-stiefel")
    doc = s.to_json()
    json.dumps(doc)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(doc))
    r = load_scenario_file(str(path))
    assert r.name == s.name
    assert np.array_equal(r.algebra.c, s.algebra.c)
    assert r.decomposition.blocks == s.decomposition.blocks
    assert r.k_indices == s.k_indices
    assert np.array_equal(r.l_rows, s.l_rows)


def test_bad_file_scenario_rejected():
    doc = load_scenario("su2-berger").to_json()
    doc["k"] = [0, 1]  # span(e1, e2) is not a subalgebra of su(2)
    with pytest.raises(ConstructionError):
        scenario_from_json(doc)


def test_load_is_cached():
    assert load_scenario("su2-berger") is load_scenario("su2-berger")
