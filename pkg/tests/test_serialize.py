import copy

import numpy as np
import pytest

from symplindex import serialize
from symplindex.errors import SchemaViolation
from symplindex.ham import catalog

from conftest import load_fixture

KINDS = {
    "rotation_lagrangian_path.json": "lagrangian_path",
    "constant_lagrangian_path.json": "lagrangian_path",
    "undersampled_lagrangian_path.json": "lagrangian_path",
    "vertical_lagrangian.json": "lagrangian",
    "quarter_rotation_path.json": "path",
    "harmonic_system.json": "system",
    "element_k1_m0.json": "element",
    "element_km1_m1.json": "element",
}
DUMPERS = {
    "lagrangian_path": serialize.dump_lagrangian_path, "lagrangian": serialize.dump_lagrangian,
    "path": serialize.dump_path, "system": serialize.dump_system, "element": serialize.dump_element,
}


@pytest.mark.parametrize("name", sorted(KINDS))
def test_fixture_round_trip(name):
    doc = load_fixture(name)
    kind = KINDS[name]
    obj = serialize.PARSERS[kind](doc)
    assert DUMPERS[kind](obj) == doc


def test_matrix_round_trip(rng):
    from symplindex.sympl import random_symplectic
    M = random_symplectic(5, 2)
    doc = serialize.dump_matrix(M)
    assert np.array_equal(serialize.parse_matrix(doc), M)


@pytest.mark.parametrize("system", catalog(), ids=lambda s: s.name)
def test_catalog_systems_round_trip(system):
    doc = serialize.dump_system(system)
    back = serialize.parse_system(doc)
    assert serialize.dump_system(back) == doc
    assert np.allclose(back.hessian(0.3), system.hessian(0.3))


def test_dumps_is_deterministic():
    doc = load_fixture("element_k1_m0.json")
    text = serialize.dumps(doc)
    assert text.endswith("\n") and text == serialize.dumps(dict(reversed(list(doc.items()))))


def violation(kind, doc):
    with pytest.raises(SchemaViolation) as info:
        serialize.PARSERS[kind](doc)
    return info.value.pointer


def test_wrong_kind_and_version():
    doc = load_fixture("element_k1_m0.json")
    assert violation("path", doc) == "/kind"
    bad = dict(doc, schemaVersion=2)
    assert violation("element", bad) == "/schemaVersion"
    bad = dict(doc)
    del bad["m"]
    assert violation("element", bad) == ""


def test_field_pointers():
    doc = load_fixture("element_k1_m0.json")
    bad = copy.deepcopy(doc)
    bad["Q"][0] = [0.0, 1.0]
    assert violation("element", bad) == "/Q/0"
    bad = copy.deepcopy(doc)
    bad["K"][0][0] = "x"
    assert violation("element", bad) == "/K/0/0"
    bad = copy.deepcopy(doc)
    bad["m"] = 1
    assert violation("element", bad) == "/m"


def test_path_pointers():
    doc = load_fixture("quarter_rotation_path.json")
    bad = copy.deepcopy(doc)
    bad["samples"][3]["t"] = bad["samples"][2]["t"]
    assert violation("path", bad) == "/samples/3/t"
    bad = copy.deepcopy(doc)
    bad["samples"][1]["matrix"] = [[2.0, 0.0], [0.0, 2.0]]
    assert violation("path", bad) == "/samples/1/matrix"


def test_non_lagrangian_frame():
    doc = load_fixture("vertical_lagrangian.json")
    bad = copy.deepcopy(doc)
    bad["n"] = 2
    assert violation("lagrangian", bad) == "/frame"


def test_unreadable_files(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    with pytest.raises(SchemaViolation, match="invalid JSON"):
        serialize.load(p, "element")
    with pytest.raises(SchemaViolation, match="cannot read"):
        serialize.load(tmp_path / "missing.json", "element")
