import json

import numpy as np
import pytest

from centrality_kit import io
from centrality_kit.algebra import AlgebraShape, random_element, random_gaussian
from centrality_kit.conditions import ConditionId
from centrality_kit.errors import DimensionMismatch, NotPositive, SchemaError
from centrality_kit.functionals import NormalFunctional
from centrality_kit.witness import (
    derive_condition_certificates,
    lemma1_construct,
    verify_certificate,
    violating_symmetry_state,
)

M2 = AlgebraShape((2,))


def test_parse_instance_spec_example(tmp_path):
    doc = {
        "schema": "centrality-kit/instance-v1",
        "blocks": [2],
        "element": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]],
    }
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(doc))
    shape, element, functionals = io.parse_instance(path)
    assert shape.block_dims == (2,)
    np.testing.assert_allclose(element.blocks[0], np.diag([1.0, 0.0]))
    assert functionals == {}


def test_instance_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(3)
    for i in range(100):
        dims = [(2,), (3,), (2, 1), (4, 3, 2)][i % 4]
        shape = AlgebraShape(dims)
        element = random_element("psd", shape, rng)
        named = {"phi": NormalFunctional(random_gaussian(shape, rng))}
        path = tmp_path / f"inst{i}.json"
        io.write_instance(path, element, named)
        _, back, funcs = io.parse_instance(path)
        for b1, b2 in zip(element.blocks, back.blocks):
            assert (b1 == b2).all()  # bit-for-bit
        for b1, b2 in zip(named["phi"].density.blocks, funcs["phi"].density.blocks):
            assert (b1 == b2).all()
        # serializing again yields the identical document
        assert io.serialize_instance(element, named) == io.serialize_instance(back, funcs)


def test_instance_schema_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json {")
    with pytest.raises(SchemaError):
        io.parse_instance(path)
    with pytest.raises(SchemaError):
        io.parse_instance_data({"schema": "wrong"})
    with pytest.raises(SchemaError):
        io.parse_instance_data({"schema": io.INSTANCE_SCHEMA, "blocks": [0], "element": []})
    with pytest.raises(SchemaError):
        io.parse_instance_data({"schema": io.INSTANCE_SCHEMA, "blocks": [2]})


def test_instance_dimension_mismatch():
    doc = {
        "schema": io.INSTANCE_SCHEMA,
        "blocks": [2],
        "element": [[[[1, 0]]]],  # 1x1 data for a dim-2 block
    }
    with pytest.raises(DimensionMismatch):
        io.parse_instance_data(doc)


def test_instance_rejects_non_positive():
    doc = {
        "schema": io.INSTANCE_SCHEMA,
        "blocks": [2],
        "element": [[[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]],
    }
    with pytest.raises(NotPositive):
        io.parse_instance_data(doc)


def test_certificate_roundtrip_and_verify(tmp_path):
    a = M2.element([np.diag([1.0, 0.0])])
    s, phi = violating_symmetry_state(a)
    w = lemma1_construct(a, s, phi)
    certs = derive_condition_certificates(a, w)

    for cond in (ConditionId.II, ConditionId.VI, ConditionId.VII, ConditionId.GARDNER):
        path = tmp_path / f"cert-{cond.value}.json"
        derivation = w if cond not in (ConditionId.II, ConditionId.GARDNER) else None
        io.write_certificate(path, certs[cond], master_seed=42, derivation=derivation)
        report, loaded_w = io.parse_certificate(path)
        assert report.condition == cond
        assert report.lhs == certs[cond].lhs  # exact float round-trip
        assert report.margin == certs[cond].margin
        assert verify_certificate(report, a)
        if derivation is not None:
            assert loaded_w is not None
            assert verify_certificate(loaded_w, a)
        doc = json.loads(path.read_text())
        assert doc["schema"] == "centrality-kit/cert-v1"
        assert doc["tool_version"]
        assert doc["master_seed"] == 42


def test_certificate_schema_errors():
    with pytest.raises(SchemaError):
        io.parse_certificate_data({"schema": "nope"})
    with pytest.raises(SchemaError):
        io.parse_certificate_data({"schema": io.CERT_SCHEMA, "condition": "xii", "blocks": [2]})
    with pytest.raises(SchemaError):
        io.parse_certificate_data(
            {"schema": io.CERT_SCHEMA, "condition": "ii", "blocks": [2], "inputs": {}}
        )
