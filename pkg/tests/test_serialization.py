import json

import numpy as np
import pytest

jsonschema = pytest.importorskip("jsonschema")

from gptm import (  # noqa: E402
    EffectVector,
    compose,
    density_to_state,
    make_classical,
    make_custom,
    make_quantum,
    state_to_density,
)
from gptm.circuits import apply_circuit, circuit_matrix  # noqa: E402
from gptm.rng import make_rng  # noqa: E402
from gptm.scenarios import bmv_mediated_circuit, random_mediated_circuit, random_product_input, verify_no_go  # noqa: E402
from gptm.separability import is_separable  # noqa: E402
from gptm.serialization import (  # noqa: E402
    FormatError,
    deinterleave,
    dumps,
    from_jsonable,
    interleave,
    load,
    schema,
    to_jsonable,
)

SCHEMA = schema()


def roundtrip(obj):
    doc = json.loads(dumps(obj))
    jsonschema.validate(doc, SCHEMA)
    return from_jsonable(doc)


def test_interleaving_layout():
    m = np.array([[1 + 2j, 3 - 4j]])
    assert interleave(m) == [[1.0, 2.0, 3.0, -4.0]]
    assert np.array_equal(deinterleave(interleave(m)), m)
    with pytest.raises(FormatError):
        deinterleave([[1.0, 2.0, 3.0]])


@pytest.mark.parametrize(
    "system",
    [
        make_classical(3),
        make_quantum(2),
        compose(make_quantum(2), make_classical(2)),
        make_custom([[1, 1, 1], [1, 0, 1], [0, 1, 1], [0, 0, 1]], unit_effect=[0, 0, 1]),
    ],
)
def test_systems_round_trip(system):
    back = roundtrip(system)
    assert back.kind is system.kind and back.dim == system.dim
    assert np.array_equal(back.unit, system.unit)


def test_state_round_trips_bit_exact():
    rng = make_rng(4)
    q = make_quantum(3)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho = a @ a.conj().T
    x = density_to_state(rho / np.trace(rho).real, q)
    back = roundtrip(x)
    assert np.array_equal(back.coeffs, x.coeffs)


def test_density_only_document():
    q = make_quantum(2)
    rho = np.array([[0.75, 0.25j], [-0.25j, 0.25]])
    doc = {"type": "state", "system": {"kind": "quantum", "d": 2}, "density": interleave(rho)}
    jsonschema.validate(doc, SCHEMA)
    assert np.allclose(state_to_density(from_jsonable(doc)), rho, atol=1e-15)
    assert from_jsonable(doc).system.dim == q.dim


def test_effect_and_transformation_round_trip():
    q = make_quantum(2)
    e = EffectVector(q, q.unit / 2)
    assert np.array_equal(roundtrip(e).coeffs, e.coeffs)
    t = circuit_matrix(bmv_mediated_circuit(np.array([[0, 0], [0, np.pi]])))
    back = roundtrip(t)
    assert np.array_equal(back.matrix, t.matrix)


def test_circuit_round_trip_preserves_action():
    rng = make_rng(9)
    q = make_quantum(2)
    c = random_mediated_circuit(q, q, 3, 2, rng)
    x = random_product_input(q, q, rng)
    back = roundtrip(c)
    assert np.array_equal(apply_circuit(back, x).coeffs, apply_circuit(c, x).coeffs)


def test_kraus_and_path_references(tmp_path):
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    qubit = {"kind": "quantum", "d": 2}
    two = {"kind": "composite", "left": qubit, "right": qubit}
    t_doc = {"type": "transformation", "input": two, "output": two, "matrix": np.eye(16).tolist()}
    (tmp_path / "idle.json").write_text(json.dumps(t_doc))
    doc = {
        "type": "circuit",
        "A": qubit,
        "B": qubit,
        "G": qubit,
        "initial_field": [2**-0.5, 0, 0, 2**-0.5],
        "rounds": [{"I_A": {"unitary": interleave(cnot)}, "I_B": "idle.json"}],
    }
    jsonschema.validate(doc, SCHEMA)
    (tmp_path / "c.json").write_text(json.dumps(doc))
    c = load(tmp_path / "c.json")
    assert np.allclose(c.rounds[0][1].matrix, np.eye(16))
    assert all(r.passed for r in c.validate(1e-9))


def test_reports_and_certificates_serialise():
    rep = verify_no_go(2, seed=1)
    text = dumps(rep)
    assert text.endswith("}\n") and json.loads(text)["verdict"] == "pass"
    cert = is_separable(density_to_state(np.eye(4) / 4, compose(make_quantum(2), make_quantum(2))))
    assert json.loads(dumps(cert))["verdict"] == "separable"


def test_non_finite_values_become_null():
    assert to_jsonable(float("nan")) is None
    assert to_jsonable({"x": np.float64("inf")}) == {"x": None}


def test_dumps_is_deterministic_and_shortest_repr():
    obj = {"b": 0.1, "a": [np.float64(1 / 3)]}
    assert dumps(obj) == dumps(obj)
    assert dumps(obj) == '{\n  "a": [\n    0.3333333333333333\n  ],\n  "b": 0.1\n}\n'


def test_unknown_documents_rejected():
    with pytest.raises(FormatError):
        from_jsonable({"type": "wormhole"})
    with pytest.raises(FormatError):
        from_jsonable({"kind": "hyperbolic"})
    with pytest.raises(FormatError):
        to_jsonable(object())
