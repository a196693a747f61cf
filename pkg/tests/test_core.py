import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptm import (
    DiscardBehaviour,
    EffectVector,
    Instrument,
    StateVector,
    TransformationMatrix,
    compose,
    evaluate,
    make_classical,
    make_custom,
    make_quantum,
    validate_effect,
    validate_instrument,
    validate_state,
    validate_transformation,
    zero_effect,
)
from gptm.classical import atomic_effect, delta_state
from gptm.config import get_tolerances, tolerances
from gptm.core import HypercubeVertices
from gptm.errors import SystemMismatch
from gptm.quantum import pure_state

finite = st.floats(-3, 3, allow_nan=False)


def test_unit_effect_on_normalized_states(qubit):
    psi = pure_state([0.6, 0.8j], qubit)
    assert evaluate(qubit.unit_effect, psi) == pytest.approx(1.0, abs=1e-12)
    assert evaluate(zero_effect(qubit), psi) == 0.0


def test_atomic_effects_pick_out_deltas():
    c = make_classical(4)
    table = [[evaluate(atomic_effect(c, i), delta_state(c, j)) for j in range(4)] for i in range(4)]
    assert np.array_equal(table, np.eye(4))


def test_evaluate_rejects_foreign_system(qubit, bit):
    with pytest.raises(SystemMismatch):
        evaluate(bit.unit_effect, pure_state([1, 0], qubit))


@pytest.mark.parametrize(
    "system",
    [make_classical(1), make_classical(5), make_quantum(2), make_quantum(3)],
    ids=str,
)
def test_extreme_states_are_normalized(system):
    assert np.allclose(np.asarray(system.extreme_states) @ system.unit, 1.0, atol=1e-12, rtol=0)


def test_composite_extreme_states_are_normalized():
    s = compose(make_classical(3), make_quantum(2))
    assert np.allclose(np.asarray(s.extreme_states) @ s.unit, 1.0, atol=1e-12, rtol=0)


def test_validate_state_reports_violation_size():
    c = make_classical(3)
    good = validate_state(StateVector(c, [0.5, 0.5, 0.0]))
    bad = validate_state(StateVector(c, [0.6, 0.6, -0.2]))
    assert good.passed
    assert not bad.passed
    assert bad["cone"].violation == pytest.approx(0.2)


def test_subnormalised_states_are_allowed():
    c = make_classical(2)
    assert validate_state(StateVector(c, [0.2, 0.3])).passed
    assert not validate_state(StateVector(c, [0.2, 0.3]), normalized=True).passed


def test_validate_quantum_state(qubit):
    assert validate_state(pure_state([1, 1j], qubit)).passed
    # Bloch vector of length 1.2 is not a state
    v = np.array([1, 0, 0, 1.2]) / np.sqrt(2)
    assert not validate_state(StateVector(qubit, v)).passed


def test_false_preserving_declaration_is_caught():
    c = make_classical(2)
    t = TransformationMatrix(c, c, 1.5 * np.eye(2), DiscardBehaviour.PRESERVING)
    r = validate_transformation(t)
    assert not r.passed
    assert r["discard-preserving"].violation == pytest.approx(0.5)


def test_effect_range_check(qubit):
    assert validate_effect(qubit.unit_effect).passed
    assert not validate_effect(EffectVector(qubit, 2 * qubit.unit)).passed


def test_instrument_total_is_preserving():
    c = make_classical(3)
    rng = np.random.default_rng(0)
    m = rng.dirichlet(np.ones(6), size=3).T  # 6 x 3 column-stochastic
    branches = [
        TransformationMatrix(c, c, m[:3], DiscardBehaviour.NONINCREASING),
        TransformationMatrix(c, c, m[3:], DiscardBehaviour.NONINCREASING),
    ]
    inst = Instrument(branches)
    assert validate_instrument(inst).passed
    assert np.allclose(inst.total().matrix.T @ c.unit, c.unit, atol=1e-12)


def test_composition_of_maps_and_mismatch(bit, qubit):
    swap = TransformationMatrix(bit, bit, [[0, 1], [1, 0]])
    assert np.array_equal((swap @ swap).matrix, np.eye(2))
    with pytest.raises(SystemMismatch):
        TransformationMatrix(qubit, qubit, np.eye(4)) @ swap


def test_tolerances_context_is_scoped():
    before = get_tolerances()
    with tolerances(cone=1e-3):
        assert get_tolerances().cone == 1e-3
    assert get_tolerances() == before


def test_hypercube_vertices_are_lazy():
    v = HypercubeVertices(20)
    assert len(v) == 2**20
    assert np.array_equal(v[5], [1, 0, 1] + [0] * 17)


def test_custom_square_bit():
    square = make_custom([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]])
    assert np.allclose(np.asarray(square.extreme_states) @ square.unit, 1.0)


@settings(max_examples=50, deadline=None)
@given(
    st.lists(finite, min_size=4, max_size=4),
    st.lists(finite, min_size=4, max_size=4),
    st.lists(finite, min_size=4, max_size=4),
    finite,
    finite,
)
def test_evaluate_is_bilinear(e1, e2, s, a, b):
    q = make_quantum(2)
    lhs = evaluate(a * EffectVector(q, e1) + b * EffectVector(q, e2), StateVector(q, s))
    rhs = a * evaluate(EffectVector(q, e1), StateVector(q, s)) + b * evaluate(EffectVector(q, e2), StateVector(q, s))
    assert lhs == pytest.approx(rhs, abs=1e-12 * (1 + abs(lhs)) * 10)
