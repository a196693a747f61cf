import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptm import make_quantum, pure_state, state_to_density
from gptm.circuits import MediatedCircuit, apply_circuit
from gptm.errors import InvalidGeometry
from gptm.quantum import negativity, partial_transpose
from gptm.rng import make_rng
from gptm.scenarios import (
    PLUS,
    Demo,
    Model,
    bmv_from_phase_gap,
    bmv_from_phases,
    bmv_mediated_circuit,
    bmv_phases,
    bmv_protocol,
    bmv_time_for_gap,
    branch_distances,
    classify_model,
    collapse_channel,
    collapse_demo,
    incompatibility_holds,
    measure_into_field_circuit,
    nonmediated_demo,
    phase_gap,
    random_mediated_circuit,
    random_product_input,
    scenario_demos,
    verify_no_go,
)


def _diagonal_phase_oracle(phases):
    """|++> picking up exp(i phases[a, b]) on branch (a, b), built directly."""
    psi = 0.5 * np.exp(1j * np.asarray(phases).reshape(-1))
    rho = np.outer(psi, psi.conj())
    ev = np.linalg.eigvalsh(partial_transpose(rho, (2, 2), 1))
    return rho, float(-ev[ev < 0].sum())


# ---------------------------------------------------------------------------
# no-go harness


def test_small_no_go_run_passes():
    rep = verify_no_go(20, seed=3)
    assert rep.passed
    assert rep.trials == 20 and rep.lp_failures == 0
    assert rep.max_negativity <= 1e-9
    assert rep.worst_case is not None


def test_no_go_report_is_thread_independent():
    a = verify_no_go(12, seed=5, threads=1)
    b = verify_no_go(12, seed=5, threads=4)
    assert [(r.negativity, r.verdict, r.g_size, r.rounds) for r in [a.worst_case]] == [
        (r.negativity, r.verdict, r.g_size, r.rounds) for r in [b.worst_case]
    ]
    assert a.max_negativity == b.max_negativity


def test_no_go_with_classical_and_qutrit_parties():
    assert verify_no_go(6, dim_A=3, dim_B=2, seed=1).passed
    assert verify_no_go(6, kind_A="classical", dim_A=3, seed=2).passed


def test_zero_rounds_leave_the_input_unchanged():
    rng = make_rng(11)
    q = make_quantum(2)
    c = random_mediated_circuit(q, q, 3, 0, rng)
    x = random_product_input(q, q, rng)
    assert np.allclose(apply_circuit(c, x).coeffs, x.coeffs, atol=1e-14)


def test_negative_trial_count_rejected():
    with pytest.raises(ValueError):
        verify_no_go(-1)


# ---------------------------------------------------------------------------
# interferometer


def test_pi_gap_matches_the_phase_oracle():
    res = bmv_from_phase_gap(np.pi)
    rho, neg = _diagonal_phase_oracle([[0, 0], [0, np.pi]])
    assert abs(res.negativity - 0.5) <= 1e-10
    assert abs(neg - 0.5) <= 1e-12
    assert np.allclose(state_to_density(res.state), rho, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4))
def test_arbitrary_phases_match_the_oracle(ph):
    phases = np.array(ph).reshape(2, 2)
    res = bmv_from_phases(phases)
    rho, neg = _diagonal_phase_oracle(phases)
    assert np.allclose(state_to_density(res.state), rho, atol=1e-10)
    assert abs(res.negativity - neg) <= 1e-10


def test_circuit_is_strictly_mediated_with_quantum_field():
    c = bmv_mediated_circuit(np.zeros((2, 2)))
    assert isinstance(c, MediatedCircuit)
    assert c.G.is_quantum and not c.G.is_classical
    assert all(r.passed for r in c.validate(1e-9))


def test_no_time_no_entanglement():
    res = bmv_protocol(1e-14, 1e-14, 1e-4, 2e-4, 0.0)
    assert res.negativity < 1e-12


def test_equal_distances_give_zero_gap():
    # the gap is a second difference of 1/r; a row-constant phase table cancels
    assert phase_gap(np.array([[1.3, 0.2], [1.3, 0.2]])) == 0.0
    assert bmv_from_phases([[1.3, 0.2], [1.3, 0.2]]).negativity < 1e-12


def test_swapping_and_rescaling_masses():
    args = (2e-14, 5e-15, 2.5e-4, 4.5e-4, 2.0)
    base = bmv_protocol(*args).negativity
    swapped = bmv_protocol(args[1], args[0], *args[2:]).negativity
    rescaled = bmv_protocol(args[0] * 2, args[1] / 2, *args[2:]).negativity
    assert base > 0.01
    assert abs(base - swapped) < 1e-12 and abs(base - rescaled) < 1e-12


def test_branch_distances_and_geometry_checks():
    assert np.array_equal(branch_distances(1.0, 3.0), [[3, 4], [2, 3]])
    with pytest.raises(InvalidGeometry):
        bmv_phases(1, 1, 1.0, 1.0, 1.0)
    with pytest.raises(InvalidGeometry):
        bmv_phases(-1, 1, 0.1, 1.0, 1.0)


def test_time_for_gap_inverts_the_phases():
    m, d, L = 1e-14, 2.5e-4, 4.5e-4
    t = bmv_time_for_gap(math.pi, m, m, d, L)
    assert abs(abs(phase_gap(bmv_phases(m, m, d, L, t))) - math.pi) < 1e-9
    assert abs(bmv_protocol(m, m, d, L, t).negativity - 0.5) < 1e-9


# ---------------------------------------------------------------------------
# collapse


def test_collapse_zero_is_identity_and_infinity_dephases():
    q = make_quantum(2)
    rho = np.array([[0.5, 0.3 - 0.1j], [0.3 + 0.1j, 0.5]])
    from gptm.quantum import density_to_state

    x = density_to_state(rho, q)
    assert np.allclose(collapse_channel(0.0).matrix, np.eye(4))
    full = state_to_density(collapse_channel(math.inf)(x))
    assert np.allclose(full, np.diag([0.5, 0.5]), atol=1e-15)
    part = state_to_density(collapse_channel(2.0)(x))
    assert np.isclose(part[0, 1], rho[0, 1] * math.exp(-2.0))


def test_collapse_rejects_negative_strength():
    with pytest.raises(ValueError):
        collapse_channel(-0.1)


def test_strong_collapse_kills_entanglement():
    assert bmv_from_phase_gap(np.pi, 10.0).negativity < 1e-4
    assert bmv_from_phase_gap(np.pi, 0.05).negativity > 0.01


def test_classical_record_never_entangles():
    for lam in (0.0, 1.0, 10.0):
        c = measure_into_field_circuit(np.array([[0, 0], [0, np.pi]]), lam)
        assert c.G.is_classical
        out = apply_circuit(c, pure_state(np.kron(PLUS, PLUS), c.AB))
        assert negativity(out) <= 1e-12


# ---------------------------------------------------------------------------
# model classification


@pytest.mark.parametrize(
    "model, symbols",
    [("collapse", ("✗", "✓", "✓")), ("nonmediated", ("✓", "✗", "✓")), ("nonclassical-g", ("✓", "✓", "✗"))],
)
def test_condition_profiles(model, symbols):
    prof = classify_model(model)
    assert prof.model is Model(model)
    assert prof.symbols() == symbols
    assert prof.matches_demo()


def test_nonmediated_demo_entangles_with_classical_control():
    d = nonmediated_demo()
    assert d.classical_field and not d.mediated
    assert d.negativity > 0.4


def test_collapse_demo_detail():
    d = collapse_demo()
    assert d.negativity < 1e-4 and d.detail["quantum_field_negativity"] < 1e-4


def test_incompatibility_meta_check():
    assert incompatibility_holds()
    assert len(scenario_demos()) == 3
    rogue = Demo("rogue", 0.3, True, True)
    assert not incompatibility_holds([rogue])


def test_unknown_model_rejected():
    with pytest.raises(ValueError):
        classify_model("steady-state")
