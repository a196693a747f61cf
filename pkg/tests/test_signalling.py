import math
import warnings
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gptm.config import CODATA
from gptm.errors import InvalidGeometry
from gptm.quantum import trace_distance
from gptm.signalling import (
    SWEEP_COLUMNS,
    ProtocolParams,
    ScaleWarning,
    assess_superluminality,
    field_model_alice_states,
    field_model_signal,
    phase_difference,
    read_sweep,
    run_protocol,
    sweep,
    sweep_csv,
)


def admissible(**over) -> ProtocolParams:
    """Light-cone-beating parameters with the mass of B tuned to a pi phase difference."""
    base = dict(m_A=1e-3, d=0.01, L=1.0, T_A=1e-9, T_B=1e-9)
    base.update(over)
    m_b = math.pi * CODATA.hbar * (base["L"] ** 2 - base["d"] ** 2 / 4) / (CODATA.G * base["m_A"] * base["T_B"] * base["d"])
    return ProtocolParams(m_B=m_b, **base)


def test_oracle_distance_between_plus_and_mixed():
    plus = np.full((2, 2), 0.5)
    ev = np.linalg.eigvalsh(plus - np.eye(2) / 2)
    assert abs(np.abs(ev).sum() / 2 - 0.5) < 1e-15


def test_visibilities_and_trace_distance():
    p = admissible()
    assert abs(phase_difference(p) - math.pi) < 1e-12
    off = run_protocol(p, False)
    ideal = run_protocol(p, True, ideal=True)
    assert off.visibility == 1.0 and off.negativity == 0.0
    assert ideal.visibility == 0.0
    assert abs(trace_distance(off.rho_A, ideal.rho_A) - 0.5) <= 1e-12
    assert abs(trace_distance(off.rho_A, run_protocol(p, True).rho_A) - 0.5) <= 1e-12


def test_admissible_set_is_superluminal():
    p = admissible()
    rep = assess_superluminality(p)
    assert p.T_A + p.T_B < p.L / CODATA.c
    assert rep.superluminal and rep.entangling_time_ok
    assert abs(rep.trace_distance_alice - 0.5) <= 1e-12


def test_light_year_separation_needs_no_fine_tuning():
    ly = 9.4607e15
    p = admissible(m_A=1.0, L=ly, d=ly / 100, T_A=1.0, T_B=1.0)
    assert assess_superluminality(p).superluminal


def test_infinite_light_speed_never_signals_faster_than_light():
    consts = replace(CODATA, c=math.inf)
    rep = assess_superluminality(admissible(), consts)
    assert rep.light_crossing_time == 0.0 and not rep.superluminal


def test_slow_protocol_is_not_superluminal():
    rep = assess_superluminality(admissible(T_A=1e-6, T_B=1e-6))
    assert not rep.superluminal


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(1e-3, 50.0))
def test_visibility_and_entanglement_are_complementary(frac, scale):
    p = admissible(T_B=1e-9)
    run = run_protocol(p, True, t=frac * p.T_B * scale)
    # a pure two-branch state: V^2 + C^2 = 1 with concurrence C = 2N
    assert run.visibility**2 + (2 * run.negativity) ** 2 <= 1 + 1e-9
    assert abs(run.visibility**2 + (2 * run.negativity) ** 2 - 1) < 1e-9
    assert abs(run.p_plus - (0.5 + run.rho_A[0, 1].real)) < 1e-15


def test_quantum_field_model_cannot_signal():
    p = admissible()
    a, b = field_model_alice_states(p)
    assert np.allclose(a, b, atol=1e-12)
    assert field_model_signal(p) < 1e-12


def test_geometry_and_scale_warnings():
    with pytest.raises(InvalidGeometry):
        ProtocolParams(1.0, 0.1, 1.0, 0.4, 1.0, 1.0)
    with pytest.raises(InvalidGeometry):
        ProtocolParams(1.0, 0.0, 0.1, 1.0, 1.0, 1.0)
    with pytest.warns(ScaleWarning):
        ProtocolParams(1.0, 0.1, 0.5, 1.0, 1.0, 1.0)
    with pytest.warns(ScaleWarning):
        ProtocolParams(1.0, 2.0, 0.01, 1.0, 1.0, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        admissible()


def test_sweep_round_trip_through_csv():
    text = "m_A,m_B,d,L,T_A,T_B\n0.001,5e-10,0.01,1.0,1e-9,1e-9\n0.001,5e-10,0.01,1.0,1e-6,1e-6\n"
    params = read_sweep(text)
    rows = sweep(params)
    out = sweep_csv(rows)
    lines = out.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 3
    assert lines[1].split(",")[-1] == "True" and lines[2].split(",")[-1] == "False"
    # floats use the shortest round-trip form
    assert float(lines[1].split(",")[6]) == rows[0]["visibility"]
