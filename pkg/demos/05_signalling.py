"""Without a field state, Bob could signal to Alice faster than light."""
import math

from gptm.config import CODATA
from gptm.signalling import ProtocolParams, assess_superluminality, field_model_signal

m_a, d, L, t = 1e-3, 0.01, 1.0, 1e-9
m_b = math.pi * CODATA.hbar * (L**2 - d**2 / 4) / (CODATA.G * m_a * t * d)
p = ProtocolParams(m_a, m_b, d, L, t, t)
r = assess_superluminality(p)
print(f"m_B tuned to {m_b:.4e} kg for a phase difference of {r.phase_difference:.6f}")
print(f"visibility without release {r.visibility_no_release:.6f}, with release {r.visibility_release:.2e}")
print(f"Alice's trace distance {r.trace_distance_alice:.12f}")
print(f"T_A + T_B = {p.T_A + p.T_B:.1e} s < L/c = {r.light_crossing_time:.3e} s -> superluminal: {r.superluminal}")
print(f"with a qubit field Alice sees no change: distance {field_model_signal(p):.1e}")
