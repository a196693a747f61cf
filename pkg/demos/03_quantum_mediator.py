"""A qubit mediator does entangle the masses; dephasing the masses undoes it."""
import numpy as np

from gptm.scenarios import bmv_from_phase_gap, bmv_protocol, bmv_time_for_gap

print("phase gap   negativity")
for gap in np.linspace(0, np.pi, 5):
    print(f"{gap:9.4f}   {bmv_from_phase_gap(gap).negativity:.6f}")

print("\ncollapse strength vs negativity at gap pi")
for lam in (0.0, 0.01, 0.1, 1.0, 10.0):
    print(f"  lambda={lam:<5}  {bmv_from_phase_gap(np.pi, lam).negativity:.3e}")

m, d, L = 1e-14, 250e-6, 450e-6
t = bmv_time_for_gap(np.pi, m, m, d, L)
print(f"\n10 pg masses, d=250 um, L=450 um: gap pi after {t:.3f} s, negativity {bmv_protocol(m, m, d, L, t).negativity:.6f}")
