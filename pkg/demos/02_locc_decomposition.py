"""Split a classical-mediator circuit into a sum of local product maps."""
import numpy as np

from gptm import make_classical, make_quantum
from gptm.circuits import circuit_matrix, locc_decompose, reconstruct_channel
from gptm.rng import make_rng
from gptm.scenarios import random_mediated_circuit

rng = make_rng(3)
circuit = random_mediated_circuit(make_quantum(2), make_classical(3), 3, 2, rng)
terms = locc_decompose(circuit)
kept = locc_decompose(circuit, prune=True)
err = np.linalg.norm(reconstruct_channel(terms).matrix - circuit_matrix(circuit).matrix)
print(f"field size 3, 2 rounds -> {len(terms)} product terms ({len(kept)} after pruning)")
print(f"reconstruction error (Frobenius) {err:.2e}")
label = terms[0].label
print(f"first term is labelled by the field trajectory {label}")
