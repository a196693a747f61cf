"""Random circuits with a classical field never entangle two qubits."""
from gptm.scenarios import verify_no_go

report = verify_no_go(200, g_size=(2, 4), rounds=(1, 3), seed=1)
print(f"trials          {report.trials}")
print(f"max negativity  {report.max_negativity:.3e}")
print(f"non-separable   {report.lp_failures}")
print(f"verdict         {report.verdict}")
print(f"settings        {report.config}")
