"""Each model that reports gravitational entanglement drops one of the three conditions."""
from gptm.scenarios import Model, classify_model, incompatibility_holds

print(f"{'model':<16} entangles  mediated  classical  demo negativity")
for model in Model:
    p = classify_model(model)
    s = p.symbols()
    print(f"{model.value:<16} {s[0]:^9}  {s[1]:^8}  {s[2]:^9}  {p.demo.negativity:.3e}")
print(f"\nno demo entangles through a mediated classical field: {incompatibility_holds()}")
