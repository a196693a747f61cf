"""JSON documents for systems, states, maps, circuits, certificates and reports.

Field names follow ``schema.json`` shipped next to this module.  Floats are
written with Python's shortest round-trip representation, so reading a
document back reproduces every double exactly.  Complex matrices (density
matrices, Kraus operators) are stored row-major with real and imaginary parts
interleaved: ``[re00, im00, re01, im01, ...]`` per row.
"""
from __future__ import annotations

import dataclasses
import enum
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .circuits import MediatedCircuit, ProductMapTerm
from .composition import compose
from .core import (
    DiscardBehaviour,
    EffectVector,
    Kind,
    StateVector,
    SystemType,
    TransformationMatrix,
    ValidationReport,
    density_from_coeffs,
    make_custom,
)
from .classical import make_classical
from .errors import GPTError
from .quantum import cptp_to_transformation, density_to_state, make_quantum
from .scenarios import ConditionProfile, Demo, NoGoReport, TrialResult
from .separability import SeparabilityCertificate, Witness


class FormatError(GPTError, ValueError):
    """A JSON document does not describe a known object."""


def schema() -> dict:
    return json.loads(resources.files("gptm").joinpath("schema.json").read_text())


# ---------------------------------------------------------------------------
# encoding


def interleave(m) -> list[list[float]]:
    m = np.asarray(m, dtype=complex)
    out = np.empty((m.shape[0], 2 * m.shape[1]))
    out[:, 0::2], out[:, 1::2] = m.real, m.imag
    return out.tolist()


def deinterleave(rows) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 2 or a.shape[1] % 2:
        raise FormatError("interleaved matrix rows need an even number of entries")
    return a[:, 0::2] + 1j * a[:, 1::2]


def system_to_json(s: SystemType) -> dict:
    if s.kind is Kind.CLASSICAL:
        return {"kind": "classical", "dim": s.dim, "n": s.n}
    if s.kind is Kind.QUANTUM:
        return {"kind": "quantum", "dim": s.dim, "d": s.d}
    if s.kind is Kind.COMPOSITE:
        return {"kind": "composite", "dim": s.dim, "left": system_to_json(s.left), "right": system_to_json(s.right)}
    return {
        "kind": "custom",
        "dim": s.dim,
        "extreme_states": np.asarray(s.extreme_states).tolist(),
        "extremal_effects": np.asarray(s.extremal_effects).tolist(),
        "unit": s.unit.tolist(),
    }


def _vector(kind: str, v) -> dict:
    d = {"type": kind, "system": system_to_json(v.system), "dim": v.system.dim, "coeffs": v.coeffs.tolist()}
    if kind == "state" and v.system.is_quantum:
        d["density"] = interleave(density_from_coeffs(v.system, v.coeffs))
    return d


def _transformation(t: TransformationMatrix) -> dict:
    return {
        "type": "transformation",
        "input": system_to_json(t.input),
        "output": system_to_json(t.output),
        "matrix": t.matrix.tolist(),
        "discard_behaviour": t.discard_behaviour.value,
    }


def _circuit(c: MediatedCircuit) -> dict:
    return {
        "type": "circuit",
        "A": system_to_json(c.A),
        "B": system_to_json(c.B),
        "G": system_to_json(c.G),
        "initial_field": c.initial_field.coeffs.tolist(),
        "rounds": [{"I_A": ia.matrix.tolist(), "I_B": ib.matrix.tolist()} for ia, ib in c.rounds],
        "final_field_effect": None if c.final_field_effect is None else c.final_field_effect.coeffs.tolist(),
    }


def to_jsonable(obj):
    """Plain JSON-compatible structure for any toolkit object."""
    if isinstance(obj, SystemType):
        return system_to_json(obj)
    if isinstance(obj, StateVector):
        return _vector("state", obj)
    if isinstance(obj, EffectVector):
        return _vector("effect", obj)
    if isinstance(obj, TransformationMatrix):
        return _transformation(obj)
    if isinstance(obj, MediatedCircuit):
        return _circuit(obj)
    if isinstance(obj, ProductMapTerm):
        return {"label": list(obj.label), "map_A": obj.map_A.matrix.tolist(), "map_B": obj.map_B.matrix.tolist()}
    if isinstance(obj, ValidationReport):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, SeparabilityCertificate):
        return {
            "verdict": obj.verdict.value,
            "method": obj.method,
            "decomposition": None
            if obj.decomposition is None
            else [{"weight": w, "A": a.coeffs.tolist(), "B": b.coeffs.tolist()} for w, a, b in obj.decomposition],
            "witness": to_jsonable(obj.witness),
            "min_pt_eigenvalue": to_jsonable(obj.min_pt_eigenvalue),
            "residual": to_jsonable(obj.residual),
            "info": to_jsonable(obj.info),
        }
    if isinstance(obj, Witness):
        return {
            "coeffs": obj.coeffs.tolist(),
            "dictionary_max": obj.dictionary_max,
            "value": obj.value,
            "certified": obj.certified,
        }
    if isinstance(obj, TrialResult):
        return {
            "index": obj.index,
            "g_size": obj.g_size,
            "rounds": obj.rounds,
            "negativity": obj.negativity,
            "verdict": obj.verdict,
            "circuit": _circuit(obj.circuit),
            "input": _vector("state", obj.input_state),
        }
    if isinstance(obj, NoGoReport):
        return {
            "trials": obj.trials,
            "config": to_jsonable(obj.config),
            "max_negativity": obj.max_negativity,
            "lp_failures": obj.lp_failures,
            "verdict": obj.verdict,
            "worst_case": to_jsonable(obj.worst_case),
        }
    if isinstance(obj, ConditionProfile):
        return {
            "model": obj.model.value,
            "condition1": obj.condition1,
            "condition2": obj.condition2,
            "condition3": obj.condition3,
            "symbols": list(obj.symbols()),
            "demo": to_jsonable(obj.demo),
            "demo_matches": obj.matches_demo(),
        }
    if isinstance(obj, Demo):
        return {
            "name": obj.name,
            "negativity": obj.negativity,
            "mediated": obj.mediated,
            "classical_field": obj.classical_field,
            "entangles": obj.entangles,
            "detail": to_jsonable(obj.detail),
        }
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return interleave(obj) if obj.ndim == 2 else to_jsonable(np.stack([obj.real, obj.imag], -1))
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if obj is None or isinstance(obj, str):
        return obj
    raise FormatError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# decoding


def system_from_json(d: dict) -> SystemType:
    kind = d.get("kind")
    if kind == "classical":
        return make_classical(int(d["n"] if "n" in d else d["dim"]))
    if kind == "quantum":
        return make_quantum(int(d["d"]))
    if kind == "composite":
        return compose(system_from_json(d["left"]), system_from_json(d["right"]))
    if kind == "custom":
        return make_custom(d["extreme_states"], d.get("extremal_effects"), d.get("unit"))
    raise FormatError(f"unknown system kind {kind!r}")


def _state(system: SystemType, d) -> StateVector:
    if isinstance(d, dict):
        if "density" in d and "coeffs" not in d:
            return density_to_state(deinterleave(d["density"]), system, check=False)
        d = d["coeffs"]
    return StateVector(system, d)


def _matrix(input: SystemType, output: SystemType, entry, base: Path | None) -> TransformationMatrix:
    if isinstance(entry, str):
        path = Path(entry) if base is None else base / entry
        entry = json.loads(path.read_text())
    if isinstance(entry, dict):
        if "matrix" in entry:
            behaviour = DiscardBehaviour(entry.get("discard_behaviour", "preserving"))
            return TransformationMatrix(input, output, entry["matrix"], behaviour)
        if "kraus" in entry:
            kraus = [deinterleave(k) for k in entry["kraus"]]
            return cptp_to_transformation(kraus=kraus, input=input, output=output)
        if "unitary" in entry:
            return cptp_to_transformation(kraus=[deinterleave(entry["unitary"])], input=input, output=output)
        raise FormatError("map needs one of matrix, kraus, unitary")
    return TransformationMatrix(input, output, entry)


def circuit_from_json(d: dict, base: Path | None = None) -> MediatedCircuit:
    a, b, g = (system_from_json(d[k]) for k in ("A", "B", "G"))
    ag, bg = compose(a, g), compose(b, g)
    rounds = [(_matrix(ag, ag, r["I_A"], base), _matrix(bg, bg, r["I_B"], base)) for r in d.get("rounds", [])]
    eff = d.get("final_field_effect")
    return MediatedCircuit(
        a, b, g, _state(g, d["initial_field"]), rounds, None if eff is None else EffectVector(g, eff)
    )


def from_jsonable(d: dict, base: Path | None = None):
    """Inverse of :func:`to_jsonable` for systems, states, effects, maps and circuits."""
    kind = d.get("type")
    if kind is None and "kind" in d:
        return system_from_json(d)
    if kind == "state":
        return _state(system_from_json(d["system"]), d)
    if kind == "effect":
        return EffectVector(system_from_json(d["system"]), d["coeffs"])
    if kind == "transformation":
        return _matrix(system_from_json(d["input"]), system_from_json(d["output"]), d, base)
    if kind == "circuit":
        return circuit_from_json(d, base)
    raise FormatError(f"unknown document type {kind!r}")


def load(path) -> object:
    path = Path(path)
    return from_jsonable(json.loads(path.read_text()), path.parent)
