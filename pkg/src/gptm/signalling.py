"""Signalling argument for a field without a state.

Alice holds mass A in a superposition of two positions separated by ``d``;
Bob's mass B sits a distance ``L`` away.  If Bob releases his trap, B moves
differently depending on A's branch and the masses become entangled.  If the
field had no state of its own, that entanglement would change Alice's local
interference pattern faster than light could carry the news.

Dynamics model: only branch-dependent phases matter.  Bob's two conditional
states are ``|B_L> = |0>`` and ``|B_R> = cos(theta)|0> + sin(theta)|1>`` with
``theta = dphi * t / (2 T_B)``, so at ``t = T_B`` their overlap is
``|cos(dphi / 2)|``.  ``dphi`` is the Newtonian phase difference accrued by B
from A's branches at distances ``L -/+ d/2``.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .circuits import MediatedCircuit, apply_circuit
from .composition import compose, reduced_state
from .config import CODATA, PhysicalConstants
from .core import identity_map
from .errors import InvalidGeometry
from .quantum import make_quantum, negativity, pure_state, state_to_density, trace_distance, unitary_channel

DISTINGUISHABLE = 0.25
SWEEP_COLUMNS = ("L", "d", "T_A", "T_B", "m_A", "m_B", "visibility", "trace_distance", "superluminal")


class ScaleWarning(UserWarning):
    """A parameter set outside the regime the protocol assumes (d << L, m_B << m_A)."""


@dataclass(frozen=True)
class ProtocolParams:
    m_A: float
    m_B: float
    d: float
    L: float
    T_A: float
    T_B: float

    def __post_init__(self):
        vals = asdict(self)
        bad = [k for k, v in vals.items() if not (v > 0)]
        if bad:
            raise InvalidGeometry(f"parameters must be positive: {bad}")
        if self.L <= self.d / 2:
            raise InvalidGeometry("Bob must sit outside Alice's superposition (L > d/2)")
        if self.d >= self.L / 10:
            warnings.warn(f"d={self.d} is not small against L={self.L}", ScaleWarning, stacklevel=3)
        if self.m_B >= self.m_A:
            warnings.warn("m_B is not small against m_A", ScaleWarning, stacklevel=3)


def phase_difference(p: ProtocolParams, constants: PhysicalConstants = CODATA) -> float:
    """``G m_A m_B T_B (1/(L - d/2) - 1/(L + d/2)) / hbar``."""
    return constants.G * p.m_A * p.m_B * p.T_B * p.d / (constants.hbar * (p.L**2 - p.d**2 / 4))


def bob_branches(theta: float) -> tuple[np.ndarray, np.ndarray]:
    return np.array([1.0, 0.0], dtype=complex), np.array([math.cos(theta), math.sin(theta)], dtype=complex)


@dataclass(frozen=True)
class ProtocolRun:
    state: np.ndarray  # joint pure state on A (x) B, branch basis
    rho_A: np.ndarray
    visibility: float
    p_plus: float
    negativity: float


def run_protocol(
    p: ProtocolParams,
    bob_releases: bool,
    t: float | None = None,
    ideal: bool = False,
    constants: PhysicalConstants = CODATA,
) -> ProtocolRun:
    """Joint state after Bob's choice, plus Alice's local statistics.

    ``t`` defaults to ``T_B``; ``ideal`` forces orthogonal Bob branches (the
    maximally entangled endpoint).
    """
    if bob_releases:
        t = p.T_B if t is None else t
        theta = math.pi / 2 if ideal else phase_difference(p, constants) * t / (2 * p.T_B)
    else:
        theta = 0.0
    b_l, b_r = bob_branches(theta)
    if ideal and bob_releases:
        b_r = np.array([0.0, 1.0], dtype=complex)
    psi = (np.kron([1, 0], b_l) + np.kron([0, 1], b_r)) / math.sqrt(2)
    rho = np.outer(psi, psi.conj())
    # rho_A[i, j] = <B_j|B_i> / 2, kept exact rather than traced numerically
    overlap = complex(np.vdot(b_r, b_l))
    rho_a = 0.5 * np.array([[1.0, overlap], [overlap.conjugate(), 1.0]])
    vis = abs(overlap)
    p_plus = 0.5 + overlap.real / 2
    return ProtocolRun(psi, rho_a, vis, p_plus, negativity(rho, (2, 2)))


@dataclass(frozen=True)
class SignallingReport:
    visibility_no_release: float
    visibility_release: float
    trace_distance_alice: float
    entangling_time_ok: bool
    superluminal: bool
    light_crossing_time: float
    phase_difference: float

    def row(self, p: ProtocolParams) -> dict:
        return {
            "L": p.L,
            "d": p.d,
            "T_A": p.T_A,
            "T_B": p.T_B,
            "m_A": p.m_A,
            "m_B": p.m_B,
            "visibility": self.visibility_release,
            "trace_distance": self.trace_distance_alice,
            "superluminal": self.superluminal,
        }


def assess_superluminality(
    p: ProtocolParams,
    constants: PhysicalConstants = CODATA,
    threshold: float = DISTINGUISHABLE,
    ideal: bool = False,
) -> SignallingReport:
    """Could Alice learn Bob's choice before light crosses ``L``, if the field had no state?

    ``superluminal`` needs ``T_A + T_B < L / c`` and a trace distance between
    Alice's two reduced states above ``threshold``.  ``entangling_time_ok``
    records that Bob's release fits inside Alice's window (``T_B <= T_A``).
    """
    off = run_protocol(p, False, constants=constants)
    on = run_protocol(p, True, ideal=ideal, constants=constants)
    dist = trace_distance(off.rho_A, on.rho_A)
    crossing = p.L / constants.c if math.isfinite(constants.c) else 0.0
    fast = p.T_A + p.T_B < crossing
    return SignallingReport(
        off.visibility,
        on.visibility,
        dist,
        p.T_B <= p.T_A,
        bool(fast and dist > threshold),
        crossing,
        phase_difference(p, constants),
    )


def sweep(params, constants: PhysicalConstants = CODATA, threshold: float = DISTINGUISHABLE) -> list[dict]:
    return [assess_superluminality(p, constants, threshold).row(p) for p in params]


def read_sweep(text: str) -> list[ProtocolParams]:
    """Parameter sets from CSV text with a header naming the six parameters."""
    rows = csv.DictReader(io.StringIO(text))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ScaleWarning)
        return [ProtocolParams(**{k: float(r[k]) for k in ("m_A", "m_B", "d", "L", "T_A", "T_B")}) for r in rows]


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in r.items()})
    return buf.getvalue()


# ---------------------------------------------------------------------------
# the same story with a quantum field


def field_model_circuit(theta: float) -> MediatedCircuit:
    """Field copies A's branch; Bob then rotates B by ``theta`` conditioned on the field.

    ``theta = 0`` is "Bob keeps the trap closed".
    """
    q = make_quantum(2)
    qq = compose(q, q)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    c, s = math.cos(theta), math.sin(theta)
    rot = np.array([[c, -s], [s, c]], dtype=complex)
    # B (x) G ordering: rotate B when the field reads 1
    u = np.zeros((4, 4), dtype=complex)
    u[np.ix_([0, 2], [0, 2])] = np.eye(2)
    u[np.ix_([1, 3], [1, 3])] = rot
    rounds = [(unitary_channel(cnot, qq), unitary_channel(u, qq) if theta else identity_map(qq))]
    return MediatedCircuit(q, q, q, pure_state([1, 0], q), rounds)


def field_model_alice_states(p: ProtocolParams, constants: PhysicalConstants = CODATA):
    """Alice's reduced state with and without Bob's release when the field is a qubit."""
    out = []
    for release in (False, True):
        theta = phase_difference(p, constants) / 2 if release else 0.0
        c = field_model_circuit(theta)
        x = pure_state(np.kron([1, 1], [1, 0]) / math.sqrt(2), c.AB)
        out.append(state_to_density(reduced_state(apply_circuit(c, x), "left")))
    return tuple(out)


def field_model_signal(p: ProtocolParams, constants: PhysicalConstants = CODATA) -> float:
    """Trace distance between Alice's two reduced states in the quantum-field model (zero)."""
    a, b = field_model_alice_states(p, constants)
    return trace_distance(a, b)
