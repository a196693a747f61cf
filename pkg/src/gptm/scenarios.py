"""Executable scenarios around the mediator no-go theorem.

* :func:`verify_no_go` samples random mediated circuits with a classical
  field and certifies that their outputs stay separable.
* :func:`bmv_protocol` is the two-mass interferometer realised as a mediated
  circuit with a *quantum* field, which does entangle the masses.
* :func:`collapse_channel` dephases the branch basis; composed into the
  interferometer it suppresses the entanglement.
* :func:`classify_model` maps each class of gravity model onto the three
  conditions of the theorem, with a runnable demonstration.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .circuits import MediatedCircuit, apply_circuit, build_nonmediated_circuit
from .classical import delta_state, distribution, make_classical
from .composition import compose, product_map, product_state
from .config import CODATA, PhysicalConstants, cone_tol
from .core import StateVector, SystemType, TransformationMatrix, identity_map
from .errors import InvalidGeometry
from .quantum import cptp_to_transformation, make_quantum, negativity, pure_state, unitary_channel
from .rng import haar_isometry, haar_pure_state, make_rng, random_stochastic
from .separability import Verdict, is_separable

# ---------------------------------------------------------------------------
# random classically mediated circuits


def _kraus_matrix(system: SystemType, k: np.ndarray) -> np.ndarray:
    """GPT matrix of ``rho -> K rho K^dagger`` in the Gell-Mann coordinates."""
    b = system.basis
    images = np.einsum("ab,jbc,dc->jad", k, b, k.conj())
    return np.einsum("iab,jba->ij", b, images).real


def _random_instrument(system: SystemType, outcomes: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Branch matrices of a random instrument whose sum is discard-preserving."""
    if system.is_quantum:
        v = haar_isometry(rng, system.d, system.d * outcomes)
        return [_kraus_matrix(system, v[k * system.d : (k + 1) * system.d]) for k in range(outcomes)]
    n = system.n
    s = random_stochastic(rng, n * outcomes, n)
    return [s[k * n : (k + 1) * n] for k in range(outcomes)]


def random_controlled_interaction(
    matter: SystemType, field_sys: SystemType, rng: np.random.Generator, outcomes: int = 2
) -> TransformationMatrix:
    """A random preserving map on ``matter (x) G`` with classical ``G``.

    For each field value ``g`` an independent random instrument acts on the
    matter; its outcome ``k`` then updates the field through a column
    stochastic matrix ``S_k``.  The ``(g', g)`` block is
    ``sum_k S_k[g', g] Phi_{k, g}``, so the field stays classical.
    """
    n = field_sys.n
    dm = matter.dim
    branches = [_random_instrument(matter, outcomes, rng) for _ in range(n)]
    updates = [random_stochastic(rng, n, n) for _ in range(outcomes)]
    m = np.zeros((dm, n, dm, n))
    for g in range(n):
        for k in range(outcomes):
            m[:, :, :, g] += np.einsum("h,ac->ahc", updates[k][:, g], branches[g][k])
    ag = compose(matter, field_sys)
    return TransformationMatrix(ag, ag, m.reshape(dm * n, dm * n))


def _system(kind: str, dim: int) -> SystemType:
    return make_quantum(dim) if kind == "quantum" else make_classical(dim)


def random_product_input(a: SystemType, b: SystemType, rng: np.random.Generator) -> StateVector:
    def one(s):
        if s.is_quantum:
            return pure_state(haar_pure_state(rng, s.d), s)
        return distribution(s, rng.dirichlet(np.ones(s.n)))

    return product_state(one(a), one(b))


def random_mediated_circuit(
    a: SystemType, b: SystemType, g_size: int, rounds: int, rng: np.random.Generator
) -> MediatedCircuit:
    g = make_classical(g_size)
    init = distribution(g, rng.dirichlet(np.ones(g_size)))
    rs = [
        (random_controlled_interaction(a, g, rng), random_controlled_interaction(b, g, rng))
        for _ in range(rounds)
    ]
    return MediatedCircuit(a, b, g, init, rs)


def _draw(choice, rng: np.random.Generator) -> int:
    if isinstance(choice, int):
        return choice
    lo, hi = choice
    return int(rng.integers(lo, hi + 1))


@dataclass(frozen=True)
class TrialResult:
    index: int
    g_size: int
    rounds: int
    negativity: float
    verdict: str
    circuit: MediatedCircuit = field(repr=False)
    input_state: StateVector = field(repr=False)


@dataclass(frozen=True)
class NoGoReport:
    trials: int
    config: dict
    max_negativity: float
    lp_failures: int
    verdict: str
    worst_case: TrialResult | None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"


def _trial(index, seed, a, b, g_size, rounds, tol) -> TrialResult:
    rng = make_rng(seed, index)
    g = _draw(g_size, rng)
    r = _draw(rounds, rng)
    c = random_mediated_circuit(a, b, g, r, rng)
    x = random_product_input(a, b, rng)
    out = apply_circuit(c, x)
    neg = negativity(out) if (a.is_quantum and b.is_quantum) else 0.0
    cert = is_separable(out, tol=tol, seed=seed)
    return TrialResult(index, g, r, float(neg), cert.verdict.value, c, x)


def verify_no_go(
    trials: int,
    dim_A: int = 2,
    dim_B: int = 2,
    g_size=(2, 4),
    rounds=(1, 3),
    seed: int = 0,
    kind_A: str = "quantum",
    kind_B: str = "quantum",
    tol: float | None = None,
    threads: int = 1,
) -> NoGoReport:
    """Sample ``trials`` random mediated circuits with a classical field and certify their outputs.

    ``g_size`` and ``rounds`` take an int or an inclusive ``(lo, hi)`` range
    drawn per trial.  Each trial uses its own generator ``make_rng(seed,
    trial)``, so reports do not depend on ``threads``.
    """
    if trials < 0:
        raise ValueError("trials must be non-negative")
    t_ = cone_tol(tol)
    a, b = _system(kind_A, dim_A), _system(kind_B, dim_B)
    args = (seed, a, b, g_size, rounds, t_)
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda i: _trial(i, *args), range(trials)))
    else:
        results = [_trial(i, *args) for i in range(trials)]
    max_neg = max((r.negativity for r in results), default=0.0)
    failures = sum(r.verdict != Verdict.SEPARABLE.value for r in results)
    worst = max(results, key=lambda r: r.negativity, default=None)
    config = {
        "trials": trials,
        "A": {"kind": kind_A, "dim": dim_A},
        "B": {"kind": kind_B, "dim": dim_B},
        "g_size": list(g_size) if not isinstance(g_size, int) else g_size,
        "rounds": list(rounds) if not isinstance(rounds, int) else rounds,
        "seed": seed,
        "tol": t_,
    }
    verdict = "pass" if max_neg <= t_ and failures == 0 else "fail"
    return NoGoReport(trials, config, max_neg, failures, verdict, worst)


# ---------------------------------------------------------------------------
# quantum-mediated interferometer


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def branch_distances(d: float, L: float) -> np.ndarray:
    """``r[i, j]`` between A's branch ``i`` and B's branch ``j`` (0 = left, 1 = right)."""
    return np.array([[L, L + d], [L - d, L]])


def bmv_phases(m_A, m_B, d, L, T, constants: PhysicalConstants = CODATA) -> np.ndarray:
    """Branch phases ``G m_A m_B T / (hbar r_ij)`` for the collinear geometry."""
    if min(m_A, m_B, d, L) <= 0 or T < 0:
        raise InvalidGeometry("masses and distances must be positive and T non-negative")
    if L <= d:
        raise InvalidGeometry(f"L={L} must exceed d={d} so every branch distance is positive")
    return constants.G * m_A * m_B * T / (constants.hbar * branch_distances(d, L))


def phase_gap(phases: np.ndarray) -> float:
    return float(phases[0, 0] + phases[1, 1] - phases[0, 1] - phases[1, 0])


def bmv_time_for_gap(target, m_A, m_B, d, L, constants: PhysicalConstants = CODATA) -> float:
    """Interaction time after which ``|phase_gap|`` equals ``target``."""
    per_second = abs(phase_gap(bmv_phases(m_A, m_B, d, L, 1.0, constants)))
    return float(target / per_second)


def collapse_channel(lam: float, d: int = 2, system: SystemType | None = None) -> TransformationMatrix:
    """Dephasing in the branch basis: off-diagonal entries are multiplied by ``exp(-lam)``.

    Kraus operators ``sqrt(q) I`` and ``sqrt(1 - q) |i><i|`` with ``q = exp(-lam)``.
    ``lam = inf`` gives complete dephasing.
    """
    if not lam >= 0:
        raise ValueError("collapse strength must be non-negative")
    system = system or make_quantum(d)
    q = math.exp(-lam) if math.isfinite(lam) else 0.0
    kraus = [math.sqrt(q) * np.eye(system.d)]
    for i in range(system.d):
        p = np.zeros((system.d, system.d))
        p[i, i] = 1.0
        kraus.append(math.sqrt(1 - q) * p)
    return cptp_to_transformation(kraus=kraus, input=system, output=system)


def _controlled_phase(phases: np.ndarray) -> np.ndarray:
    """Diagonal unitary on ``B (x) G``: ``|b, g> -> exp(i phases[g, b]) |b, g>``."""
    return np.diag(np.exp(1j * phases.T.reshape(-1)))


def bmv_mediated_circuit(phases: np.ndarray, collapse: float = 0.0) -> MediatedCircuit:
    """Interferometer as a strict mediated circuit with a qubit field.

    Round 1: the field copies A's branch (CNOT), then B picks up the phase
    ``phases[g, b]``.  Round 2: the copy is undone and B idles.  With
    ``collapse > 0`` every interaction is preceded by branch dephasing of the
    mass it touches.
    """
    q = make_quantum(2)
    qq = compose(q, q)
    copy = unitary_channel(CNOT, qq)
    kick = unitary_channel(_controlled_phase(np.asarray(phases, dtype=float)), qq)
    idle = identity_map(qq)
    rounds = [(copy, kick), (copy, idle)]
    if collapse > 0:
        deph = product_map(collapse_channel(collapse, system=q), identity_map(q))
        rounds = [(ia @ deph, ib @ deph) for ia, ib in rounds]
    return MediatedCircuit(q, q, q, pure_state([1, 0], q), rounds)


class BMVResult(NamedTuple):
    state: StateVector
    negativity: float


def bmv_from_phases(phases, collapse: float = 0.0) -> BMVResult:
    c = bmv_mediated_circuit(np.asarray(phases, dtype=float), collapse)
    out = apply_circuit(c, pure_state(np.kron(PLUS, PLUS), c.AB))
    return BMVResult(out, negativity(out))


def bmv_from_phase_gap(gap: float, collapse: float = 0.0) -> BMVResult:
    """Interferometer with phases ``[[0, 0], [0, gap]]``."""
    return bmv_from_phases(np.array([[0.0, 0.0], [0.0, gap]]), collapse)


def bmv_protocol(
    m_A, m_B, d, L, T, collapse: float = 0.0, constants: PhysicalConstants = CODATA
) -> BMVResult:
    """Final branch-basis state of the two masses and its negativity.

    Both masses start in ``(|L> + |R>)/sqrt(2)``; the Newtonian phases are
    imprinted through the quantum mediator circuit of :func:`bmv_mediated_circuit`.
    """
    return bmv_from_phases(bmv_phases(m_A, m_B, d, L, T, constants), collapse)


def measure_into_field_circuit(phases: np.ndarray, collapse: float = 0.0) -> MediatedCircuit:
    """The same interferometer but with a *classical* field that records A's branch.

    Recording dephases A, so no entanglement can arise.
    """
    q, g = make_quantum(2), make_classical(2)
    qg = compose(q, g)
    # block (g', g) on A: |i><i| . |i><i| when g' = g xor i
    proj = [np.zeros((2, 2)) for _ in range(2)]
    proj[0][0, 0] = proj[1][1, 1] = 1.0
    pm = [_kraus_matrix(q, p) for p in proj]
    m = np.zeros((4, 2, 4, 2))
    for gi in range(2):
        for i in range(2):
            m[:, gi ^ i, :, gi] += pm[i]
    record = TransformationMatrix(qg, qg, m.reshape(8, 8))
    kick = np.zeros((4, 2, 4, 2))
    for gi in range(2):
        u = np.diag(np.exp(1j * np.asarray(phases, dtype=float)[gi]))
        kick[:, gi, :, gi] = _kraus_matrix(q, u)
    kick_t = TransformationMatrix(qg, qg, kick.reshape(8, 8))
    rounds = [(record, kick_t)]
    if collapse > 0:
        deph = product_map(collapse_channel(collapse, system=q), identity_map(g))
        rounds = [(ia @ deph, ib @ deph) for ia, ib in rounds]
    return MediatedCircuit(q, q, g, delta_state(g, 0), rounds)


# ---------------------------------------------------------------------------
# model classification


class Model(str, enum.Enum):
    COLLAPSE_DECOHERENCE = "collapse"
    NON_MEDIATED = "nonmediated"
    NON_CLASSICAL_G = "nonclassical-g"


@dataclass(frozen=True)
class Demo:
    """A runnable configuration and what it measurably does."""

    name: str
    negativity: float
    mediated: bool
    classical_field: bool
    detail: dict = field(default_factory=dict)

    @property
    def entangles(self) -> bool:
        return self.negativity > 1e-4


@dataclass(frozen=True)
class ConditionProfile:
    """Which of the three conditions a model meets.

    ``condition1``: the field can entangle the masses; ``condition2``: the
    interaction is mediated; ``condition3``: the field is classical.
    """

    model: Model
    condition1: bool
    condition2: bool
    condition3: bool
    demo: Demo

    def symbols(self) -> tuple[str, str, str]:
        return tuple("✓" if c else "✗" for c in (self.condition1, self.condition2, self.condition3))

    def matches_demo(self) -> bool:
        """Every violated condition is visible in the demonstration."""
        d = self.demo
        checks = [
            self.condition1 == d.entangles,
            self.condition2 or not d.mediated,
            self.condition3 or not d.classical_field,
        ]
        return all(checks)


def collapse_demo(lam: float = 10.0) -> Demo:
    """Masses collapse before every interaction; the field only sees branch records."""
    gap = np.pi
    phases = np.array([[0.0, 0.0], [0.0, gap]])
    c = measure_into_field_circuit(phases, collapse=lam)
    out = apply_circuit(c, pure_state(np.kron(PLUS, PLUS), c.AB))
    quantum_field = bmv_from_phases(phases, collapse=lam).negativity
    return Demo(
        "collapse",
        negativity(out),
        True,
        c.G.is_classical,
        {"lambda": lam, "quantum_field_negativity": quantum_field},
    )


def nonmediated_demo() -> Demo:
    """A classical control switches a global controlled-phase between A and B."""
    q = make_quantum(2)
    qq = compose(q, q)
    cz = unitary_channel(np.diag([1, 1, 1, -1]).astype(complex), qq)
    g = make_classical(2)
    t = build_nonmediated_circuit(delta_state(g, 0), [cz, identity_map(qq)])
    out = t(pure_state(np.kron(PLUS, PLUS), qq))
    return Demo("nonmediated", negativity(out), False, True)


def nonclassical_demo() -> Demo:
    res = bmv_from_phase_gap(np.pi)
    return Demo("nonclassical-g", res.negativity, True, False, {"phase_gap": np.pi})


_TABLE = {
    Model.COLLAPSE_DECOHERENCE: ((False, True, True), collapse_demo),
    Model.NON_MEDIATED: ((True, False, True), nonmediated_demo),
    Model.NON_CLASSICAL_G: ((True, True, False), nonclassical_demo),
}


def classify_model(model) -> ConditionProfile:
    model = Model(model)
    conds, demo = _TABLE[model]
    return ConditionProfile(model, *conds, demo())


def scenario_demos() -> list[Demo]:
    """Every demonstration the toolkit ships, for the incompatibility meta-test."""
    return [collapse_demo(), nonmediated_demo(), nonclassical_demo()]


def incompatibility_holds(demos=None) -> bool:
    """No demo entangles through a mediated circuit with a classical field."""
    demos = scenario_demos() if demos is None else demos
    return not any(d.entangles and d.mediated and d.classical_field for d in demos)


__all__ = [
    "BMVResult",
    "ConditionProfile",
    "Demo",
    "Model",
    "NoGoReport",
    "TrialResult",
    "bmv_from_phase_gap",
    "bmv_from_phases",
    "bmv_mediated_circuit",
    "bmv_phases",
    "bmv_protocol",
    "bmv_time_for_gap",
    "branch_distances",
    "classify_model",
    "collapse_channel",
    "incompatibility_holds",
    "measure_into_field_circuit",
    "phase_gap",
    "random_controlled_interaction",
    "random_mediated_circuit",
    "random_product_input",
    "scenario_demos",
    "verify_no_go",
]
