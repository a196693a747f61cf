"""Finite-dimensional GPT systems, states, effects and transformations.

A system is a real vector space together with a cone of (unnormalised) states,
an interval of effects and a unit effect.  Coordinates are plain ``float64``
numpy arrays; states are column vectors, effects are covectors and the
probability of an effect on a state is their dot product.

Four geometries are supported:

``simplex``
    classical systems and composites of classical systems.
``quantum``
    Hermitian operators in a fixed orthonormal Hermitian basis, and composites
    of quantum systems (product basis).
``split-left`` / ``split-right``
    composites with a classical factor; a state is a list of (unnormalised)
    states of the other factor indexed by the classical outcome.
``hull``
    custom systems, and the minimal tensor product of factors that are neither
    classical nor both quantum.  Membership is decided by linear programming
    over the listed extreme points.
"""
from __future__ import annotations

import enum
import functools
import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .config import algebraic_tol, cone_tol
from .errors import SystemMismatch

LAZY_EFFECTS_ABOVE = 12
QUANTUM_SAMPLE_SEED = 0x5EED


class Kind(str, enum.Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"
    COMPOSITE = "composite"
    CUSTOM = "custom"


class DiscardBehaviour(str, enum.Enum):
    PRESERVING = "preserving"
    NONINCREASING = "nonincreasing"


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


class HypercubeVertices(Sequence):
    """The ``2**n`` vertices of the classical effect hypercube, generated on demand.

    Vertex ``k`` is the indicator vector of the bits of ``k`` (least significant
    bit first).
    """

    def __init__(self, n: int):
        self.n = n

    def __len__(self) -> int:
        return 2**self.n

    def __getitem__(self, k):
        if isinstance(k, slice):
            return [self[i] for i in range(*k.indices(len(self)))]
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        return ((k >> np.arange(self.n)) & 1).astype(float)

    def __repr__(self) -> str:
        return f"HypercubeVertices(n={self.n})"


@dataclass(frozen=True, eq=False)
class SystemType:
    """A GPT system.  Build these with the constructor functions
    (:func:`gptm.make_classical`, :func:`gptm.make_quantum`,
    :func:`gptm.compose`, :func:`make_custom`) rather than directly."""

    kind: Kind
    dim: int
    unit: np.ndarray
    n: int | None = None  # sample-space size of a simplex system
    d: int | None = None  # Hilbert dimension of a quantum system
    left: SystemType | None = None
    right: SystemType | None = None
    basis: np.ndarray | None = field(default=None, repr=False)  # (dim, d, d) Hermitian
    samples: int = 200
    custom_states: np.ndarray | None = field(default=None, repr=False)
    custom_effects: np.ndarray | None = field(default=None, repr=False)

    # -- identity ---------------------------------------------------------
    @functools.cached_property
    def key(self) -> tuple:
        if self.kind is Kind.CLASSICAL:
            return ("classical", self.n)
        if self.kind is Kind.QUANTUM:
            return ("quantum", self.d)
        if self.kind is Kind.COMPOSITE:
            return ("composite", self.left.key, self.right.key)
        return (
            "custom",
            self.dim,
            self.unit.tobytes(),
            self.custom_states.tobytes(),
            None if self.custom_effects is None else self.custom_effects.tobytes(),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, SystemType) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        if self.kind is Kind.CLASSICAL:
            return f"Classical({self.n})"
        if self.kind is Kind.QUANTUM:
            return f"Quantum({self.d})"
        if self.kind is Kind.COMPOSITE:
            return f"({self.left} x {self.right})"
        return f"Custom(dim={self.dim})"

    # -- geometry ---------------------------------------------------------
    @property
    def is_classical(self) -> bool:
        return self.n is not None

    @property
    def is_quantum(self) -> bool:
        return self.basis is not None

    @property
    def geometry(self) -> str:
        if self.is_classical:
            return "simplex"
        if self.is_quantum:
            return "quantum"
        if self.kind is Kind.COMPOSITE:
            if self.left.is_classical:
                return "split-left"
            if self.right.is_classical:
                return "split-right"
        return "hull"

    def classical_split(self):
        """``(n, other, side)`` for a composite with a classical factor, else ``None``."""
        g = self.geometry
        if g == "split-left":
            return self.left.n, self.right, "left"
        if g == "split-right":
            return self.right.n, self.left, "right"
        return None

    def blocks(self, coeffs: np.ndarray) -> np.ndarray:
        """View split coefficients as ``(n, other.dim)`` rows, one per classical outcome."""
        n, other, side = self.classical_split()
        coeffs = np.asarray(coeffs)
        if side == "left":
            return coeffs.reshape(n, other.dim)
        return coeffs.reshape(other.dim, n).T

    # -- generating sets --------------------------------------------------
    @property
    def unit_effect(self) -> EffectVector:
        return EffectVector(self, self.unit)

    @functools.cached_property
    def extreme_states(self) -> np.ndarray:
        """Rows generating the normalised state space by convex hull.

        Exact for simplex and custom systems and their minimal composites.
        For anything containing a quantum factor this is a deterministic sample
        of pure states (``samples`` of them) and only suitable for heuristic
        checks; exact quantum membership goes through eigenvalues.
        """
        if self.is_classical:
            return _frozen(np.eye(self.n))
        if self.kind is Kind.CUSTOM:
            return self.custom_states
        if self.is_quantum:
            from .rng import haar_pure_state, make_rng

            psi = haar_pure_state(make_rng(QUANTUM_SAMPLE_SEED, self.d), self.d, self.samples)
            # Tr(|psi><psi| B_i) = <psi|B_i|psi>
            rows = np.einsum("sa,iab,sb->si", psi.conj(), self.basis, psi).real
            return _frozen(rows)
        a, b = self.left.extreme_states, self.right.extreme_states
        return _frozen(np.einsum("ia,jb->ijab", a, b).reshape(len(a) * len(b), self.dim))

    @functools.cached_property
    def extremal_effects(self):
        """Extremal effects besides zero and unit.

        Classical: the hypercube vertices (a lazy :class:`HypercubeVertices` above
        ``n = 12``).  Quantum: the rank-one projectors onto the sampled pure states.
        """
        if self.is_classical:
            cube = HypercubeVertices(self.n)
            if self.n > LAZY_EFFECTS_ABOVE:
                return cube
            return _frozen(np.array([cube[k] for k in range(len(cube))]))
        if self.kind is Kind.CUSTOM:
            return self.custom_effects
        if self.is_quantum:
            return self.extreme_states
        a, b = self.left.extremal_effects, self.right.extremal_effects
        if a is None or b is None or isinstance(a, HypercubeVertices) or isinstance(b, HypercubeVertices):
            return None
        return _frozen(np.einsum("ia,jb->ijab", a, b).reshape(len(a) * len(b), self.dim))

    # -- membership -------------------------------------------------------
    def state_violation(self, coeffs) -> float:
        """Distance-like measure of how far ``coeffs`` is from the state cone (0 inside)."""
        return _cone_violation(self, np.asarray(coeffs, dtype=float))

    def effect_violation(self, coeffs, upper: bool = True) -> float:
        """How far ``coeffs`` is from the effect interval ``[0, unit]`` (0 inside).

        With ``upper=False`` only positivity on states is checked.
        """
        return _effect_violation(self, np.asarray(coeffs, dtype=float), upper)


def make_custom(extreme_states, extremal_effects=None, unit_effect=None) -> SystemType:
    """A system given by explicit extreme points.

    ``unit_effect`` defaults to the least-squares covector taking value 1 on every
    extreme state.  No facial structure is inferred.
    """
    states = _frozen(np.atleast_2d(extreme_states))
    dim = states.shape[1]
    if unit_effect is None:
        unit_effect, *_ = np.linalg.lstsq(states, np.ones(len(states)), rcond=None)
    effects = None if extremal_effects is None else _frozen(np.atleast_2d(extremal_effects))
    return SystemType(
        kind=Kind.CUSTOM,
        dim=dim,
        unit=_frozen(unit_effect),
        custom_states=states,
        custom_effects=effects,
    )


# ---------------------------------------------------------------------------
# vectors


class _Linear:
    system: SystemType
    coeffs: np.ndarray

    def _combine(self, other, sign):
        if not isinstance(other, type(self)):
            return NotImplemented
        if other.system != self.system:
            raise SystemMismatch(f"{self.system} vs {other.system}")
        return type(self)(self.system, self.coeffs + sign * other.coeffs)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        return type(self)(self.system, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return type(self)(self.system, self.coeffs / float(scalar))


@dataclass(frozen=True, eq=False)
class StateVector(_Linear):
    system: SystemType
    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.shape != (self.system.dim,):
            raise SystemMismatch(f"state of length {c.shape} on a system of dim {self.system.dim}")
        object.__setattr__(self, "coeffs", c)

    @property
    def norm(self) -> float:
        return float(self.system.unit @ self.coeffs)

    def normalized(self) -> StateVector:
        return self / self.norm


@dataclass(frozen=True, eq=False)
class EffectVector(_Linear):
    system: SystemType
    coeffs: np.ndarray

    def __post_init__(self):
        c = _frozen(self.coeffs)
        if c.shape != (self.system.dim,):
            raise SystemMismatch(f"effect of length {c.shape} on a system of dim {self.system.dim}")
        object.__setattr__(self, "coeffs", c)


def evaluate(effect: EffectVector, state: StateVector) -> float:
    """Probability of ``effect`` on ``state``."""
    if effect.system != state.system:
        raise SystemMismatch(f"effect on {effect.system}, state on {state.system}")
    return float(effect.coeffs @ state.coeffs)


def zero_effect(system: SystemType) -> EffectVector:
    return EffectVector(system, np.zeros(system.dim))


# ---------------------------------------------------------------------------
# transformations


@dataclass(frozen=True, eq=False)
class TransformationMatrix:
    input: SystemType
    output: SystemType
    matrix: np.ndarray
    discard_behaviour: DiscardBehaviour = DiscardBehaviour.PRESERVING

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (self.output.dim, self.input.dim):
            raise SystemMismatch(
                f"matrix {m.shape} does not map dim {self.input.dim} -> {self.output.dim}"
            )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "discard_behaviour", DiscardBehaviour(self.discard_behaviour))

    def __call__(self, state: StateVector) -> StateVector:
        if state.system != self.input:
            raise SystemMismatch(f"map on {self.input} applied to state on {state.system}")
        return StateVector(self.output, self.matrix @ state.coeffs)

    def __matmul__(self, other: TransformationMatrix) -> TransformationMatrix:
        """Sequential composition ``self o other`` (``other`` acts first)."""
        if other.output != self.input:
            raise SystemMismatch(f"{other.output} does not feed {self.input}")
        both = self.is_preserving and other.is_preserving
        return TransformationMatrix(
            other.input,
            self.output,
            self.matrix @ other.matrix,
            DiscardBehaviour.PRESERVING if both else DiscardBehaviour.NONINCREASING,
        )

    @property
    def is_preserving(self) -> bool:
        return self.discard_behaviour is DiscardBehaviour.PRESERVING


def identity_map(system: SystemType) -> TransformationMatrix:
    return TransformationMatrix(system, system, np.eye(system.dim))


class LazyBranches(Sequence):
    """Branches produced on demand by ``factory(i)`` for ``0 <= i < length``."""

    def __init__(self, length: int, factory):
        self._length = length
        self._factory = factory

    def __len__(self) -> int:
        return self._length

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[k] for k in range(*i.indices(len(self)))]
        if i < 0:
            i += self._length
        if not 0 <= i < self._length:
            raise IndexError(i)
        return self._factory(i)


@dataclass(frozen=True, eq=False)
class Instrument:
    """A family of discard-nonincreasing branches summing to a preserving map."""

    branches: Sequence[TransformationMatrix]

    def __post_init__(self):
        if not isinstance(self.branches, LazyBranches):
            object.__setattr__(self, "branches", tuple(self.branches))

    @property
    def input(self) -> SystemType:
        return self.branches[0].input

    @property
    def output(self) -> SystemType:
        return self.branches[0].output

    def __len__(self) -> int:
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches[i] for i in range(len(self.branches)))

    def total(self) -> TransformationMatrix:
        acc = np.zeros((self.output.dim, self.input.dim))
        for b in self:
            if b.input != self.input or b.output != self.output:
                raise SystemMismatch("instrument branches act on different systems")
            acc += b.matrix
        return TransformationMatrix(self.input, self.output, acc)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    violation: float
    tol: float


@dataclass(frozen=True)
class ValidationReport:
    subject: str
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def worst_violation(self) -> float:
        return max((c.violation for c in self.checks), default=0.0)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "violation": c.violation, "tol": c.tol}
                for c in self.checks
            ],
        }


def _check(name: str, violation: float, tol: float) -> Check:
    violation = float(max(violation, 0.0))
    return Check(name, bool(np.isfinite(violation) and violation <= tol), violation, tol)


def validate_state(state: StateVector, tol: float | None = None, normalized: bool = False) -> ValidationReport:
    """Cone membership and ``norm <= 1`` (``norm == 1`` if ``normalized``)."""
    t = cone_tol(tol)
    c = state.coeffs
    checks = [_check("finite", 0.0 if np.all(np.isfinite(c)) else np.inf, 0.0)]
    checks.append(_check("cone", state.system.state_violation(c), t))
    norm = state.norm
    checks.append(_check("norm", abs(norm - 1.0) if normalized else norm - 1.0, t))
    return ValidationReport(f"state on {state.system}", tuple(checks))


def validate_effect(effect: EffectVector, tol: float | None = None) -> ValidationReport:
    t = cone_tol(tol)
    checks = [
        _check("finite", 0.0 if np.all(np.isfinite(effect.coeffs)) else np.inf, 0.0),
        _check("range", effect.system.effect_violation(effect.coeffs), t),
    ]
    return ValidationReport(f"effect on {effect.system}", tuple(checks))


def validate_transformation(t: TransformationMatrix, tol: float | None = None) -> ValidationReport:
    """Positivity (complete positivity between quantum systems) and discard behaviour."""
    ctol = cone_tol(tol)
    atol = algebraic_tol() * max(1.0, float(np.abs(t.matrix).max(initial=0.0)))
    checks = [_check("finite", 0.0 if np.all(np.isfinite(t.matrix)) else np.inf, 0.0)]
    checks.append(_check("positivity", map_positivity_violation(t.input, t.output, t.matrix), ctol))
    pulled_back = t.matrix.T @ t.output.unit
    if t.is_preserving:
        checks.append(_check("discard-preserving", np.abs(pulled_back - t.input.unit).max(), atol))
    else:
        slack = t.input.unit - pulled_back
        checks.append(_check("discard-nonincreasing", t.input.effect_violation(slack, upper=False), ctol))
    return ValidationReport(f"map {t.input} -> {t.output}", tuple(checks))


def validate_instrument(inst: Instrument, tol: float | None = None) -> ValidationReport:
    checks = []
    for i, b in enumerate(inst):
        r = validate_transformation(
            TransformationMatrix(b.input, b.output, b.matrix, DiscardBehaviour.NONINCREASING), tol
        )
        checks.append(_check(f"branch[{i}]", r.worst_violation if not r.passed else 0.0, 0.0))
    total = inst.total()
    atol = algebraic_tol()
    checks.append(
        _check("sum-preserving", np.abs(total.matrix.T @ total.output.unit - total.input.unit).max(), atol)
    )
    return ValidationReport(f"instrument on {inst.input}", tuple(checks))


# ---------------------------------------------------------------------------
# cone geometry


def density_from_coeffs(system: SystemType, coeffs: np.ndarray) -> np.ndarray:
    return np.tensordot(coeffs, system.basis, axes=1)


def _min_eig(h: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((h + h.conj().T) / 2)[0])


def hull_violation(points: np.ndarray, target: np.ndarray) -> float:
    """``min ||P^T w - target||_1`` over ``w >= 0``: zero iff ``target`` is in the cone of the rows."""
    points = np.asarray(points, dtype=float)
    m, dim = points.shape
    # variables: w (m), s_plus (dim), s_minus (dim)
    cost = np.concatenate([np.zeros(m), np.ones(2 * dim)])
    a_eq = np.hstack([points.T, np.eye(dim), -np.eye(dim)])
    res = linprog(cost, A_eq=a_eq, b_eq=target, bounds=(0, None), method="highs")
    if res.status != 0:
        return float("inf")
    w = res.x[:m]
    return float(np.abs(points.T @ w - target).sum())


def _cone_violation(system: SystemType, c: np.ndarray) -> float:
    g = system.geometry
    if g == "simplex":
        return float(max(0.0, -c.min(initial=0.0)))
    if g == "quantum":
        return max(0.0, -_min_eig(density_from_coeffs(system, c)))
    if g in ("split-left", "split-right"):
        _, other, _ = system.classical_split()
        return max(_cone_violation(other, row) for row in system.blocks(c))
    return hull_violation(system.extreme_states, c)


def _effect_violation(system: SystemType, e: np.ndarray, upper: bool) -> float:
    g = system.geometry
    if g == "simplex":
        lo = -e.min()
        hi = e.max() - 1.0 if upper else 0.0
        return float(max(0.0, lo, hi))
    if g == "quantum":
        w = np.linalg.eigvalsh(density_from_coeffs(system, e))
        lo = -w[0]
        hi = w[-1] - 1.0 if upper else 0.0
        return float(max(0.0, lo, hi))
    if g in ("split-left", "split-right"):
        _, other, _ = system.classical_split()
        return max(_effect_violation(other, row, upper) for row in system.blocks(e))
    vals = system.extreme_states @ e
    lo = -vals.min()
    hi = vals.max() - 1.0 if upper else 0.0
    return float(max(0.0, lo, hi))


def choi_min_eigenvalue(input: SystemType, output: SystemType, matrix: np.ndarray) -> float:
    """Smallest eigenvalue of the Choi matrix of a map between quantum-geometry systems."""
    return _min_eig(choi_matrix(input, output, matrix))


def choi_matrix(input: SystemType, output: SystemType, matrix: np.ndarray) -> np.ndarray:
    """``J = sum_ab |a><b| (x) Phi(|a><b|)`` (input factor first)."""
    din, dout = input.d, output.d
    bin_, bout = input.basis, output.basis
    # E_ab expanded in the input basis: c_j = Tr(B_j E_ab) = B_j[b, a]
    c = np.transpose(bin_, (0, 2, 1)).reshape(input.dim, din * din)  # (j, ab)
    images = np.tensordot(bout, matrix @ c, axes=([0], [0]))  # (o1, o2, ab)
    images = images.reshape(dout, dout, din, din)
    return np.einsum("pqab->apbq", images).reshape(din * dout, din * dout)


def map_positivity_violation(input: SystemType, output: SystemType, matrix: np.ndarray) -> float:
    """Zero iff ``matrix`` sends the state cone of ``input`` into that of ``output``.

    Between quantum-geometry systems this is complete positivity (Choi matrix).
    Exact for simplex inputs and for matching classically-split systems (block
    by block); otherwise the extreme-state list is pushed through (a sample
    when the input has a quantum factor).
    """
    matrix = np.asarray(matrix, dtype=float)
    if input.is_quantum and output.is_quantum:
        return max(0.0, -choi_min_eigenvalue(input, output, matrix))
    if input.is_classical:
        return max(_cone_violation(output, matrix[:, x]) for x in range(input.n))
    si, so = input.classical_split(), output.classical_split()
    if si is not None and so is not None and si[2] == so[2]:
        n_in, x_in, side = si
        n_out, x_out, _ = so
        if side == "left":
            blocks = matrix.reshape(n_out, x_out.dim, n_in, x_in.dim).transpose(0, 2, 1, 3)
        else:
            blocks = matrix.reshape(x_out.dim, n_out, x_in.dim, n_in).transpose(1, 3, 0, 2)
        return max(
            map_positivity_violation(x_in, x_out, blocks[go, gi])
            for go, gi in itertools.product(range(n_out), range(n_in))
        )
    images = input.extreme_states @ matrix.T
    return max(_cone_violation(output, row) for row in images)
