"""Classical (simplex) systems and their resolution of the identity."""
from __future__ import annotations

import numpy as np

from .core import (
    DiscardBehaviour,
    EffectVector,
    Instrument,
    Kind,
    LazyBranches,
    StateVector,
    SystemType,
    TransformationMatrix,
    _frozen,
)
from .errors import IndexOutOfRange, InvalidDimension, NotClassical

EAGER_BRANCH_CAP = 64


def make_classical(n: int) -> SystemType:
    """Probability distributions on ``{0, ..., n-1}``."""
    if int(n) != n or n < 1:
        raise InvalidDimension(f"classical sample space needs n >= 1, got {n}")
    n = int(n)
    return SystemType(kind=Kind.CLASSICAL, dim=n, unit=_frozen(np.ones(n)), n=n)


def _require_classical(sys: SystemType) -> None:
    if not sys.is_classical:
        raise NotClassical(f"{sys} is not a simplex system")


def _index(sys: SystemType, x: int) -> int:
    _require_classical(sys)
    if not 0 <= x < sys.n:
        raise IndexOutOfRange(f"outcome {x} not in range(0, {sys.n})")
    return int(x)


def delta_state(sys: SystemType, x: int) -> StateVector:
    v = np.zeros(sys.dim)
    v[_index(sys, x)] = 1.0
    return StateVector(sys, v)


def atomic_effect(sys: SystemType, x: int) -> EffectVector:
    v = np.zeros(sys.dim)
    v[_index(sys, x)] = 1.0
    return EffectVector(sys, v)


def distribution(sys: SystemType, probs) -> StateVector:
    _require_classical(sys)
    return StateVector(sys, np.asarray(probs, dtype=float))


def _branch(sys: SystemType, x: int) -> TransformationMatrix:
    m = np.zeros((sys.dim, sys.dim))
    m[x, x] = 1.0  # delta_x epsilon_x^T
    return TransformationMatrix(sys, sys, m, DiscardBehaviour.NONINCREASING)


def resolution_of_identity(sys: SystemType, cap: int = EAGER_BRANCH_CAP) -> Instrument:
    """The identity of a classical system split as ``sum_x delta_x epsilon_x``.

    Only simplex systems admit this decomposition into measure-and-prepare
    branches, so anything else raises :class:`NotClassical`.  Above ``cap``
    outcomes the branches are produced lazily.
    """
    _require_classical(sys)
    if sys.n > cap:
        return Instrument(LazyBranches(sys.n, lambda x: _branch(sys, x)))
    return Instrument([_branch(sys, x) for x in range(sys.n)])
