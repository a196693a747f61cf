"""Numerical tolerances and physical constants.

Tolerances live in a :class:`contextvars.ContextVar`, so overriding them with
:func:`tolerances` is local to the current thread / task and never leaks into
concurrent computations.
"""
from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    algebraic: float = 1e-12  # identities such as unit(s) == 1, branch sums
    cone: float = 1e-9  # LP / eigenvalue based membership


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA 2018 values in SI units."""

    G: float = 6.67430e-11
    hbar: float = 1.054571817e-34
    c: float = 299792458.0


CODATA = PhysicalConstants()

_TOLERANCES: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "gptm_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _TOLERANCES.get()


@contextlib.contextmanager
def tolerances(**overrides: float):
    """Temporarily override tolerances, e.g. ``with tolerances(cone=1e-7): ...``."""
    token = _TOLERANCES.set(dataclasses.replace(_TOLERANCES.get(), **overrides))
    try:
        yield _TOLERANCES.get()
    finally:
        _TOLERANCES.reset(token)


def cone_tol(tol: float | None = None) -> float:
    return get_tolerances().cone if tol is None else float(tol)


def algebraic_tol(tol: float | None = None) -> float:
    return get_tolerances().algebraic if tol is None else float(tol)
