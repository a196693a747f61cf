"""Tensor-product composition of systems, states, effects and maps.

Coordinates of ``A (x) B`` are flattened with the left factor varying slowest,
i.e. ``index = i_A * dim_B + i_B`` (``numpy.kron`` order).
"""
from __future__ import annotations

import numpy as np

from .core import (
    DiscardBehaviour,
    EffectVector,
    Kind,
    StateVector,
    SystemType,
    TransformationMatrix,
    _frozen,
)
from .errors import SystemMismatch


def compose(a: SystemType, b: SystemType) -> SystemType:
    """Composite system ``a (x) b``.

    classical x classical
        simplex on the product sample space (``n = n_a * n_b``).
    quantum x quantum
        full quantum system of Hilbert dimension ``d_a * d_b`` in the product
        of the factor bases.
    classical x anything
        classically-controlled mixtures ``sum_x delta_x (x) s_x``; the minimal
        and maximal tensor products coincide here.
    otherwise
        minimal tensor product (convex hull of product extreme points).
    """
    kw = {}
    if a.is_classical and b.is_classical:
        kw["n"] = a.n * b.n
    if a.is_quantum and b.is_quantum:
        basis = np.einsum("iab,jcd->ijacbd", a.basis, b.basis).reshape(
            a.dim * b.dim, a.d * b.d, a.d * b.d
        )
        basis.setflags(write=False)
        kw.update(d=a.d * b.d, basis=basis, samples=max(a.samples, b.samples))
    return SystemType(
        kind=Kind.COMPOSITE,
        dim=a.dim * b.dim,
        unit=_frozen(np.kron(a.unit, b.unit)),
        left=a,
        right=b,
        **kw,
    )


def product_state(sa: StateVector, sb: StateVector, system: SystemType | None = None) -> StateVector:
    system = _target(sa.system, sb.system, system)
    return StateVector(system, np.kron(sa.coeffs, sb.coeffs))


def product_effect(ea: EffectVector, eb: EffectVector, system: SystemType | None = None) -> EffectVector:
    system = _target(ea.system, eb.system, system)
    return EffectVector(system, np.kron(ea.coeffs, eb.coeffs))


def product_map(ta: TransformationMatrix, tb: TransformationMatrix) -> TransformationMatrix:
    behaviour = (
        DiscardBehaviour.PRESERVING
        if ta.is_preserving and tb.is_preserving
        else DiscardBehaviour.NONINCREASING
    )
    return TransformationMatrix(
        compose(ta.input, tb.input),
        compose(ta.output, tb.output),
        np.kron(ta.matrix, tb.matrix),
        behaviour,
    )


def _target(a: SystemType, b: SystemType, system: SystemType | None) -> SystemType:
    if system is None:
        return compose(a, b)
    if system.kind is not Kind.COMPOSITE or system.left != a or system.right != b:
        raise SystemMismatch(f"factors {a}, {b} do not match {system}")
    return system


def embed_on_factor(t: TransformationMatrix, which: str, composite: SystemType) -> TransformationMatrix:
    """``t (x) id`` (``which='left'``) or ``id (x) t`` (``which='right'``)."""
    if composite.kind is not Kind.COMPOSITE:
        raise SystemMismatch(f"{composite} is not a composite")
    if which == "left":
        if t.input != composite.left:
            raise SystemMismatch(f"map on {t.input} embedded on left factor {composite.left}")
        other = composite.right
        m = np.kron(t.matrix, np.eye(other.dim))
        out = compose(t.output, other)
    elif which == "right":
        if t.input != composite.right:
            raise SystemMismatch(f"map on {t.input} embedded on right factor {composite.right}")
        other = composite.left
        m = np.kron(np.eye(other.dim), t.matrix)
        out = compose(other, t.output)
    else:
        raise ValueError(f"which must be 'left' or 'right', got {which!r}")
    return TransformationMatrix(composite, out, m, t.discard_behaviour)


def swap_matrix(dim_a: int, dim_b: int) -> np.ndarray:
    """Permutation sending ``x (x) y`` to ``y (x) x``."""
    p = np.zeros((dim_a * dim_b, dim_a * dim_b))
    for i in range(dim_a):
        for j in range(dim_b):
            p[j * dim_a + i, i * dim_b + j] = 1.0
    return p


def swap_map(a: SystemType, b: SystemType) -> TransformationMatrix:
    return TransformationMatrix(compose(a, b), compose(b, a), swap_matrix(a.dim, b.dim))


def reduced_state(state: StateVector, keep: str = "left") -> StateVector:
    """Marginal obtained by discarding the other factor with its unit effect."""
    s = state.system
    if s.kind is not Kind.COMPOSITE:
        raise SystemMismatch(f"{s} is not a composite")
    t = state.coeffs.reshape(s.left.dim, s.right.dim)
    if keep == "left":
        return StateVector(s.left, t @ s.right.unit)
    if keep == "right":
        return StateVector(s.right, s.left.unit @ t)
    raise ValueError(f"keep must be 'left' or 'right', got {keep!r}")
