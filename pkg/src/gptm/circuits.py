"""Mediated interactions ``A - G - B`` and their LOCC decomposition.

A :class:`MediatedCircuit` prepares the field ``G`` in ``initial_field``, then
runs rounds of an interaction on ``A (x) G`` followed by an interaction on
``B (x) G``, and finally applies ``final_field_effect`` to ``G`` (discarding it
by default).  Internally the three wires are laid out as ``A (x) G (x) B``.

When ``G`` is classical, :func:`locc_decompose` inserts the resolution of the
identity of ``G`` after every interaction.  Each trajectory of ``G`` outcomes
then yields a product ``E_A^f (x) E_B^f`` of discard-nonincreasing maps, and
the circuit equals the sum of these products over trajectories.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .classical import resolution_of_identity
from .composition import compose
from .core import (
    DiscardBehaviour,
    EffectVector,
    StateVector,
    SystemType,
    TransformationMatrix,
    ValidationReport,
    validate_state,
    validate_transformation,
)
from .errors import ArityMismatch, InvalidCircuit, SystemMismatch, TrajectoryBlowup

TRAJECTORY_CAP = 10**6


@dataclass(frozen=True, eq=False)
class MediatedCircuit:
    A: SystemType
    B: SystemType
    G: SystemType
    initial_field: StateVector
    rounds: tuple[tuple[TransformationMatrix, TransformationMatrix], ...] = ()
    final_field_effect: EffectVector | None = None

    def __post_init__(self):
        object.__setattr__(self, "rounds", tuple(tuple(r) for r in self.rounds))
        if self.initial_field.system != self.G:
            raise SystemMismatch(f"initial field on {self.initial_field.system}, mediator is {self.G}")
        if self.final_field_effect is not None and self.final_field_effect.system != self.G:
            raise SystemMismatch("final field effect does not act on the mediator")
        ag, bg = compose(self.A, self.G), compose(self.B, self.G)
        for k, (ia, ib) in enumerate(self.rounds):
            if ia.input != ag or ia.output != ag:
                raise SystemMismatch(f"round {k}: I_A acts on {ia.input} -> {ia.output}, expected {ag}")
            if ib.input != bg or ib.output != bg:
                raise SystemMismatch(f"round {k}: I_B acts on {ib.input} -> {ib.output}, expected {bg}")

    @property
    def field_effect(self) -> np.ndarray:
        if self.final_field_effect is None:
            return np.asarray(self.G.unit)
        return np.asarray(self.final_field_effect.coeffs)

    @property
    def AB(self) -> SystemType:
        return compose(self.A, self.B)

    def validate(self, tol: float | None = None) -> list[ValidationReport]:
        reports = [validate_state(self.initial_field, tol)]
        for ia, ib in self.rounds:
            reports.append(validate_transformation(ia, tol))
            reports.append(validate_transformation(ib, tol))
        return reports

    def check(self, tol: float | None = None) -> None:
        """Raise :class:`InvalidCircuit` unless every round is a valid preserving map."""
        for k, (ia, ib) in enumerate(self.rounds):
            for name, t in (("I_A", ia), ("I_B", ib)):
                if not t.is_preserving:
                    raise InvalidCircuit(f"round {k}: {name} is not discard-preserving")
                r = validate_transformation(t, tol)
                if not r.passed:
                    bad = [c.name for c in r.checks if not c.passed]
                    raise InvalidCircuit(f"round {k}: {name} fails {bad}")
        r = validate_state(self.initial_field, tol)
        if not r.passed:
            raise InvalidCircuit("initial field is not a valid state")


def _propagate(c: MediatedCircuit, t: np.ndarray) -> np.ndarray:
    """Push a stack of ``A (x) G (x) B`` tensors ``(..., a, g, b)`` through every round."""
    da, db, dg = c.A.dim, c.B.dim, c.G.dim
    for ia, ib in c.rounds:
        ma = ia.matrix.reshape(da, dg, da, dg)
        mb = ib.matrix.reshape(db, dg, db, dg)
        t = np.einsum("agcx,...cxb->...agb", ma, t)
        t = np.einsum("bgcx,...axc->...agb", mb, t)
    return t


def apply_circuit(c: MediatedCircuit, state: StateVector, check: bool = False) -> StateVector:
    """Output on ``A (x) B`` (sub-normalised when the final field effect is not the unit)."""
    if state.system != c.AB:
        raise SystemMismatch(f"circuit input is {c.AB}, got {state.system}")
    if check:
        c.check()
    v = state.coeffs.reshape(c.A.dim, c.B.dim)
    t = np.einsum("ab,g->agb", v, c.initial_field.coeffs)
    t = _propagate(c, t)
    out = np.einsum("g,agb->ab", c.field_effect, t)
    return StateVector(c.AB, out.reshape(-1))


def circuit_matrix(c: MediatedCircuit) -> TransformationMatrix:
    """The effective map of the circuit on ``A (x) B`` as one matrix."""
    da, db, dg = c.A.dim, c.B.dim, c.G.dim
    n = da * db
    basis = np.eye(n).reshape(n, da, db)
    t = np.einsum("kab,g->kagb", basis, c.initial_field.coeffs)
    t = _propagate(c, t)
    cols = np.einsum("g,kagb->kab", c.field_effect, t).reshape(n, n)
    pres = np.allclose(c.field_effect, c.G.unit) and np.isclose(c.initial_field.norm, 1.0)
    behaviour = DiscardBehaviour.PRESERVING if pres else DiscardBehaviour.NONINCREASING
    return TransformationMatrix(c.AB, c.AB, cols.T, behaviour)


# ---------------------------------------------------------------------------
# LOCC decomposition


@dataclass(frozen=True, eq=False)
class ProductMapTerm:
    """One trajectory ``label = (a_1, b_1, ..., a_R, b_R)`` of field outcomes
    (``a_k`` after the k-th A interaction, ``b_k`` after the k-th B interaction)."""

    label: tuple[int, ...]
    map_A: TransformationMatrix
    map_B: TransformationMatrix


def _field_blocks(t: TransformationMatrix, other: SystemType, field: SystemType, roi) -> np.ndarray:
    """``blocks[g_out, g_in] = (id (x) eps_{g_out}) t (id (x) delta_{g_in})`` as ``other`` maps.

    The sandwich is built from the branches ``delta_x eps_x`` of the resolution
    of the identity of the field.
    """
    eye = np.eye(other.dim)
    n = field.n
    out = np.empty((n, n, other.dim, other.dim))
    for g_out, branch_out in enumerate(roi):
        # eps_{g_out} is the row picked out by the rank-one branch
        eps = branch_out.matrix[g_out]
        left = np.kron(eye, eps[None, :])
        for g_in, branch_in in enumerate(roi):
            delta = branch_in.matrix[:, g_in]
            out[g_out, g_in] = left @ t.matrix @ np.kron(eye, delta[:, None])
    return out


def locc_decompose(
    c: MediatedCircuit,
    cap: int = TRAJECTORY_CAP,
    prune: bool = False,
) -> list[ProductMapTerm]:
    """Rewrite a circuit with classical mediator as ``sum_f E_A^f (x) E_B^f``.

    Raises :class:`~gptm.errors.NotClassical` for a non-classical field (no
    resolution of the identity exists) and :class:`TrajectoryBlowup` when
    ``n**(2 * rounds)`` exceeds ``cap``.  All ``n**(2 * rounds)`` trajectories
    are returned in lexicographic order unless ``prune`` drops the ones whose
    product map is exactly zero.  The initial field state is absorbed into the
    first A map and the final field effect into the last B map.
    """
    roi = list(resolution_of_identity(c.G))
    n, R = c.G.n, len(c.rounds)
    count = n ** (2 * R)
    if count > cap:
        raise TrajectoryBlowup(f"{count} trajectories exceed the cap of {cap}")

    da, db = c.A.dim, c.B.dim
    nonincreasing = DiscardBehaviour.NONINCREASING
    if R == 0:
        scale = float(c.field_effect @ c.initial_field.coeffs)
        return [
            ProductMapTerm(
                (),
                TransformationMatrix(c.A, c.A, scale * np.eye(da), nonincreasing),
                TransformationMatrix(c.B, c.B, np.eye(db), nonincreasing),
            )
        ]

    a_blocks = [_field_blocks(ia, c.A, c.G, roi) for ia, _ in c.rounds]
    b_blocks = [_field_blocks(ib, c.B, c.G, roi) for _, ib in c.rounds]
    # first A map sees the initial field state instead of a delta
    first_a = np.einsum("hgij,g->hij", a_blocks[0], c.initial_field.coeffs)
    effect = c.field_effect

    terms: list[ProductMapTerm] = []

    def walk(k: int, g_prev: int, ea: np.ndarray, eb: np.ndarray, label: tuple[int, ...]):
        # depth-first over rounds; children visited in increasing outcome order
        for a_out in range(n):
            blk_a = first_a[a_out] if k == 0 else a_blocks[k][a_out, g_prev]
            ea2 = blk_a @ ea
            if prune and not ea2.any():
                continue
            for b_out in range(n):
                eb2 = b_blocks[k][b_out, a_out] @ eb
                if k == R - 1:
                    eb2 = effect[b_out] * eb2
                if prune and not eb2.any():
                    continue
                lab = label + (a_out, b_out)
                if k == R - 1:
                    terms.append(
                        ProductMapTerm(
                            lab,
                            TransformationMatrix(c.A, c.A, ea2, nonincreasing),
                            TransformationMatrix(c.B, c.B, eb2, nonincreasing),
                        )
                    )
                else:
                    walk(k + 1, b_out, ea2, eb2, lab)

    walk(0, -1, np.eye(da), np.eye(db), ())
    return terms


def reconstruct_channel(terms: list[ProductMapTerm]) -> TransformationMatrix:
    """``sum_f map_A^f (x) map_B^f`` on ``A (x) B``."""
    if not terms:
        raise ValueError("no terms to reconstruct from")
    a, b = terms[0].map_A.input, terms[0].map_B.input
    acc = np.zeros((a.dim * b.dim, a.dim * b.dim))
    for t in terms:
        if t.map_A.input != a or t.map_B.input != b:
            raise SystemMismatch("terms act on different systems")
        acc += np.kron(t.map_A.matrix, t.map_B.matrix)
    ab = compose(a, b)
    pres = np.allclose(acc.T @ ab.unit, ab.unit, atol=1e-12, rtol=0)
    behaviour = DiscardBehaviour.PRESERVING if pres else DiscardBehaviour.NONINCREASING
    return TransformationMatrix(ab, ab, acc, behaviour)


def build_nonmediated_circuit(control: StateVector, branch_maps) -> TransformationMatrix:
    """Classically-controlled global interaction ``sum_x p_x branch_x`` on ``A (x) B``.

    The field acts on both systems at once, so this is not a mediated circuit.
    """
    branch_maps = list(branch_maps)
    g = control.system
    if not g.is_classical:
        from .errors import NotClassical

        raise NotClassical(f"control must be classical, got {g}")
    if len(branch_maps) != g.n:
        raise ArityMismatch(f"{len(branch_maps)} branch maps for {g.n} control outcomes")
    first = branch_maps[0]
    for t in branch_maps:
        if t.input != first.input or t.output != first.output:
            raise SystemMismatch("branch maps act on different systems")
        if not t.is_preserving:
            raise InvalidCircuit("branch maps must be discard-preserving")
    m = sum(p * t.matrix for p, t in zip(control.coeffs, branch_maps))
    pres = np.isclose(control.norm, 1.0)
    return TransformationMatrix(
        first.input,
        first.output,
        m,
        DiscardBehaviour.PRESERVING if pres else DiscardBehaviour.NONINCREASING,
    )


def trajectory_count(c: MediatedCircuit) -> int:
    return c.G.n ** (2 * len(c.rounds)) if c.G.is_classical else 0


def iter_labels(n: int, rounds: int):
    """All trajectory labels in the order :func:`locc_decompose` emits them."""
    return itertools.product(range(n), repeat=2 * rounds)
