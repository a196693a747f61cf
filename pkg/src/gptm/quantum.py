"""Finite-dimensional quantum theory as a GPT.

Coordinates are taken in the normalised generalised Gell-Mann basis with the
identity first: ``B_0 = I/sqrt(d)``, then the symmetric, antisymmetric and
diagonal generators, each scaled to unit Hilbert-Schmidt norm.  For a qubit
this is ``(I, X, Y, Z)/sqrt(2)``.  A density matrix ``rho`` has coordinates
``c_i = Tr(rho B_i)``, so the unit effect is ``sqrt(d)`` on coordinate 0.
"""
from __future__ import annotations

import numpy as np

from .config import algebraic_tol, cone_tol
from .core import (
    DiscardBehaviour,
    Kind,
    StateVector,
    SystemType,
    TransformationMatrix,
    _frozen,
    choi_matrix,
    density_from_coeffs,
)
from .errors import InvalidDimension, NotCP, NotPositive, SystemMismatch

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def gell_mann_basis(d: int) -> np.ndarray:
    """Orthonormal Hermitian basis of ``d x d`` matrices, shape ``(d*d, d, d)``."""
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1 / np.sqrt(2)
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k], m[k, j] = -1j / np.sqrt(2), 1j / np.sqrt(2)
        mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    return np.array(mats)


def make_quantum(d: int, samples: int = 200) -> SystemType:
    if int(d) != d or d < 2:
        raise InvalidDimension(f"quantum system needs d >= 2, got {d}")
    d = int(d)
    unit = np.zeros(d * d)
    unit[0] = np.sqrt(d)
    basis = gell_mann_basis(d)
    basis.setflags(write=False)
    return SystemType(kind=Kind.QUANTUM, dim=d * d, unit=_frozen(unit), d=d, basis=basis, samples=samples)


def _require_quantum(system: SystemType) -> None:
    if not system.is_quantum:
        raise SystemMismatch(f"{system} is not a quantum system")


def check_density(rho, tol: float | None = None) -> np.ndarray:
    """Return ``rho`` as a complex array after Hermiticity / positivity / trace checks."""
    rho = np.asarray(rho, dtype=complex)
    t = cone_tol(tol)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotPositive(f"not a square matrix: shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > t:
        raise NotPositive("matrix is not Hermitian")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w[0] < -t:
        raise NotPositive(f"minimum eigenvalue {w[0]:.3g} < 0")
    tr = np.trace(rho).real
    if not 0 < tr <= 1 + t:
        raise NotPositive(f"trace {tr:.6g} outside (0, 1]")
    return rho


def density_to_state(rho, system: SystemType | None = None, check: bool = True) -> StateVector:
    rho = np.asarray(rho, dtype=complex)
    if check:
        rho = check_density(rho)
    if system is None:
        system = make_quantum(rho.shape[0])
    _require_quantum(system)
    if rho.shape != (system.d, system.d):
        raise SystemMismatch(f"density of shape {rho.shape} on {system}")
    coeffs = np.einsum("iab,ba->i", system.basis, rho).real
    return StateVector(system, coeffs)


def state_to_density(state: StateVector, check: bool = True) -> np.ndarray:
    _require_quantum(state.system)
    rho = density_from_coeffs(state.system, state.coeffs)
    if check:
        check_density(rho)
    return rho


def pure_state(psi, system: SystemType | None = None) -> StateVector:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return density_to_state(np.outer(psi, psi.conj()), system, check=False)


def operator_to_effect(op, system: SystemType | None = None):
    """Effect coordinates ``e_i = Tr(E B_i)`` so that ``e . c = Tr(E rho)``."""
    from .core import EffectVector

    op = np.asarray(op, dtype=complex)
    if system is None:
        system = make_quantum(op.shape[0])
    _require_quantum(system)
    return EffectVector(system, np.einsum("iab,ba->i", system.basis, op).real)


def maximally_mixed(system: SystemType) -> StateVector:
    _require_quantum(system)
    return density_to_state(np.eye(system.d) / system.d, system, check=False)


# ---------------------------------------------------------------------------
# channels


def _apply_kraus(kraus, x):
    return sum(k @ x @ k.conj().T for k in kraus)


def cptp_to_transformation(
    kraus=None,
    choi=None,
    input: SystemType | None = None,
    output: SystemType | None = None,
    tol: float | None = None,
) -> TransformationMatrix:
    """Real matrix ``M_ij = Tr(B_i Phi(B_j))`` of a completely positive map.

    Give either Kraus operators or a Choi matrix ``J = sum |a><b| (x) Phi(|a><b|)``.
    The discard behaviour is read off the partial trace of the Choi matrix.
    """
    if (kraus is None) == (choi is None):
        raise ValueError("give exactly one of kraus= or choi=")
    if kraus is not None:
        kraus = [np.asarray(k, dtype=complex) for k in kraus]
        dout, din = kraus[0].shape
    else:
        choi = np.asarray(choi, dtype=complex)
        din = input.d if input is not None else None
        dout = output.d if output is not None else None
        if din is None and dout is None:
            din = dout = int(round(np.sqrt(choi.shape[0])))
        elif din is None:
            din = choi.shape[0] // dout
        elif dout is None:
            dout = choi.shape[0] // din
    input = make_quantum(din) if input is None else input
    output = make_quantum(dout) if output is None else output
    _require_quantum(input)
    _require_quantum(output)
    if (input.d, output.d) != (din, dout):
        raise SystemMismatch(f"channel {din}->{dout} on systems {input} -> {output}")

    if kraus is not None:
        images = np.array([_apply_kraus(kraus, b) for b in input.basis])
    else:
        j4 = choi.reshape(din, dout, din, dout)
        images = np.einsum("jab,aobp->jop", input.basis, j4)
    m = np.einsum("iab,jba->ij", output.basis, images).real
    j = choi_matrix(input, output, m)
    t = cone_tol(tol)
    lam = np.linalg.eigvalsh(j)[0]
    if lam < -t:
        raise NotCP(f"Choi matrix has eigenvalue {lam:.3g}")
    tr_out = np.einsum("apbp->ab", j.reshape(din, dout, din, dout))
    preserving = np.abs(tr_out - np.eye(din)).max() <= max(t, algebraic_tol())
    behaviour = DiscardBehaviour.PRESERVING if preserving else DiscardBehaviour.NONINCREASING
    return TransformationMatrix(input, output, m, behaviour)


def transformation_to_choi(t: TransformationMatrix) -> np.ndarray:
    _require_quantum(t.input)
    _require_quantum(t.output)
    return choi_matrix(t.input, t.output, t.matrix)


def unitary_channel(u, system: SystemType | None = None) -> TransformationMatrix:
    return cptp_to_transformation(kraus=[u], input=system, output=system)


# ---------------------------------------------------------------------------
# bipartite tools


def factor_dims(system: SystemType) -> tuple[int, int]:
    """Hilbert dimensions ``(d_left, d_right)`` of a quantum composite."""
    if system.kind is not Kind.COMPOSITE or not (system.left.is_quantum and system.right.is_quantum):
        raise SystemMismatch(f"{system} is not a composite of two quantum systems")
    return system.left.d, system.right.d


def partial_trace(state: StateVector, keep: str = "left") -> StateVector:
    """Reduced state of a quantum composite (norm preserved)."""
    from .composition import reduced_state

    factor_dims(state.system)
    return reduced_state(state, keep)


def partial_transpose(rho: np.ndarray, dims: tuple[int, int], side: str = "right") -> np.ndarray:
    da, db = dims
    r = np.asarray(rho).reshape(da, db, da, db)
    if side == "right":
        r = r.transpose(0, 3, 2, 1)
    else:
        r = r.transpose(2, 1, 0, 3)
    return r.reshape(da * db, da * db)


def pt_spectrum(state_or_rho, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Eigenvalues of the partial transpose (ascending)."""
    if isinstance(state_or_rho, StateVector):
        dims = factor_dims(state_or_rho.system)
        rho = density_from_coeffs(state_or_rho.system, state_or_rho.coeffs)
    else:
        rho = np.asarray(state_or_rho, dtype=complex)
        if dims is None:
            raise ValueError("dims are required for a raw density matrix")
    pt = partial_transpose(rho, dims)
    return np.linalg.eigvalsh((pt + pt.conj().T) / 2)


def negativity(state_or_rho, dims: tuple[int, int] | None = None) -> float:
    """``(||rho^T_B||_1 - Tr rho) / 2``: the total weight of negative partial-transpose eigenvalues.

    Equal to ``(||rho^T_B||_1 - 1)/2`` for normalised states.  The partial
    transpose is Hermitian, so its trace norm comes from ``eigvalsh``.
    """
    w = pt_spectrum(state_or_rho, dims)
    return float(-w[w < 0].sum()) + 0.0


def trace_distance(rho, sigma) -> float:
    w = np.linalg.eigvalsh(np.asarray(rho) - np.asarray(sigma))
    return float(np.abs(w).sum() / 2)
