"""Seeded random streams.

Every stream is a Philox4x64-10 counter-based generator (Random123) keyed by
``numpy.random.SeedSequence([seed, *keys])``.  Independent streams are obtained
by appending keys, e.g. ``make_rng(seed, trial)``, so trials can run in any
order or on any number of threads and still draw identical numbers.
"""
from __future__ import annotations

import numpy as np


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF, *(int(k) for k in keys)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def haar_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-random ``d x d`` unitary (QR of a Ginibre matrix with phase fix)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_isometry(rng: np.random.Generator, d_in: int, d_out: int) -> np.ndarray:
    """Haar-random isometry ``V`` with ``V^dagger V = I`` of shape (d_out, d_in)."""
    z = (rng.standard_normal((d_out, d_in)) + 1j * rng.standard_normal((d_out, d_in))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def haar_pure_state(rng: np.random.Generator, d: int, size: int | None = None) -> np.ndarray:
    shape = (d,) if size is None else (size, d)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def random_density(rng: np.random.Generator, d: int, rank: int | None = None) -> np.ndarray:
    """Random density matrix from the induced (Hilbert-Schmidt for full rank) measure."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_stochastic(rng: np.random.Generator, n_out: int, n_in: int) -> np.ndarray:
    """Column-stochastic matrix with Dirichlet(1, ..., 1) columns."""
    return rng.dirichlet(np.ones(n_out), size=n_in).T
