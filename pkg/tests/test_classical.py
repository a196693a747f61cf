import numpy as np
import pytest

from gptm import make_classical, make_quantum, resolution_of_identity
from gptm.classical import atomic_effect, delta_state, distribution
from gptm.core import LazyBranches, validate_instrument
from gptm.errors import IndexOutOfRange, InvalidDimension, NotClassical


@pytest.mark.parametrize("n", [1, 2, 3, 7, 64])
def test_resolution_of_identity_is_exact(n):
    c = make_classical(n)
    roi = resolution_of_identity(c)
    total = sum(b.matrix for b in roi)
    assert np.array_equal(total, np.eye(n))  # zero tolerance
    assert len(roi) == n
    assert all(not b.is_preserving for b in roi)


def test_branch_is_measure_and_prepare():
    c = make_classical(4)
    for x, b in enumerate(resolution_of_identity(c)):
        expected = np.outer(delta_state(c, x).coeffs, atomic_effect(c, x).coeffs)
        assert np.array_equal(b.matrix, expected)


def test_large_resolution_is_lazy():
    c = make_classical(1000)
    roi = resolution_of_identity(c)
    assert isinstance(roi.branches, LazyBranches)
    assert roi.branches[999].matrix[999, 999] == 1.0
    assert validate_instrument(resolution_of_identity(make_classical(80))).passed


def test_quantum_has_no_resolution_of_identity():
    with pytest.raises(NotClassical):
        resolution_of_identity(make_quantum(2))


def test_bad_arguments():
    with pytest.raises(InvalidDimension):
        make_classical(0)
    with pytest.raises(IndexOutOfRange):
        delta_state(make_classical(2), 2)
    with pytest.raises(NotClassical):
        delta_state(make_quantum(2), 0)


def test_distribution_and_simplex_geometry():
    c = make_classical(3)
    p = distribution(c, [0.2, 0.3, 0.5])
    assert c.geometry == "simplex"
    assert np.array_equal(np.asarray(c.extreme_states), np.eye(3))
    assert p.norm == pytest.approx(1.0)
