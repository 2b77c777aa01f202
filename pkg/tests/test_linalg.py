import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra import numpy as hnp

from asymphoton.linalg import ContractViolation, is_unitary, kron, matvec, squared_norm
from asymphoton.oam import build_beamsplitter, detector_projection

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def complex_arrays(shape):
    return st.tuples(hnp.arrays(float, shape, elements=finite), hnp.arrays(float, shape, elements=finite)).map(
        lambda pair: pair[0] + 1j * pair[1]
    )


def test_kron_identity_blocks():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))
    x = np.array([[0, 1], [1, 0]])
    assert np.array_equal(kron(x, np.eye(1)), x)


def test_kron_of_column_vectors():
    out = kron(np.array([1, 0]), np.array([0, 1]))
    assert out.shape == (4, 1)
    assert np.array_equal(out.ravel(), [0, 1, 0, 0])


def test_kron_rejects_empty():
    with pytest.raises(ContractViolation):
        kron(np.zeros((0, 2)), np.eye(2))


@settings(max_examples=50, deadline=None)
@given(complex_arrays((2, 3)), complex_arrays((3, 2)), complex_arrays((2, 2)))
def test_kron_associative(a, b, c):
    left = kron(kron(a, b), c)
    right = kron(a, kron(b, c))
    assert np.max(np.abs(left - right)) <= 1e-14 * max(1.0, np.max(np.abs(left)))


def test_matvec_basic_cases():
    v = np.array([1, 2j, -3, 0.5])
    assert np.array_equal(matvec(np.eye(4), v), v)
    assert np.array_equal(matvec(np.zeros((4, 4)), v), np.zeros(4))
    m = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
    assert np.allclose(matvec(m, [1, 0]), [1 / np.sqrt(2), 1j / np.sqrt(2)], atol=1e-15)


def test_matvec_dimension_mismatch():
    with pytest.raises(ContractViolation, match="dimension mismatch"):
        matvec(np.eye(3), np.ones(4))


@settings(max_examples=50, deadline=None)
@given(complex_arrays((4, 4)), complex_arrays((4,)), complex_arrays((4,)), finite, finite)
def test_matvec_linear(m, u, v, alpha, beta):
    lhs = matvec(m, alpha * u + beta * v)
    rhs = alpha * matvec(m, u) + beta * matvec(m, v)
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * max(1.0, np.max(np.abs(lhs)))


def test_is_unitary_cases():
    assert is_unitary(np.eye(4), 1e-12)
    assert is_unitary(build_beamsplitter(2), 1e-12)
    assert not is_unitary(2 * np.eye(2))
    with pytest.raises(ContractViolation):
        is_unitary(detector_projection(2))


def test_non_finite_rejected():
    with pytest.raises(ContractViolation):
        matvec(np.eye(2), [np.nan, 0])


@settings(max_examples=50, deadline=None)
@given(complex_arrays((4,)))
def test_unitary_propagation_preserves_norm(v):
    u = kron(np.eye(2), build_beamsplitter(1))
    before = squared_norm(v)
    assert abs(squared_norm(matvec(u, v)) - before) <= 1e-12 * max(1.0, before)
