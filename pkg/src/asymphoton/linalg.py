"""Small dense complex linear algebra on top of numpy.

Matrices here are at most a few hundred rows, so everything is dense and
double precision. The helpers only add shape checking on top of numpy.
"""

from __future__ import annotations

import numpy as np

EXACT_TOL = 1e-12
SOLVER_TOL = 1e-9


class ContractViolation(ValueError):
    """Raised when an operand has the wrong shape or an index is out of range."""


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.size == 0:
        raise ContractViolation(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation("matrix has non-finite entries")
    return arr


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ContractViolation(f"expected a non-empty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ContractViolation("vector has non-finite entries")
    return arr


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices; column vectors are 2-d with one column."""
    return np.kron(as_matrix(a), as_matrix(b))


def matvec(m, v) -> np.ndarray:
    m = as_matrix(m)
    v = as_vector(v)
    if m.shape[1] != v.shape[0]:
        raise ContractViolation(
            f"dimension mismatch: matrix has {m.shape[1]} columns, vector has {v.shape[0]} entries"
        )
    return m @ v


def is_unitary(m, tol: float = EXACT_TOL) -> bool:
    """True iff ``max |m m^H - I| <= tol``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"unitarity needs a square matrix, got shape {m.shape}")
    gram = m @ m.conj().T
    return bool(np.max(np.abs(gram - np.eye(m.shape[0]))) <= tol)


def squared_norm(v) -> float:
    v = as_vector(v)
    return float(np.vdot(v, v).real)
