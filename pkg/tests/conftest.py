"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's eigendecomposition paths:
matrix exponentials come from plain Taylor series, derivatives from central
finite differences, and sums from direct term-by-term accumulation.
"""

from __future__ import annotations

import numpy as np
import pytest

import shiftrules as sr

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def taylor_expm(m: np.ndarray, terms: int = 50) -> np.ndarray:
    """Plain truncated power series for the matrix exponential."""
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


def central_diff(fn, x: float, h: float = 1e-5) -> float:
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def central_diff_matrix(fn, x: float, h: float = 1e-5) -> np.ndarray:
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


def cos_model() -> sr.ModelInstance:
    """Commuting instance with f(x) = cos(4*pi*x) (hand computation:
    U|+> = (e^{2 pi i x}|0> + e^{-2 pi i x}|1>)/sqrt2, measured in X)."""
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    return sr.ModelInstance(
        a=PAULI_Z.copy(),
        b=np.zeros((2, 2), dtype=complex),
        rho=np.outer(plus, plus.conj()),
        m=PAULI_X.copy(),
    )


@pytest.fixture
def cos_instance() -> sr.ModelInstance:
    return cos_model()


@pytest.fixture
def random_4x4() -> sr.ModelInstance:
    return sr.random_instance(4, sr.Rng(20240817))
