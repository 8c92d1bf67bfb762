"""Dense complex linear algebra: Hermitian eigendecompositions, unitary
exponentials exp(i*scale*H), and exact parameter derivatives of
x -> exp(2*pi*i*(x*A + B)) via divided differences in the eigenbasis."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NonHermitianError, NumericalFailureError

HERMITICITY_RTOL = 1e-12
UNITARITY_TOL = 1e-10
DEGENERACY_GAP = 1e-9

TWO_PI = 2.0 * np.pi


def as_complex_matrix(m: object) -> np.ndarray:
    """Validate and return a square complex matrix with finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def max_abs(a: np.ndarray) -> float:
    """Entrywise max-norm."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def require_hermitian(m: object, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within a relative entrywise tolerance."""
    a = as_complex_matrix(m)
    dev = max_abs(a - a.conj().T)
    if dev > HERMITICITY_RTOL * max(1.0, max_abs(a)):
        raise NonHermitianError(f"{name} deviates from Hermitian by {dev:.3e}")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues in ascending order and the matching unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(h: object) -> EigenDecomposition:
    """Eigendecompose a Hermitian matrix; verifies reconstruction and orthonormality."""
    a = require_hermitian(h)
    try:
        w, v = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed: {exc}") from exc
    scale = max(1.0, max_abs(a))
    if max_abs(v.conj().T @ v - np.eye(a.shape[0])) > UNITARITY_TOL:
        raise NumericalFailureError("eigenvector matrix is not orthonormal")
    if max_abs((v * w) @ v.conj().T - a) > UNITARITY_TOL * scale:
        raise NumericalFailureError("eigendecomposition does not reconstruct the input")
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def exp_i_hermitian(h: object, scale: float = 1.0) -> np.ndarray:
    """exp(i * scale * H) for Hermitian H, via eigendecomposition (exactly unitary)."""
    dec = eig_hermitian(h)
    v = dec.eigenvectors
    phases = np.exp(1j * scale * dec.eigenvalues)
    return (v * phases) @ v.conj().T


def _phase_divided_difference(w: np.ndarray) -> np.ndarray:
    """Divided-difference table of t -> exp(2*pi*i*t) on the eigenvalue grid w.

    Entry (j,k) is (e^{2pi i w_j} - e^{2pi i w_k})/(w_j - w_k), with the
    analytic limit 2*pi*i*e^{2pi i w} on near-degenerate pairs.
    """
    d = w.shape[-1]
    wj = w[..., :, None]
    wk = w[..., None, :]
    gap = wj - wk
    degenerate = np.abs(gap) < DEGENERACY_GAP
    safe = np.where(degenerate, 1.0, gap)
    ej = np.exp(TWO_PI * 1j * wj)
    ek = np.exp(TWO_PI * 1j * wk)
    table = (ej - ek) / safe
    limit = TWO_PI * 1j * np.exp(TWO_PI * 1j * (wj + wk) / 2.0)
    return np.where(degenerate, np.broadcast_to(limit, table.shape), table)


def unitary_and_derivative(a: object, b: object, x: float) -> tuple[np.ndarray, np.ndarray]:
    """U(x) = exp(2*pi*i*(x*A + B)) together with the exact dU/dx.

    The derivative is assembled in the eigenbasis of x*A + B from the
    divided differences of the scalar exponential; near-degenerate
    eigenvalue pairs take the analytic limit.
    """
    am = require_hermitian(a, "A")
    bm = require_hermitian(b, "B")
    if am.shape != bm.shape:
        raise DimensionMismatchError(f"A has shape {am.shape}, B has shape {bm.shape}")
    dec = eig_hermitian(x * am + bm)
    w, v = dec.eigenvalues, dec.eigenvectors
    u = (v * np.exp(TWO_PI * 1j * w)) @ v.conj().T
    a_eig = v.conj().T @ am @ v
    du = v @ (a_eig * _phase_divided_difference(w)) @ v.conj().T
    return u, du


class Rng:
    """Deterministic splittable random stream.

    A given seed always yields the same draws; `split` derives independent
    child streams (used to fan out instance generation and estimator workers).
    """

    def __init__(self, seed: int | None = None, _seq: np.random.SeedSequence | None = None):
        self.seed = seed
        self._seq = _seq if _seq is not None else np.random.SeedSequence(seed)
        self.generator = np.random.default_rng(self._seq)

    def split(self, n: int) -> list["Rng"]:
        return [Rng(_seq=child) for child in self._seq.spawn(n)]

    def __repr__(self) -> str:  # pragma: no cover
        return f"Rng(seed={self.seed!r})"


def haar_unitary(dim: int, rng: Rng) -> np.ndarray:
    """Haar-distributed random unitary via QR of a complex Ginibre matrix."""
    g = rng.generator
    z = (g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))
